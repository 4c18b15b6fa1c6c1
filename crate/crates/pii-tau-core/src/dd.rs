//! Minimal double-double arithmetic (~31 significant decimal digits).
//!
//! The Maclaurin series for the Airy function suffers catastrophic
//! cancellation on the negative axis: the largest term grows like
//! exp(2|x|^{3/2}/3) while the sum stays O(1), which costs up to nine
//! digits at x = -10. Summing the series in double-double keeps the final
//! error far below 1e-12 over the whole series window.
//!
//! Algorithms are the classic error-free transformations of Dekker and
//! Knuth; `two_prod` relies on the hardware FMA.

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DD {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    // requires |a| >= |b|
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

#[allow(clippy::should_implement_trait)] // small internal utility, plain methods read fine
impl DD {
    pub const ZERO: DD = DD { hi: 0.0, lo: 0.0 };
    pub const ONE: DD = DD { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from(x: f64) -> DD {
        DD { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn add(self, other: DD) -> DD {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        DD { hi, lo }
    }

    #[inline]
    pub fn sub(self, other: DD) -> DD {
        self.add(other.neg())
    }

    #[inline]
    pub fn neg(self) -> DD {
        DD {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    #[inline]
    pub fn mul(self, other: DD) -> DD {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p, e);
        DD { hi, lo }
    }

    #[inline]
    pub fn mul_f64(self, x: f64) -> DD {
        let (p, e) = two_prod(self.hi, x);
        let e = e + self.lo * x;
        let (hi, lo) = quick_two_sum(p, e);
        DD { hi, lo }
    }

    #[inline]
    pub fn div_f64(self, x: f64) -> DD {
        let q1 = self.hi / x;
        let (p, e) = two_prod(q1, x);
        let r = (self.hi - p - e + self.lo) / x;
        let (hi, lo) = quick_two_sum(q1, r);
        DD { hi, lo }
    }

    #[inline]
    pub fn abs(self) -> f64 {
        self.hi.abs()
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
}
