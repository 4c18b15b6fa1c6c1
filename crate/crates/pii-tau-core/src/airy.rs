//! Airy function Ai and its derivative on the real line.
//!
//! Maclaurin series summed in double-double for |x| <= 8, asymptotic
//! expansions truncated at the smallest term beyond. The switchover is
//! validated by overlap agreement in the tests.

use crate::dd::DD;
use crate::error::{Error, Result};

/// Ai and Ai' at a point.
#[derive(Clone, Copy, Debug)]
pub struct AiryValue {
    pub ai: f64,
    pub ai_prime: f64,
}

/// Largest |x| accepted; beyond this Ai underflows or the caller is lost.
pub const AIRY_MAX_ARG: f64 = 50.0;

const SERIES_CUTOFF: f64 = 8.0;

// Ai(0) = 3^(-2/3)/Gamma(2/3), Ai'(0) = -3^(-1/3)/Gamma(1/3), split into
// double-double constants.
const AI0: DD = DD {
    hi: 0.3550280538878172,
    lo: 2.05233632436212e-17,
};
const AIP0: DD = DD {
    hi: -0.2588194037928068,
    lo: 2.522243111610832e-17,
};

/// Evaluate Ai(x) and Ai'(x).
pub fn airy_ai(x: f64) -> Result<AiryValue> {
    if !x.is_finite() || x.abs() > AIRY_MAX_ARG {
        return Err(Error::Domain(format!(
            "airy_ai: x = {x} outside supported range |x| <= {AIRY_MAX_ARG}"
        )));
    }
    if x.abs() <= SERIES_CUTOFF {
        Ok(maclaurin(x))
    } else if x > 0.0 {
        Ok(asymptotic_pos(x))
    } else {
        Ok(asymptotic_neg(x))
    }
}

/// Maclaurin series of the two ODE solutions f (f(0)=1, f'(0)=0) and
/// g (g(0)=0, g'(0)=1) of y'' = x y, combined with the exact constants.
/// Double-double absorbs the cancellation on the negative axis.
fn maclaurin(x: f64) -> AiryValue {
    if x == 0.0 {
        return AiryValue {
            ai: AI0.to_f64(),
            ai_prime: AIP0.to_f64(),
        };
    }
    let x3 = DD::from(x).mul(DD::from(x)).mul(DD::from(x));

    // f-series: t_0 = 1, t_k = t_{k-1} x^3 / ((3k-1)(3k))
    let mut t = DD::ONE;
    let mut f = DD::ONE;
    let mut fp = DD::ZERO; // sum of t_k * 3k / x
                           // g-series: s_0 = x, s_k = s_{k-1} x^3 / ((3k)(3k+1))
    let mut s = DD::from(x);
    let mut g = s;
    let mut gp = DD::ONE; // sum of s_k (3k+1) / x
    for k in 1..400usize {
        let kf = k as f64;
        t = t.mul(x3).div_f64((3.0 * kf - 1.0) * 3.0 * kf);
        s = s.mul(x3).div_f64(3.0 * kf * (3.0 * kf + 1.0));
        f = f.add(t);
        g = g.add(s);
        // 3k and 3k+1 are exact; divide in double-double, not f64
        fp = fp.add(t.mul_f64(3.0 * kf).div_f64(x));
        gp = gp.add(s.mul_f64(3.0 * kf + 1.0).div_f64(x));
        if t.abs() < 1e-40 && s.abs() < 1e-40 {
            break;
        }
    }
    AiryValue {
        ai: AI0.mul(f).add(AIP0.mul(g)).to_f64(),
        ai_prime: AI0.mul(fp).add(AIP0.mul(gp)).to_f64(),
    }
}

// u_k = (2k+1)(2k+3)...(6k-1)/(216^k k!) and v_k = -u_k (6k+1)/(6k-1);
// recurrences below. Both series are truncated at the smallest term.
struct AsymptoticTerms {
    u: f64,
    k: usize,
}

impl AsymptoticTerms {
    fn new() -> Self {
        AsymptoticTerms { u: 1.0, k: 0 }
    }
    fn advance(&mut self) -> (f64, f64) {
        self.k += 1;
        let k = self.k as f64;
        self.u *=
            (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) / ((2.0 * k - 1.0) * 216.0 * k);
        let v = -self.u * (6.0 * k + 1.0) / (6.0 * k - 1.0);
        (self.u, v)
    }
}

fn asymptotic_pos(x: f64) -> AiryValue {
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let mut sum_a = 1.0;
    let mut sum_ap = 1.0;
    let mut terms = AsymptoticTerms::new();
    let mut sign = -1.0;
    let mut zk = 1.0;
    let mut prev = f64::INFINITY;
    for _ in 1..40 {
        let (u, v) = terms.advance();
        zk *= zeta;
        let ta = u / zk;
        if ta.abs() >= prev || ta.abs() < 1e-18 {
            break;
        }
        prev = ta.abs();
        sum_a += sign * ta;
        sum_ap += sign * v / zk;
        sign = -sign;
    }
    let pre = (-zeta).exp() / (2.0 * std::f64::consts::PI.sqrt());
    AiryValue {
        ai: pre / x.powf(0.25) * sum_a,
        ai_prime: -pre * x.powf(0.25) * sum_ap,
    }
}

fn asymptotic_neg(x: f64) -> AiryValue {
    let t = -x;
    let zeta = 2.0 / 3.0 * t.powf(1.5);
    let phi = zeta - std::f64::consts::FRAC_PI_4;
    // Even-index terms weight cos phi (Ai) / sin phi (Ai'), odd the other.
    let (mut p, mut q, mut r, mut sser) = (1.0, 0.0, 1.0, 0.0);
    let mut terms = AsymptoticTerms::new();
    let mut zk = 1.0;
    let mut prev = f64::INFINITY;
    for j in 1..40 {
        let (u, v) = terms.advance();
        zk *= zeta;
        let tu = u / zk;
        if tu.abs() >= prev || tu.abs() < 1e-18 {
            break;
        }
        prev = tu.abs();
        // (-1)^k with k the pair index: terms come in (even, odd) pairs
        let pair = j / 2;
        let sgn = if pair % 2 == 0 { 1.0 } else { -1.0 };
        if j % 2 == 1 {
            q += sgn * tu;
            sser += sgn * v / zk;
        } else {
            p += sgn * tu;
            r += sgn * v / zk;
        }
    }
    let pre = 1.0 / (std::f64::consts::PI.sqrt() * t.powf(0.25));
    AiryValue {
        ai: pre * (phi.cos() * p + phi.sin() * q),
        ai_prime: t.powf(0.25) / std::f64::consts::PI.sqrt() * (phi.sin() * r - phi.cos() * sser),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_zero_and_one() {
        let v = airy_ai(0.0).unwrap();
        assert!((v.ai - 0.3550280538878172).abs() < 1e-15);
        assert!((v.ai_prime - (-0.2588194037928068)).abs() < 1e-15);
        let v1 = airy_ai(1.0).unwrap();
        assert!((v1.ai - 0.1352924163128814).abs() < 1e-14);
    }

    #[test]
    fn positive_axis_monotone_decreasing() {
        let mut prev = airy_ai(0.0).unwrap().ai;
        let mut x = 0.05;
        while x <= 10.0 {
            let v = airy_ai(x).unwrap().ai;
            assert!(v > 0.0 && v < prev, "Ai not decreasing at x={x}");
            prev = v;
            x += 0.05;
        }
    }

    #[test]
    fn ode_residual_second_difference_converges_quadratically() {
        // |(Ai(x+h) - 2Ai(x) + Ai(x-h))/h^2 - x Ai(x)| = O(h^2)
        for &x in &[-5.0, -1.0, 0.5, 3.0] {
            let f = |y: f64| airy_ai(y).unwrap().ai;
            let resid = |h: f64| ((f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h) - x * f(x)).abs();
            let r1 = resid(1e-3);
            let r2 = resid(2e-3);
            // quadratic rate: r(2h)/r(h) ~ 4 (allow slack for fp noise)
            assert!(r2 / r1 > 2.0 && r2 / r1 < 8.0, "x={x}: r1={r1:e} r2={r2:e}");
            assert!(r1 < 1e-5);
        }
    }

    #[test]
    fn derivative_matches_central_difference() {
        for &x in &[-7.0, -2.0, 0.3, 4.0, 9.0] {
            let h = 1e-5;
            let d = (airy_ai(x + h).unwrap().ai - airy_ai(x - h).unwrap().ai) / (2.0 * h);
            let v = airy_ai(x).unwrap().ai_prime;
            assert!((d - v).abs() < 1e-9, "x={x}: fd={d} exact={v}");
        }
    }

    #[test]
    fn series_asymptotic_overlap() {
        // both branches agree to 1e-12 across the switchover window
        for i in 0..21 {
            let x = 7.5 + 0.05 * i as f64;
            for &y in &[x, -x] {
                let s = maclaurin(y);
                let a = if y > 0.0 {
                    asymptotic_pos(y)
                } else {
                    asymptotic_neg(y)
                };
                assert!(
                    (s.ai - a.ai).abs() < 1e-12,
                    "Ai mismatch at {y}: {} vs {}",
                    s.ai,
                    a.ai
                );
                assert!(
                    (s.ai_prime - a.ai_prime).abs() < 1e-11,
                    "Ai' mismatch at {y}"
                );
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(airy_ai(f64::NAN).is_err());
        assert!(airy_ai(51.0).is_err());
        assert!(airy_ai(-51.0).is_err());
        assert!(airy_ai(50.0).is_ok());
    }
}
