//! Minor-expansion coefficients: symbolic closed forms and the direct
//! quadrature oracles that arbitrate every sign and prefactor.
//!
//! alpha_m^n = kappa/(m! n!) * I_{m+n} with
//! I_k = int_{Re w=-eps} e^{nu} (w-1)^k/(w+1)^{k+2} dw/(2 pi i);
//! the mirrored family replaces the contour by Re w = +eps and e^{nu}
//! by e^{-nu}, which is what the determinant assembly consumes.

use crate::error::{Error, Result};
use crate::phase::phase_nu;
use crate::quad::{vertical_contour, Side};
use crate::ratpoly::rat;
use crate::seeds::SeedConfig;
use crate::symfn::{factorial_rat, Algebra, SymbolicFunction};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

/// Which closed-form prefactor multiplies the ladder-operator powers of
/// the seed. `OracleValidated` is the one the quadrature oracle
/// confirms; two alternating variants seen in the literature are kept
/// for comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Prefactor {
    /// sigma^k / (m! n! 4^k (k+1)!)
    #[default]
    OracleValidated,
    /// (-1)^k / (m! n! (k+1)!)
    AlternatingUnscaled,
    /// (-1)^k / ((m!)^2 n! (k+1)!)
    AlternatingAsymmetric,
}

/// Guard: ladder powers beyond this are refused.
pub const MAX_LADDER: usize = 40;

/// A coefficient alpha_m^n (or beta_n^m): symbolic content plus the
/// kappa power applied at evaluation time.
#[derive(Clone, Debug)]
pub struct Coefficient {
    pub m: usize,
    pub n: usize,
    pub sym: SymbolicFunction,
    pub kappa_power: u32,
}

fn scaled_moment(alg: Algebra, k: usize, m: usize, n: usize, pre: Prefactor) -> SymbolicFunction {
    let ladder = alg.moment_ladder(k);
    let moment = &ladder[k];
    match pre {
        Prefactor::OracleValidated => {
            // the ladder already carries sigma^k/(2^k (k+1)!); only the
            // 1/(m! n!) pairing factor remains
            let scale = BigRational::one() / (factorial_rat(m) * factorial_rat(n));
            moment.scale(&scale)
        }
        Prefactor::AlternatingUnscaled | Prefactor::AlternatingAsymmetric => {
            // rebuild from ladder powers of the seed with the variant scalars
            let mut f = alg.seed_coefficient();
            for _ in 0..k {
                f = alg.apply_ladder(&f);
            }
            let sign = if k.is_multiple_of(2) {
                rat(1, 1)
            } else {
                rat(-1, 1)
            };
            let denom = match pre {
                Prefactor::AlternatingUnscaled => {
                    factorial_rat(m) * factorial_rat(n) * factorial_rat(k + 1)
                }
                _ => factorial_rat(m) * factorial_rat(m) * factorial_rat(n) * factorial_rat(k + 1),
            };
            f.scale(&(sign / denom))
        }
    }
}

/// Symbolic alpha_m^n in the left-contour family (sigma determined by
/// the C-closure; +1 under the frozen conventions).
pub fn coeff_alpha(m: usize, n: usize, pre: Prefactor) -> Result<Coefficient> {
    if m + n > MAX_LADDER {
        return Err(Error::Domain(format!(
            "coeff_alpha: m+n = {} exceeds ladder guard {MAX_LADDER}",
            m + n
        )));
    }
    Ok(Coefficient {
        m,
        n,
        sym: scaled_moment(Algebra::plus(), m + n, m, n, pre),
        kappa_power: 1,
    })
}

/// beta_n^m = alpha_m^n: both depend on (m, n) only through m+n.
pub fn coeff_beta(n: usize, m: usize, pre: Prefactor) -> Result<Coefficient> {
    coeff_alpha(m, n, pre)
}

/// Symbolic coefficient of the mirrored family (the one the determinant
/// assembly uses).
pub fn coeff_alpha_mirror(m: usize, n: usize) -> Result<Coefficient> {
    if m + n > MAX_LADDER {
        return Err(Error::Domain(format!(
            "coeff_alpha_mirror: m+n = {} exceeds ladder guard {MAX_LADDER}",
            m + n
        )));
    }
    Ok(Coefficient {
        m,
        n,
        sym: scaled_moment(Algebra::minus(), m + n, m, n, Prefactor::OracleValidated),
        kappa_power: 1,
    })
}

/// Evaluate a coefficient at (s, kappa) through the quadrature-backed
/// seeds of its algebra.
pub fn eval_coefficient(
    c: &Coefficient,
    alg: Algebra,
    s: f64,
    kappa: f64,
    cfg: &SeedConfig,
) -> Result<f64> {
    Ok(kappa.powi(c.kappa_power as i32) * alg.eval(&c.sym, s, cfg)?)
}

/// Contour parameters for the coefficient oracles.
#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    pub m: usize,
    pub eps: f64,
    pub tail_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            m: 400,
            eps: 0.5,
            tail_tol: 1e-16,
        }
    }
}

/// Direct quadrature of alpha_m^n on the left contour:
/// kappa/(m! n!) int e^{nu} (w-1)^{m+n}/(w+1)^{m+n+2} dw/(2 pi i).
pub fn alpha_quadrature_oracle(
    m: usize,
    n: usize,
    s: f64,
    kappa: f64,
    cfg: &OracleConfig,
) -> Result<f64> {
    if m + n > 12 {
        return Err(Error::Domain(format!(
            "alpha_quadrature_oracle: m+n = {} exceeds pole-order guard 12",
            m + n
        )));
    }
    let v = moment_quadrature(Algebra::plus(), m + n, s, cfg)?;
    let fact = (factorial_rat(m) * factorial_rat(n)).to_f64().unwrap();
    Ok(kappa * v / fact)
}

/// Direct quadrature of the mirrored coefficient on the right contour.
pub fn alpha_mirror_quadrature_oracle(
    m: usize,
    n: usize,
    s: f64,
    kappa: f64,
    cfg: &OracleConfig,
) -> Result<f64> {
    if m + n > 12 {
        return Err(Error::Domain(format!(
            "alpha_mirror_quadrature_oracle: m+n = {} exceeds pole-order guard 12",
            m + n
        )));
    }
    let v = moment_quadrature(Algebra::minus(), m + n, s, cfg)?;
    let fact = (factorial_rat(m) * factorial_rat(n)).to_f64().unwrap();
    Ok(kappa * v / fact)
}

/// Moment I_k by direct quadrature for either family.
pub fn moment_quadrature(alg: Algebra, k: usize, s: f64, cfg: &OracleConfig) -> Result<f64> {
    Ok(moment_quadrature_batch(alg, k, s, cfg)?[k])
}

/// All moments I_0 .. I_kmax off one contour pass, with the Moebius
/// factor raised incrementally. On the mirrored (right-contour) side the
/// factor has modulus below one, so this is stable to arbitrary order.
pub fn moment_quadrature_batch(
    alg: Algebra,
    kmax: usize,
    s: f64,
    cfg: &OracleConfig,
) -> Result<Vec<f64>> {
    let (side, phase_sign) = if alg == Algebra::plus() {
        (Side::Left, 1.0)
    } else {
        (Side::Right, -1.0)
    };
    let c = vertical_contour(side, cfg.eps, s, cfg.m, cfg.tail_tol)?;
    let mut acc = vec![Complex64::new(0.0, 0.0); kmax + 1];
    for (&w, &mu) in c.nodes.iter().zip(&c.weights) {
        let ratio = (w - 1.0) / (w + 1.0);
        let mut f = (phase_sign * phase_nu(w, s)).exp() / ((w + 1.0) * (w + 1.0)) * mu;
        for a in acc.iter_mut() {
            *a += f;
            f *= ratio;
        }
    }
    let scale = Complex64::new(0.0, 2.0 * std::f64::consts::PI);
    let mut out = Vec::with_capacity(kmax + 1);
    for a in acc {
        let v = a / scale;
        if v.im.abs() > 1e-8 {
            return Err(Error::Numerical(format!(
                "moment_quadrature: imaginary residual {:.3e}",
                v.im.abs()
            )));
        }
        out.push(v.re);
    }
    Ok(out)
}
