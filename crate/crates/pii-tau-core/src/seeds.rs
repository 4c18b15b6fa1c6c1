//! Contour-integral seed functions A, A', C and the mirrored resolvent.
//!
//! A(s)  = int_{Re w=-eps} e^{nu(w,s)} dw/(2 pi i)         (= 2^{-2/3} Ai(2^{-2/3} s))
//! A'(s) = int_{Re w=-eps} w e^{nu(w,s)} dw/(2 pi i)
//! C(s)  = int_{Re w=-eps} e^{nu(w,s)}/(w+1) dw/(2 pi i)   closure C' = sigma (A - C)
//!
//! The closure sign sigma is determined by the quadrature itself and
//! frozen; under the decay convention it comes out +1. The mirrored
//! resolvent on the right contour, int e^{-nu}/(z+1) dz/(2 pi i),
//! satisfies the opposite closure (sigma = -1) and seeds the
//! minor-expansion coefficient family.

use crate::error::{Error, Result};
use crate::phase::phase_nu;
use crate::quad::{contour_integral, vertical_contour, Contour, Side};
use num_complex::Complex64;
use std::sync::OnceLock;

/// Contour parameters for seed evaluation.
#[derive(Clone, Copy, Debug)]
pub struct SeedConfig {
    pub m: usize,
    pub eps: f64,
    pub tail_tol: f64,
}

impl Default for SeedConfig {
    fn default() -> Self {
        SeedConfig {
            m: 200,
            eps: 0.5,
            tail_tol: 1e-16,
        }
    }
}

pub const SEED_MAX_ARG: f64 = 50.0;

fn check_arg(s: f64, what: &str) -> Result<()> {
    if !s.is_finite() || s.abs() > SEED_MAX_ARG {
        return Err(Error::Domain(format!(
            "{what}: |s| = {s} exceeds {SEED_MAX_ARG}"
        )));
    }
    Ok(())
}

fn left_contour(s: f64, cfg: &SeedConfig) -> Result<Contour> {
    vertical_contour(Side::Left, cfg.eps, s, cfg.m, cfg.tail_tol)
}

fn right_contour(s: f64, cfg: &SeedConfig) -> Result<Contour> {
    vertical_contour(Side::Right, cfg.eps, s, cfg.m, cfg.tail_tol)
}

fn real_part(v: Complex64, what: &str, scale: f64) -> Result<f64> {
    if v.im.abs() > 1e-9 * scale.max(1.0) {
        return Err(Error::Numerical(format!(
            "{what}: imaginary residual {:.3e} too large",
            v.im.abs()
        )));
    }
    Ok(v.re)
}

pub fn seed_a_cfg(s: f64, cfg: &SeedConfig) -> Result<f64> {
    check_arg(s, "seed_a")?;
    let c = left_contour(s, cfg)?;
    let v = contour_integral(|w| phase_nu(w, s).exp(), &c)?;
    real_part(v, "seed_a", 1.0)
}

pub fn seed_a_prime_cfg(s: f64, cfg: &SeedConfig) -> Result<f64> {
    check_arg(s, "seed_a_prime")?;
    let c = left_contour(s, cfg)?;
    let v = contour_integral(|w| w * phase_nu(w, s).exp(), &c)?;
    real_part(v, "seed_a_prime", 1.0)
}

pub fn seed_c_cfg(s: f64, cfg: &SeedConfig) -> Result<f64> {
    check_arg(s, "seed_c")?;
    if (cfg.eps - 1.0).abs() < 1e-9 {
        return Err(Error::Collision(
            "seed_c: eps = 1 hits the pole at w = -1".into(),
        ));
    }
    let c = left_contour(s, cfg)?;
    let v = contour_integral(|w| phase_nu(w, s).exp() / (w + 1.0), &c)?;
    real_part(v, "seed_c", 1.0)
}

/// Mirrored resolvent: right contour, e^{-nu}; closure C' = -(A - C).
pub fn seed_c_mirror_cfg(s: f64, cfg: &SeedConfig) -> Result<f64> {
    check_arg(s, "seed_c_mirror")?;
    let c = right_contour(s, cfg)?;
    let v = contour_integral(|z| (-phase_nu(z, s)).exp() / (z + 1.0), &c)?;
    real_part(v, "seed_c_mirror", 1.0)
}

pub fn seed_a(s: f64) -> Result<f64> {
    seed_a_cfg(s, &SeedConfig::default())
}

pub fn seed_a_prime(s: f64) -> Result<f64> {
    seed_a_prime_cfg(s, &SeedConfig::default())
}

pub fn seed_c(s: f64) -> Result<f64> {
    seed_c_cfg(s, &SeedConfig::default())
}

pub fn seed_c_mirror(s: f64) -> Result<f64> {
    seed_c_mirror_cfg(s, &SeedConfig::default())
}

/// All three left-contour seeds off one contour build (A, A', C).
pub fn seeds_at(s: f64, cfg: &SeedConfig) -> Result<(f64, f64, f64)> {
    check_arg(s, "seeds_at")?;
    let c = left_contour(s, cfg)?;
    let a = contour_integral(|w| phase_nu(w, s).exp(), &c)?;
    let ap = contour_integral(|w| w * phase_nu(w, s).exp(), &c)?;
    let cc = contour_integral(|w| phase_nu(w, s).exp() / (w + 1.0), &c)?;
    Ok((
        real_part(a, "seeds_at", 1.0)?,
        real_part(ap, "seeds_at", 1.0)?,
        real_part(cc, "seeds_at", 1.0)?,
    ))
}

/// Empirical determination of the closure sign of `seed_c`:
/// the sigma in C' = sigma (A - C) with the smaller finite-difference
/// residual wins. Frozen for the process lifetime.
pub fn determine_sigma_c() -> f64 {
    static SIGMA: OnceLock<f64> = OnceLock::new();
    *SIGMA.get_or_init(|| {
        let cfg = SeedConfig::default();
        let mut best = (f64::INFINITY, 1.0);
        for sigma in [1.0, -1.0] {
            let mut worst: f64 = 0.0;
            for &s in &[0.0, 1.0] {
                let h = 1e-4;
                let r = (|| -> Result<f64> {
                    let cp = (seed_c_cfg(s + h, &cfg)? - seed_c_cfg(s - h, &cfg)?) / (2.0 * h);
                    let rhs = sigma * (seed_a_cfg(s, &cfg)? - seed_c_cfg(s, &cfg)?);
                    Ok((cp - rhs).abs())
                })()
                .unwrap_or(f64::INFINITY);
                worst = worst.max(r);
            }
            if worst < best.0 {
                best = (worst, sigma);
            }
        }
        best.1
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::airy::airy_ai;

    const TWO_M23: f64 = 0.6299605249474366; // 2^(-2/3)

    #[test]
    fn seed_a_is_rescaled_airy() {
        let mut s = -6.0;
        while s <= 10.0 {
            let a = seed_a(s).unwrap();
            let ai = TWO_M23 * airy_ai(TWO_M23 * s).unwrap().ai;
            assert!((a - ai).abs() < 1e-10, "s={s}: {a} vs {ai}");
            s += 0.5;
        }
    }

    #[test]
    fn seed_a_satisfies_quarter_airy_ode() {
        // 4 A'' - s A = 0 with A'' from the w^2-moment
        let cfg = SeedConfig::default();
        for &s in &[-2.0, 0.0, 3.0] {
            let c = vertical_contour(Side::Left, cfg.eps, s, cfg.m, cfg.tail_tol).unwrap();
            let app = contour_integral(|w| w * w * phase_nu(w, s).exp(), &c)
                .unwrap()
                .re;
            let a = seed_a(s).unwrap();
            assert!((4.0 * app - s * a).abs() < 1e-9, "s={s}");
        }
    }

    #[test]
    fn seed_a_prime_is_s_derivative() {
        // central differences converge at rate O(h^2)
        for &s in &[-1.0, 2.0] {
            let ap = seed_a_prime(s).unwrap();
            let fd = |h: f64| (seed_a(s + h).unwrap() - seed_a(s - h).unwrap()) / (2.0 * h);
            let e1 = (fd(1e-3) - ap).abs();
            let e2 = (fd(2e-3) - ap).abs();
            assert!(e1 < 1e-6);
            assert!(
                e2 / e1 > 2.5 && e2 / e1 < 6.0,
                "rate check s={s}: {e2}/{e1}"
            );
        }
    }

    #[test]
    fn sigma_c_is_plus_one_and_closure_holds() {
        assert_eq!(determine_sigma_c(), 1.0);
        let h = 1e-4;
        for &s in &[0.0, 1.0] {
            let cp = (seed_c(s + h).unwrap() - seed_c(s - h).unwrap()) / (2.0 * h);
            let rhs = seed_a(s).unwrap() - seed_c(s).unwrap();
            assert!((cp - rhs).abs() < 1e-9, "s={s}: {cp} vs {rhs}");
        }
    }

    #[test]
    fn mirror_resolvent_closure_is_minus() {
        let h = 1e-4;
        for &s in &[0.0, 1.0] {
            let cp = (seed_c_mirror(s + h).unwrap() - seed_c_mirror(s - h).unwrap()) / (2.0 * h);
            let rhs = -(seed_a(s).unwrap() - seed_c_mirror(s).unwrap());
            assert!((cp - rhs).abs() < 1e-9, "s={s}: {cp} vs {rhs}");
        }
    }

    #[test]
    fn decay_at_large_s() {
        assert!(seed_a(10.0).unwrap().abs() < 1e-4);
        assert!(seed_c(10.0).unwrap().abs() < 1e-3);
    }

    #[test]
    fn self_convergence_under_doubling() {
        let lo = SeedConfig {
            m: 200,
            ..Default::default()
        };
        let hi = SeedConfig {
            m: 400,
            ..Default::default()
        };
        let v1 = seed_c_cfg(0.0, &lo).unwrap();
        let v2 = seed_c_cfg(0.0, &hi).unwrap();
        assert!((v1 - v2).abs() < 1e-12);
    }

    #[test]
    fn contour_shift_independence() {
        let e3 = SeedConfig {
            eps: 0.3,
            ..Default::default()
        };
        let e7 = SeedConfig {
            eps: 0.7,
            ..Default::default()
        };
        for &s in &[-1.0, 0.0, 2.0] {
            let a3 = seed_a_cfg(s, &e3).unwrap();
            let a7 = seed_a_cfg(s, &e7).unwrap();
            assert!((a3 - a7).abs() < 1e-10, "s={s}");
        }
    }
}
