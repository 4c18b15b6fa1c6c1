//! Exponential phase nu(w, s) and the frozen per-process conventions.
//!
//! nu(w, s) = s w - (4/3) w^3, so that e^{nu} decays like exp(-4 eps y^2)
//! on the left contour Re w = -eps and e^{-nu} decays on the right one,
//! while d/ds nu = w and d^2/ds^2 e^{nu} = w^2 e^{nu} hold exactly.

use num_complex::Complex64;
use std::sync::OnceLock;

/// Frozen conventions: the phase sign, the closure sign of the resolvent
/// seed (determined empirically by quadrature, see `seeds`), and the
/// default s-axis calibration between the contour and Airy pipelines.
#[derive(Clone, Copy, Debug)]
pub struct PhaseConvention {
    pub sign_nu: f64,
    pub sigma_c: f64,
    pub scale_c: f64,
}

/// Default calibration constant: the contour pipeline's s-axis is the Airy
/// one stretched by 2^{2/3} (`tau_contour(s) = tau_airy(scale_c * s)`).
pub const SCALE_C_DEFAULT: f64 = 0.6299605249474366; // 2^(-2/3)

static SIGN_NU: OnceLock<f64> = OnceLock::new();

/// The phase sign, fixed once per process. `PII_TAU_SIGN_NU=-1` corrupts
/// the convention deliberately; the self-test suite must then fail.
pub fn sign_nu() -> f64 {
    *SIGN_NU.get_or_init(|| match std::env::var("PII_TAU_SIGN_NU") {
        Ok(v) if v.trim() == "-1" => -1.0,
        _ => 1.0,
    })
}

/// nu(w, s) under the frozen sign convention.
pub fn phase_nu(w: Complex64, s: f64) -> Complex64 {
    let cubic = w * w * w * (4.0 / 3.0);
    (w * s - cubic) * sign_nu()
}

/// Real part of nu on a vertical line Re w = x at height y; used for tail
/// bounds without complex exponentials.
pub fn re_nu_on_vertical(x: f64, y: f64, s: f64) -> f64 {
    // Re((x+iy)^3) = x^3 - 3 x y^2
    sign_nu() * (s * x - 4.0 / 3.0 * (x * x * x - 3.0 * x * y * y))
}

impl PhaseConvention {
    /// The frozen per-process conventions, with the resolvent closure
    /// sign measured from the quadrature itself on first use.
    pub fn current() -> PhaseConvention {
        PhaseConvention {
            sign_nu: sign_nu(),
            sigma_c: crate::seeds::determine_sigma_c(),
            scale_c: SCALE_C_DEFAULT,
        }
    }
}
