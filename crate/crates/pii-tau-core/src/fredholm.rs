//! tau(s, kappa) = det(I - kappa^2 K_Ai restricted to [s, oo)) by
//! symmetrized Nystrom discretization, plus the second log-derivative.

use crate::airy::airy_ai;
use crate::error::{Error, Result};
use crate::linalg::logdet_real;
use crate::phase::SCALE_C_DEFAULT;
use crate::quad::halfline_grid;

/// Which pipeline produced a tau value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Airy,
    Widom,
    Minor,
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Airy => "airy",
            Method::Widom => "widom",
            Method::Minor => "minor",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Method> {
        match s {
            "airy" => Ok(Method::Airy),
            "widom" => Ok(Method::Widom),
            "minor" => Ok(Method::Minor),
            other => Err(Error::Domain(format!(
                "unknown method '{other}' (expected airy|widom|minor)"
            ))),
        }
    }
}

/// Numerical parameters a tau value was computed with.
#[derive(Clone, Copy, Debug)]
pub struct ConfigSnapshot {
    pub quad_order: usize,
    pub truncation: f64,
    pub eps: f64,
    pub scale_c: f64,
}

/// A tau value with provenance: the common currency of all pipelines.
#[derive(Clone, Debug)]
pub struct TauResult {
    pub value: f64,
    pub imag_residual: f64,
    pub method: Method,
    pub s: f64,
    pub kappa: f64,
    pub error_estimate: f64,
    pub config: ConfigSnapshot,
    pub warning: Option<String>,
}

/// Nystrom parameters for the Airy-kernel determinant.
#[derive(Clone, Copy, Debug)]
pub struct AiryFredholmConfig {
    pub m: usize,
    pub truncation: f64,
}

impl Default for AiryFredholmConfig {
    /// Validity window roughly s in [-8, 20] at T = 16.
    fn default() -> Self {
        AiryFredholmConfig {
            m: 200,
            truncation: 16.0,
        }
    }
}

/// Airy kernel (Ai(x)Ai'(y) - Ai'(x)Ai(y))/(x - y), with the L'Hopital
/// value Ai'(x)^2 - x Ai(x)^2 on the diagonal.
pub fn airy_kernel(x: f64, y: f64) -> Result<f64> {
    let vx = airy_ai(x)?;
    if x == y {
        return Ok(vx.ai_prime * vx.ai_prime - x * vx.ai * vx.ai);
    }
    let vy = airy_ai(y)?;
    Ok((vx.ai * vy.ai_prime - vx.ai_prime * vy.ai) / (x - y))
}

fn nystrom_det(s: f64, kappa: f64, m: usize, t: f64) -> Result<f64> {
    let grid = halfline_grid(s, t, m)?;
    let vals: Result<Vec<_>> = grid.nodes.iter().map(|&x| airy_ai(x)).collect();
    let vals = vals?;
    let sq: Vec<f64> = grid.weights.iter().map(|&w| w.sqrt()).collect();
    let k2 = kappa * kappa;
    let mut mat = vec![0.0f64; m * m];
    for i in 0..m {
        for j in 0..m {
            let k = if i == j {
                vals[i].ai_prime * vals[i].ai_prime - grid.nodes[i] * vals[i].ai * vals[i].ai
            } else {
                (vals[i].ai * vals[j].ai_prime - vals[i].ai_prime * vals[j].ai)
                    / (grid.nodes[i] - grid.nodes[j])
            };
            let d = if i == j { 1.0 } else { 0.0 };
            mat[i * m + j] = d - k2 * sq[i] * k * sq[j];
        }
    }
    let (log_mag, sign) = logdet_real(mat, m)?;
    let v = sign * log_mag.exp();
    if !v.is_finite() {
        return Err(Error::Numerical(format!(
            "tau_airy: non-finite determinant at s = {s}"
        )));
    }
    Ok(v)
}

/// Fredholm determinant of the Airy kernel on [s, s+T], with an error
/// estimate from a half-order rerun.
pub fn tau_airy(s: f64, kappa: f64, cfg: &AiryFredholmConfig) -> Result<TauResult> {
    if kappa.abs() > 1.0 {
        return Err(Error::Domain(format!(
            "tau_airy: |kappa| = {} > 1",
            kappa.abs()
        )));
    }
    if cfg.m < 8 {
        return Err(Error::Domain("tau_airy: quadrature order < 8".into()));
    }
    let value = nystrom_det(s, kappa, cfg.m, cfg.truncation)?;
    let error_estimate = if kappa == 0.0 {
        0.0
    } else {
        (value - nystrom_det(s, kappa, cfg.m / 2, cfg.truncation)?).abs()
    };
    let edge = airy_ai(s + cfg.truncation)?.ai;
    let warning = if edge * edge * cfg.truncation > 1e-14 {
        Some(format!(
            "truncation too small: Ai(s+T)^2 T = {:.3e} > 1e-14",
            edge * edge * cfg.truncation
        ))
    } else {
        None
    };
    Ok(TauResult {
        value,
        imag_residual: 0.0,
        method: Method::Airy,
        s,
        kappa,
        error_estimate,
        config: ConfigSnapshot {
            quad_order: cfg.m,
            truncation: cfg.truncation,
            eps: 0.0,
            scale_c: SCALE_C_DEFAULT,
        },
        warning,
    })
}

/// Richardson-extrapolated central second difference of log f at step h:
/// combines steps h and 2h to cancel the O(h^2) error.
pub fn log_second_derivative<F>(f: F, s: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(1e-4..=1e-1).contains(&h) {
        return Err(Error::Domain(format!(
            "log_second_derivative: h = {h} not in [1e-4, 1e-1]"
        )));
    }
    let lg = |x: f64| -> Result<f64> {
        let v = f(x)?;
        if v <= 0.0 {
            return Err(Error::Numerical(format!(
                "log_second_derivative: tau = {v} <= 0 at s = {x}"
            )));
        }
        Ok(v.ln())
    };
    let c = lg(s)?;
    let d_h = (lg(s + h)? - 2.0 * c + lg(s - h)?) / (h * h);
    let d_2h = (lg(s + 2.0 * h)? - 2.0 * c + lg(s - 2.0 * h)?) / (4.0 * h * h);
    Ok((4.0 * d_h - d_2h) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_symmetry_and_diagonal() {
        let a = airy_kernel(0.3, 1.1).unwrap();
        let b = airy_kernel(1.1, 0.3).unwrap();
        assert!((a - b).abs() < 1e-14);
        // K(0,0) = Ai'(0)^2 = 3^(-2/3)/Gamma(1/3)^2
        let d = airy_kernel(0.0, 0.0).unwrap();
        assert!((d - 0.06698748377966397).abs() < 1e-14);
    }

    #[test]
    fn kernel_near_diagonal_matches_taylor() {
        // d/dy K(x,y)|_{y=x} = -Ai(x)^2 / 2, so the first-order Taylor
        // step from the diagonal pins the near-diagonal value to 1e-8
        let x = 0.7;
        let h = 1e-6;
        let near = airy_kernel(x, x + h).unwrap();
        let v = airy_ai(x).unwrap();
        let taylor = airy_kernel(x, x).unwrap() - 0.5 * h * v.ai * v.ai;
        assert!((near - taylor).abs() < 1e-8, "{near} vs {taylor}");
    }

    #[test]
    fn kappa_zero_is_exactly_one() {
        let r = tau_airy(0.0, 0.0, &AiryFredholmConfig::default()).unwrap();
        assert_eq!(r.value, 1.0);
        assert_eq!(r.error_estimate, 0.0);
    }

    #[test]
    fn far_right_tail_is_near_one() {
        let r = tau_airy(10.0, 0.5, &AiryFredholmConfig::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-3);
        assert!(r.warning.is_none());
    }

    #[test]
    fn nystrom_self_convergence() {
        let lo = AiryFredholmConfig {
            m: 160,
            truncation: 16.0,
        };
        let hi = AiryFredholmConfig {
            m: 320,
            truncation: 16.0,
        };
        for &s in &[-2.0, 0.0, 2.0] {
            let a = tau_airy(s, 1.0, &lo).unwrap().value;
            let b = tau_airy(s, 1.0, &hi).unwrap().value;
            assert!((a - b).abs() < 1e-10, "s={s}: {a} vs {b}");
        }
    }

    #[test]
    fn monotone_in_s() {
        let cfg = AiryFredholmConfig::default();
        let mut prev = 0.0;
        let mut s = -4.0;
        while s <= 6.0 {
            let v = tau_airy(s, 0.7, &cfg).unwrap().value;
            assert!(v > 0.0 && v >= prev, "s={s}");
            prev = v;
            s += 0.5;
        }
    }

    #[test]
    fn symmetrized_equals_unsymmetrized() {
        // M'_{jk} = K w_k has the same determinant as the sqrt-w form
        let s = -1.0;
        let kappa = 0.8;
        let m = 120;
        let t = 16.0;
        let grid = halfline_grid(s, t, m).unwrap();
        let k2 = kappa * kappa;
        let mut mat = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                let d = if i == j { 1.0 } else { 0.0 };
                mat[i * m + j] =
                    d - k2 * airy_kernel(grid.nodes[i], grid.nodes[j]).unwrap() * grid.weights[j];
            }
        }
        let (lm, sg) = logdet_real(mat, m).unwrap();
        let unsym = sg * lm.exp();
        let sym = nystrom_det(s, kappa, m, t).unwrap();
        assert!(((unsym - sym) / sym).abs() < 1e-12);
    }

    #[test]
    fn log_second_derivative_linearity_hook() {
        // f(s) = exp(a s^2) has (log f)'' = 2a
        let a = 0.37;
        let f = |x: f64| Ok((a * x * x).exp());
        let d = log_second_derivative(f, 1.3, 1e-2).unwrap();
        assert!((d - 2.0 * a).abs() < 1e-10);
        // kappa = 0: log tau == 0
        let cfg = AiryFredholmConfig::default();
        let d0 = log_second_derivative(|x| Ok(tau_airy(x, 0.0, &cfg)?.value), 0.5, 1e-2).unwrap();
        assert_eq!(d0, 0.0);
    }
}
