//! Contour-determinant route: tau as the determinant of a two-contour
//! operator with Cauchy-type kernels weighted by e^{+-nu/2}.
//!
//! The (1,2) block acts from the left contour to the right one with
//! phase e^{+nu}, the (2,1) block the other way with e^{-nu}; conjugation
//! by diag(e^{+-nu/2}) splits the phases symmetrically across the F and G
//! kernels without changing the determinant.

use crate::error::{Error, Result};
use crate::fredholm::{ConfigSnapshot, Method, TauResult};
use crate::linalg::{logdet_complex, CMat};
use crate::phase::{phase_nu, SCALE_C_DEFAULT};
use crate::quad::{gauss_legendre, vertical_contour, Contour, Side};
use num_complex::Complex64;

const TWO_PI_I: Complex64 = Complex64::new(0.0, 2.0 * std::f64::consts::PI);

/// Contour-determinant parameters.
#[derive(Clone, Copy, Debug)]
pub struct WidomConfig {
    pub m: usize,
    pub eps: f64,
    pub tail_tol: f64,
}

impl Default for WidomConfig {
    fn default() -> Self {
        WidomConfig {
            m: 200,
            eps: 0.5,
            tail_tol: 1e-16,
        }
    }
}

/// Discretized kernel block together with its contours.
#[derive(Clone, Debug)]
pub struct KernelMatrix {
    pub row_contour: Contour,
    pub col_contour: Contour,
    pub entries: CMat,
    pub kappa: f64,
    pub s: f64,
}

/// Symmetrized kernel F(z, w) = e^{(nu(w)-nu(z))/2} / (2 pi i (w - z)),
/// z on the right contour, w on the left.
pub fn kernel_f(z: Complex64, w: Complex64, s: f64) -> Complex64 {
    ((phase_nu(w, s) - phase_nu(z, s)) / 2.0).exp() / (TWO_PI_I * (w - z))
}

/// Symmetrized kernel G(z, w) = e^{(nu(z)-nu(w))/2} / (2 pi i (w - z)),
/// z on the left contour, w on the right.
pub fn kernel_g(z: Complex64, w: Complex64, s: f64) -> Complex64 {
    ((phase_nu(z, s) - phase_nu(w, s)) / 2.0).exp() / (TWO_PI_I * (w - z))
}

fn contours(s: f64, cfg: &WidomConfig) -> Result<(Contour, Contour)> {
    let left = vertical_contour(Side::Left, cfg.eps, s, cfg.m, cfg.tail_tol)?;
    let right = vertical_contour(Side::Right, cfg.eps, s, cfg.m, cfg.tail_tol)?;
    Ok((left, right))
}

/// F matrix: rows on the right contour, columns on the left, raw dw
/// weights folded into the columns.
pub fn kernel_matrix_f(s: f64, kappa: f64, cfg: &WidomConfig) -> Result<KernelMatrix> {
    let (left, right) = contours(s, cfg)?;
    let m = cfg.m;
    let mut entries = CMat::zeros(m, m);
    for (j, &z) in right.nodes.iter().enumerate() {
        for (k, (&w, &mu)) in left.nodes.iter().zip(&left.weights).enumerate() {
            entries[(j, k)] = kernel_f(z, w, s) * mu;
        }
    }
    Ok(KernelMatrix {
        row_contour: right,
        col_contour: left,
        entries,
        kappa,
        s,
    })
}

/// G matrix: rows on the left contour, columns on the right.
pub fn kernel_matrix_g(s: f64, kappa: f64, cfg: &WidomConfig) -> Result<KernelMatrix> {
    let (left, right) = contours(s, cfg)?;
    let m = cfg.m;
    let mut entries = CMat::zeros(m, m);
    for (k, &z) in left.nodes.iter().enumerate() {
        for (j, (&w, &mu)) in right.nodes.iter().zip(&right.weights).enumerate() {
            entries[(k, j)] = kernel_g(z, w, s) * mu;
        }
    }
    Ok(KernelMatrix {
        row_contour: left,
        col_contour: right,
        entries,
        kappa,
        s,
    })
}

fn tau_value(s: f64, kappa: f64, cfg: &WidomConfig) -> Result<Complex64> {
    let f = kernel_matrix_f(s, kappa, cfg)?;
    let g = kernel_matrix_g(s, kappa, cfg)?;
    let prod = f.entries.matmul(&g.entries);
    let m = cfg.m;
    let mut mat = CMat::eye(m);
    let k2 = Complex64::new(kappa * kappa, 0.0);
    // the (1,2) block carries -kappa F, the (2,1) block +kappa G, so the
    // Schur complement is I + kappa^2 F G
    for i in 0..m {
        for j in 0..m {
            let v = prod[(i, j)];
            mat[(i, j)] += k2 * v;
        }
    }
    let (log_mag, phase) = logdet_complex(mat)?;
    Ok(phase * log_mag.exp())
}

/// Operator determinant on the contour pair; agrees with the Airy-kernel
/// determinant at the calibrated argument.
pub fn tau_widom(s: f64, kappa: f64, cfg: &WidomConfig) -> Result<TauResult> {
    if kappa.abs() > 1.0 {
        return Err(Error::Domain(format!(
            "tau_widom: |kappa| = {} > 1",
            kappa.abs()
        )));
    }
    if cfg.m < 8 {
        return Err(Error::Domain("tau_widom: quadrature order < 8".into()));
    }
    let v = tau_value(s, kappa, cfg)?;
    if !v.re.is_finite() || !v.im.is_finite() {
        return Err(Error::Numerical(format!(
            "tau_widom: non-finite determinant at s = {s}"
        )));
    }
    let error_estimate = if kappa == 0.0 {
        0.0
    } else {
        let half = WidomConfig {
            m: cfg.m / 2,
            ..*cfg
        };
        (v - tau_value(s, kappa, &half)?).norm()
    };
    let imag_residual = v.im.abs();
    if imag_residual > 1e-8 * v.re.abs().max(1.0) {
        return Err(Error::Numerical(format!(
            "tau_widom: imaginary residual {imag_residual:.3e} too large"
        )));
    }
    Ok(TauResult {
        value: v.re,
        imag_residual,
        method: Method::Widom,
        s,
        kappa,
        error_estimate,
        config: ConfigSnapshot {
            quad_order: cfg.m,
            truncation: 0.0,
            eps: cfg.eps,
            scale_c: SCALE_C_DEFAULT,
        },
        warning: None,
    })
}

/// Cross-check: the same determinant by the full 2x2 block matrix
/// [[I, -kappa F], [kappa G, I]] instead of the Schur reduction.
pub fn tau_widom_block(s: f64, kappa: f64, cfg: &WidomConfig) -> Result<f64> {
    let f = kernel_matrix_f(s, kappa, cfg)?;
    let g = kernel_matrix_g(s, kappa, cfg)?;
    let m = cfg.m;
    let mut big = CMat::eye(2 * m);
    for i in 0..m {
        for j in 0..m {
            big[(i, m + j)] = -kappa * f.entries[(i, j)];
            big[(m + i, j)] = kappa * g.entries[(i, j)];
        }
    }
    let (log_mag, phase) = logdet_complex(big)?;
    let v = phase * log_mag.exp();
    Ok(v.re)
}

/// Off-diagonal Cauchy transforms of the jump data:
/// theta2_12(z) = +kappa int_{left} e^{nu}/(w-z) dw/(2 pi i),
/// theta1_21(z) = -kappa int_{right} e^{-nu}/(w-z) dw/(2 pi i).
pub fn theta_offdiag(
    z: Complex64,
    s: f64,
    kappa: f64,
    cfg: &WidomConfig,
) -> Result<(Complex64, Complex64)> {
    if (z.re + cfg.eps).abs() < 1e-9 || (z.re - cfg.eps).abs() < 1e-9 {
        return Err(Error::Collision(format!(
            "theta_offdiag: Re z = {} collides with a contour at +-{}",
            z.re, cfg.eps
        )));
    }
    let (left, right) = contours(s, cfg)?;
    let mut t2 = Complex64::new(0.0, 0.0);
    for (&w, &mu) in left.nodes.iter().zip(&left.weights) {
        t2 += phase_nu(w, s).exp() / (w - z) * mu;
    }
    let mut t1 = Complex64::new(0.0, 0.0);
    for (&w, &mu) in right.nodes.iter().zip(&right.weights) {
        t1 += (-phase_nu(w, s)).exp() / (w - z) * mu;
    }
    Ok((-kappa * t1 / TWO_PI_I, kappa * t2 / TWO_PI_I))
}

/// Which kernel block a Hilbert-Schmidt norm refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Block {
    A12,
    B21,
}

/// Squared Hilbert-Schmidt norm of a kernel block: the double integral of
/// |kernel|^2 |dz| |dw| over its contour pair (kappa and 1/(2 pi) in the
/// kernel).
pub fn hs_norm_sq(which: Block, s: f64, kappa: f64, cfg: &WidomConfig) -> Result<f64> {
    let (left, right) = contours(s, cfg)?;
    let (zc, wc, sign) = match which {
        // a12 rows live on the right contour, integration over the left
        Block::A12 => (&right, &left, 1.0),
        Block::B21 => (&left, &right, -1.0),
    };
    // |dz| |dw| measure: the raw weights are i Y w_j, so |.| = Y w_j
    let mut total = 0.0;
    for (iz, &z) in zc.nodes.iter().enumerate() {
        let wz = zc.weights[iz].norm();
        let mut row = 0.0;
        for (iw, &w) in wc.nodes.iter().enumerate() {
            let k = kappa * (sign * phase_nu(w, s)).exp() / (TWO_PI_I * (w - z));
            row += k.norm_sqr() * wc.weights[iw].norm();
        }
        total += row * wz;
    }
    Ok(total)
}

/// Compare the double-integral form of the a12 action on a test function
/// in the left-analytic class with the collapsed single-contour form.
/// Returns the largest absolute deviation over the sample points.
///
/// Test function: f(w) = 1/(w-3)^4 (analytic left of Re w = 3, quartic
/// decay so the axis integral truncates cleanly).
pub fn verify_collapse(
    s: f64,
    kappa: f64,
    z_samples: &[Complex64],
    cfg: &WidomConfig,
) -> Result<f64> {
    let f = |w: Complex64| {
        let d = w - 3.0;
        let d2 = d * d;
        1.0 / (d2 * d2)
    };
    let left = vertical_contour(Side::Left, cfg.eps, s, cfg.m, cfg.tail_tol)?;

    // axis quadrature: composite Gauss-Legendre panels, denser near 0;
    // panel order follows the contour order so refinement reaches both
    let panel_edges = [0.0, 2.0, 5.0, 12.0, 30.0, 80.0];
    let rule = gauss_legendre(cfg.m.clamp(4, 60))?;
    let mut axis_nodes = Vec::new();
    let mut axis_weights = Vec::new();
    for pe in panel_edges.windows(2) {
        let (a, b) = (pe[0], pe[1]);
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            let y = a + (b - a) * (t + 1.0) / 2.0;
            let wy = (b - a) * w / 2.0;
            axis_nodes.push(y);
            axis_weights.push(wy);
            axis_nodes.push(-y);
            axis_weights.push(wy);
        }
    }

    let mut worst: f64 = 0.0;
    for &z in z_samples {
        if (z.re + cfg.eps).abs() < 1e-9 || z.re.abs() < 1e-9 {
            return Err(Error::Collision(format!(
                "verify_collapse: sample z = {z} on a contour"
            )));
        }
        // single-contour form: +kappa int_{left} e^{nu} f(w)/(w-z) dw/(2 pi i)
        let mut single = Complex64::new(0.0, 0.0);
        for (&w, &mu) in left.nodes.iter().zip(&left.weights) {
            single += phase_nu(w, s).exp() * f(w) / (w - z) * mu;
        }
        single = kappa * single / TWO_PI_I;

        // double form: -kappa int_axis dw int_left dl e^{nu(l)} f(w) /
        // ((l - z)(l - w)) /(2 pi i)^2
        let mut double = Complex64::new(0.0, 0.0);
        for (&y, &wy) in axis_nodes.iter().zip(&axis_weights) {
            let w = Complex64::new(0.0, y);
            let mut inner = Complex64::new(0.0, 0.0);
            for (&l, &mu) in left.nodes.iter().zip(&left.weights) {
                inner += phase_nu(l, s).exp() / ((l - z) * (l - w)) * mu;
            }
            // axis measure dw = i dy
            double += f(w) * inner * Complex64::new(0.0, wy);
        }
        double = -kappa * double / (TWO_PI_I * TWO_PI_I);

        worst = worst.max((single - double).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fredholm::{tau_airy, AiryFredholmConfig};

    #[test]
    fn kappa_zero_is_one() {
        let r = tau_widom(1.0, 0.0, &WidomConfig::default()).unwrap();
        assert_eq!(r.value, 1.0);
    }

    #[test]
    fn kernel_f_hand_value() {
        // s=0, z=0.5, w=-0.5: nu(-+0.5, 0) = +-1/6, so F = e^{1/6}/(-2 pi i)
        let f = kernel_f(Complex64::new(0.5, 0.0), Complex64::new(-0.5, 0.0), 0.0);
        let expect = Complex64::new((1.0f64 / 6.0).exp(), 0.0)
            / Complex64::new(0.0, -2.0 * std::f64::consts::PI);
        assert!((f - expect).norm() < 1e-15);
    }

    #[test]
    fn matches_airy_kernel_determinant() {
        let wc = WidomConfig::default();
        let ac = AiryFredholmConfig::default();
        for &(s, kappa) in &[(0.0, 0.5), (1.0, 0.25), (-2.0, 0.9)] {
            let tw = tau_widom(s, kappa, &wc).unwrap();
            let ta = tau_airy(SCALE_C_DEFAULT * s, kappa, &ac).unwrap();
            assert!(
                (tw.value - ta.value).abs() < 1e-9,
                "s={s} kappa={kappa}: {} vs {}",
                tw.value,
                ta.value
            );
            assert!(tw.imag_residual < 1e-10 * tw.value.abs().max(1.0));
        }
    }

    #[test]
    fn block_determinant_agrees_with_schur() {
        let cfg = WidomConfig {
            m: 80,
            ..Default::default()
        };
        let a = tau_widom(0.0, 0.5, &cfg).unwrap().value;
        let b = tau_widom_block(0.0, 0.5, &cfg).unwrap();
        assert!(((a - b) / a).abs() < 1e-12, "{a} vs {b}");
    }

    #[test]
    fn eps_independence() {
        let c3 = WidomConfig {
            eps: 0.3,
            ..Default::default()
        };
        let c7 = WidomConfig {
            eps: 0.7,
            ..Default::default()
        };
        let a = tau_widom(1.0, 0.5, &c3).unwrap().value;
        let b = tau_widom(1.0, 0.5, &c7).unwrap().value;
        assert!((a - b).abs() < 1e-8, "{a} vs {b}");
    }

    #[test]
    fn unsymmetrized_kernels_same_determinant() {
        // raw e^{nu(w)} / e^{-nu(z)} kernels differ from F/G by a diagonal
        // similarity, so the determinant is unchanged
        let cfg = WidomConfig {
            m: 120,
            ..Default::default()
        };
        let s = 0.5;
        let kappa = 0.6;
        let (left, right) = contours(s, &cfg).unwrap();
        let m = cfg.m;
        let mut araw = CMat::zeros(m, m);
        let mut braw = CMat::zeros(m, m);
        for (j, &z) in right.nodes.iter().enumerate() {
            for (k, (&w, &mu)) in left.nodes.iter().zip(&left.weights).enumerate() {
                araw[(j, k)] = phase_nu(w, s).exp() / (TWO_PI_I * (w - z)) * mu;
            }
        }
        for (k, &z) in left.nodes.iter().enumerate() {
            for (j, (&w, &mu)) in right.nodes.iter().zip(&right.weights).enumerate() {
                braw[(k, j)] = (-phase_nu(w, s)).exp() / (TWO_PI_I * (w - z)) * mu;
            }
        }
        let prod = araw.matmul(&braw);
        let mut mat = CMat::eye(m);
        for i in 0..m {
            for j in 0..m {
                mat[(i, j)] += kappa * kappa * prod[(i, j)];
            }
        }
        let (lm, ph) = logdet_complex(mat).unwrap();
        let unsym = (ph * lm.exp()).re;
        let sym = tau_widom(s, kappa, &cfg).unwrap().value;
        assert!((unsym - sym).abs() < 1e-10, "{unsym} vs {sym}");
    }

    #[test]
    fn theta_decay_and_analyticity() {
        let cfg = WidomConfig::default();
        let s = 1.0;
        let (t1a, t2a) = theta_offdiag(Complex64::new(100.0, 0.0), s, 0.5, &cfg).unwrap();
        let (t1b, t2b) = theta_offdiag(Complex64::new(200.0, 0.0), s, 0.5, &cfg).unwrap();
        // O(1/z) decay: doubling z halves the transform
        let r2 = (t2a / t2b).norm();
        let r1 = (t1a / t1b).norm();
        assert!((r2 - 2.0).abs() < 0.1, "ratio {r2}");
        assert!((r1 - 2.0).abs() < 0.1, "ratio {r1}");
        // kappa = 0 kills both entries
        let (z1, z2) = theta_offdiag(Complex64::new(0.1, 0.0), s, 0.0, &cfg).unwrap();
        assert_eq!(z1.norm(), 0.0);
        assert_eq!(z2.norm(), 0.0);
        // contour-shift independence: z = +0.1 probes the left contour
        // (theta2), z = -0.1 the right one (theta1), each well off both
        // contour positions
        let c3 = WidomConfig {
            eps: 0.3,
            ..Default::default()
        };
        let c7 = WidomConfig {
            eps: 0.7,
            ..Default::default()
        };
        let (_, u2) = theta_offdiag(Complex64::new(0.1, 0.0), s, 0.5, &c3).unwrap();
        let (_, v2) = theta_offdiag(Complex64::new(0.1, 0.0), s, 0.5, &c7).unwrap();
        assert!((u2 - v2).norm() < 1e-10);
        let (u1, _) = theta_offdiag(Complex64::new(-0.1, 0.0), s, 0.5, &c3).unwrap();
        let (v1, _) = theta_offdiag(Complex64::new(-0.1, 0.0), s, 0.5, &c7).unwrap();
        assert!((u1 - v1).norm() < 1e-10);
        // collision detection
        assert!(theta_offdiag(Complex64::new(0.5, 1.0), s, 0.5, &cfg).is_err());
    }

    #[test]
    fn hs_norms_finite_and_scaling() {
        let cfg = WidomConfig::default();
        let h1 = hs_norm_sq(Block::A12, 1.0, 1.0, &cfg).unwrap();
        let h05 = hs_norm_sq(Block::A12, 1.0, 0.5, &cfg).unwrap();
        assert!(h1.is_finite() && h1 > 0.0);
        assert!(
            (h1 / h05 - 4.0).abs() < 1e-12,
            "kappa^2 scaling: {}",
            h1 / h05
        );
        let z = hs_norm_sq(Block::B21, 1.0, 0.0, &cfg).unwrap();
        assert_eq!(z, 0.0);
        // refinement convergence
        let hi = WidomConfig {
            m: 400,
            ..Default::default()
        };
        let a = hs_norm_sq(Block::A12, 1.0, 0.5, &cfg).unwrap();
        let b = hs_norm_sq(Block::A12, 1.0, 0.5, &hi).unwrap();
        assert!(((a - b) / b).abs() < 1e-8, "{a} vs {b}");
    }

    #[test]
    fn collapse_identity() {
        let cfg = WidomConfig::default();
        let zs = [
            Complex64::new(2.0, 0.3),
            Complex64::new(1.5, -0.2),
            Complex64::new(0.8, 1.0),
        ];
        let r = verify_collapse(1.0, 0.5, &zs, &cfg).unwrap();
        assert!(r < 1e-8, "collapse residual {r}");
        let r0 = verify_collapse(1.0, 0.0, &zs, &cfg).unwrap();
        assert_eq!(r0, 0.0);
        // residual decreases as the contour refines (m = 8 is well before
        // the Gaussian integrand saturates the axis-truncation floor)
        let coarse = WidomConfig {
            m: 8,
            ..Default::default()
        };
        let rc = verify_collapse(1.0, 0.5, &zs, &coarse).unwrap();
        assert!(rc > 100.0 * r, "coarse {rc} vs fine {r}");
    }
}
