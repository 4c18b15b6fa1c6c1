//! Gauss-Legendre rules, truncated shifted-vertical contours, and
//! half-line grids. Every integral in the crate flows through here.

use crate::error::{Error, Result};
use crate::phase::re_nu_on_vertical;
use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::Mutex;

/// Gauss-Legendre rule on (-1, 1).
#[derive(Clone, Debug)]
pub struct QuadratureRule {
    pub order: usize,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Which side of the imaginary axis a vertical contour sits on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// Re w = -eps; e^{+nu} decays here.
    Left,
    /// Re w = +eps; e^{-nu} decays here.
    Right,
}

/// Truncated vertical contour Re w = -eps or +eps, oriented upward.
/// Weights are raw dw; 1/(2 pi i) is folded in by `contour_integral` only.
#[derive(Clone, Debug)]
pub struct Contour {
    pub side: Side,
    pub eps: f64,
    pub half_length: f64,
    pub nodes: Vec<Complex64>,
    pub weights: Vec<Complex64>,
}

/// Gauss-Legendre discretization of [s, s+T].
#[derive(Clone, Debug)]
pub struct HalfLineGrid {
    pub start: f64,
    pub truncation: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn legendre_pd(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((2.0 * kf + 1.0) * x * p1 - kf * p0) / (kf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn gauss_legendre_uncached(m: usize) -> Result<QuadratureRule> {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        // Chebyshev-like initial guess for the i-th root from the top
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut converged = false;
        for _ in 0..100 {
            let (p, dp) = legendre_pd(m, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence(format!(
                "gauss_legendre({m}): Newton failed for root {i}"
            )));
        }
        let (_, dp) = legendre_pd(m, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // enforce exact symmetry about 0
        nodes[m - 1 - i] = x.abs();
        nodes[i] = -x.abs();
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    if m % 2 == 1 {
        nodes[m / 2] = 0.0;
    }
    Ok(QuadratureRule {
        order: m,
        nodes,
        weights,
    })
}

/// Nodes and weights of the order-m Gauss-Legendre rule, by Newton
/// iteration from Chebyshev initial guesses. Results are cached.
pub fn gauss_legendre(m: usize) -> Result<QuadratureRule> {
    if m == 0 || m > 2000 {
        return Err(Error::Domain(format!(
            "gauss_legendre: order {m} not in 1..=2000"
        )));
    }
    static CACHE: Mutex<Option<HashMap<usize, QuadratureRule>>> = Mutex::new(None);
    let mut guard = CACHE.lock().unwrap();
    let map = guard.get_or_insert_with(HashMap::new);
    if let Some(r) = map.get(&m) {
        return Ok(r.clone());
    }
    let r = gauss_legendre_uncached(m)?;
    map.insert(m, r.clone());
    Ok(r)
}

/// Half-length Y such that the Gaussian envelope
/// exp((4/3) eps^3 + |s| eps - 4 eps Y^2) falls below `tail_tol`.
pub fn contour_half_length(eps: f64, s: f64, tail_tol: f64) -> f64 {
    ((4.0 / 3.0 * eps.powi(3) + s.abs() * eps - tail_tol.ln()) / (4.0 * eps)).sqrt()
}

/// Build a truncated vertical contour for the phase at the given `s`.
#[allow(clippy::neg_cmp_op_on_partial_ord)] // written to reject NaN too
pub fn vertical_contour(side: Side, eps: f64, s: f64, m: usize, tail_tol: f64) -> Result<Contour> {
    if !(eps > 0.0) || (eps - 1.0).abs() < 1e-12 {
        return Err(Error::Domain(format!(
            "vertical_contour: eps = {eps} must be positive and != 1 (pole at w = -1)"
        )));
    }
    if !(tail_tol > 0.0 && tail_tol <= 1e-6) {
        return Err(Error::Domain(format!(
            "vertical_contour: tail_tol = {tail_tol} not in (0, 1e-6]"
        )));
    }
    let rule = gauss_legendre(m)?;
    let y = contour_half_length(eps, s, tail_tol);
    let x = match side {
        Side::Left => -eps,
        Side::Right => eps,
    };
    let nodes: Vec<Complex64> = rule
        .nodes
        .iter()
        .map(|&t| Complex64::new(x, y * t))
        .collect();
    let weights: Vec<Complex64> = rule
        .weights
        .iter()
        .map(|&w| Complex64::new(0.0, y * w))
        .collect();
    let c = Contour {
        side,
        eps,
        half_length: y,
        nodes,
        weights,
    };
    // tail bound with the actual s (construction uses |s|, so this holds)
    let decaying_side_re = match side {
        Side::Left => re_nu_on_vertical(-eps, y, s),
        Side::Right => -re_nu_on_vertical(eps, y, s),
    };
    if decaying_side_re.exp() > tail_tol * 10.0 {
        return Err(Error::NonConvergence(format!(
            "vertical_contour: endpoint envelope {:.3e} exceeds tail_tol {tail_tol:.3e}",
            decaying_side_re.exp()
        )));
    }
    Ok(c)
}

/// Affine image of the Gauss-Legendre rule on [s, s+T].
#[allow(clippy::neg_cmp_op_on_partial_ord)] // written to reject NaN too
pub fn halfline_grid(s: f64, t: f64, m: usize) -> Result<HalfLineGrid> {
    if !(t > 0.0) {
        return Err(Error::Domain(format!(
            "halfline_grid: T = {t} must be positive"
        )));
    }
    if m < 1 {
        return Err(Error::Domain("halfline_grid: m must be >= 1".into()));
    }
    let rule = gauss_legendre(m)?;
    let nodes = rule
        .nodes
        .iter()
        .map(|&x| s + t * (x + 1.0) / 2.0)
        .collect();
    let weights = rule.weights.iter().map(|&w| t * w / 2.0).collect();
    Ok(HalfLineGrid {
        start: s,
        truncation: t,
        nodes,
        weights,
    })
}

/// Sum f(node) * weight / (2 pi i). The only place 1/(2 pi i) enters.
pub fn contour_integral<F>(f: F, c: &Contour) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    let mut acc = Complex64::new(0.0, 0.0);
    for (&z, &w) in c.nodes.iter().zip(&c.weights) {
        let v = f(z);
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::Numerical(format!(
                "contour_integral: integrand non-finite at {z}"
            )));
        }
        acc += v * w;
    }
    Ok(acc / Complex64::new(0.0, 2.0 * std::f64::consts::PI))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::phase_nu;

    #[test]
    fn tiny_orders_are_analytic() {
        let r1 = gauss_legendre(1).unwrap();
        assert_eq!(r1.nodes, vec![0.0]);
        assert!((r1.weights[0] - 2.0).abs() < 1e-15);
        let r2 = gauss_legendre(2).unwrap();
        let x = 1.0 / 3f64.sqrt();
        assert!((r2.nodes[0] + x).abs() < 1e-15 && (r2.nodes[1] - x).abs() < 1e-15);
        assert!((r2.weights[0] - 1.0).abs() < 1e-15 && (r2.weights[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rule_invariants() {
        for &m in &[16usize, 37, 200, 501] {
            let r = gauss_legendre(m).unwrap();
            let sum: f64 = r.weights.iter().sum();
            assert!((sum - 2.0).abs() < 1e-14, "m={m}: weight sum {sum}");
            for w in &r.weights {
                assert!(*w > 0.0);
            }
            for pair in r.nodes.windows(2) {
                assert!(pair[0] < pair[1]);
            }
            for i in 0..m {
                assert!((r.nodes[i] + r.nodes[m - 1 - i]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn exactness_on_monomials() {
        // m = 16 integrates t^30 over (-1,1) exactly: 2/31
        let r = gauss_legendre(16).unwrap();
        let got: f64 = r
            .nodes
            .iter()
            .zip(&r.weights)
            .map(|(&x, &w)| w * x.powi(30))
            .sum();
        assert!((got - 2.0 / 31.0).abs() < 1e-13);
        // odd powers vanish by symmetry
        let odd: f64 = r
            .nodes
            .iter()
            .zip(&r.weights)
            .map(|(&x, &w)| w * x.powi(7))
            .sum();
        assert!(odd.abs() < 1e-15);
    }

    #[test]
    fn contour_construction() {
        let c = vertical_contour(Side::Left, 0.5, 0.0, 64, 1e-18).unwrap();
        // Y from the envelope: sqrt(((4/3)*0.125 - ln 1e-18)/2)
        let y = ((4.0 / 3.0 * 0.125 + 18.0 * 10f64.ln()) / 2.0).sqrt();
        assert!((c.half_length - y).abs() < 1e-12);
        for z in &c.nodes {
            assert!((z.re + 0.5).abs() < 1e-15);
        }
        let im: Vec<f64> = c.nodes.iter().map(|z| z.im).collect();
        for p in im.windows(2) {
            assert!(p[0] < p[1], "orientation must be upward");
        }
        assert!(vertical_contour(Side::Left, 1.0, 0.0, 16, 1e-12).is_err());
        assert!(vertical_contour(Side::Left, -0.3, 0.0, 16, 1e-12).is_err());
    }

    #[test]
    fn halfline_invariants() {
        let g = halfline_grid(0.0, 2.0, 1).unwrap();
        assert!((g.nodes[0] - 1.0).abs() < 1e-15 && (g.weights[0] - 2.0).abs() < 1e-15);
        let g8 = halfline_grid(0.0, 2.0, 8).unwrap();
        let sum: f64 = g8.weights.iter().sum();
        assert!((sum - 2.0).abs() < 1e-13);
        // exactness: int_0^2 x dx = 2
        let got: f64 = g8.nodes.iter().zip(&g8.weights).map(|(&x, &w)| w * x).sum();
        assert!((got - 2.0).abs() < 1e-13);
    }

    #[test]
    fn contour_integral_basics() {
        let c = vertical_contour(Side::Left, 0.5, 0.0, 200, 1e-16).unwrap();
        let zero = contour_integral(|_| Complex64::new(0.0, 0.0), &c).unwrap();
        assert_eq!(zero.norm(), 0.0);
        // self-convergence of the 1/(w+1) integrand under m-doubling
        let c2 = vertical_contour(Side::Left, 0.5, 0.0, 400, 1e-16).unwrap();
        let f = |w: Complex64| (phase_nu(w, 0.0)).exp() / (w + 1.0);
        let v1 = contour_integral(f, &c).unwrap();
        let v2 = contour_integral(f, &c2).unwrap();
        assert!((v1 - v2).norm() < 1e-12);
    }
}
