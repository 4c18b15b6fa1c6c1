//! Painleve II oracle: u'' = s u + 2 u^3 integrated backward from Airy
//! asymptotics with an adaptive embedded Runge-Kutta pair (Dormand-Prince
//! 5(4)), dense output on a uniform grid.

use crate::airy::airy_ai;
use crate::error::{Error, Result};

/// Solution sampled on a decreasing uniform grid.
#[derive(Clone, Debug)]
pub struct ODESolution {
    pub s_grid: Vec<f64>,
    pub u: Vec<f64>,
    pub u_prime: Vec<f64>,
    pub kappa: f64,
}

const BLOWUP: f64 = 1e6;

#[derive(Clone, Copy)]
struct State {
    u: f64,
    v: f64,
}

#[inline]
fn rhs(s: f64, y: State) -> State {
    State {
        u: y.v,
        v: s * y.u + 2.0 * y.u * y.u * y.u,
    }
}

/// One Dormand-Prince 5(4) step of size h (h < 0 here); returns the 5th
/// order solution and the embedded error estimate.
fn dopri_step(s: f64, y: State, h: f64) -> (State, f64) {
    const A21: f64 = 1.0 / 5.0;
    const A31: f64 = 3.0 / 40.0;
    const A32: f64 = 9.0 / 40.0;
    const A41: f64 = 44.0 / 45.0;
    const A42: f64 = -56.0 / 15.0;
    const A43: f64 = 32.0 / 9.0;
    const A51: f64 = 19372.0 / 6561.0;
    const A52: f64 = -25360.0 / 2187.0;
    const A53: f64 = 64448.0 / 6561.0;
    const A54: f64 = -212.0 / 729.0;
    const A61: f64 = 9017.0 / 3168.0;
    const A62: f64 = -355.0 / 33.0;
    const A63: f64 = 46732.0 / 5247.0;
    const A64: f64 = 49.0 / 176.0;
    const A65: f64 = -5103.0 / 18656.0;
    const B1: f64 = 35.0 / 384.0;
    const B3: f64 = 500.0 / 1113.0;
    const B4: f64 = 125.0 / 192.0;
    const B5: f64 = -2187.0 / 6784.0;
    const B6: f64 = 11.0 / 84.0;
    const E1: f64 = 35.0 / 384.0 - 5179.0 / 57600.0;
    const E3: f64 = 500.0 / 1113.0 - 7571.0 / 16695.0;
    const E4: f64 = 125.0 / 192.0 - 393.0 / 640.0;
    const E5: f64 = -2187.0 / 6784.0 + 92097.0 / 339200.0;
    const E6: f64 = 11.0 / 84.0 - 187.0 / 2100.0;
    const E7: f64 = -1.0 / 40.0;

    let add = |y: State, scale: f64, k: State| State {
        u: y.u + scale * k.u,
        v: y.v + scale * k.v,
    };

    let k1 = rhs(s, y);
    let mut t = add(y, h * A21, k1);
    let k2 = rhs(s + h / 5.0, t);
    t = State {
        u: y.u + h * (A31 * k1.u + A32 * k2.u),
        v: y.v + h * (A31 * k1.v + A32 * k2.v),
    };
    let k3 = rhs(s + 3.0 * h / 10.0, t);
    t = State {
        u: y.u + h * (A41 * k1.u + A42 * k2.u + A43 * k3.u),
        v: y.v + h * (A41 * k1.v + A42 * k2.v + A43 * k3.v),
    };
    let k4 = rhs(s + 4.0 * h / 5.0, t);
    t = State {
        u: y.u + h * (A51 * k1.u + A52 * k2.u + A53 * k3.u + A54 * k4.u),
        v: y.v + h * (A51 * k1.v + A52 * k2.v + A53 * k3.v + A54 * k4.v),
    };
    let k5 = rhs(s + 8.0 * h / 9.0, t);
    t = State {
        u: y.u + h * (A61 * k1.u + A62 * k2.u + A63 * k3.u + A64 * k4.u + A65 * k5.u),
        v: y.v + h * (A61 * k1.v + A62 * k2.v + A63 * k3.v + A64 * k4.v + A65 * k5.v),
    };
    let k6 = rhs(s + h, t);
    let y5 = State {
        u: y.u + h * (B1 * k1.u + B3 * k3.u + B4 * k4.u + B5 * k5.u + B6 * k6.u),
        v: y.v + h * (B1 * k1.v + B3 * k3.v + B4 * k4.v + B5 * k5.v + B6 * k6.v),
    };
    let k7 = rhs(s + h, y5);
    let eu = h * (E1 * k1.u + E3 * k3.u + E4 * k4.u + E5 * k5.u + E6 * k6.u + E7 * k7.u);
    let ev = h * (E1 * k1.v + E3 * k3.v + E4 * k4.v + E5 * k5.v + E6 * k6.v + E7 * k7.v);
    (y5, (eu * eu + ev * ev).sqrt())
}

/// Integrate backward from s_start (anchor u = kappa Ai, u' = kappa Ai')
/// to s_end; local error per step <= tol; grid step <= 0.01.
pub fn solve_pii(kappa: f64, s_start: f64, s_end: f64, tol: f64) -> Result<ODESolution> {
    if kappa.abs() >= 1.0 {
        return Err(Error::Domain(format!(
            "solve_pii: |kappa| = {} must be < 1 (pole-free regime)",
            kappa.abs()
        )));
    }
    if s_start < 6.0 {
        return Err(Error::Domain(format!(
            "solve_pii: s_start = {s_start} must be >= 6"
        )));
    }
    if s_end >= s_start || s_end < -6.0 {
        return Err(Error::Domain(format!(
            "solve_pii: s_end = {s_end} must lie in [-6, s_start)"
        )));
    }
    #[allow(clippy::neg_cmp_op_on_partial_ord)] // rejects NaN tolerances
    if !(tol > 0.0 && tol <= 1e-2) {
        return Err(Error::Domain(format!(
            "solve_pii: tol = {tol} not in (0, 1e-2]"
        )));
    }
    let anchor = airy_ai(s_start)?;
    let n = ((s_start - s_end) / 0.01).ceil() as usize;
    let dt = (s_start - s_end) / n as f64;

    let mut s_grid = Vec::with_capacity(n + 1);
    let mut us = Vec::with_capacity(n + 1);
    let mut vs = Vec::with_capacity(n + 1);
    let mut y = State {
        u: kappa * anchor.ai,
        v: kappa * anchor.ai_prime,
    };
    let mut s = s_start;
    s_grid.push(s);
    us.push(y.u);
    vs.push(y.v);

    let mut h = -dt.min(1e-3);
    for j in 1..=n {
        let target = s_start - j as f64 * dt;
        while s > target + 1e-13 {
            if s + h < target {
                h = target - s;
            }
            let (y_new, err) = dopri_step(s, y, h);
            let scale = tol * (1.0 + y.u.abs().max(y.v.abs()));
            if err <= scale {
                s += h;
                y = y_new;
                if y.u.abs() > BLOWUP {
                    return Err(Error::Numerical(format!(
                        "solve_pii: blow-up (|u| > {BLOWUP:e}) near s = {s}, pole encountered"
                    )));
                }
                let grow = 0.9 * (scale / err.max(1e-300)).powf(0.2);
                h *= grow.min(5.0);
            } else {
                h *= (0.9 * (scale / err).powf(0.2)).max(0.2);
            }
            if h.abs() < 1e-14 {
                return Err(Error::NonConvergence(
                    "solve_pii: step size underflow".into(),
                ));
            }
        }
        s = target;
        s_grid.push(s);
        us.push(y.u);
        vs.push(y.v);
    }
    Ok(ODESolution {
        s_grid,
        u: us,
        u_prime: vs,
        kappa,
    })
}

impl ODESolution {
    /// Cubic Hermite interpolation between stored grid points.
    pub fn value_at(&self, s: f64) -> Result<(f64, f64)> {
        let (first, last) = (self.s_grid[0], *self.s_grid.last().unwrap());
        if s > first + 1e-12 || s < last - 1e-12 {
            return Err(Error::Domain(format!(
                "ODESolution: s = {s} outside [{last}, {first}]"
            )));
        }
        // grid is decreasing and uniform
        let dt = first - self.s_grid[1];
        let pos = ((first - s) / dt).floor() as usize;
        let i = pos.min(self.s_grid.len() - 2);
        let (s0, s1) = (self.s_grid[i], self.s_grid[i + 1]);
        let hstep = s1 - s0;
        let t = (s - s0) / hstep;
        let (u0, u1) = (self.u[i], self.u[i + 1]);
        let (d0, d1) = (self.u_prime[i] * hstep, self.u_prime[i + 1] * hstep);
        let t2 = t * t;
        let t3 = t2 * t;
        let u = (2.0 * t3 - 3.0 * t2 + 1.0) * u0
            + (t3 - 2.0 * t2 + t) * d0
            + (-2.0 * t3 + 3.0 * t2) * u1
            + (t3 - t2) * d1;
        let du = ((6.0 * t2 - 6.0 * t) * u0
            + (3.0 * t2 - 4.0 * t + 1.0) * d0
            + (-6.0 * t2 + 6.0 * t) * u1
            + (3.0 * t2 - 2.0 * t) * d1)
            / hstep;
        Ok((u, du))
    }

    /// Largest |u'' - s u - 2 u^3| over interior grid points, with u''
    /// from a fourth-order five-point stencil.
    pub fn max_ode_residual(&self) -> f64 {
        let n = self.s_grid.len();
        if n < 5 {
            return 0.0;
        }
        let h = self.s_grid[0] - self.s_grid[1];
        let mut worst: f64 = 0.0;
        for i in 2..n - 2 {
            let upp = (-self.u[i - 2] + 16.0 * self.u[i - 1] - 30.0 * self.u[i]
                + 16.0 * self.u[i + 1]
                - self.u[i + 2])
                / (12.0 * h * h);
            let s = self.s_grid[i];
            let r = upp - s * self.u[i] - 2.0 * self.u[i].powi(3);
            worst = worst.max(r.abs());
        }
        worst
    }
}
