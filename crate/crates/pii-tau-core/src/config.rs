//! Run configuration, its flat key=value file format, and the pipeline
//! dispatch used by the CLI and the consistency checks.

use crate::error::{Error, Result};
use crate::fredholm::{tau_airy, AiryFredholmConfig, Method, TauResult};
use crate::minor::{tau_minor, MinorConfig};
use crate::phase::SCALE_C_DEFAULT;
use crate::widom::{tau_widom, WidomConfig};
use std::path::Path;

/// Every knob a run depends on; round-trips bit-exactly through the
/// key=value format (floats printed with 17 significant digits).
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub method: Method,
    pub s: f64,
    pub kappa: f64,
    pub quad_order: usize,
    pub eps: f64,
    pub truncation: f64,
    pub max_weight: usize,
    pub n_cut: usize,
    pub fd_step: f64,
    pub calibration_c: f64,
    pub json: bool,
    pub out: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            method: Method::Airy,
            s: 0.0,
            kappa: 0.5,
            quad_order: 200,
            eps: 0.5,
            truncation: 16.0,
            max_weight: 8,
            n_cut: 10,
            fd_step: 1e-2,
            calibration_c: SCALE_C_DEFAULT,
            json: false,
            out: String::new(),
        }
    }
}

fn fmt_f(x: f64) -> String {
    format!("{x:.17e}")
}

impl RunConfig {
    /// Flat key=value text, one key per line, keys sorted.
    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!("calibration_c={}\n", fmt_f(self.calibration_c)));
        s.push_str(&format!("eps={}\n", fmt_f(self.eps)));
        s.push_str(&format!("fd_step={}\n", fmt_f(self.fd_step)));
        s.push_str(&format!("json={}\n", self.json));
        s.push_str(&format!("kappa={}\n", fmt_f(self.kappa)));
        s.push_str(&format!("max_weight={}\n", self.max_weight));
        s.push_str(&format!("method={}\n", self.method.name()));
        s.push_str(&format!("n_cut={}\n", self.n_cut));
        s.push_str(&format!("out={}\n", self.out));
        s.push_str(&format!("quad_order={}\n", self.quad_order));
        s.push_str(&format!("s={}\n", fmt_f(self.s)));
        s.push_str(&format!("truncation={}\n", fmt_f(self.truncation)));
        s
    }

    pub fn from_kv(text: &str) -> Result<RunConfig> {
        let mut cfg = RunConfig::default();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Domain(format!("config line {}: missing '='", lineno + 1)))?;
            let parse_f = |v: &str| -> Result<f64> {
                v.parse()
                    .map_err(|_| Error::Domain(format!("config: bad float '{v}'")))
            };
            let parse_u = |v: &str| -> Result<usize> {
                v.parse()
                    .map_err(|_| Error::Domain(format!("config: bad integer '{v}'")))
            };
            match key {
                "calibration_c" => cfg.calibration_c = parse_f(value)?,
                "eps" => cfg.eps = parse_f(value)?,
                "fd_step" => cfg.fd_step = parse_f(value)?,
                "json" => cfg.json = value == "true",
                "kappa" => cfg.kappa = parse_f(value)?,
                "max_weight" => cfg.max_weight = parse_u(value)?,
                "method" => cfg.method = value.parse()?,
                "n_cut" => cfg.n_cut = parse_u(value)?,
                "out" => cfg.out = value.to_string(),
                "quad_order" => cfg.quad_order = parse_u(value)?,
                "s" => cfg.s = parse_f(value)?,
                "truncation" => cfg.truncation = parse_f(value)?,
                other => return Err(Error::Domain(format!("config: unknown key '{other}'"))),
            }
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<RunConfig> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Domain(format!("config: cannot read {path:?}: {e}")))?;
        Self::from_kv(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_kv())
            .map_err(|e| Error::Numerical(format!("config: cannot write {path:?}: {e}")))
    }

    pub fn airy_cfg(&self) -> AiryFredholmConfig {
        AiryFredholmConfig {
            m: self.quad_order,
            truncation: self.truncation,
        }
    }

    pub fn widom_cfg(&self) -> WidomConfig {
        WidomConfig {
            m: self.quad_order,
            eps: self.eps,
            tail_tol: 1e-16,
        }
    }

    pub fn minor_cfg(&self) -> MinorConfig {
        MinorConfig {
            n_cut: self.n_cut,
            max_weight: self.max_weight,
            // coefficient quadrature needs headroom for high moment orders
            quad_m: self.quad_order.max(400),
            eps: self.eps,
            tail_tol: 1e-16,
            gram_order: 400,
        }
    }

    pub fn pipelines(&self) -> Pipelines {
        Pipelines {
            airy: self.airy_cfg(),
            widom: self.widom_cfg(),
            minor: self.minor_cfg(),
            scale_c: self.calibration_c,
        }
    }
}

/// Dispatch into the three tau pipelines under one set of configs.
#[derive(Clone, Debug)]
pub struct Pipelines {
    pub airy: AiryFredholmConfig,
    pub widom: WidomConfig,
    pub minor: MinorConfig,
    pub scale_c: f64,
}

impl Default for Pipelines {
    fn default() -> Self {
        RunConfig::default().pipelines()
    }
}

impl Pipelines {
    pub fn tau(&self, method: Method, s: f64, kappa: f64) -> Result<TauResult> {
        match method {
            Method::Airy => tau_airy(s, kappa, &self.airy),
            Method::Widom => tau_widom(s, kappa, &self.widom),
            Method::Minor => tau_minor(
                s,
                kappa,
                self.minor.max_weight,
                self.minor.n_cut,
                &self.minor,
            ),
        }
    }

    /// tau as a function of the Airy-frame coordinate x: the contour
    /// pipelines are evaluated at x / scale_c so that all three agree.
    pub fn tau_airy_frame(&self, method: Method, x: f64, kappa: f64) -> Result<f64> {
        match method {
            Method::Airy => Ok(tau_airy(x, kappa, &self.airy)?.value),
            _ => Ok(self.tau(method, x / self.scale_c, kappa)?.value),
        }
    }

    /// Frame-mapped evaluation for the CLI: all methods share the Airy
    /// s-axis, so scans of different methods agree column-wise. The
    /// reported `s` is the frame coordinate.
    pub fn tau_frame(&self, method: Method, x: f64, kappa: f64) -> Result<TauResult> {
        let mut r = match method {
            Method::Airy => self.tau(method, x, kappa)?,
            _ => self.tau(method, x / self.scale_c, kappa)?,
        };
        r.s = x;
        Ok(r)
    }

    /// Richardson-extrapolated (log tau)'' in the method's own frame.
    pub fn log_tau_dds2(&self, s: f64, kappa: f64, h: f64, method: Method) -> Result<f64> {
        if kappa == 0.0 {
            return Ok(0.0);
        }
        crate::fredholm::log_second_derivative(|x| Ok(self.tau(method, x, kappa)?.value), s, h)
    }

    /// Same, but with respect to the Airy-frame coordinate.
    pub fn log_tau_dds2_airy_frame(
        &self,
        x: f64,
        kappa: f64,
        h: f64,
        method: Method,
    ) -> Result<f64> {
        if kappa == 0.0 {
            return Ok(0.0);
        }
        crate::fredholm::log_second_derivative(|y| self.tau_airy_frame(method, y, kappa), x, h)
    }
}

/// u^2 = -(log tau)'' consistency residual at one point, with u from the
/// ODE oracle and tau from the requested (calibrated) pipeline.
pub fn verify_u_squared(s: f64, kappa: f64, method: Method, pipes: &Pipelines) -> Result<f64> {
    if kappa == 0.0 {
        return Ok(0.0);
    }
    let s_end = (s - 2.5).clamp(-6.0, -1.0);
    let sol = crate::pii_ode::solve_pii(kappa, 8.0, s_end, 1e-10)?;
    let (u, _) = sol.value_at(s)?;
    let dd = pipes.log_tau_dds2_airy_frame(s, kappa, 1e-2, method)?;
    Ok((u * u + dd).abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kv_round_trip_is_bit_exact() {
        let cfg = RunConfig {
            s: -1.2345678901234567e-3,
            kappa: 0.1 + 0.2, // not exactly 0.3
            method: Method::Widom,
            out: "scan.csv".into(),
            ..Default::default()
        };
        let text = cfg.to_kv();
        let back = RunConfig::from_kv(&text).unwrap();
        assert_eq!(cfg, back);
        assert_eq!(text, back.to_kv());
    }

    #[test]
    fn unknown_key_rejected() {
        assert!(RunConfig::from_kv("bogus=1\n").is_err());
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let cfg = RunConfig::from_kv("# comment\n\nkappa=2.50000000000000000e-1\n").unwrap();
        assert_eq!(cfg.kappa, 0.25);
    }

    #[test]
    fn u_squared_consistency_spot_check() {
        let pipes = Pipelines::default();
        let r = verify_u_squared(1.0, 0.5, Method::Airy, &pipes).unwrap();
        assert!(r < 1e-4, "residual {r:e}");
        let r0 = verify_u_squared(1.0, 0.0, Method::Airy, &pipes).unwrap();
        assert_eq!(r0, 0.0);
    }
}

#[cfg(test)]
mod more_tests {
    use super::*;

    #[test]
    fn file_round_trip() {
        let dir = std::env::temp_dir().join("pii_tau_cfg_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("cfg.conf");
        let cfg = RunConfig {
            kappa: 0.9,
            calibration_c: 0.6299605249474366,
            ..Default::default()
        };
        cfg.save(&path).unwrap();
        let back = RunConfig::load(&path).unwrap();
        assert_eq!(cfg, back);
    }

    #[test]
    fn u_squared_holds_for_contour_pipelines_too() {
        let pipes = Pipelines::default();
        for method in [Method::Widom, Method::Minor] {
            let r = verify_u_squared(1.0, 0.5, method, &pipes).unwrap();
            assert!(r < 1e-4, "{}: residual {r:e}", method.name());
        }
    }

    #[test]
    fn minor_kappa_sign_symmetry() {
        let pipes = Pipelines::default();
        let a = pipes.tau(Method::Minor, 1.0, 0.25).unwrap().value;
        let b = pipes.tau(Method::Minor, 1.0, -0.25).unwrap().value;
        assert_eq!(a, b);
    }
}
