//! Command-line frontend: tau evaluation, grid scans, the Painleve II
//! oracle, coefficient tables, Maya diagrams, calibration, and the
//! acceptance self-test.
//!
//! Exit codes: 0 success, 1 self-test failure, 2 argument error,
//! 3 numerical failure.

use clap::{Args, Parser, Subcommand};
use pii_tau_core::calibrate::{calibrate, PROBE_GRID};
use pii_tau_core::coeffs::{coeff_alpha, eval_coefficient, Prefactor};
use pii_tau_core::config::RunConfig;
use pii_tau_core::error::Error;
use pii_tau_core::fredholm::TauResult;
use pii_tau_core::maya::{enumerate_maya, HalfInt};
use pii_tau_core::pii_ode::solve_pii;
use pii_tau_core::seeds::SeedConfig;
use pii_tau_core::selftest::run_selftest;
use pii_tau_core::symfn::Algebra;
use rayon::prelude::*;
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "pii-tau",
    version,
    about = "Ablowitz-Segur Painleve II tau function, three ways"
)]
struct Cli {
    /// Config file holding defaults and the persisted calibration
    #[arg(long, global = true, default_value = "pii-tau.conf")]
    config: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct NumericArgs {
    /// Evaluation point
    #[arg(long, allow_hyphen_values = true)]
    s: Option<f64>,
    /// Ablowitz-Segur parameter, |kappa| <= 1
    #[arg(long, allow_hyphen_values = true)]
    kappa: Option<f64>,
    /// Quadrature order (contours and half-line grids)
    #[arg(long)]
    quad_order: Option<usize>,
    /// Contour shift
    #[arg(long)]
    eps: Option<f64>,
    /// Half-line truncation T
    #[arg(long)]
    truncation: Option<f64>,
    /// Minor-expansion weight cutoff (2 max particles+holes)
    #[arg(long)]
    max_weight: Option<usize>,
    /// Coefficient table size
    #[arg(long)]
    n_cut: Option<usize>,
    /// Finite-difference step for log-derivatives
    #[arg(long)]
    fd_step: Option<f64>,
    /// Emit JSON instead of plain text
    #[arg(long)]
    json: bool,
    /// Output file (scans)
    #[arg(long)]
    out: Option<String>,
}

impl NumericArgs {
    fn apply(&self, cfg: &mut RunConfig) {
        if let Some(v) = self.s {
            cfg.s = v;
        }
        if let Some(v) = self.kappa {
            cfg.kappa = v;
        }
        if let Some(v) = self.quad_order {
            cfg.quad_order = v;
        }
        if let Some(v) = self.eps {
            cfg.eps = v;
        }
        if let Some(v) = self.truncation {
            cfg.truncation = v;
        }
        if let Some(v) = self.max_weight {
            cfg.max_weight = v;
        }
        if let Some(v) = self.n_cut {
            cfg.n_cut = v;
        }
        if let Some(v) = self.fd_step {
            cfg.fd_step = v;
        }
        if self.json {
            cfg.json = true;
        }
        if let Some(v) = &self.out {
            cfg.out = v.clone();
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate tau(s, kappa) with one pipeline
    Tau {
        /// airy | widom | minor
        #[arg(long)]
        method: String,
        #[command(flatten)]
        num: NumericArgs,
    },
    /// Scan tau over an s-grid, CSV output
    Scan {
        #[arg(long)]
        method: String,
        #[arg(long, allow_hyphen_values = true)]
        s_min: f64,
        #[arg(long, allow_hyphen_values = true)]
        s_max: f64,
        #[arg(long)]
        step: f64,
        #[command(flatten)]
        num: NumericArgs,
    },
    /// Integrate Painleve II and print u(s), u'(s)
    U {
        #[command(flatten)]
        num: NumericArgs,
        /// Local error tolerance per step
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        /// Also report |u^2 + (log tau)''| using --fd-step differences
        #[arg(long)]
        check_tau: bool,
    },
    /// Print minor-expansion coefficients alpha_m^n at (s, kappa)
    Coeffs {
        #[command(flatten)]
        num: NumericArgs,
        /// Also print the exact symbolic form of each coefficient
        #[arg(long)]
        symbolic: bool,
    },
    /// Enumerate Maya diagrams and their Young diagrams
    Maya {
        /// Largest particle/hole count
        #[arg(long, default_value_t = 2)]
        max_k: usize,
        /// Largest |position| as a decimal half-integer, e.g. 2.5
        #[arg(long, default_value_t = 2.5)]
        max_pos: f64,
    },
    /// Determine the s-axis calibration constant and persist it
    Calibrate {
        #[command(flatten)]
        num: NumericArgs,
    },
    /// Run the acceptance suite
    Selftest {
        /// Case-insensitive substring filter on criterion id or name
        #[arg(long)]
        filter: Option<String>,
    },
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn tau_json(r: &TauResult) -> String {
    format!(
        "{{\"value\": {}, \"imag_residual\": {}, \"method\": \"{}\", \"s\": {}, \"kappa\": {}, \"error_estimate\": {}}}",
        fmt17(r.value),
        fmt17(r.imag_residual),
        r.method.name(),
        fmt17(r.s),
        fmt17(r.kappa),
        fmt17(r.error_estimate),
    )
}

fn print_tau(r: &TauResult, json: bool) {
    if json {
        println!("{}", tau_json(r));
    } else {
        println!(
            "tau[{}](s = {}, kappa = {}) = {}  (err_est {:.3e}, imag {:.3e})",
            r.method.name(),
            r.s,
            r.kappa,
            fmt17(r.value),
            r.error_estimate,
            r.imag_residual
        );
    }
    if let Some(w) = &r.warning {
        eprintln!("warning: {w}");
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    let mut cfg = if cli.config.exists() {
        RunConfig::load(&cli.config)?
    } else {
        RunConfig::default()
    };

    match cli.command {
        Command::Tau { method, num } => {
            num.apply(&mut cfg);
            cfg.method = method.parse()?;
            let r = cfg.pipelines().tau_frame(cfg.method, cfg.s, cfg.kappa)?;
            print_tau(&r, cfg.json);
        }
        Command::Scan {
            method,
            s_min,
            s_max,
            step,
            num,
        } => {
            num.apply(&mut cfg);
            cfg.method = method.parse()?;
            if s_max < s_min {
                return Err(Error::Domain(format!(
                    "scan: s_max {s_max} < s_min {s_min}"
                )));
            }
            if !step.is_finite() || step <= 0.0 {
                return Err(Error::Domain(format!("scan: step {step} must be positive")));
            }
            let n = ((s_max - s_min) / step + 1e-9).floor() as usize;
            let grid: Vec<f64> = (0..=n).map(|i| s_min + i as f64 * step).collect();
            let pipes = cfg.pipelines();
            let rows: Result<Vec<TauResult>, Error> = grid
                .par_iter()
                .map(|&s| pipes.tau_frame(cfg.method, s, cfg.kappa))
                .collect();
            let rows = rows?;
            let mut text = String::from("s,tau,err_est,method\n");
            for r in &rows {
                text.push_str(&format!(
                    "{},{},{},{}\n",
                    fmt17(r.s),
                    fmt17(r.value),
                    fmt17(r.error_estimate),
                    r.method.name()
                ));
            }
            if cfg.out.is_empty() {
                print!("{text}");
            } else {
                // stage and rename so failures leave no partial file
                let tmp = format!("{}.tmp", cfg.out);
                std::fs::write(&tmp, text)
                    .map_err(|e| Error::Numerical(format!("scan: write {tmp}: {e}")))?;
                std::fs::rename(&tmp, &cfg.out).map_err(|e| {
                    let _ = std::fs::remove_file(&tmp);
                    Error::Numerical(format!("scan: rename to {}: {e}", cfg.out))
                })?;
                eprintln!("wrote {} rows to {}", rows.len(), cfg.out);
            }
        }
        Command::U {
            num,
            tol,
            check_tau,
        } => {
            num.apply(&mut cfg);
            let sol = solve_pii(cfg.kappa, 8.0, cfg.s.clamp(-6.0, -1.0), tol)?;
            let (u, up) = sol.value_at(cfg.s)?;
            let resid = if check_tau {
                let dd = cfg.pipelines().log_tau_dds2_airy_frame(
                    cfg.s,
                    cfg.kappa,
                    cfg.fd_step,
                    cfg.method,
                )?;
                Some((u * u + dd).abs())
            } else {
                None
            };
            if cfg.json {
                print!(
                    "{{\"s\": {}, \"kappa\": {}, \"u\": {}, \"u_prime\": {}",
                    fmt17(cfg.s),
                    fmt17(cfg.kappa),
                    fmt17(u),
                    fmt17(up)
                );
                if let Some(r) = resid {
                    print!(", \"u_sq_plus_logtau_dd\": {}", fmt17(r));
                }
                println!("}}");
            } else {
                println!(
                    "u({}) = {}   u'({}) = {}",
                    cfg.s,
                    fmt17(u),
                    cfg.s,
                    fmt17(up)
                );
                if let Some(r) = resid {
                    println!("|u^2 + (log tau)''| = {r:.3e}");
                }
            }
        }
        Command::Coeffs { num, symbolic } => {
            num.apply(&mut cfg);
            let alg = Algebra::plus();
            let seed_cfg = SeedConfig {
                m: cfg.quad_order.max(400),
                eps: cfg.eps,
                tail_tol: 1e-16,
            };
            if cfg.json {
                print!("[");
            } else {
                println!("m,n,alpha");
            }
            let mut first = true;
            for m in 0..cfg.n_cut {
                for n in 0..cfg.n_cut {
                    let c = coeff_alpha(m, n, Prefactor::OracleValidated)?;
                    let v = eval_coefficient(&c, alg, cfg.s, cfg.kappa, &seed_cfg)?;
                    if cfg.json {
                        if !first {
                            print!(",");
                        }
                        print!("{{\"m\": {m}, \"n\": {n}, \"alpha\": {}}}", fmt17(v));
                        first = false;
                    } else {
                        println!("{m},{n},{}", fmt17(v));
                        if symbolic {
                            println!("#   alpha_{m}^{n} = kappa * [{}]", c.sym);
                        }
                    }
                }
            }
            if cfg.json {
                println!("]");
            }
        }
        Command::Maya { max_k, max_pos } => {
            let num = (max_pos * 2.0).round() as i64;
            let diagrams = enumerate_maya(max_k, HalfInt::new(num)?)?;
            println!("count = {}", diagrams.len());
            for d in &diagrams {
                println!(
                    "{d}  balanced={} weight={} young={}",
                    d.balanced(),
                    d.weight(),
                    d.to_young()
                );
            }
        }
        Command::Calibrate { num } => {
            num.apply(&mut cfg);
            let out = calibrate(cfg.kappa, &PROBE_GRID, &cfg.airy_cfg(), &cfg.widom_cfg())?;
            for (c, r) in &out.candidates {
                eprintln!("candidate c = {:.12}: residual {r:.3e}", c);
            }
            cfg.calibration_c = out.c;
            cfg.save(&cli.config)?;
            println!(
                "calibration_c = {}  (residual {:.3e}, persisted to {:?})",
                fmt17(out.c),
                out.residual,
                cli.config
            );
        }
        Command::Selftest { filter } => {
            let results = run_selftest(filter.as_deref());
            if results.is_empty() {
                return Err(Error::Domain("selftest: filter matched no criteria".into()));
            }
            let mut all_pass = true;
            for r in &results {
                println!("{}", r.line());
                all_pass &= r.passed;
            }
            if !all_pass {
                std::process::exit(1);
            }
        }
    }
    Ok(())
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
