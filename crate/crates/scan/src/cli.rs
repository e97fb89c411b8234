//! Argument parsing and subcommand dispatch for the `bcnf` binary.
//!
//! Exit codes: 0 when every applicable check passed, 2 when one failed,
//! 3 for usage errors or invalid input, 1 for I/O failures.

use std::ffi::OsString;
use std::path::PathBuf;

use anyhow::{bail, Context};
use bcnf_core::cones::verify_cone;
use bcnf_core::geometry::{
    build_omega, check_u_above_v, homoclinic_data, intermediate_facts, kink_points,
    verify_forward_invariance, verify_trapping,
};
use bcnf_core::manifolds::{trace_stable, trace_unstable, FixedPointKind};
use bcnf_core::sampling::rng_from_seed;
use bcnf_core::spectra::{enumerate_periodic_orbits, verify_instability};
use bcnf_core::DEFAULT_ETA;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::config::{Format, Overrides, RunConfig};
use crate::figures::{emit_figure_data, Figure};
use crate::scan::{scan_region, Axis, ScanSpec, DEFAULT_TAU_L, DEFAULT_TAU_R};
use crate::suite::{self, run_suite, Status, SuiteOptions};
use crate::table::{csv_string, num};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_CHECK_FAILED: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "bcnf", version, about = "Robust-chaos certificates for the 2D border-collision normal form")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct Common {
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tau_l: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub delta_l: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tau_r: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub delta_r: Option<f64>,
    /// Trapping-region offset (default 1e-3).
    #[arg(long, global = true)]
    pub eps: Option<f64>,
    /// Longest itinerary for orbit enumeration (default 10).
    #[arg(long, global = true)]
    pub max_period: Option<usize>,
    /// Seed for the ChaCha8 generator (default 42).
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Output file; for `figure`, the output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Map applications allowed to the transitivity witness (default 1000).
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Instability tolerance and manifold growth tolerance (default 1e-9).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// JSON file with any of the options above; flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ManifoldKind {
    Unstable,
    Stable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FixedPointArg {
    X,
    Y,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Regime conditions and phi.
    Classify,
    /// Construction points, Omega and its certificates.
    Geometry,
    /// Invariant expanding cone and expansion constant.
    Cone,
    /// Seeded finite-time Lyapunov spot-runs.
    Lyapunov,
    /// Periodic orbits up to --max-period and their instability.
    Orbits,
    /// Trace a stable or unstable manifold.
    Manifold {
        #[arg(long, value_enum, default_value = "unstable")]
        kind: ManifoldKind,
        #[arg(long, value_enum, default_value = "x")]
        fixed_point: FixedPointArg,
        #[arg(long, default_value_t = 20)]
        max_iter: usize,
    },
    /// Trapping region with automatic eps search.
    Trap,
    /// Transitivity witness from a seeded random segment.
    Witness,
    /// Every applicable certificate.
    Suite {
        /// Record elapsed time per check (breaks byte-identical reports).
        #[arg(long)]
        timings: bool,
    },
    /// Classify a (tau_L, tau_R) grid at fixed determinants.
    Scan {
        #[arg(long, default_value_t = DEFAULT_TAU_L.min, allow_negative_numbers = true)]
        tau_l_min: f64,
        #[arg(long, default_value_t = DEFAULT_TAU_L.max, allow_negative_numbers = true)]
        tau_l_max: f64,
        #[arg(long, default_value_t = DEFAULT_TAU_R.min, allow_negative_numbers = true)]
        tau_r_min: f64,
        #[arg(long, default_value_t = DEFAULT_TAU_R.max, allow_negative_numbers = true)]
        tau_r_max: f64,
        /// Grid points per axis.
        #[arg(long, default_value_t = DEFAULT_TAU_L.steps)]
        steps: usize,
        /// Also compute the expansion constant per cell.
        #[arg(long)]
        with_cone: bool,
    },
    /// Write the data behind a figure.
    Figure {
        #[arg(value_enum)]
        which: Figure,
    },
}

/// Failure of the requested computation itself, as opposed to bad input.
fn is_check_failure(e: &bcnf_core::Error) -> bool {
    use bcnf_core::Error::*;
    matches!(
        e,
        TrappingFailure { .. } | NoHomoclinic | BudgetExhausted { .. } | Inconsistent { .. }
    )
}

fn exit_code_for(e: &anyhow::Error) -> i32 {
    for cause in e.chain() {
        if let Some(ce) = cause.downcast_ref::<bcnf_core::Error>() {
            return if is_check_failure(ce) {
                EXIT_CHECK_FAILED
            } else {
                EXIT_USAGE
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return EXIT_IO;
        }
    }
    EXIT_USAGE
}

/// Parses `args` (including the program name), runs, and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            exit_code_for(&e)
        }
    }
}

fn resolve(common: &Common) -> anyhow::Result<RunConfig> {
    let file = match &common.config {
        Some(path) => Overrides::from_file(path).map_err(|e| anyhow::anyhow!("{e:#}"))?,
        None => Overrides::default(),
    };
    let flags = Overrides {
        tau_l: common.tau_l,
        delta_l: common.delta_l,
        tau_r: common.tau_r,
        delta_r: common.delta_r,
        eps: common.eps,
        max_period: common.max_period,
        seed: common.seed,
        out: common.out.clone(),
        format: common.format,
        budget: common.budget,
        tol: common.tol,
    };
    file.layered(flags).resolve()
}

fn emit(cfg: &RunConfig, text: &str) -> anyhow::Result<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json<T: Serialize>(cfg: &RunConfig, value: &T) -> anyhow::Result<()> {
    emit(cfg, &(serde_json::to_string_pretty(value)? + "\n"))
}

fn json_only(cfg: &RunConfig, command: &str) -> anyhow::Result<()> {
    if cfg.format == Format::Csv {
        bail!("{command} has no CSV output; use --format json");
    }
    Ok(())
}

fn code(ok: bool) -> i32 {
    if ok {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    }
}

fn suite_status_code(s: Status) -> i32 {
    code(s != Status::Fail)
}

pub fn run(cli: Cli) -> anyhow::Result<i32> {
    let cfg = resolve(&cli.common)?;
    match cli.command {
        Command::Classify => {
            json_only(&cfg, "classify")?;
            let p = cfg.require_params()?;
            emit_json(&cfg, &json!({ "params": p, "regime": p.classify() }))?;
            Ok(EXIT_OK)
        }
        Command::Geometry => {
            json_only(&cfg, "geometry")?;
            let p = cfg.require_params()?;
            let omega = build_omega(&p)?;
            let cert = verify_forward_invariance(&p, &omega, DEFAULT_ETA)?;
            let out = json!({
                "params": p,
                "kink_points": kink_points(&p)?,
                "omega": omega,
                "forward_invariance": cert,
                "intermediate_facts": intermediate_facts(&p)?,
                "homoclinic": homoclinic_data(&p)?,
                "u_above_v": check_u_above_v(&p)?,
            });
            emit_json(&cfg, &out)?;
            Ok(code(cert.passed))
        }
        Command::Cone => {
            json_only(&cfg, "cone")?;
            let p = cfg.require_params()?;
            let c = verify_cone(&p)?;
            emit_json(&cfg, &json!({ "params": p, "cone": c }))?;
            Ok(code(c.invariant && c.c > 1.0))
        }
        Command::Lyapunov => {
            json_only(&cfg, "lyapunov")?;
            let p = cfg.require_params()?;
            if !p.classify().in_r {
                bail!("lyapunov requires parameters in the region R");
            }
            let (status, detail) = suite::lyapunov_spot_runs(&p, &mut rng_from_seed(cfg.seed));
            emit_json(&cfg, &json!({ "params": p, "seed": cfg.seed, "status": status, "lyapunov": detail }))?;
            Ok(suite_status_code(status))
        }
        Command::Orbits => {
            let p = cfg.require_params()?;
            let e = enumerate_periodic_orbits(&p, cfg.max_period)?;
            let inst = if p.classify().cond1 {
                Some(verify_instability(&p, &e.records, cfg.tol)?)
            } else {
                None
            };
            match cfg.format {
                Format::Csv => emit(&cfg, &crate::figures::orbits_csv(&e.records))?,
                Format::Json => emit_json(&cfg, &json!({ "params": p, "enumeration": e, "instability": inst }))?,
            }
            Ok(code(inst.map_or(true, |r| r.passed())))
        }
        Command::Manifold {
            kind,
            fixed_point,
            max_iter,
        } => {
            let p = cfg.require_params()?;
            let fp = match fixed_point {
                FixedPointArg::X => FixedPointKind::X,
                FixedPointArg::Y => FixedPointKind::Y,
            };
            let t = match kind {
                ManifoldKind::Unstable => trace_unstable(&p, fp, max_iter, cfg.tol)?,
                ManifoldKind::Stable => trace_stable(&p, fp, max_iter)?,
            };
            match cfg.format {
                Format::Csv => {
                    let kink = t.polyline.is_kink();
                    let rows = t.polyline.points.iter().enumerate().map(|(i, z)| {
                        vec![i.to_string(), num(z.x), num(z.y), kink[i].to_string()]
                    });
                    emit(&cfg, &csv_string(&["index", "x", "y", "kink"], rows))?;
                }
                Format::Json => emit_json(&cfg, &json!({ "params": p, "trace": t }))?,
            }
            Ok(EXIT_OK)
        }
        Command::Trap => {
            json_only(&cfg, "trap")?;
            let p = cfg.require_params()?;
            let t = verify_trapping(&p, cfg.eps, true)?;
            emit_json(&cfg, &json!({ "params": p, "trap": t }))?;
            Ok(code(t.certificate.passed))
        }
        Command::Witness => {
            json_only(&cfg, "witness")?;
            let p = cfg.require_params()?;
            if !p.classify().in_r {
                bail!("witness requires parameters in the region R");
            }
            let mut rng = rng_from_seed(cfg.seed);
            let omega = build_omega(&p)?;
            let k = verify_cone(&p)?.interval;
            let seg = bcnf_core::sampling::sample_cone_segment(
                &mut rng,
                &omega,
                &k,
                suite::WITNESS_SEED_FRACTION * omega.diameter(),
            );
            let r = bcnf_core::manifolds::transitivity_witness(&p, seg, cfg.budget)?;
            emit_json(&cfg, &json!({ "params": p, "seed": cfg.seed, "witness": r }))?;
            Ok(code(r.crosses_es))
        }
        Command::Suite { timings } => {
            json_only(&cfg, "suite")?;
            let p = cfg.require_params()?;
            let opts = SuiteOptions {
                eps: cfg.eps,
                max_period: cfg.max_period,
                seed: cfg.seed,
                budget: cfg.budget,
                tol: cfg.tol,
                timings,
            };
            let r = run_suite(&p, &opts);
            emit_json(&cfg, &r)?;
            Ok(code(r.all_passed))
        }
        Command::Scan {
            tau_l_min,
            tau_l_max,
            tau_r_min,
            tau_r_max,
            steps,
            with_cone,
        } => {
            let (Some(delta_l), Some(delta_r)) = (cfg.delta_l, cfg.delta_r) else {
                bail!("scan requires --delta-l and --delta-r");
            };
            let spec = ScanSpec {
                tau_l: Axis {
                    min: tau_l_min,
                    max: tau_l_max,
                    steps,
                },
                tau_r: Axis {
                    min: tau_r_min,
                    max: tau_r_max,
                    steps,
                },
                delta_l,
                delta_r,
                with_cone,
            };
            let r = scan_region(&spec)?;
            for w in &r.warnings {
                eprintln!("warning: {w}");
            }
            match cfg.format {
                Format::Csv => emit(&cfg, &r.to_csv())?,
                Format::Json => emit_json(&cfg, &r)?,
            }
            Ok(EXIT_OK)
        }
        Command::Figure { which } => {
            let p = cfg.require_params()?;
            let dir = cfg.out.clone().unwrap_or_else(|| PathBuf::from("."));
            let paths = emit_figure_data(&p, which, cfg.max_period, cfg.eps, cfg.format, &dir)?;
            for path in paths {
                println!("{}", path.display());
            }
            Ok(EXIT_OK)
        }
    }
}
