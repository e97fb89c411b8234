//! The full certificate suite for one parameter point.

use std::collections::BTreeMap;
use std::time::Instant;

use bcnf_core::cones::verify_cone;
use bcnf_core::geometry::{
    build_omega, check_u_above_v, homoclinic_data, verify_forward_invariance, verify_trapping,
};
use bcnf_core::manifolds::{delta_sets, transitivity_witness};
use bcnf_core::sampling::{rng_from_seed, sample_cone_segment, sample_in_region, SampleRng};
use bcnf_core::spectra::{enumerate_periodic_orbits, tangent_orbit, verify_instability};
use bcnf_core::{Params, Point2, RegimeReport, DEFAULT_ETA};
use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;
pub const LYAPUNOV_RUNS: usize = 10;
pub const LYAPUNOV_STEPS: usize = 1000;
/// Iterates of the triangle used for the area check.
pub const AREA_STEPS: usize = 10;
/// Witness seed length relative to the diameter of `Omega`.
pub const WITNESS_SEED_FRACTION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub status: Status,
    pub detail: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteOptions {
    pub eps: f64,
    pub max_period: usize,
    pub seed: u64,
    pub budget: usize,
    pub tol: f64,
    /// Record wall-clock time per check; reports are then no longer
    /// reproducible byte for byte.
    #[serde(skip)]
    pub timings: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            eps: crate::config::DEFAULT_EPS,
            max_period: crate::config::DEFAULT_MAX_PERIOD,
            seed: crate::config::DEFAULT_SEED,
            budget: crate::config::DEFAULT_BUDGET,
            tol: crate::config::DEFAULT_TOL,
            timings: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub params: Params,
    pub options: SuiteOptions,
    pub regime: RegimeReport,
    pub certificates: BTreeMap<String, CheckResult>,
    pub overall: BTreeMap<String, Status>,
    pub all_passed: bool,
}

impl SuiteReport {
    pub fn status(&self, check: &str) -> Option<Status> {
        self.overall.get(check).copied()
    }
}

pub const IN_R_CHECKS: [&str; 5] = ["forward_invariance", "trapping", "cone", "lyapunov", "orbits"];
pub const THEOREM2_CHECKS: [&str; 4] = ["homoclinic", "u_above_v", "area_decay", "transitivity_witness"];

fn verdict(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}

fn failed(e: impl std::fmt::Display) -> (Status, Value) {
    (Status::Fail, json!({ "error": e.to_string() }))
}

type Outcome = (Status, Value);

fn forward_invariance(p: &Params) -> Outcome {
    match build_omega(p).and_then(|o| verify_forward_invariance(p, &o, DEFAULT_ETA)) {
        Ok(c) => (verdict(c.passed), to_value(&c)),
        Err(e) => failed(e),
    }
}

fn trapping(p: &Params, eps: f64) -> Outcome {
    match verify_trapping(p, eps, true) {
        Ok(t) => (verdict(t.certificate.passed), to_value(&t)),
        Err(e) => failed(e),
    }
}

fn cone(p: &Params) -> Outcome {
    match verify_cone(p) {
        Ok(c) => (verdict(c.invariant && c.c > 1.0), to_value(&c)),
        Err(e) => failed(e),
    }
}

#[derive(Serialize)]
struct SpotRun {
    z0: Point2,
    v0: Point2,
    steps: usize,
    finite_time_exponent: f64,
    sigma_inf_hit: Option<usize>,
    all_in_cone: bool,
}

/// Tangent orbits from random points of `Omega` with random cone directions;
/// each must stay in the cone and grow at least like `c`.
pub fn lyapunov_spot_runs(p: &Params, rng: &mut SampleRng) -> Outcome {
    let mut run = || -> bcnf_core::Result<Outcome> {
        let omega = build_omega(p)?;
        let cert = verify_cone(p)?;
        let k = cert.interval;
        let bound = cert.c.ln() - 1e-10;
        let mut runs = Vec::with_capacity(LYAPUNOV_RUNS);
        let mut ok = true;
        for _ in 0..LYAPUNOV_RUNS {
            let z0 = sample_in_region(rng, &omega);
            let (a, b) = sample_cone_segment(rng, &omega, &k, 1e-6 * omega.diameter());
            let r = tangent_orbit(p, z0, b - a, LYAPUNOV_STEPS, DEFAULT_ETA)?;
            ok &= r.all_in_cone() && (r.steps == 0 || r.finite_time_exponent >= bound);
            runs.push(SpotRun {
                z0: r.z0,
                v0: r.v0,
                steps: r.steps,
                finite_time_exponent: r.finite_time_exponent,
                sigma_inf_hit: r.sigma_inf_hit,
                all_in_cone: r.all_in_cone(),
            });
        }
        Ok((verdict(ok), json!({ "ln_c": cert.c.ln(), "runs": runs })))
    };
    run().unwrap_or_else(failed)
}

fn orbits(p: &Params, max_period: usize, tol: f64) -> Outcome {
    let run = || -> bcnf_core::Result<Outcome> {
        let e = enumerate_periodic_orbits(p, max_period)?;
        let rep = verify_instability(p, &e.records, tol)?;
        let detail = json!({
            "max_period": e.max_period,
            "words_examined": e.words_examined,
            "admissible": e.records.len(),
            "singular_words": e.singular_words,
            "boundary_duplicates": e.boundary_duplicates,
            "instability": rep,
        });
        Ok((verdict(rep.passed()), detail))
    };
    run().unwrap_or_else(failed)
}

fn homoclinic(p: &Params) -> Outcome {
    match homoclinic_data(p) {
        Ok(h) => (verdict(h.left_of_es), to_value(&h)),
        Err(e) => failed(e),
    }
}

fn u_above_v(p: &Params) -> Outcome {
    match check_u_above_v(p) {
        Ok(u) => (verdict(u.passed), to_value(&u)),
        Err(e) => failed(e),
    }
}

fn area_decay(p: &Params) -> Outcome {
    match delta_sets(p, AREA_STEPS) {
        Ok(d) => (
            verdict(d.area_decay_holds),
            json!({ "areas": d.areas, "delta_max": d.delta_max }),
        ),
        Err(e) => failed(e),
    }
}

fn witness(p: &Params, rng: &mut SampleRng, budget: usize) -> Outcome {
    let mut run = || -> bcnf_core::Result<Outcome> {
        let omega = build_omega(p)?;
        let k = verify_cone(p)?.interval;
        let seg = sample_cone_segment(rng, &omega, &k, WITNESS_SEED_FRACTION * omega.diameter());
        let r = transitivity_witness(p, seg, budget)?;
        Ok((verdict(r.crosses_es), to_value(&r)))
    };
    run().unwrap_or_else(failed)
}

/// Runs every check whose regime preconditions hold; the rest are recorded
/// as not applicable. Two calls with equal inputs give equal reports unless
/// `timings` is set.
pub fn run_suite(p: &Params, opts: &SuiteOptions) -> SuiteReport {
    let regime = p.classify();
    let mut certificates = BTreeMap::new();
    let mut record = |name: &str, applicable: bool, f: &mut dyn FnMut() -> Outcome| {
        let result = if applicable {
            let t0 = Instant::now();
            let (status, detail) = f();
            CheckResult {
                status,
                detail,
                elapsed_ms: opts.timings.then(|| t0.elapsed().as_secs_f64() * 1e3),
            }
        } else {
            CheckResult {
                status: Status::NotApplicable,
                detail: Value::Null,
                elapsed_ms: None,
            }
        };
        certificates.insert(name.to_string(), result);
    };

    record("classify", true, &mut || (Status::Pass, to_value(&regime)));

    let in_r = regime.in_r;
    // one stream for all random draws, consumed in a fixed order
    let mut rng = rng_from_seed(opts.seed);
    record("forward_invariance", in_r, &mut || forward_invariance(p));
    record("trapping", in_r, &mut || trapping(p, opts.eps));
    record("cone", in_r, &mut || cone(p));
    record("lyapunov", in_r, &mut || lyapunov_spot_runs(p, &mut rng));
    record("orbits", in_r, &mut || orbits(p, opts.max_period, opts.tol));

    let thm2 = regime.thm2_applicable;
    record("homoclinic", thm2, &mut || homoclinic(p));
    record("u_above_v", thm2, &mut || u_above_v(p));
    record("area_decay", thm2, &mut || area_decay(p));
    record("transitivity_witness", thm2, &mut || witness(p, &mut rng, opts.budget));

    let overall: BTreeMap<String, Status> =
        certificates.iter().map(|(k, v)| (k.clone(), v.status)).collect();
    let all_passed = overall.values().all(|s| *s != Status::Fail);
    SuiteReport {
        schema_version: SCHEMA_VERSION,
        params: *p,
        options: opts.clone(),
        regime,
        certificates,
        overall,
        all_passed,
    }
}
