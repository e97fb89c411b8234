//! Parameter-plane scans over `(tau_L, tau_R)` at fixed determinants.

use anyhow::bail;
use bcnf_core::cones::verify_cone;
use bcnf_core::Params;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::table::{num, opt_num};

/// Default axes; the reference figure gives no numeric ranges.
pub const DEFAULT_TAU_L: Axis = Axis { min: 1.0, max: 6.0, steps: 200 };
pub const DEFAULT_TAU_R: Axis = Axis { min: -6.0, max: -1.0, steps: 200 };

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Axis {
    pub fn value(&self, i: usize) -> f64 {
        self.min + (self.max - self.min) * i as f64 / (self.steps - 1) as f64
    }

    pub fn spacing(&self) -> f64 {
        (self.max - self.min) / (self.steps - 1) as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanSpec {
    pub tau_l: Axis,
    pub tau_r: Axis,
    pub delta_l: f64,
    pub delta_r: f64,
    /// Also compute the expansion constant `c` in each `cond1` cell.
    pub with_cone: bool,
}

impl ScanSpec {
    pub fn new(delta_l: f64, delta_r: f64) -> Self {
        ScanSpec {
            tau_l: DEFAULT_TAU_L,
            tau_r: DEFAULT_TAU_R,
            delta_l,
            delta_r,
            with_cone: false,
        }
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        for (name, a) in [("tau_L", &self.tau_l), ("tau_R", &self.tau_r)] {
            if a.steps < 2 {
                bail!("{name} axis needs at least 2 steps, got {}", a.steps);
            }
            if !a.min.is_finite() || !a.max.is_finite() || a.min >= a.max {
                bail!("{name} axis range [{}, {}] is invalid", a.min, a.max);
            }
        }
        if !self.delta_l.is_finite() || !self.delta_r.is_finite() {
            bail!("determinants must be finite");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScanCell {
    pub i: usize,
    pub j: usize,
    pub tau_l: f64,
    pub tau_r: f64,
    pub cond1: bool,
    pub phi: Option<f64>,
    #[serde(rename = "in_R")]
    pub in_r: bool,
    pub cond2: bool,
    pub thm2_applicable: bool,
    pub c: Option<f64>,
    /// `phi` changes sign between this cell and a grid neighbour.
    pub phi_sign_change: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanResult {
    pub spec: ScanSpec,
    /// Row-major with `tau_R` as the row index `j` and `tau_L` as `i`.
    pub cells: Vec<ScanCell>,
    /// `tau_R` rows along which the `in_R` indicator changes more than twice.
    pub monotonicity_violations: Vec<usize>,
    pub warnings: Vec<String>,
}

impl ScanResult {
    pub fn cell(&self, i: usize, j: usize) -> &ScanCell {
        &self.cells[j * self.spec.tau_l.steps + i]
    }

    pub fn to_csv(&self) -> String {
        let header = [
            "tau_L", "tau_R", "delta_L", "delta_R", "cond1", "phi", "in_R", "cond2",
            "thm2_applicable", "c", "phi_sign_change",
        ];
        let rows = self.cells.iter().map(|c| {
            vec![
                num(c.tau_l),
                num(c.tau_r),
                num(self.spec.delta_l),
                num(self.spec.delta_r),
                c.cond1.to_string(),
                opt_num(c.phi),
                c.in_r.to_string(),
                c.cond2.to_string(),
                c.thm2_applicable.to_string(),
                opt_num(c.c),
                c.phi_sign_change.to_string(),
            ]
        });
        crate::table::csv_string(&header, rows)
    }
}

fn in_r_changes(row: &[ScanCell]) -> usize {
    row.windows(2).filter(|w| w[0].in_r != w[1].in_r).count()
}

/// Classifies every grid cell. Rows are evaluated in parallel and assembled
/// in grid order.
pub fn scan_region(spec: &ScanSpec) -> anyhow::Result<ScanResult> {
    spec.validate()?;
    let (nl, nr) = (spec.tau_l.steps, spec.tau_r.steps);
    let mut cells: Vec<ScanCell> = (0..nr)
        .into_par_iter()
        .flat_map_iter(|j| {
            let tau_r = spec.tau_r.value(j);
            (0..nl).map(move |i| {
                let tau_l = spec.tau_l.value(i);
                let p = Params::new(tau_l, spec.delta_l, tau_r, spec.delta_r);
                let r = p.classify();
                let c = if spec.with_cone && r.cond1 {
                    verify_cone(&p).ok().map(|c| c.c)
                } else {
                    None
                };
                ScanCell {
                    i,
                    j,
                    tau_l,
                    tau_r,
                    cond1: r.cond1,
                    phi: r.phi,
                    in_r: r.in_r,
                    cond2: r.cond2,
                    thm2_applicable: r.thm2_applicable,
                    c,
                    phi_sign_change: false,
                }
            })
        })
        .collect();

    let sign = |c: &ScanCell| c.phi.filter(|v| *v != 0.0).map(|v| v > 0.0);
    for j in 0..nr {
        for i in 0..nl {
            let s = sign(&cells[j * nl + i]);
            let mut change = false;
            for (di, dj) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)] {
                let (a, b) = (i as i64 + di, j as i64 + dj);
                if a < 0 || b < 0 || a >= nl as i64 || b >= nr as i64 {
                    continue;
                }
                let t = sign(&cells[b as usize * nl + a as usize]);
                change |= matches!((s, t), (Some(x), Some(y)) if x != y);
            }
            cells[j * nl + i].phi_sign_change = change;
        }
    }

    let monotonicity_violations: Vec<usize> = (0..nr)
        .filter(|&j| in_r_changes(&cells[j * nl..(j + 1) * nl]) > 2)
        .collect();
    let warnings = monotonicity_violations
        .iter()
        .map(|&j| {
            format!(
                "in_R indicator changes more than twice along tau_L at tau_R = {}",
                spec.tau_r.value(j)
            )
        })
        .collect();
    Ok(ScanResult {
        spec: *spec,
        cells,
        monotonicity_violations,
        warnings,
    })
}
