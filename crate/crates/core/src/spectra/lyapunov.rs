use serde::Serialize;

use crate::cones::{cone_interval, ConeInterval};
use crate::error::{Error, Result};
use crate::map::{Params, Point2};

/// Tangent-orbit log of one finite-time Lyapunov run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LyapunovRun {
    pub z0: Point2,
    /// Unit initial direction.
    pub v0: Point2,
    /// Number of Jacobian applications performed.
    pub steps: usize,
    /// `ln |Df(f^i z) v_i|` with every `v_i` of unit length.
    pub growth_log: Vec<f64>,
    /// Cone membership of `v_0, ..., v_steps` (one more entry than `growth_log`).
    pub cone_membership: Vec<bool>,
    /// Mean of `growth_log`; NaN when no step was taken.
    pub finite_time_exponent: f64,
    /// First index `i` with `|f^i(z0).x| <= eta`.
    pub sigma_inf_hit: Option<usize>,
}

impl LyapunovRun {
    pub fn all_in_cone(&self) -> bool {
        self.cone_membership.iter().all(|&b| b)
    }
}

/// Iterates `z` and a renormalized tangent direction for up to `n` steps,
/// stopping before the first point within `eta` of the switching manifold.
pub fn tangent_orbit(p: &Params, z0: Point2, v0: Point2, n: usize, eta: f64) -> Result<LyapunovRun> {
    if !z0.is_finite() || !v0.is_finite() || !p.is_finite() {
        return Err(Error::NonFinite("tangent_orbit"));
    }
    let norm = v0.norm();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    if n == 0 {
        return Err(Error::Precondition("tangent_orbit needs n >= 1".into()));
    }
    let cone: Option<ConeInterval> = cone_interval(p).ok();
    let member = |v: Point2| cone.is_some_and(|k| k.contains_direction(v.x, v.y, eta));

    let v0 = v0 * (1.0 / norm);
    let mut z = z0;
    let mut v = v0;
    let mut growth_log = Vec::with_capacity(n);
    let mut cone_membership = Vec::with_capacity(n + 1);
    cone_membership.push(member(v));
    let mut sigma_inf_hit = None;

    for i in 0..n {
        let jac = match p.jacobian(z, eta) {
            Ok(j) => j,
            Err(Error::OnSwitchingManifold { .. }) => {
                sigma_inf_hit = Some(i);
                break;
            }
            Err(e) => return Err(e),
        };
        let w = jac.apply(v);
        let len = w.norm();
        growth_log.push(len.ln());
        v = w * (1.0 / len);
        cone_membership.push(member(v));
        z = p.step(z);
    }

    let steps = growth_log.len();
    let finite_time_exponent = if steps == 0 {
        f64::NAN
    } else {
        growth_log.iter().sum::<f64>() / steps as f64
    };
    Ok(LyapunovRun {
        z0,
        v0,
        steps,
        growth_log,
        cone_membership,
        finite_time_exponent,
        sigma_inf_hit,
    })
}
