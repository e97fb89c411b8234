//! Slope-map calculus for the cone of tangent directions with slopes in
//! `K = [q_L, q_R]`.
//!
//! A vector `(1, m)` is sent by `A = [[tau, 1], [-delta, 0]]` to a vector of
//! slope `G(m) = -delta / (tau + m)`, and its length is scaled by
//! `g(m) = sqrt(((tau + m)^2 + delta^2) / (1 + m^2))`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::map::{Params, Side, DEFAULT_ETA};

/// Slope of `A (1, m)`.
pub fn slope_map(tau: f64, delta: f64, m: f64) -> Result<f64> {
    let den = tau + m;
    if den.abs() <= DEFAULT_ETA {
        return Err(Error::InfiniteSlope { m });
    }
    Ok(-delta / den)
}

/// Derivative of [`slope_map`] in `m`.
pub fn slope_map_derivative(tau: f64, delta: f64, m: f64) -> f64 {
    delta / ((tau + m) * (tau + m))
}

/// Growth factor `|A (1, m)| / |(1, m)|`.
pub fn growth_ratio(tau: f64, delta: f64, m: f64) -> f64 {
    (((tau + m) * (tau + m) + delta * delta) / (1.0 + m * m)).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pqr {
    /// Slope at which `A` preserves length.
    pub p: f64,
    /// Smaller-magnitude root of `m^2 + tau m + delta`: the attracting fixed
    /// point of the slope map.
    pub q: f64,
    /// Larger-magnitude root.
    pub r: f64,
}

/// `p = -(tau^2 + delta^2 - 1) / (2 tau)`.
pub fn p_slope(tau: f64, delta: f64) -> Result<f64> {
    if tau == 0.0 {
        return Err(Error::ZeroTrace);
    }
    Ok(-(tau * tau + delta * delta - 1.0) / (2.0 * tau))
}

/// Fixed points of the slope map, ordered `(q, r)` with `|q| <= |r|`.
pub fn slope_fixed_points(tau: f64, delta: f64) -> Result<(f64, f64)> {
    let disc = tau * tau - 4.0 * delta;
    if !(disc > 0.0) {
        return Err(Error::ComplexEigenvalues { tau, delta });
    }
    let r = -0.5 * (tau + disc.sqrt().copysign(tau));
    if r == 0.0 {
        return Err(Error::ZeroTrace);
    }
    Ok((delta / r, r))
}

pub fn pqr(tau: f64, delta: f64) -> Result<Pqr> {
    let p = p_slope(tau, delta)?;
    let (q, r) = slope_fixed_points(tau, delta)?;
    Ok(Pqr { p, q, r })
}

/// `H(m) = |A v|^2 - 2 |v|^2` for `v = (1, m)`.
pub fn sqrt2_margin(tau: f64, delta: f64, m: f64) -> f64 {
    -m * m + 2.0 * tau * m + tau * tau + delta * delta - 2.0
}

/// `H(q)` in closed form: `delta^2 + delta - 2 + tau^2/2 (-1 + 3 sqrt(1 - 4 delta / tau^2))`.
pub fn sqrt2_margin_at_q(tau: f64, delta: f64) -> f64 {
    let root = (1.0 - 4.0 * delta / (tau * tau)).sqrt();
    delta * delta + delta - 2.0 + 0.5 * tau * tau * (-1.0 + 3.0 * root)
}

/// Slope interval `K = [q_L, q_R]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConeInterval {
    pub q_l: f64,
    pub q_r: f64,
}

impl ConeInterval {
    pub fn contains_slope(&self, m: f64, eta: f64) -> bool {
        m >= self.q_l - eta && m <= self.q_r + eta
    }

    /// Whether the direction `(dx, dy)` lies in the cone. Vertical directions
    /// are never accepted.
    pub fn contains_direction(&self, dx: f64, dy: f64, eta: f64) -> bool {
        dx != 0.0 && self.contains_slope(dy / dx, eta)
    }

    pub fn width(&self) -> f64 {
        self.q_r - self.q_l
    }
}

pub fn cone_interval(p: &Params) -> Result<ConeInterval> {
    p.require_cond1("cone_interval")?;
    let (q_l, _) = slope_fixed_points(p.tau_l, p.delta_l)?;
    let (q_r, _) = slope_fixed_points(p.tau_r, p.delta_r)?;
    Ok(ConeInterval { q_l, q_r })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConeCertificate {
    pub interval: ConeInterval,
    pub invariant: bool,
    /// Minimum of the growth ratio over the cone and both pieces.
    pub c: f64,
    /// `c > sqrt(2)`.
    pub strong: bool,
    pub argmin_slope: f64,
    pub argmin_side: Side,
}

/// Stationary points of `g^2(m)`, the roots of
/// `tau m^2 + (tau^2 + delta^2 - 1) m - tau = 0`. Their product is `-1`.
pub fn growth_stationary_points(tau: f64, delta: f64) -> [f64; 2] {
    if tau == 0.0 {
        // g^2 = (m^2 + delta^2)/(1 + m^2): extremal at m = 0 and at infinity
        return [0.0, f64::INFINITY];
    }
    let b = (tau * tau + delta * delta - 1.0) / tau;
    let disc = (b * b + 4.0).sqrt();
    let big = -0.5 * (b + disc.copysign(b));
    [big, -1.0 / big]
}

/// Exact minimum of the growth ratio of one piece over `[lo, hi]`.
fn min_growth_on(tau: f64, delta: f64, lo: f64, hi: f64) -> (f64, f64) {
    let mut best = (growth_ratio(tau, delta, lo), lo);
    let mut consider = |m: f64| {
        let g = growth_ratio(tau, delta, m);
        if g < best.0 {
            best = (g, m);
        }
    };
    consider(hi);
    for m in growth_stationary_points(tau, delta) {
        if m.is_finite() && m > lo && m < hi {
            consider(m);
        }
    }
    best
}

/// Certifies that slopes in `K` are mapped into `K` by both slope maps and
/// computes the expansion constant `c`.
pub fn verify_cone(p: &Params) -> Result<ConeCertificate> {
    let interval = cone_interval(p)?;
    let ConeInterval { q_l, q_r } = interval;

    let mut invariant = true;
    for side in [Side::Left, Side::Right] {
        let (tau, delta) = (p.tau(side), p.delta(side));
        // the pole -tau must sit outside K for G to be increasing across K
        if -tau >= q_l - DEFAULT_ETA && -tau <= q_r + DEFAULT_ETA {
            invariant = false;
            continue;
        }
        let lo = slope_map(tau, delta, q_l)?;
        let hi = slope_map(tau, delta, q_r)?;
        invariant &= interval.contains_slope(lo, DEFAULT_ETA) && interval.contains_slope(hi, DEFAULT_ETA);
    }

    let (c_l, m_l) = min_growth_on(p.tau_l, p.delta_l, q_l, q_r);
    let (c_r, m_r) = min_growth_on(p.tau_r, p.delta_r, q_l, q_r);
    let (c, argmin_slope, argmin_side) = if c_l <= c_r {
        (c_l, m_l, Side::Left)
    } else {
        (c_r, m_r, Side::Right)
    };
    Ok(ConeCertificate {
        interval,
        invariant,
        c,
        strong: c > std::f64::consts::SQRT_2,
        argmin_slope,
        argmin_side,
    })
}
