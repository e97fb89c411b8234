use rayon::prelude::*;
use serde::Serialize;

use super::words::{lyndon_words, word_string};
use crate::cones::verify_cone;
use crate::error::{Error, Result};
use crate::map::{Matrix2, Params, Point2, Side, DEFAULT_ETA};

/// Below this `|det(I - M_w)|` a word is treated as singular and skipped.
pub const SINGULAR_TOL: f64 = 1e-12;

/// Eigenvalues of a cycle matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Multipliers {
    /// Ordered by decreasing modulus.
    Real { big: f64, small: f64 },
    Complex { re: f64, im: f64 },
}

impl Multipliers {
    pub fn from_trace_det(t: f64, d: f64) -> Self {
        let disc = t * t - 4.0 * d;
        if disc >= 0.0 {
            let s = disc.sqrt();
            let big = if t >= 0.0 { 0.5 * (t + s) } else { 0.5 * (t - s) };
            let small = if big == 0.0 { 0.0 } else { d / big };
            Multipliers::Real { big, small }
        } else {
            Multipliers::Complex {
                re: 0.5 * t,
                im: 0.5 * (-disc).sqrt(),
            }
        }
    }

    pub fn spectral_radius(&self) -> f64 {
        match *self {
            Multipliers::Real { big, .. } => big.abs(),
            Multipliers::Complex { re, im } => re.hypot(im),
        }
    }

    /// Product of the two multipliers (the determinant).
    pub fn product(&self) -> f64 {
        match *self {
            Multipliers::Real { big, small } => big * small,
            Multipliers::Complex { re, im } => re * re + im * im,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitRecord {
    pub word: String,
    pub points: Vec<Point2>,
    pub multipliers: Multipliers,
    pub admissible: bool,
    /// Some orbit point has `|x| <= eta`.
    pub boundary_flag: bool,
    pub spectral_radius: f64,
}

impl OrbitRecord {
    pub fn period(&self) -> usize {
        self.points.len()
    }

    /// Largest distance between `apply(points[i])` and `points[i + 1]`.
    pub fn closure_residual(&self, p: &Params) -> f64 {
        let n = self.points.len();
        (0..n)
            .map(|i| p.step(self.points[i]).dist(self.points[(i + 1) % n]))
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrbitEnumeration {
    pub max_period: usize,
    pub words_examined: usize,
    /// Words skipped because `I - M_w` is numerically singular.
    pub singular_words: Vec<String>,
    /// Boundary cycles already reported under another word.
    pub boundary_duplicates: usize,
    /// Admissible cycles, sorted by `(period, word)`.
    pub records: Vec<OrbitRecord>,
}

/// Cycle matrix `M_w = A_{w[n-1]} ... A_{w[0]}` and offset `b_w`, so that
/// `f_w(z) = M_w z + b_w`.
pub fn cycle_map(p: &Params, word: &[Side]) -> (Matrix2, Point2) {
    let b = Point2::new(1.0, 0.0);
    let mut m = Matrix2::IDENTITY;
    let mut c = Point2::ORIGIN;
    for &s in word {
        let a = p.matrix(s);
        m = a.mul(&m);
        c = a.apply(c) + b;
    }
    (m, c)
}

/// `det M_w` as the product of the branch determinants; the entries of
/// `M_w` grow with the word length, so `a11 a22 - a12 a21` cancels badly.
pub fn cycle_det(p: &Params, word: &[Side]) -> f64 {
    word.iter().map(|&s| p.delta(s)).product()
}

/// Fixed point of `f_w` and the cycle matrix; `None` when `I - M_w` is singular.
fn cycle_fixed_point(p: &Params, word: &[Side]) -> Option<(Point2, Matrix2)> {
    let (m, c) = cycle_map(p, word);
    let (a11, a12, a21, a22) = (1.0 - m.a11, -m.a12, -m.a21, 1.0 - m.a22);
    let det = a11 * a22 - a12 * a21;
    if det.abs() <= SINGULAR_TOL || !det.is_finite() {
        return None;
    }
    let z = Point2::new((c.x * a22 - a12 * c.y) / det, (a11 * c.y - a21 * c.x) / det);
    Some((z, m))
}

/// Solves for the periodic orbit of `word` without checking admissibility.
/// `None` when `I - M_w` is singular.
///
/// Each point comes from its own rotation of the word; iterating one solved
/// point instead would amplify its rounding error by the expansion rate.
pub fn solve_cycle(p: &Params, word: &[Side], eta: f64) -> Option<OrbitRecord> {
    let (z0, m) = cycle_fixed_point(p, word)?;
    let mut points = Vec::with_capacity(word.len());
    points.push(z0);
    let mut rotated = word.to_vec();
    for _ in 1..word.len() {
        rotated.rotate_left(1);
        let z = match cycle_fixed_point(p, &rotated) {
            Some((z, _)) => z,
            None => p.apply_branch(rotated[rotated.len() - 1], *points.last().expect("nonempty")),
        };
        points.push(z);
    }
    let admissible = points.iter().zip(word).all(|(z, s)| match s {
        Side::Left => z.x <= eta,
        Side::Right => z.x >= -eta,
    });
    let boundary_flag = points.iter().any(|z| z.x.abs() <= eta);
    let multipliers = Multipliers::from_trace_det(m.trace(), cycle_det(p, word));
    Some(OrbitRecord {
        word: word_string(word),
        points,
        spectral_radius: multipliers.spectral_radius(),
        multipliers,
        admissible,
        boundary_flag,
    })
}

fn same_cycle(a: &OrbitRecord, b: &OrbitRecord, tol: f64) -> bool {
    a.points.len() == b.points.len()
        && a.points
            .iter()
            .all(|z| b.points.iter().any(|w| z.dist(*w) <= tol))
}

/// Every admissible periodic orbit whose primitive itinerary has length at
/// most `max_period`.
pub fn enumerate_periodic_orbits(p: &Params, max_period: usize) -> Result<OrbitEnumeration> {
    enumerate_periodic_orbits_with(p, max_period, DEFAULT_ETA)
}

pub fn enumerate_periodic_orbits_with(
    p: &Params,
    max_period: usize,
    eta: f64,
) -> Result<OrbitEnumeration> {
    if max_period == 0 {
        return Err(Error::Precondition("max_period must be at least 1".into()));
    }
    if !p.is_finite() {
        return Err(Error::NonFinite("enumerate_periodic_orbits"));
    }
    let mut words = lyndon_words(max_period);
    words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));

    let solved: Vec<(String, Option<OrbitRecord>)> = words
        .par_iter()
        .map(|w| (word_string(w), solve_cycle(p, w, eta)))
        .collect();

    let mut singular_words = Vec::new();
    let mut records: Vec<OrbitRecord> = Vec::new();
    let mut boundary_duplicates = 0;
    for (word, rec) in solved {
        match rec {
            None => singular_words.push(word),
            Some(r) if !r.admissible => {}
            Some(r) => {
                if r.boundary_flag
                    && records
                        .iter()
                        .rev()
                        .take_while(|q| q.period() == r.period())
                        .any(|q| q.boundary_flag && same_cycle(q, &r, 1e3 * eta))
                {
                    boundary_duplicates += 1;
                } else {
                    records.push(r);
                }
            }
        }
    }
    Ok(OrbitEnumeration {
        max_period,
        words_examined: words.len(),
        singular_words,
        boundary_duplicates,
        records,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstabilityViolation {
    pub word: String,
    pub period: usize,
    pub spectral_radius: f64,
    /// `c^period`.
    pub cone_bound: f64,
    /// `spectral_radius <= 1`.
    pub not_unstable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstabilityReport {
    pub c: f64,
    pub tol: f64,
    pub checked: usize,
    /// Smallest `spectral_radius - c^period` over all records.
    pub min_slack: f64,
    pub violations: Vec<InstabilityViolation>,
}

impl InstabilityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `spectral_radius > 1` and `spectral_radius >= c^n - tol` for every
/// record, with `c` from the cone certificate.
pub fn verify_instability(p: &Params, records: &[OrbitRecord], tol: f64) -> Result<InstabilityReport> {
    p.require_cond1("verify_instability")?;
    let c = verify_cone(p)?.c;
    let mut min_slack = f64::INFINITY;
    let mut violations = Vec::new();
    for r in records {
        let bound = c.powi(r.period() as i32);
        let slack = r.spectral_radius - bound;
        min_slack = min_slack.min(slack);
        let not_unstable = r.spectral_radius <= 1.0;
        if not_unstable || slack < -tol {
            violations.push(InstabilityViolation {
                word: r.word.clone(),
                period: r.period(),
                spectral_radius: r.spectral_radius,
                cone_bound: bound,
                not_unstable,
            });
        }
    }
    Ok(InstabilityReport {
        c,
        tol,
        checked: records.len(),
        min_slack,
        violations,
    })
}
