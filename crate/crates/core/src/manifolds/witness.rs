use serde::Serialize;

use crate::cones::cone_interval;
use crate::error::{Error, Result};
use crate::geometry::build_omega;
use crate::map::{Params, Point2, DEFAULT_ETA};
use crate::polygon::crossing_x0;

type Segment = (Point2, Point2);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub start_segment: Segment,
    /// Number of map applications until the image contains `P`–`Q`.
    pub n_span: usize,
    #[serde(rename = "P")]
    pub p: Point2,
    #[serde(rename = "Q")]
    pub q: Point2,
    #[serde(rename = "crosses_Es")]
    pub crosses_es: bool,
    /// Lengths of the retained segments, starting with the seed.
    pub length_trace: Vec<f64>,
    /// Smallest `a_{i+1} / a_i` over the trace; NaN if no double step was taken.
    pub min_growth_ratio: f64,
}

fn touches_switching(s: Segment) -> bool {
    s.0.x.min(s.1.x) <= 0.0 && s.0.x.max(s.1.x) >= 0.0
}

/// Image of a segment: one piece, or two sharing the image of the `x = 0`
/// crossing.
fn map_segment(p: &Params, (a, b): Segment) -> Vec<Segment> {
    if a.x * b.x < 0.0 {
        let c = p.step(crossing_x0(a, b));
        vec![(p.step(a), c), (c, p.step(b))]
    } else {
        vec![(p.step(a), p.step(b))]
    }
}

fn length(s: &Segment) -> f64 {
    s.0.dist(s.1)
}

/// Longest piece; ties go to the piece whose midpoint has smaller `|x|`.
fn longest(pieces: &[Segment]) -> Segment {
    *pieces
        .iter()
        .min_by(|s, t| {
            length(t)
                .total_cmp(&length(s))
                .then_with(|| {
                    let mx = |s: &Segment| (0.5 * (s.0.x + s.1.x)).abs();
                    mx(s).total_cmp(&mx(t))
                })
        })
        .expect("a segment has at least one image piece")
}

/// Iterates a segment until an image contains a sub-segment from `x = 0` to
/// `y = 0`, keeping the longest piece after each double step.
///
/// `budget` bounds the number of map applications.
pub fn transitivity_witness(p: &Params, seg: Segment, budget: usize) -> Result<WitnessReport> {
    p.require_in_r("transitivity_witness")?;
    let (a, b) = seg;
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::NonFinite("transitivity_witness"));
    }
    if a.dist(b) == 0.0 {
        return Err(Error::DegenerateSeed("zero-length segment".into()));
    }
    let omega = build_omega(p)?;
    if !omega.contains(a, DEFAULT_ETA) || !omega.contains(b, DEFAULT_ETA) {
        return Err(Error::Precondition("segment must lie in Omega".into()));
    }
    let d = b - a;
    if !cone_interval(p)?.contains_direction(d.x, d.y, DEFAULT_ETA) {
        return Err(Error::Precondition("segment slope must lie in K".into()));
    }

    let mut alpha = seg;
    let mut maps = 0;
    let mut length_trace = vec![length(&alpha)];
    loop {
        if maps >= budget {
            return Err(Error::BudgetExhausted {
                budget,
                length_trace,
            });
        }
        let first = map_segment(p, alpha);
        maps += 1;
        if touches_switching(alpha) {
            let c0 = if alpha.0.x * alpha.1.x < 0.0 {
                crossing_x0(alpha.0, alpha.1)
            } else if alpha.0.x == 0.0 {
                alpha.0
            } else {
                alpha.1
            };
            let q = p.step(c0);
            let hit = first
                .iter()
                .map(|&(u, w)| if u == q { w } else { u })
                .find(|&other| q.x * other.x <= 0.0);
            if let Some(other) = hit {
                let pp = if q.x == 0.0 {
                    q
                } else if other.x == 0.0 {
                    other
                } else {
                    crossing_x0(q, other)
                };
                let x = p.fixed_points()?.x;
                let es = Point2::new(1.0, p.eigen_data()?.slope_es_r);
                let side = |z: Point2| es.cross(z - x);
                let min_growth_ratio = length_trace
                    .windows(2)
                    .map(|w| w[1] / w[0])
                    .fold(f64::NAN, f64::min);
                return Ok(WitnessReport {
                    start_segment: seg,
                    n_span: maps,
                    p: pp,
                    q,
                    crosses_es: side(pp) * side(q) < 0.0,
                    length_trace,
                    min_growth_ratio,
                });
            }
        }
        if maps >= budget {
            return Err(Error::BudgetExhausted {
                budget,
                length_trace,
            });
        }
        let second: Vec<Segment> = first.iter().flat_map(|&s| map_segment(p, s)).collect();
        maps += 1;
        alpha = longest(&second);
        length_trace.push(length(&alpha));
    }
}
