use serde::{Deserialize, Serialize};

use super::polyline::{BBox, Polyline};
use crate::error::{Error, Result};
use crate::geometry::kink_points;
use crate::map::{Params, Point2};
use crate::polygon::{crossing_x0, crossing_y0};

/// Consecutive iterations of small bounding-box growth needed to stop.
pub const STALL_ITERATIONS: usize = 5;
pub const DEFAULT_GROWTH_TOL: f64 = 1e-9;
/// Hard cap on polyline size; tracing stops (unconverged) beyond it.
pub const MAX_POINTS: usize = 4_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FixedPointKind {
    X,
    Y,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ManifoldTrace {
    pub polyline: Polyline,
    pub iterations: usize,
    /// Stopped by the growth criterion rather than a cap.
    pub converged: bool,
    /// Bounding-box Hausdorff growth at each iteration.
    pub bbox_growth: Vec<f64>,
}

#[derive(Clone, Copy)]
enum Direction {
    Forward,
    Backward,
}

fn seed(p: &Params, fp: FixedPointKind, dir: Direction) -> Result<[Point2; 2]> {
    let k = kink_points(p)?;
    let fps = p.fixed_points()?;
    let seed = match (dir, fp) {
        (Direction::Forward, FixedPointKind::X) => [k.t, p.step(k.t)],
        (Direction::Forward, FixedPointKind::Y) => [fps.y, k.d],
        (Direction::Backward, FixedPointKind::X) => [k.v, p.apply_inverse(k.v)?],
        (Direction::Backward, FixedPointKind::Y) => [fps.y, k.s],
    };
    if !seed[0].is_finite() || !seed[1].is_finite() {
        return Err(Error::DegenerateSeed("non-finite seed point".into()));
    }
    if seed[0].dist(seed[1]) == 0.0 {
        return Err(Error::DegenerateSeed(format!(
            "fundamental segment of {fp:?} has zero length"
        )));
    }
    Ok(seed)
}

/// One refinement-and-map step. Segments strictly crossing the split line
/// get the crossing point inserted as a kink; interior vertices lying exactly
/// on it become kinks too.
fn advance(
    points: &[Point2],
    kinks: &[bool],
    dir: Direction,
    p: &Params,
) -> (Vec<Point2>, Vec<bool>) {
    let coord = |z: Point2| match dir {
        Direction::Forward => z.x,
        Direction::Backward => z.y,
    };
    let mut out = Vec::with_capacity(points.len() * 2);
    let mut out_k = Vec::with_capacity(points.len() * 2);
    let last = points.len() - 1;
    for i in 0..points.len() {
        let a = points[i];
        let on_line = coord(a) == 0.0 && i != 0 && i != last;
        out.push(a);
        out_k.push(kinks[i] || on_line);
        if i < last {
            let b = points[i + 1];
            if coord(a) * coord(b) < 0.0 {
                out.push(match dir {
                    Direction::Forward => crossing_x0(a, b),
                    Direction::Backward => crossing_y0(a, b),
                });
                out_k.push(true);
            }
        }
    }
    let mut mapped: Vec<Point2> = Vec::with_capacity(out.len());
    let mut mapped_k: Vec<bool> = Vec::with_capacity(out.len());
    for (z, k) in out.into_iter().zip(out_k) {
        let w = match dir {
            Direction::Forward => p.step(z),
            Direction::Backward => p.step_inverse(z),
        };
        if mapped.last() == Some(&w) {
            let j = mapped_k.len() - 1;
            mapped_k[j] |= k;
        } else {
            mapped.push(w);
            mapped_k.push(k);
        }
    }
    (mapped, mapped_k)
}

fn trace(
    p: &Params,
    fp: FixedPointKind,
    dir: Direction,
    max_iter: usize,
    growth_tol: f64,
) -> Result<ManifoldTrace> {
    let op = match dir {
        Direction::Forward => "trace_unstable",
        Direction::Backward => "trace_stable",
    };
    p.require_in_r(op)?;
    let s = seed(p, fp, dir)?;
    let mut points = s.to_vec();
    let mut kinks = vec![false; 2];
    let mut bbox = BBox::of(&points).expect("seed is nonempty");
    let mut bbox_growth = Vec::new();
    let mut stalled = 0;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter && points.len() <= MAX_POINTS {
        let (np, nk) = advance(&points, &kinks, dir, p);
        points = np;
        kinks = nk;
        iterations += 1;
        let next = BBox::of(&points).expect("polyline is nonempty");
        let g = bbox.hausdorff(&next);
        bbox_growth.push(g);
        bbox = next;
        stalled = if g < growth_tol { stalled + 1 } else { 0 };
        if stalled >= STALL_ITERATIONS {
            converged = true;
            break;
        }
    }
    let kink_indices = kinks
        .iter()
        .enumerate()
        .filter_map(|(i, &k)| k.then_some(i))
        .collect();
    Ok(ManifoldTrace {
        polyline: Polyline {
            points,
            kink_indices,
        },
        iterations,
        converged,
        bbox_growth,
    })
}

/// Unstable manifold of `fp`, grown from its fundamental segment by forward
/// iteration.
pub fn trace_unstable(
    p: &Params,
    fp: FixedPointKind,
    max_iter: usize,
    growth_tol: f64,
) -> Result<ManifoldTrace> {
    trace(p, fp, Direction::Forward, max_iter, growth_tol)
}

/// Stable manifold of `fp`, grown by iterating the inverse.
pub fn trace_stable(p: &Params, fp: FixedPointKind, max_iter: usize) -> Result<ManifoldTrace> {
    trace(p, fp, Direction::Backward, max_iter, DEFAULT_GROWTH_TOL)
}
