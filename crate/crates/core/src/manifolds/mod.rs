//! Piecewise-linear invariant manifolds, forward images of the triangle
//! `X T Z`, and the segment-growth transitivity witness.

mod delta;
mod polyline;
mod trace;
mod witness;

pub use delta::{delta_sets, vertex_hausdorff, DeltaSets};
pub use polyline::{point_segment_distance, BBox, Polyline, SegmentIndex};
pub use trace::{
    trace_stable, trace_unstable, FixedPointKind, ManifoldTrace, DEFAULT_GROWTH_TOL, MAX_POINTS,
    STALL_ITERATIONS,
};
pub use witness::{transitivity_witness, WitnessReport};
