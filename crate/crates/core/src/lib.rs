//! Certificates of robust chaos for the two-dimensional border-collision
//! normal form
//!
//! ```text
//! f(x, y) = (tau_L x + y + 1, -delta_L x)   x <= 0
//!           (tau_R x + y + 1, -delta_R x)   x >= 0
//! ```
//!
//! The modules build the geometric objects behind the chaos argument
//! (forward-invariant and trapping triangles, an invariant expanding cone,
//! invariant manifolds) and check each conclusion numerically at a given
//! parameter point.

pub mod cones;
pub mod error;
pub mod geometry;
pub mod manifolds;
pub mod map;
pub mod polygon;
pub mod sampling;
pub mod spectra;

pub use error::{Error, Result};
pub use map::{EigenData, FixedPoints, Matrix2, Params, Point2, RegimeReport, Side, DEFAULT_ETA};
