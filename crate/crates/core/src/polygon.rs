//! Convex polygons, half-plane distances, and splitting at the switching
//! manifold `x = 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::{Params, Point2, Side};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RegionLabel {
    Omega,
    OmegaTrap,
    Delta0,
    Custom,
}

/// A convex polygon with counterclockwise vertices and one name per vertex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Region {
    label: RegionLabel,
    vertices: Vec<Point2>,
    names: Vec<String>,
}

impl Region {
    /// Builds a region, reorienting clockwise input to counterclockwise.
    pub fn new(label: RegionLabel, vertices: Vec<Point2>) -> Result<Self> {
        let names = (0..vertices.len()).map(|i| format!("v{i}")).collect();
        Self::with_names(label, vertices, names)
    }

    pub fn with_names(
        label: RegionLabel,
        mut vertices: Vec<Point2>,
        mut names: Vec<String>,
    ) -> Result<Self> {
        assert_eq!(vertices.len(), names.len(), "one name per vertex");
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("region vertex"));
        }
        if vertices.len() < 3 {
            return Err(Error::DegenerateRegion);
        }
        let area = signed_area(&vertices);
        if area == 0.0 || !area.is_finite() {
            return Err(Error::DegenerateRegion);
        }
        if area < 0.0 {
            vertices.reverse();
            names.reverse();
        }
        if !is_convex_ccw(&vertices) {
            return Err(Error::NonConvex);
        }
        Ok(Region {
            label,
            vertices,
            names,
        })
    }

    pub fn label(&self) -> RegionLabel {
        self.label
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn area(&self) -> f64 {
        signed_area(&self.vertices)
    }

    /// Minimum signed distance from `z` to the supporting lines of the edges;
    /// positive strictly inside.
    pub fn signed_distance(&self, z: Point2) -> f64 {
        min_edge_distance(&self.vertices, z)
    }

    pub fn contains(&self, z: Point2, tol: f64) -> bool {
        self.signed_distance(z) >= -tol
    }

    pub fn diameter(&self) -> f64 {
        let v = &self.vertices;
        let mut d: f64 = 0.0;
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                d = d.max(v[i].dist(v[j]));
            }
        }
        d
    }
}

/// Shoelace area, positive for counterclockwise order.
pub fn signed_area(poly: &[Point2]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let o = poly[0];
    let mut acc = 0.0;
    for i in 1..n - 1 {
        acc += (poly[i] - o).cross(poly[i + 1] - o);
    }
    0.5 * acc
}

fn is_convex_ccw(poly: &[Point2]) -> bool {
    let n = poly.len();
    let scale = poly
        .iter()
        .fold(0.0f64, |m, p| m.max(p.x.abs()).max(p.y.abs()))
        .max(1.0);
    let tol = 1e-12 * scale * scale;
    (0..n).all(|i| {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let c = poly[(i + 2) % n];
        (b - a).cross(c - b) >= -tol
    })
}

/// Signed distance from `z` to the line through `a` and `b`, positive on the
/// left of the direction `a -> b`.
pub fn line_distance(a: Point2, b: Point2, z: Point2) -> f64 {
    let d = b - a;
    d.cross(z - a) / d.norm()
}

pub(crate) fn min_edge_distance(poly: &[Point2], z: Point2) -> f64 {
    let n = poly.len();
    (0..n)
        .map(|i| line_distance(poly[i], poly[(i + 1) % n], z))
        .fold(f64::INFINITY, f64::min)
}

/// Intersection of the lines `p + s u` and `q + t w`.
pub fn intersect_lines(p: Point2, u: Point2, q: Point2, w: Point2) -> Option<Point2> {
    let den = u.cross(w);
    if den == 0.0 {
        return None;
    }
    let s = (q - p).cross(w) / den;
    Some(p + u * s)
}

/// Point where the segment `a`–`b` meets `x = 0`, with `x` set to exactly zero.
pub(crate) fn crossing_x0(a: Point2, b: Point2) -> Point2 {
    let t = a.x / (a.x - b.x);
    Point2::new(0.0, a.y + t * (b.y - a.y))
}

/// Point where the segment `a`–`b` meets `y = 0`, with `y` set to exactly zero.
pub(crate) fn crossing_y0(a: Point2, b: Point2) -> Point2 {
    let t = a.y / (a.y - b.y);
    Point2::new(a.x + t * (b.x - a.x), 0.0)
}

/// Clips a convex polygon to the closed half-plane of `side`.
///
/// Boundary intersection points are inserted with `x = 0` exactly. Vertices on
/// `x = 0` belong to both halves. Returns `None` for an empty or zero-area
/// result; each returned vertex carries the index of the input edge it came
/// from (`Ok(i)` for an original vertex, `Err(i)` for a crossing on edge `i`).
pub(crate) fn clip_half(poly: &[Point2], side: Side) -> Option<Vec<(Point2, std::result::Result<usize, usize>)>> {
    let inside = |p: Point2| match side {
        Side::Left => p.x <= 0.0,
        Side::Right => p.x >= 0.0,
    };
    let n = poly.len();
    let mut out = Vec::with_capacity(n + 2);
    for i in 0..n {
        let a = poly[i];
        let b = poly[(i + 1) % n];
        let (ia, ib) = (inside(a), inside(b));
        if ia {
            out.push((a, Ok(i)));
        }
        if ia != ib && a.x != 0.0 && b.x != 0.0 {
            out.push((crossing_x0(a, b), Err(i)));
        }
    }
    let pts: Vec<Point2> = out.iter().map(|(p, _)| *p).collect();
    if pts.len() < 3 || signed_area(&pts).abs() == 0.0 {
        return None;
    }
    Some(out)
}

/// Splits a convex polygon at `x = 0` into its left and right pieces.
pub fn split_at_switching(poly: &[Point2]) -> (Option<Vec<Point2>>, Option<Vec<Point2>>) {
    let strip = |v: Option<Vec<(Point2, std::result::Result<usize, usize>)>>| {
        v.map(|v| v.into_iter().map(|(p, _)| p).collect())
    };
    (
        strip(clip_half(poly, Side::Left)),
        strip(clip_half(poly, Side::Right)),
    )
}

/// Image of a convex polygon as a list of convex pieces (at most two).
pub fn image_pieces(p: &Params, poly: &[Point2]) -> Vec<Vec<Point2>> {
    let (left, right) = split_at_switching(poly);
    let mut out = Vec::with_capacity(2);
    if let Some(l) = left {
        out.push(l.into_iter().map(|z| p.apply_branch(Side::Left, z)).collect());
    }
    if let Some(r) = right {
        out.push(r.into_iter().map(|z| p.apply_branch(Side::Right, z)).collect());
    }
    out
}

/// Uniform sample from a triangle via folded barycentric coordinates.
pub fn triangle_point(a: Point2, b: Point2, c: Point2, mut u: f64, mut v: f64) -> Point2 {
    if u + v > 1.0 {
        u = 1.0 - u;
        v = 1.0 - v;
    }
    a + (b - a) * u + (c - a) * v
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Vec<Point2> {
        vec![
            Point2::new(-1.0, -1.0),
            Point2::new(1.0, -1.0),
            Point2::new(1.0, 1.0),
            Point2::new(-1.0, 1.0),
        ]
    }

    #[test]
    fn orientation_is_normalized() {
        let mut cw = square();
        cw.reverse();
        let r = Region::new(RegionLabel::Custom, cw).unwrap();
        assert!(r.area() > 0.0);
        assert_eq!(r.area(), 4.0);
    }

    #[test]
    fn rejects_degenerate_and_nonconvex() {
        let line = vec![Point2::new(0.0, 0.0), Point2::new(1.0, 1.0), Point2::new(2.0, 2.0)];
        assert_eq!(
            Region::new(RegionLabel::Custom, line),
            Err(Error::DegenerateRegion)
        );
        let dart = vec![
            Point2::new(0.0, 0.0),
            Point2::new(2.0, 1.0),
            Point2::new(0.0, 2.0),
            Point2::new(0.5, 1.0),
        ];
        assert_eq!(Region::new(RegionLabel::Custom, dart), Err(Error::NonConvex));
    }

    #[test]
    fn signed_distance_inside_outside() {
        let r = Region::new(RegionLabel::Custom, square()).unwrap();
        assert_eq!(r.signed_distance(Point2::ORIGIN), 1.0);
        assert_eq!(r.signed_distance(Point2::new(0.5, 0.0)), 0.5);
        assert!(r.signed_distance(Point2::new(3.0, 0.0)) < 0.0);
        assert_eq!(r.signed_distance(Point2::new(1.0, 0.0)), 0.0);
    }

    #[test]
    fn split_square_halves() {
        let (l, r) = split_at_switching(&square());
        let (l, r) = (l.unwrap(), r.unwrap());
        assert_eq!(signed_area(&l), 2.0);
        assert_eq!(signed_area(&r), 2.0);
        assert!(l.iter().all(|p| p.x <= 0.0));
        assert!(r.iter().all(|p| p.x >= 0.0));
        assert_eq!(l.iter().filter(|p| p.x == 0.0).count(), 2);
    }

    #[test]
    fn split_one_sided() {
        let tri = vec![Point2::new(1.0, 0.0), Point2::new(2.0, 0.0), Point2::new(1.0, 1.0)];
        let (l, r) = split_at_switching(&tri);
        assert!(l.is_none());
        assert_eq!(r.unwrap(), tri);
        // touching x = 0 at a vertex only
        let tri = vec![Point2::new(0.0, 0.0), Point2::new(2.0, 0.0), Point2::new(1.0, 1.0)];
        let (l, r) = split_at_switching(&tri);
        assert!(l.is_none());
        assert_eq!(r.unwrap().len(), 3);
    }

    #[test]
    fn line_intersection() {
        let z = intersect_lines(
            Point2::new(0.0, 0.0),
            Point2::new(1.0, 1.0),
            Point2::new(2.0, 0.0),
            Point2::new(0.0, 1.0),
        )
        .unwrap();
        assert_eq!(z, Point2::new(2.0, 2.0));
        assert!(intersect_lines(
            Point2::ORIGIN,
            Point2::new(1.0, 0.0),
            Point2::new(0.0, 1.0),
            Point2::new(2.0, 0.0)
        )
        .is_none());
    }

    #[test]
    fn image_area_is_piecewise_determinant() {
        let p = Params::new(1.6, 0.4, -1.6, 0.7);
        let sq = square();
        let pieces = image_pieces(&p, &sq);
        let total: f64 = pieces.iter().map(|q| signed_area(q)).sum();
        assert!((total - (0.4 * 2.0 + 0.7 * 2.0)).abs() < 1e-14);
    }
}
