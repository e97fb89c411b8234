use serde::Serialize;

use crate::map::Point2;

/// Ordered vertices with the indices of the kinks among them.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Polyline {
    pub points: Vec<Point2>,
    pub kink_indices: Vec<usize>,
}

impl Polyline {
    pub fn segments(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        self.points.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn kinks(&self) -> impl Iterator<Item = Point2> + '_ {
        self.kink_indices.iter().map(|&i| self.points[i])
    }

    pub fn is_kink(&self) -> Vec<bool> {
        let mut flags = vec![false; self.points.len()];
        for &i in &self.kink_indices {
            flags[i] = true;
        }
        flags
    }

    pub fn bbox(&self) -> Option<BBox> {
        BBox::of(&self.points)
    }

    /// Total arc length.
    pub fn length(&self) -> f64 {
        self.segments().map(|(a, b)| a.dist(b)).sum()
    }

    /// Brute-force distance from `z` to the polyline.
    pub fn distance_to(&self, z: Point2) -> f64 {
        match self.points.len() {
            0 => f64::INFINITY,
            1 => self.points[0].dist(z),
            _ => self
                .segments()
                .map(|(a, b)| point_segment_distance(z, a, b))
                .fold(f64::INFINITY, f64::min),
        }
    }
}

pub fn point_segment_distance(z: Point2, a: Point2, b: Point2) -> f64 {
    let d = b - a;
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return z.dist(a);
    }
    let t = ((z - a).dot(d) / len2).clamp(0.0, 1.0);
    z.dist(a + d * t)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BBox {
    pub min: Point2,
    pub max: Point2,
}

impl BBox {
    pub fn of(points: &[Point2]) -> Option<BBox> {
        let first = *points.first()?;
        Some(points.iter().fold(
            BBox {
                min: first,
                max: first,
            },
            |b, p| BBox {
                min: Point2::new(b.min.x.min(p.x), b.min.y.min(p.y)),
                max: Point2::new(b.max.x.max(p.x), b.max.y.max(p.y)),
            },
        ))
    }

    fn corners(&self) -> [Point2; 4] {
        [
            self.min,
            Point2::new(self.max.x, self.min.y),
            self.max,
            Point2::new(self.min.x, self.max.y),
        ]
    }

    pub fn distance_to(&self, z: Point2) -> f64 {
        let dx = (self.min.x - z.x).max(z.x - self.max.x).max(0.0);
        let dy = (self.min.y - z.y).max(z.y - self.max.y).max(0.0);
        dx.hypot(dy)
    }

    /// Hausdorff distance between the two filled boxes.
    pub fn hausdorff(&self, other: &BBox) -> f64 {
        let one = |a: &BBox, b: &BBox| {
            a.corners()
                .iter()
                .map(|&c| b.distance_to(c))
                .fold(0.0, f64::max)
        };
        one(self, other).max(one(other, self))
    }

    pub fn diameter(&self) -> f64 {
        self.min.dist(self.max)
    }
}

/// Segments steeper than this (in sweep coordinates) are never stored as
/// spanning, which keeps the vertical-gap lower bound useful.
const STEEP: f64 = 10.0;
const MAX_LEAVES: usize = 1 << 21;

/// Nearest-segment index for a polyline that does not cross itself.
///
/// A segment tree over the dominant axis: each segment is stored at the
/// nodes whose whole abscissa interval it spans. Without crossings the
/// pieces at a node keep one vertical order across the node, so a binary
/// search plus a short walk finds the nearest. End fragments shorter than a
/// leaf go into per-leaf lists sorted by their lowest height.
#[derive(Debug, Clone)]
pub struct SegmentIndex<'a> {
    line: &'a Polyline,
    /// Sweep along `y` instead of `x`.
    transpose: bool,
    x0: f64,
    /// Leaf width.
    w: f64,
    levels: u32,
    /// Cosine of the steepest stored spanning piece.
    cos: f64,
    node_start: Vec<u32>,
    node: Vec<u32>,
    leaf_start: Vec<u32>,
    leaf: Vec<(f64, u32)>,
    /// Largest height range of a fragment, per leaf.
    leaf_range: Vec<f64>,
}

fn csr(counts: &[u32]) -> Vec<u32> {
    let mut start = Vec::with_capacity(counts.len() + 1);
    let mut acc: u32 = 0;
    start.push(0);
    for &c in counts {
        acc = acc.checked_add(c).expect("segment index overflow");
        start.push(acc);
    }
    start
}

enum Slot {
    Node(usize),
    Leaf(usize, f64, f64),
}

impl<'a> SegmentIndex<'a> {
    pub fn new(line: &'a Polyline) -> Self {
        let lx: f64 = line.segments().map(|(a, b)| (b.x - a.x).abs()).sum();
        let ly: f64 = line.segments().map(|(a, b)| (b.y - a.y).abs()).sum();
        let transpose = ly > lx;
        let tr = |p: Point2| if transpose { Point2::new(p.y, p.x) } else { p };
        let pts: Vec<Point2> = line.points.iter().map(|&p| tr(p)).collect();
        let nseg = pts.len().saturating_sub(1);

        let (xmin, xmax) = pts
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p.x), hi.max(p.x)));
        let (xmin, xmax) = if xmin.is_finite() { (xmin, xmax) } else { (0.0, 0.0) };
        let nleaf = (2 * nseg).next_power_of_two().clamp(1, MAX_LEAVES);
        let levels = nleaf.trailing_zeros();
        let w = ((xmax - xmin) / nleaf as f64).max(1e-300);
        let edge = |j: usize| xmin + j as f64 * w;
        let leaf_of = |x: f64| (((x - xmin) / w).floor().max(0.0) as usize).min(nleaf - 1);

        let visit = |k: usize, f: &mut dyn FnMut(Slot)| {
            let (a, b) = (pts[k], pts[k + 1]);
            let (l, r) = if a.x <= b.x { (a, b) } else { (b, a) };
            let dx = r.x - l.x;
            let steep = !((r.y - l.y).abs() <= STEEP * dx);
            let (ja, jb) = (leaf_of(l.x), leaf_of(r.x));
            let frag = |j: usize| {
                if steep {
                    Slot::Leaf(j, l.y.min(r.y), l.y.max(r.y))
                } else {
                    let y = |x: f64| l.y + (x.clamp(l.x, r.x) - l.x) * (r.y - l.y) / dx;
                    let (u, v) = (y(edge(j)), y(edge(j + 1)));
                    Slot::Leaf(j, u.min(v), u.max(v))
                }
            };
            if steep {
                for j in ja..=jb {
                    f(frag(j));
                }
                return;
            }
            let lo = if l.x <= edge(ja) { ja } else { ja + 1 };
            let hi = if r.x >= edge(jb + 1) { jb + 1 } else { jb };
            if lo >= hi {
                for j in ja..=jb {
                    f(frag(j));
                }
                return;
            }
            if lo > ja {
                f(frag(ja));
            }
            if hi <= jb {
                f(frag(jb));
            }
            // canonical cover of leaves lo..hi
            let (mut u, mut v) = (lo + nleaf, hi + nleaf);
            while u < v {
                if u & 1 == 1 {
                    f(Slot::Node(u));
                    u += 1;
                }
                if v & 1 == 1 {
                    v -= 1;
                    f(Slot::Node(v));
                }
                u >>= 1;
                v >>= 1;
            }
        };

        let mut node_n = vec![0u32; 2 * nleaf];
        let mut leaf_n = vec![0u32; nleaf];
        for k in 0..nseg {
            visit(k, &mut |s| match s {
                Slot::Node(v) => node_n[v] += 1,
                Slot::Leaf(j, ..) => leaf_n[j] += 1,
            });
        }
        let node_start = csr(&node_n);
        let leaf_start = csr(&leaf_n);
        let mut node = vec![0u32; node_start[2 * nleaf] as usize];
        let mut leaf = vec![(0.0, 0u32); leaf_start[nleaf] as usize];
        let mut leaf_range = vec![0.0f64; nleaf];
        let mut max_slope: f64 = 0.0;
        let (mut fnode, mut fleaf) = (node_start.clone(), leaf_start.clone());
        for k in 0..nseg {
            visit(k, &mut |s| match s {
                Slot::Node(v) => {
                    node[fnode[v] as usize] = k as u32;
                    fnode[v] += 1;
                    let (a, b) = (pts[k], pts[k + 1]);
                    max_slope = max_slope.max(((b.y - a.y) / (b.x - a.x)).abs());
                }
                Slot::Leaf(j, lo, hi) => {
                    leaf[fleaf[j] as usize] = (lo, k as u32);
                    fleaf[j] += 1;
                    leaf_range[j] = leaf_range[j].max(hi - lo);
                }
            });
        }
        let y_at = |k: u32, x: f64| {
            let (a, b) = (pts[k as usize], pts[k as usize + 1]);
            a.y + (x - a.x) * (b.y - a.y) / (b.x - a.x)
        };
        let mut keyed: Vec<(f64, u32)> = Vec::new();
        for v in 1..2 * nleaf {
            let range = node_start[v] as usize..node_start[v + 1] as usize;
            if range.len() < 2 {
                continue;
            }
            let (e0, e1) = node_span(v, levels, &edge);
            let xc = 0.5 * (e0 + e1);
            keyed.clear();
            keyed.extend(node[range.clone()].iter().map(|&k| (y_at(k, xc), k)));
            keyed.sort_unstable_by(|a, b| a.0.total_cmp(&b.0));
            for (slot, &(_, k)) in node[range].iter_mut().zip(&keyed) {
                *slot = k;
            }
        }
        for j in 0..nleaf {
            leaf[leaf_start[j] as usize..leaf_start[j + 1] as usize]
                .sort_unstable_by(|u, v| u.0.total_cmp(&v.0));
        }

        SegmentIndex {
            line,
            transpose,
            x0: xmin,
            w,
            levels,
            cos: 1.0 / max_slope.hypot(1.0),
            node_start,
            node,
            leaf_start,
            leaf,
            leaf_range,
        }
    }

    fn tr(&self, p: Point2) -> Point2 {
        if self.transpose {
            Point2::new(p.y, p.x)
        } else {
            p
        }
    }

    fn nleaf(&self) -> usize {
        1 << self.levels
    }

    fn edge(&self, j: usize) -> f64 {
        self.x0 + j as f64 * self.w
    }

    fn seg(&self, k: u32) -> (Point2, Point2) {
        let k = k as usize;
        (self.tr(self.line.points[k]), self.tr(self.line.points[k + 1]))
    }

    fn try_seg(&self, k: u32, z: Point2, best: &mut f64) {
        let (a, b) = self.seg(k);
        let d = point_segment_distance(z, a, b);
        if d < *best {
            *best = d;
        }
    }

    fn search_node(&self, v: usize, z: Point2, best: &mut f64) {
        let ks = &self.node[self.node_start[v] as usize..self.node_start[v + 1] as usize];
        if ks.is_empty() {
            return;
        }
        let (e0, e1) = node_span(v, self.levels, &|j| self.edge(j));
        let xs = z.x.clamp(e0, e1);
        // distances from z exceed those from (xs, z.y) by at most gx
        let gx = (z.x - xs).abs();
        if gx >= *best {
            return;
        }
        let y_at = |k: u32| {
            let (a, b) = self.seg(k);
            a.y + (xs - a.x) * (b.y - a.y) / (b.x - a.x)
        };
        let i = ks.partition_point(|&k| y_at(k) < z.y);
        for &k in &ks[i..] {
            if (y_at(k) - z.y) * self.cos - gx >= *best {
                break;
            }
            self.try_seg(k, z, best);
        }
        for &k in ks[..i].iter().rev() {
            if (z.y - y_at(k)) * self.cos - gx >= *best {
                break;
            }
            self.try_seg(k, z, best);
        }
    }

    fn search_leaf(&self, j: usize, z: Point2, best: &mut f64) {
        let part = &self.leaf[self.leaf_start[j] as usize..self.leaf_start[j + 1] as usize];
        let lo = z.y - *best - self.leaf_range[j];
        let i = if lo.is_finite() {
            part.partition_point(|e| e.0 < lo)
        } else {
            0
        };
        for &(ymin, k) in &part[i..] {
            if ymin > z.y + *best {
                break;
            }
            self.try_seg(k, z, best);
        }
    }

    /// Distance from `z` to the nearest segment; the same value as
    /// `Polyline::distance_to`.
    pub fn distance(&self, z: Point2) -> f64 {
        if self.line.points.len() < 2 {
            return self.line.distance_to(z);
        }
        let z = self.tr(z);
        let n = self.nleaf();
        let i = (((z.x - self.x0) / self.w).floor().max(0.0) as usize).min(n - 1);
        let mut best = f64::INFINITY;
        for h in 0..=self.levels {
            self.search_node((i + n) >> h, z, &mut best);
        }
        self.search_leaf(i, z, &mut best);

        let gap = |j: usize| (self.edge(j) - z.x).max(z.x - self.edge(j + 1)).max(0.0);
        // Nodes off the path of `i` are searched once, from their leaf nearest `i`.
        let off_path = |j: usize, left: bool, best: &mut f64| {
            self.search_leaf(j, z, best);
            for h in 0..self.levels {
                let v = (j + n) >> h;
                if v == (i + n) >> h {
                    break;
                }
                let nearest = if left { (j + 1) % (1 << h) == 0 } else { j % (1 << h) == 0 };
                if !nearest {
                    break;
                }
                self.search_node(v, z, best);
            }
        };
        let (mut l, mut r) = (i, i + 1);
        loop {
            let go_l = l > 0 && gap(l - 1) < best;
            let go_r = r < n && gap(r) < best;
            if !go_l && !go_r {
                break;
            }
            if go_l {
                l -= 1;
                off_path(l, true, &mut best);
            }
            if go_r {
                off_path(r, false, &mut best);
                r += 1;
            }
        }
        best
    }
}

/// Abscissa interval of tree node `v`.
fn node_span(v: usize, levels: u32, edge: &dyn Fn(usize) -> f64) -> (f64, f64) {
    let h = levels - (usize::BITS - 1 - v.leading_zeros());
    let first = (v << h) - (1 << levels);
    (edge(first), edge(first + (1 << h)))
}
