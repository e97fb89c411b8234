//! Brute-force periodic orbits: Newton on `f^n(z) = z` from a grid, using
//! nothing but direct iteration of the map.

use bcnf_core::{Params, Point2};

pub const TOL: f64 = 1e-9;

/// `f^n` at `z` together with the Jacobian of the branch sequence taken.
fn iterate_with_jacobian(p: &Params, z: Point2, n: usize) -> (Point2, [[f64; 2]; 2]) {
    let mut w = z;
    let mut j = [[1.0, 0.0], [0.0, 1.0]];
    for _ in 0..n {
        let (tau, delta) = if w.x <= 0.0 {
            (p.tau_l, p.delta_l)
        } else {
            (p.tau_r, p.delta_r)
        };
        j = [
            [tau * j[0][0] + j[1][0], tau * j[0][1] + j[1][1]],
            [-delta * j[0][0], -delta * j[0][1]],
        ];
        w = Point2::new(tau * w.x + w.y + 1.0, -delta * w.x);
    }
    (w, j)
}

fn newton(p: &Params, mut z: Point2, n: usize) -> Option<Point2> {
    for _ in 0..12 {
        let (fz, j) = iterate_with_jacobian(p, z, n);
        let g = fz - z;
        if g.norm() < 1e-13 * (1.0 + z.norm()) {
            return Some(z);
        }
        let (a, b, c, d) = (j[0][0] - 1.0, j[0][1], j[1][0], j[1][1] - 1.0);
        let det = a * d - b * c;
        if det.abs() < 1e-14 {
            return None;
        }
        z = Point2::new(z.x - (d * g.x - b * g.y) / det, z.y - (a * g.y - c * g.x) / det);
        if !z.is_finite() || z.norm() > 1e6 {
            return None;
        }
    }
    None
}

fn orbit(p: &Params, z: Point2, n: usize) -> Vec<Point2> {
    let mut pts = vec![z];
    for _ in 1..n {
        pts.push(p.step(*pts.last().unwrap()));
    }
    pts
}

fn minimal_period(p: &Params, z: Point2, n: usize) -> usize {
    let pts = orbit(p, z, n);
    (1..n).find(|&k| n % k == 0 && pts[k].dist(z) < TOL).unwrap_or(n)
}

pub fn same_orbit(a: &[Point2], b: &[Point2]) -> bool {
    a.len() == b.len() && a.iter().all(|u| b.iter().any(|v| u.dist(*v) < TOL))
}

pub fn brute_force(p: &Params, n: usize, box_min: Point2, box_max: Point2, grid: usize) -> Vec<Vec<Point2>> {
    let mut found: Vec<Vec<Point2>> = Vec::new();
    for i in 0..grid {
        for k in 0..grid {
            let z = Point2::new(
                box_min.x + (i as f64 + 0.5) / grid as f64 * (box_max.x - box_min.x),
                box_min.y + (k as f64 + 0.5) / grid as f64 * (box_max.y - box_min.y),
            );
            let Some(w) = newton(p, z, n) else { continue };
            if minimal_period(p, w, n) != n {
                continue;
            }
            let o = orbit(p, w, n);
            if !found.iter().any(|f| same_orbit(f, &o)) {
                found.push(o);
            }
        }
    }
    found
}
