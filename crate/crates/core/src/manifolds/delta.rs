use rayon::prelude::*;
use serde::Serialize;

use super::polyline::{Polyline, SegmentIndex};
use crate::error::{Error, Result};
use crate::geometry::homoclinic_data;
use crate::map::{Params, Point2};
use crate::polygon::{image_pieces, signed_area, Region, RegionLabel};

/// Forward images of the triangle `X T Z`, each stored as convex pieces.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaSets {
    pub delta0: Region,
    /// `iterates[n]` holds the pieces of `f^n(Delta_0)`.
    pub iterates: Vec<Vec<Vec<Point2>>>,
    pub areas: Vec<f64>,
    pub delta_max: f64,
    /// `areas[n + 1] <= delta_max * areas[n] + 1e-12` at every step.
    pub area_decay_holds: bool,
}

impl DeltaSets {
    pub fn vertices(&self, n: usize) -> impl Iterator<Item = Point2> + '_ {
        self.iterates[n].iter().flatten().copied()
    }
}

pub fn delta_sets(p: &Params, n: usize) -> Result<DeltaSets> {
    let h = homoclinic_data(p)?;
    let z = h.z.ok_or(Error::NoHomoclinic)?;
    let x = p.fixed_points()?.x;
    let delta0 = Region::with_names(
        RegionLabel::Delta0,
        vec![x, h.t, z],
        vec!["X".into(), "T".into(), "Z".into()],
    )?;
    let mut iterates = Vec::with_capacity(n + 1);
    iterates.push(vec![delta0.vertices().to_vec()]);
    for i in 0..n {
        let next: Vec<Vec<Point2>> = iterates[i]
            .iter()
            .flat_map(|poly: &Vec<Point2>| image_pieces(p, poly))
            .collect();
        iterates.push(next);
    }
    let areas: Vec<f64> = iterates
        .iter()
        .map(|pieces| pieces.iter().map(|q| signed_area(q)).sum())
        .collect();
    let delta_max = p.delta_l.max(p.delta_r);
    let area_decay_holds = areas.windows(2).all(|w| w[1] <= delta_max * w[0] + 1e-12);
    Ok(DeltaSets {
        delta0,
        iterates,
        areas,
        delta_max,
        area_decay_holds,
    })
}

/// Largest distance from any vertex of `f^n(Delta_0)` to the polyline.
pub fn vertex_hausdorff(sets: &DeltaSets, n: usize, line: &Polyline) -> f64 {
    let idx = SegmentIndex::new(line);
    let verts: Vec<Point2> = sets.vertices(n).collect();
    verts
        .par_iter()
        .map(|&z| idx.distance(z))
        .reduce(|| 0.0, f64::max)
}
