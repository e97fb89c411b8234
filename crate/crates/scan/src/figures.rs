//! Data behind the reference figures, as CSV files or one JSON document.
//!
//! CSV schemas (one file each, header row first):
//!
//! * `<fig>_points.csv`: `label,x,y`
//! * `<fig>_<polyline>.csv`: `index,x,y,kink`
//! * `<fig>_regions.csv`: `region,piece,vertex,label,x,y`
//! * `<fig>_orbits.csv`: `word,period,index,x,y,spectral_radius,admissible,boundary_flag`

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::Context;
use bcnf_core::geometry::{build_omega, build_trap, kink_points};
use bcnf_core::manifolds::{trace_stable, trace_unstable, FixedPointKind, Polyline, DEFAULT_GROWTH_TOL};
use bcnf_core::polygon::image_pieces;
use bcnf_core::spectra::{enumerate_periodic_orbits, OrbitRecord};
use bcnf_core::{Params, Point2};
use serde::Serialize;

use crate::config::Format;
use crate::table::{csv_string, num};

/// Iterations for the "initial portions" of the manifolds.
pub const FIG1_ITERATIONS: usize = 6;
/// Cap on the outward trace of `W^u(X)` for the orbit figure.
pub const FIG3_MAX_ITER: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    Fig1,
    Fig3,
    Fig4,
    Fig5,
}

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig1 => "fig1",
            Figure::Fig3 => "fig3",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabeledPoint {
    pub label: String,
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionData {
    pub name: String,
    /// Convex pieces; each vertex carries a label, possibly empty.
    pub pieces: Vec<Vec<LabeledPoint>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FigureData {
    pub schema_version: u32,
    pub figure: Figure,
    pub params: Params,
    pub points: Vec<LabeledPoint>,
    pub polylines: Vec<(String, Polyline)>,
    pub regions: Vec<RegionData>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub orbits: Vec<OrbitRecord>,
}

fn lp(label: &str, z: Point2) -> LabeledPoint {
    LabeledPoint {
        label: label.into(),
        x: z.x,
        y: z.y,
    }
}

fn unlabeled(poly: &[Point2]) -> Vec<LabeledPoint> {
    poly.iter().map(|&z| lp("", z)).collect()
}

fn region_with_image(p: &Params, name: &str, r: &bcnf_core::polygon::Region) -> Vec<RegionData> {
    let pieces = vec![r
        .vertices()
        .iter()
        .zip(r.names())
        .map(|(&z, n)| lp(n, z))
        .collect()];
    let image = image_pieces(p, r.vertices()).iter().map(|q| unlabeled(q)).collect();
    vec![
        RegionData {
            name: name.into(),
            pieces,
        },
        RegionData {
            name: format!("f({name})"),
            pieces: image,
        },
    ]
}

fn require_in_r(p: &Params, which: Figure) -> anyhow::Result<()> {
    if !p.classify().in_r {
        anyhow::bail!("{} requires parameters in the region R", which.name());
    }
    Ok(())
}

pub fn figure_data(p: &Params, which: Figure, max_period: usize, eps: f64) -> anyhow::Result<FigureData> {
    let mut fig = FigureData {
        schema_version: crate::suite::SCHEMA_VERSION,
        figure: which,
        params: *p,
        points: Vec::new(),
        polylines: Vec::new(),
        regions: Vec::new(),
        orbits: Vec::new(),
    };
    match which {
        Figure::Fig1 => {
            require_in_r(p, which)?;
            let k = kink_points(p)?;
            let fps = p.fixed_points()?;
            let f_s = p.apply(k.s)?;
            fig.points = vec![
                lp("Y", fps.y),
                lp("D", k.d),
                lp("S", k.s),
                lp("C", k.c),
                lp("f(S)", f_s),
                lp("f(D)", k.f_d),
                lp("f^-1(D)", k.f_inv_d),
                lp("X", fps.x),
                lp("T", k.t),
                lp("V", k.v),
            ];
            for (name, fp) in [("x", FixedPointKind::X), ("y", FixedPointKind::Y)] {
                let u = trace_unstable(p, fp, FIG1_ITERATIONS, DEFAULT_GROWTH_TOL)?;
                let s = trace_stable(p, fp, FIG1_ITERATIONS)?;
                fig.polylines.push((format!("wu_{name}"), u.polyline));
                fig.polylines.push((format!("ws_{name}"), s.polyline));
            }
        }
        Figure::Fig3 => {
            require_in_r(p, which)?;
            let e = enumerate_periodic_orbits(p, max_period)?;
            // the left fixed point sits outside the attractor
            fig.orbits = e.records.into_iter().filter(|r| r.word != "L").collect();
            let w = trace_unstable(p, FixedPointKind::X, FIG3_MAX_ITER, DEFAULT_GROWTH_TOL)?;
            fig.polylines.push(("wu_x".into(), w.polyline));
            fig.points.push(lp("X", p.fixed_points()?.x));
        }
        Figure::Fig4 => {
            let omega = build_omega(p)?;
            fig.regions = region_with_image(p, "omega", &omega);
        }
        Figure::Fig5 => {
            let t = build_trap(p, eps)?;
            fig.regions = region_with_image(p, "omega_trap", &t.region);
            fig.points = vec![
                lp("B_eps", t.b_eps),
                lp("D_eps", t.d_eps),
                lp("F_eps", t.f_eps),
                lp("G_eps", t.g_eps),
            ];
        }
    }
    Ok(fig)
}

impl FigureData {
    /// `(file name, contents)` for every CSV file of the figure.
    pub fn csv_files(&self) -> Vec<(String, String)> {
        let name = self.figure.name();
        let mut files = Vec::new();
        if !self.points.is_empty() {
            let rows = self.points.iter().map(|q| vec![q.label.clone(), num(q.x), num(q.y)]);
            files.push((format!("{name}_points.csv"), csv_string(&["label", "x", "y"], rows)));
        }
        for (pname, line) in &self.polylines {
            let kink = line.is_kink();
            let rows = line.points.iter().enumerate().map(|(i, z)| {
                vec![i.to_string(), num(z.x), num(z.y), kink[i].to_string()]
            });
            files.push((
                format!("{name}_{pname}.csv"),
                csv_string(&["index", "x", "y", "kink"], rows),
            ));
        }
        if !self.regions.is_empty() {
            let mut rows = Vec::new();
            for r in &self.regions {
                for (k, piece) in r.pieces.iter().enumerate() {
                    for (v, q) in piece.iter().enumerate() {
                        rows.push(vec![
                            r.name.clone(),
                            k.to_string(),
                            v.to_string(),
                            q.label.clone(),
                            num(q.x),
                            num(q.y),
                        ]);
                    }
                }
            }
            files.push((
                format!("{name}_regions.csv"),
                csv_string(&["region", "piece", "vertex", "label", "x", "y"], rows),
            ));
        }
        if !self.orbits.is_empty() {
            files.push((format!("{name}_orbits.csv"), orbits_csv(&self.orbits)));
        }
        files
    }
}

/// One row per orbit point.
pub fn orbits_csv(records: &[OrbitRecord]) -> String {
    let header = [
        "word", "period", "index", "x", "y", "spectral_radius", "admissible", "boundary_flag",
    ];
    let rows = records.iter().flat_map(|r| {
        r.points.iter().enumerate().map(move |(i, z)| {
            vec![
                r.word.clone(),
                r.period().to_string(),
                i.to_string(),
                num(z.x),
                num(z.y),
                num(r.spectral_radius),
                r.admissible.to_string(),
                r.boundary_flag.to_string(),
            ]
        })
    });
    csv_string(&header, rows)
}

/// Writes the figure's files into `dir` and returns their paths.
pub fn emit_figure_data(
    p: &Params,
    which: Figure,
    max_period: usize,
    eps: f64,
    format: Format,
    dir: &Path,
) -> anyhow::Result<Vec<PathBuf>> {
    let fig = figure_data(p, which, max_period, eps)?;
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let files = match format {
        Format::Csv => fig.csv_files(),
        Format::Json => vec![(
            format!("{}.json", which.name()),
            serde_json::to_string_pretty(&fig)? + "\n",
        )],
    };
    let mut paths = Vec::with_capacity(files.len());
    for (name, contents) in files {
        let path = dir.join(name);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        paths.push(path);
    }
    Ok(paths)
}
