//! Construction points, the forward-invariant triangle `Omega`, the trapping
//! triangle `Omega_trap`, and vertex-image certificates.
//!
//! Containment of a convex region's image is checked by splitting the region
//! at `x = 0`: each piece is convex and mapped by a single affine branch, so
//! its image is the convex hull of the mapped vertices, and it suffices to
//! check those vertices against the half-planes of the target region.

use serde::Serialize;

use crate::error::{EpsTrial, Error, Result};
use crate::map::{EigenData, FixedPoints, Params, Point2, Side};
use crate::polygon::{clip_half, intersect_lines, line_distance, Region, RegionLabel};

/// Smallest `eps` tried by the automatic trapping search.
pub const MIN_TRAP_EPS: f64 = 1e-12;
/// Default `eps` for `Omega_trap`.
pub const DEFAULT_TRAP_EPS: f64 = 1e-3;

/// Named points of the construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KinkSet {
    /// First kink of the right branch of `W^u(Y)`, on `y = 0`.
    pub d: Point2,
    /// First kink of the right branch of `W^s(Y)`, on `x = 0`.
    pub s: Point2,
    /// Where the segment from `S` to `f^-1(S)` crosses `y = 0`.
    pub c: Point2,
    /// Where `E^u(X)` crosses `y = 0`.
    pub t: Point2,
    /// Where `E^s(X)` crosses `x = 0`.
    pub v: Point2,
    /// Where the segment from `D` to `f(D)` crosses `x = 0`.
    pub u: Point2,
    /// Point of `Y`–`D` with `B`–`f(D)` parallel to `Y`–`S`.
    pub b: Point2,
    pub f_inv_d: Point2,
    pub f_inv_s: Point2,
    pub f_d: Point2,
}

pub fn kink_points(p: &Params) -> Result<KinkSet> {
    p.require_cond1("kink_points")?;
    let e = p.eigen_data()?;
    let fp = p.fixed_points()?;
    let (tau_r, delta_r) = (p.tau_r, p.delta_r);

    let d1 = 1.0 / (1.0 - e.lambda_l_s);
    let s2 = -e.lambda_l_u / (e.lambda_l_u - 1.0);
    let c1 = -s2 / (delta_r - tau_r + delta_r / s2);
    let t1 = fp.x.x * (1.0 + e.lambda_r_u.abs());
    let v2 = -e.lambda_r_u / (e.lambda_r_u - 1.0);
    let (ls, lu) = (e.lambda_r_s, e.lambda_r_u);
    let u2 = -ls * lu * d1 / (1.0 - ls - lu - 1.0 / d1);

    let d = Point2::new(d1, 0.0);
    let s = Point2::new(0.0, s2);
    let f_d = p.step(d);
    let b = intersect_lines(
        f_d,
        Point2::new(1.0, e.slope_es_l),
        fp.y,
        Point2::new(1.0, e.slope_eu_l),
    )
    .ok_or_else(|| Error::Precondition("eigen-directions of A_L are parallel".into()))?;

    Ok(KinkSet {
        d,
        s,
        c: Point2::new(c1, 0.0),
        t: Point2::new(t1, 0.0),
        v: Point2::new(0.0, v2),
        u: Point2::new(0.0, u2),
        b,
        f_inv_d: p.apply_inverse(d)?,
        f_inv_s: p.apply_inverse(s)?,
        f_d,
    })
}

/// `C_1 - D_1` from the factorized form `phi / ((tau_L - delta_L - 1)(delta_R - tau_R lambda_L^u))`.
pub fn c_minus_d_factored(p: &Params) -> Result<f64> {
    p.require_cond1("c_minus_d_factored")?;
    let e = p.eigen_data()?;
    let phi = p.phi().ok_or(Error::ComplexEigenvalues {
        tau: p.tau_l,
        delta: p.delta_l,
    })?;
    Ok(phi / ((p.tau_l - p.delta_l - 1.0) * (p.delta_r - p.tau_r * e.lambda_l_u)))
}

/// The triangle `B D f(D)`.
pub fn build_omega(p: &Params) -> Result<Region> {
    p.require_in_r("build_omega")?;
    let k = kink_points(p)?;
    Region::with_names(
        RegionLabel::Omega,
        vec![k.b, k.d, k.f_d],
        vec!["B".into(), "D".into(), "f(D)".into()],
    )
}

/// `B_eps = B - eps (D - Y) - eps^2 (S - Y)`.
pub fn perturbed_b(k: &KinkSet, y: Point2, eps: f64) -> Point2 {
    k.b - (k.d - y) * eps - (k.s - y) * (eps * eps)
}

/// `Omega_trap` with its construction points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrapRegion {
    pub eps: f64,
    pub region: Region,
    pub b_eps: Point2,
    pub d_eps: Point2,
    pub f_eps: Point2,
    /// Where `B_eps`–`D_eps` crosses `x = 0`.
    pub g_eps: Point2,
}

pub fn build_trap(p: &Params, eps: f64) -> Result<TrapRegion> {
    p.require_in_r("build_trap")?;
    if !(eps > 0.0) || !eps.is_finite() {
        return Err(Error::Precondition(format!("eps must be positive, got {eps}")));
    }
    let k = kink_points(p)?;
    let y = p.fixed_points()?.y;
    let along_u = k.d - y;
    let along_s = k.s - y;
    let b_eps = perturbed_b(&k, y, eps);

    let d_eps = Point2::new(b_eps.x - b_eps.y * along_u.x / along_u.y, 0.0);
    let f_eps = Point2::new(0.0, b_eps.y - b_eps.x * along_s.y / along_s.x);
    let g_eps = Point2::new(0.0, b_eps.y - b_eps.x * along_u.y / along_u.x);

    let region = Region::with_names(
        RegionLabel::OmegaTrap,
        vec![b_eps, d_eps, f_eps],
        vec!["B_eps".into(), "D_eps".into(), "F_eps".into()],
    )?;
    Ok(TrapRegion {
        eps,
        region,
        b_eps,
        d_eps,
        f_eps,
        g_eps,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexImage {
    pub label: String,
    pub image: Point2,
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Certificate {
    pub passed: bool,
    /// Minimum signed half-plane distance of the image vertices; positive
    /// strictly inside.
    pub margin: f64,
    pub details: Vec<VertexImage>,
}

/// Maps each vertex of each half-plane piece of `region` and measures it
/// against `region`.
fn image_vertex_report(p: &Params, region: &Region) -> Vec<VertexImage> {
    let verts = region.vertices();
    let names = region.names();
    let n = verts.len();
    let mut details = Vec::new();
    for side in [Side::Left, Side::Right] {
        let Some(piece) = clip_half(verts, side) else {
            continue;
        };
        for (z, origin) in piece {
            let name = match origin {
                Ok(i) => names[i].clone(),
                Err(i) => format!("{}|{}@x=0", names[i], names[(i + 1) % n]),
            };
            let image = p.apply_branch(side, z);
            details.push(VertexImage {
                label: format!("{}:f({name})", side.symbol()),
                image,
                distance: region.signed_distance(image),
            });
        }
    }
    details
}

fn certificate(details: Vec<VertexImage>, accept: impl Fn(f64) -> bool) -> Certificate {
    let margin = details
        .iter()
        .map(|d| d.distance)
        .fold(f64::INFINITY, f64::min);
    Certificate {
        passed: accept(margin),
        margin,
        details,
    }
}

/// Checks `f(region) ⊆ region` up to `eta`.
pub fn verify_forward_invariance(p: &Params, region: &Region, eta: f64) -> Result<Certificate> {
    if !p.is_finite() {
        return Err(Error::NonFinite("verify_forward_invariance"));
    }
    let details = image_vertex_report(p, region);
    Ok(certificate(details, |m| m >= -eta))
}

/// Checks `f(region) ⊆ int(region)`: every image vertex strictly inside.
pub fn verify_strict_containment(p: &Params, region: &Region) -> Certificate {
    certificate(image_vertex_report(p, region), |m| m > 0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrapCertificate {
    pub trap: TrapRegion,
    pub certificate: Certificate,
    pub trace: Vec<EpsTrial>,
}

/// Certifies `Omega_trap` at `eps`. With `auto_search`, a failing `eps` is
/// halved until the certificate passes or `eps` drops below
/// [`MIN_TRAP_EPS`]; exhausting the search is an error carrying the trace.
/// Without it, a failing certificate is returned as data.
pub fn verify_trapping(p: &Params, eps: f64, auto_search: bool) -> Result<TrapCertificate> {
    p.require_in_r("verify_trapping")?;
    let mut trace = Vec::new();
    let mut eps = eps;
    loop {
        let attempt = build_trap(p, eps).map(|trap| {
            let cert = verify_strict_containment(p, &trap.region);
            (trap, cert)
        });
        match attempt {
            Ok((trap, certificate)) => {
                trace.push(EpsTrial {
                    eps,
                    margin: certificate.margin,
                });
                if certificate.passed || !auto_search {
                    return Ok(TrapCertificate {
                        trap,
                        certificate,
                        trace,
                    });
                }
            }
            Err(e) if !auto_search => return Err(e),
            Err(_) => trace.push(EpsTrial {
                eps,
                margin: f64::NEG_INFINITY,
            }),
        }
        eps *= 0.5;
        if eps < MIN_TRAP_EPS {
            return Err(Error::TrappingFailure { trace });
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HomoclinicData {
    pub t: Point2,
    pub f_t: Point2,
    pub f2_t: Point2,
    /// x-coordinate of `E^s(X)` at the height of `f^2(T)`.
    pub es_x_at_f2_t: f64,
    pub left_of_es: bool,
    /// `T`–`f^2(T)` ∩ `E^s(X)`, present iff `left_of_es`.
    pub z: Option<Point2>,
}

pub fn homoclinic_data(p: &Params) -> Result<HomoclinicData> {
    p.require_cond1("homoclinic_data")?;
    let e = p.eigen_data()?;
    let x = p.fixed_points()?.x;
    let t = kink_points(p)?.t;
    let f_t = p.step(t);
    let f2_t = p.step(f_t);
    let slope = e.slope_es_r;
    let es_x_at_f2_t = x.x + (f2_t.y - x.y) / slope;
    let left_of_es = f2_t.x < es_x_at_f2_t;
    let z = if left_of_es {
        intersect_lines(t, f2_t - t, x, Point2::new(1.0, slope))
    } else {
        None
    };
    Ok(HomoclinicData {
        t,
        f_t,
        f2_t,
        es_x_at_f2_t,
        left_of_es,
        z,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UAboveV {
    pub u2: f64,
    pub v2: f64,
    /// `U_2 - V_2` from the closed forms for each coordinate.
    pub gap: f64,
    /// The same difference from its factorized form.
    pub gap_factored: f64,
    pub passed: bool,
}

/// The five factors of the factorized `U_2 - V_2`, as
/// `(numerator factors, denominator factors)`.
pub fn u_minus_v_factors(e: &EigenData) -> ([f64; 3], [f64; 3]) {
    let (ls, ru, rs) = (e.lambda_l_s, e.lambda_r_u, e.lambda_r_s);
    (
        [-ru, 1.0 - ls + rs, ls - ru],
        [1.0 - ls, 1.0 - ru, ls - rs - ru],
    )
}

pub fn check_u_above_v(p: &Params) -> Result<UAboveV> {
    p.require_cond1("check_U_above_V")?;
    let e = p.eigen_data()?;
    let k = kink_points(p)?;
    let (u2, v2) = (k.u.y, k.v.y);
    let gap = u2 - v2;
    let (num, den) = u_minus_v_factors(&e);
    let gap_factored = num.iter().product::<f64>() / den.iter().product::<f64>();
    let scale = u2.abs().max(v2.abs()).max(1.0);
    if (gap - gap_factored).abs() > 1e-9 * scale {
        return Err(Error::Inconsistent {
            what: "U_2 - V_2",
            a: gap,
            b: gap_factored,
        });
    }
    Ok(UAboveV {
        u2,
        v2,
        gap,
        gap_factored,
        passed: gap > 0.0,
    })
}

/// Point facts used along the way to forward invariance of `Omega`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntermediateFacts {
    pub f_d_in_third_quadrant: bool,
    /// `f(D)` lies strictly above the line through `Y` and `S`.
    pub f_d_above_ys: bool,
    pub f_inv_s_in_first_quadrant: bool,
    /// `B` lies on the segment from `Y` to `f^-1(D)`.
    pub b_between_y_and_f_inv_d: bool,
}

pub fn intermediate_facts(p: &Params) -> Result<IntermediateFacts> {
    p.require_cond1("intermediate_facts")?;
    let k = kink_points(p)?;
    let FixedPoints { y, .. } = p.fixed_points()?;
    // Y-S has negative slope, so "above" is the left of the direction Y -> S
    let above = line_distance(y, k.s, k.f_d) > 0.0;
    let seg = k.f_inv_d - y;
    let t = (k.b - y).dot(seg) / seg.dot(seg);
    Ok(IntermediateFacts {
        f_d_in_third_quadrant: k.f_d.x < 0.0 && k.f_d.y < 0.0,
        f_d_above_ys: above,
        f_inv_s_in_first_quadrant: k.f_inv_s.x > 0.0 && k.f_inv_s.y > 0.0,
        b_between_y_and_f_inv_d: (0.0..=1.0).contains(&t),
    })
}
