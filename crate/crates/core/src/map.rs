//! The border-collision normal form
//!
//! ```text
//!   (x, y) -> A_L (x, y) + (1, 0)   for x <= 0
//!   (x, y) -> A_R (x, y) + (1, 0)   for x >= 0
//!   A_J = [[tau_J, 1], [-delta_J, 0]]
//! ```
//!
//! together with its inverse, Jacobians, eigen-data of the two pieces, the
//! fixed points `Y` (left) and `X` (right), and the regime classification
//! used to gate every certificate in the crate.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Half-width of the band around `x = 0` treated as the switching manifold.
pub const DEFAULT_ETA: f64 = 1e-9;

/// A point (or vector) in the phase plane.
///
/// Serializes as a two-element array `[x, y]`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point2 { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the planar cross product.
    pub fn cross(self, other: Point2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn lerp(self, other: Point2, t: f64) -> Point2 {
        self + (other - self) * t
    }
}

impl From<[f64; 2]> for Point2 {
    fn from(v: [f64; 2]) -> Self {
        Point2::new(v[0], v[1])
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, o: Point2) -> Point2 {
        Point2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, o: Point2) -> Point2 {
        Point2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

impl Neg for Point2 {
    type Output = Point2;
    fn neg(self) -> Point2 {
        Point2::new(-self.x, -self.y)
    }
}

/// Row-major 2x2 matrix `[[a11, a12], [a21, a22]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Matrix2 {
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
}

impl Matrix2 {
    pub const IDENTITY: Matrix2 = Matrix2::new(1.0, 0.0, 0.0, 1.0);

    pub const fn new(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Matrix2 { a11, a12, a21, a22 }
    }

    /// The companion-form matrix `[[tau, 1], [-delta, 0]]`.
    pub const fn companion(tau: f64, delta: f64) -> Self {
        Matrix2::new(tau, 1.0, -delta, 0.0)
    }

    pub fn det(&self) -> f64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn trace(&self) -> f64 {
        self.a11 + self.a22
    }

    pub fn apply(&self, v: Point2) -> Point2 {
        Point2::new(
            self.a11 * v.x + self.a12 * v.y,
            self.a21 * v.x + self.a22 * v.y,
        )
    }

    /// `self * rhs`.
    pub fn mul(&self, rhs: &Matrix2) -> Matrix2 {
        Matrix2::new(
            self.a11 * rhs.a11 + self.a12 * rhs.a21,
            self.a11 * rhs.a12 + self.a12 * rhs.a22,
            self.a21 * rhs.a11 + self.a22 * rhs.a21,
            self.a21 * rhs.a12 + self.a22 * rhs.a22,
        )
    }
}

/// Which affine piece of the map applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Side {
    #[serde(rename = "L")]
    Left,
    #[serde(rename = "R")]
    Right,
}

impl Side {
    pub fn symbol(self) -> char {
        match self {
            Side::Left => 'L',
            Side::Right => 'R',
        }
    }

    /// Side of the switching manifold a point lies on; `x = 0` counts as left.
    pub fn of(z: Point2) -> Side {
        if z.x <= 0.0 {
            Side::Left
        } else {
            Side::Right
        }
    }
}

/// The four parameters of the normal form.
///
/// No regime is enforced on construction; see [`Params::classify`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Params {
    #[serde(rename = "tau_L")]
    pub tau_l: f64,
    #[serde(rename = "delta_L")]
    pub delta_l: f64,
    #[serde(rename = "tau_R")]
    pub tau_r: f64,
    #[serde(rename = "delta_R")]
    pub delta_r: f64,
}

/// Eigenvalues of `A_L` and `A_R` and the slopes of their eigenvectors.
///
/// `u` is the larger-magnitude eigenvalue of each piece, `s` the smaller.
/// The eigenvector of an eigenvalue `lambda` of `A_J` has slope
/// `-delta_J / lambda`, which is minus the *other* eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenData {
    pub lambda_l_s: f64,
    pub lambda_l_u: f64,
    pub lambda_r_s: f64,
    pub lambda_r_u: f64,
    pub slope_eu_l: f64,
    pub slope_es_l: f64,
    pub slope_eu_r: f64,
    pub slope_es_r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPoints {
    /// Fixed point of the left piece, `Y_1 < 0` in the standard regime.
    pub y: Point2,
    /// Fixed point of the right piece, `X_1 > 0` in the standard regime.
    pub x: Point2,
}

/// Which parameter conditions hold. Never an error: scans need verdicts
/// everywhere, including outside the regime.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeReport {
    /// `delta_L, delta_R > 0`, `tau_L > delta_L + 1`, `tau_R < -(delta_R + 1)`.
    pub cond1: bool,
    /// `None` when `A_L` has complex eigenvalues.
    pub phi: Option<f64>,
    #[serde(rename = "in_R")]
    pub in_r: bool,
    /// `tau_L > (delta_L + 2)/sqrt2` and `tau_R < -(delta_R + 2)/sqrt2`.
    pub cond2: bool,
    pub deltas_below_one: bool,
    pub thm2_applicable: bool,
}

/// Roots of `lambda^2 - tau lambda + delta = 0` as (larger, smaller) magnitude.
///
/// The larger root is formed without cancellation and the smaller one from
/// the product `delta`.
pub fn real_eigenvalues(tau: f64, delta: f64) -> Result<(f64, f64)> {
    let disc = tau * tau - 4.0 * delta;
    if !(disc > 0.0) || tau == 0.0 {
        return Err(Error::ComplexEigenvalues { tau, delta });
    }
    let big = 0.5 * (tau + disc.sqrt().copysign(tau));
    Ok((big, delta / big))
}

impl Params {
    pub const fn new(tau_l: f64, delta_l: f64, tau_r: f64, delta_r: f64) -> Self {
        Params {
            tau_l,
            delta_l,
            tau_r,
            delta_r,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.tau_l.is_finite()
            && self.delta_l.is_finite()
            && self.tau_r.is_finite()
            && self.delta_r.is_finite()
    }

    pub fn tau(&self, side: Side) -> f64 {
        match side {
            Side::Left => self.tau_l,
            Side::Right => self.tau_r,
        }
    }

    pub fn delta(&self, side: Side) -> f64 {
        match side {
            Side::Left => self.delta_l,
            Side::Right => self.delta_r,
        }
    }

    pub fn matrix(&self, side: Side) -> Matrix2 {
        Matrix2::companion(self.tau(side), self.delta(side))
    }

    /// One affine piece applied regardless of where `z` lies.
    #[inline]
    pub fn apply_branch(&self, side: Side, z: Point2) -> Point2 {
        let (tau, delta) = (self.tau(side), self.delta(side));
        Point2::new(tau * z.x + z.y + 1.0, -delta * z.x)
    }

    /// The map without input validation; for inner loops.
    #[inline]
    pub fn step(&self, z: Point2) -> Point2 {
        self.apply_branch(Side::of(z), z)
    }

    pub fn apply(&self, z: Point2) -> Result<Point2> {
        if !z.is_finite() || !self.is_finite() {
            return Err(Error::NonFinite("apply"));
        }
        Ok(self.step(z))
    }

    /// Inverse of one affine piece.
    #[inline]
    pub fn apply_inverse_branch(&self, side: Side, z: Point2) -> Point2 {
        let (tau, delta) = (self.tau(side), self.delta(side));
        let x = -z.y / delta;
        Point2::new(x, z.x - 1.0 - tau * x)
    }

    /// The preimage has `x = -y / delta_J`, so with both deltas positive the
    /// left piece owns `y >= 0` and the right piece owns `y <= 0`.
    pub fn step_inverse(&self, z: Point2) -> Point2 {
        let side = if z.y >= 0.0 { Side::Left } else { Side::Right };
        self.apply_inverse_branch(side, z)
    }

    pub fn apply_inverse(&self, z: Point2) -> Result<Point2> {
        if !z.is_finite() || !self.is_finite() {
            return Err(Error::NonFinite("apply_inverse"));
        }
        if !(self.delta_l > 0.0 && self.delta_r > 0.0) {
            return Err(Error::NotInvertible {
                delta_l: self.delta_l,
                delta_r: self.delta_r,
            });
        }
        Ok(self.step_inverse(z))
    }

    pub fn jacobian(&self, z: Point2, eta: f64) -> Result<Matrix2> {
        if !z.is_finite() {
            return Err(Error::NonFinite("jacobian"));
        }
        if z.x.abs() <= eta {
            return Err(Error::OnSwitchingManifold { x: z.x });
        }
        Ok(self.matrix(Side::of(z)))
    }

    pub fn eigen_data(&self) -> Result<EigenData> {
        let (lambda_l_u, lambda_l_s) = real_eigenvalues(self.tau_l, self.delta_l)?;
        let (lambda_r_u, lambda_r_s) = real_eigenvalues(self.tau_r, self.delta_r)?;
        Ok(EigenData {
            lambda_l_s,
            lambda_l_u,
            lambda_r_s,
            lambda_r_u,
            slope_eu_l: -lambda_l_s,
            slope_es_l: -lambda_l_u,
            slope_eu_r: -lambda_r_s,
            slope_es_r: -lambda_r_u,
        })
    }

    pub fn fixed_points(&self) -> Result<FixedPoints> {
        let den_y = self.tau_l - self.delta_l - 1.0;
        let den_x = self.delta_r + 1.0 - self.tau_r;
        if den_y == 0.0 || !den_y.is_finite() {
            return Err(Error::FixedPointAtInfinity("Y"));
        }
        if den_x == 0.0 || !den_x.is_finite() {
            return Err(Error::FixedPointAtInfinity("X"));
        }
        Ok(FixedPoints {
            y: Point2::new(-1.0 / den_y, self.delta_l / den_y),
            x: Point2::new(1.0 / den_x, -self.delta_r / den_x),
        })
    }

    /// `phi = delta_R - (tau_R + delta_L + delta_R - (1 + tau_R) lambda_L^u) lambda_L^u`;
    /// under cond1 its sign is the sign of `C_1 - D_1`.
    pub fn phi(&self) -> Option<f64> {
        let (lu, _) = real_eigenvalues(self.tau_l, self.delta_l).ok()?;
        let phi =
            self.delta_r - (self.tau_r + self.delta_l + self.delta_r - (1.0 + self.tau_r) * lu) * lu;
        Some(phi)
    }

    pub fn classify(&self) -> RegimeReport {
        let cond1 = self.delta_l > 0.0
            && self.delta_r > 0.0
            && self.tau_l > self.delta_l + 1.0
            && self.tau_r < -(self.delta_r + 1.0);
        let phi = self.phi();
        let in_r = cond1 && phi.is_some_and(|v| v > 0.0);
        let sqrt2 = std::f64::consts::SQRT_2;
        let cond2 = self.tau_l > (self.delta_l + 2.0) / sqrt2
            && self.tau_r < -(self.delta_r + 2.0) / sqrt2;
        let deltas_below_one = self.delta_l < 1.0 && self.delta_r < 1.0;
        RegimeReport {
            cond1,
            phi,
            in_r,
            cond2,
            deltas_below_one,
            thm2_applicable: in_r && cond2 && deltas_below_one,
        }
    }

    pub(crate) fn require_cond1(&self, op: &str) -> Result<RegimeReport> {
        let report = self.classify();
        if !report.cond1 {
            return Err(Error::Precondition(format!(
                "{op} requires delta_L, delta_R > 0, tau_L > delta_L + 1, tau_R < -(delta_R + 1)"
            )));
        }
        Ok(report)
    }

    pub(crate) fn require_in_r(&self, op: &str) -> Result<RegimeReport> {
        let report = self.require_cond1(op)?;
        if !report.in_r {
            return Err(Error::Precondition(format!("{op} requires phi > 0")));
        }
        Ok(report)
    }
}
