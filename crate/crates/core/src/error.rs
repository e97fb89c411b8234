use thiserror::Error;

/// One step of an automatic trapping-region search: the tried `eps` and the
/// margin its certificate produced.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct EpsTrial {
    pub eps: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite input in {0}")]
    NonFinite(&'static str),

    #[error("map is not invertible (delta_L = {delta_l}, delta_R = {delta_r})")]
    NotInvertible { delta_l: f64, delta_r: f64 },

    #[error("point lies on the switching manifold (x = {x:e})")]
    OnSwitchingManifold { x: f64 },

    #[error("complex eigenvalues for tau = {tau}, delta = {delta}")]
    ComplexEigenvalues { tau: f64, delta: f64 },

    #[error("fixed point at infinity ({0} denominator vanishes)")]
    FixedPointAtInfinity(&'static str),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("slope {m} is at the pole of the slope map")]
    InfiniteSlope { m: f64 },

    #[error("tau = 0, p(tau, delta) is undefined")]
    ZeroTrace,

    #[error("region is not convex")]
    NonConvex,

    #[error("region has zero area or fewer than three vertices")]
    DegenerateRegion,

    #[error("no admissible eps found for the trapping region ({} trials)", trace.len())]
    TrappingFailure { trace: Vec<EpsTrial> },

    #[error("{what}: the two evaluations disagree ({a} vs {b})")]
    Inconsistent { what: &'static str, a: f64, b: f64 },

    #[error("f^2(T) does not lie left of E^s(X): no homoclinic point Z")]
    NoHomoclinic,

    #[error("degenerate seed: {0}")]
    DegenerateSeed(String),

    #[error("budget of {budget} iterations exhausted before a spanning segment appeared")]
    BudgetExhausted { budget: usize, length_trace: Vec<f64> },

    #[error("zero tangent vector")]
    ZeroVector,
}

pub type Result<T> = std::result::Result<T, Error>;
