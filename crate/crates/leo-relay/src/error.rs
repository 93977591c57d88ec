use thiserror::Error;

/// Errors surfaced by the geometry, distribution, outage and Monte-Carlo layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "caps do not intersect: theta_d1/2 + theta_d2/2 = {half_sum_rad} rad \
         must exceed c = {c_rad} rad"
    )]
    NonIntersecting { half_sum_rad: f64, c_rad: f64 },

    #[error(
        "negative discriminant {discriminant} in closed-form overlap split \
         (theta_d1 = {theta_d1}, theta_d2 = {theta_d2}, c = {c})"
    )]
    NegativeDiscriminant {
        discriminant: f64,
        theta_d1: f64,
        theta_d2: f64,
        c: f64,
    },

    #[error(
        "no sign change when bracketing the overlap-split root \
         (theta_d1 = {theta_d1}, theta_d2 = {theta_d2}, c = {c})"
    )]
    GeometricDegeneracy { theta_d1: f64, theta_d2: f64, c: f64 },

    #[error("scenario infeasible: {0}")]
    Infeasible(String),

    #[error("certain outage: CDF mass at the domain upper bound is zero, cannot normalize")]
    CertainOutage,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
