//! The conditional contact angle CDF, its domain, normalization conventions
//! and the contact-distance transform.
//!
//! The CDF follows the 1 - (1 - p)^N form of a binomial point process, where
//! p is the overlap-area fraction of the orbital shell obtained from the two
//! cap slices. The literal formula is defective: its supremum is 1 - P_out,
//! which stays below 1 whenever relay outage has positive probability. The
//! normalized variant divides by the value at the domain upper bound.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    cap_slice_area, feasibility_check, overlap_split_closed_form, overlap_split_root_solve,
    safe_acos, GeometryConfig, RelayScenario,
};

/// Which overlap-split solver backs the CDF evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SplitSolver {
    /// The closed-form split from the second-order Taylor step (default).
    #[default]
    ClosedForm,
    /// Bisection on the exact trigonometric system, for sensitivity studies.
    RootSolve,
}

/// Normalization convention of a CDF curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// The literal formula; sup F = 1 - P_out.
    #[default]
    Defective,
    /// Divided by F(upper) so the curve reaches 1.
    Normalized,
}

/// Whether a curve came from the analytic formula or from simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveSource {
    Analytic,
    Empirical,
}

/// Closed interval of admissible contact angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AngleDomain {
    pub lower_rad: f64,
    pub upper_rad: f64,
}

/// A sampled (abscissa, probability) curve with provenance metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdfCurve {
    pub points: Vec<(f64, f64)>,
    pub convention: Convention,
    pub source: CurveSource,
    pub fingerprint: String,
}

impl CdfCurve {
    /// Checks the structural invariants: probabilities in [0, 1] and
    /// nondecreasing, abscissae strictly increasing.
    pub fn validate(&self) -> Result<()> {
        for window in self.points.windows(2) {
            let (x0, p0) = window[0];
            let (x1, p1) = window[1];
            if !(x1 > x0) {
                return Err(Error::Invariant(format!(
                    "curve abscissae not strictly increasing at {x0} -> {x1}"
                )));
            }
            if p1 + 1e-12 < p0 {
                return Err(Error::Invariant(format!(
                    "curve probabilities decreasing: {p0} -> {p1} at x = {x1}"
                )));
            }
        }
        for &(_, p) in &self.points {
            if !(-1e-12..=1.0 + 1e-12).contains(&p) {
                return Err(Error::Invariant(format!(
                    "probability {p} outside [0, 1]"
                )));
            }
        }
        Ok(())
    }
}

/// Short textual identity of a scenario, embedded in emitted curves.
pub fn scenario_fingerprint(scenario: &RelayScenario) -> String {
    format!(
        "re={};rs={};tm1={};tm2={};d={};n={}",
        scenario.geometry.earth_radius_km,
        scenario.geometry.shell_radius_km,
        scenario.theta_m1_rad,
        scenario.theta_m2_rad,
        scenario.distance_km,
        scenario.n_sat
    )
}

/// Admissible contact-angle interval:
/// lower = max(0, c - theta_m2/2), upper = min(theta_m1/2, c + theta_m2/2)
/// with c the endpoint central angle.
pub fn contact_angle_domain(scenario: &RelayScenario) -> Result<AngleDomain> {
    let report = feasibility_check(scenario);
    if !report.intersects {
        return Err(Error::Infeasible(format!(
            "theta_m1 + theta_m2 = {} rad does not exceed 4 arcsin(d/2R) = {} rad",
            scenario.theta_m1_rad + scenario.theta_m2_rad,
            scenario.theta_m1_rad + scenario.theta_m2_rad - report.margin_rad,
        )));
    }
    let c = scenario.endpoint_central_angle_rad();
    let lower = (c - 0.5 * scenario.theta_m2_rad).max(0.0);
    let upper = (0.5 * scenario.theta_m1_rad).min(c + 0.5 * scenario.theta_m2_rad);
    Ok(AngleDomain {
        lower_rad: lower,
        upper_rad: upper,
    })
}

/// Overlap area (km^2) of the eligibility region at contact angle `theta`,
/// decomposed into a slice of each cap.
fn overlap_area(scenario: &RelayScenario, theta: f64, solver: SplitSolver) -> Result<f64> {
    let theta_d1 = 2.0 * theta;
    let theta_d2 = scenario.theta_m2_rad;
    let c = scenario.endpoint_central_angle_rad();
    if theta_d1 <= 0.0 || 0.5 * theta_d1 + 0.5 * theta_d2 <= c {
        return Ok(0.0);
    }
    let r = scenario.geometry.shell_radius_km;
    // The two-slice decomposition needs intersecting cap boundaries. When one
    // cap lies inside the other the overlap is the full smaller cap; using
    // S(theta_d, theta_d) keeps the same approximation family, so the area is
    // continuous at the internal tangency.
    if c + 0.5 * theta_d1 <= 0.5 * theta_d2 {
        return cap_slice_area(theta_d1, theta_d1, r);
    }
    if c + 0.5 * theta_d2 <= 0.5 * theta_d1 {
        return cap_slice_area(theta_d2, theta_d2, r);
    }
    let split = match solver {
        SplitSolver::ClosedForm => overlap_split_closed_form(theta_d1, theta_d2, c)?,
        SplitSolver::RootSolve => overlap_split_root_solve(theta_d1, theta_d2, c)?,
    };
    Ok(cap_slice_area(theta_d1, split.theta_o1_rad, r)?
        + cap_slice_area(theta_d2, split.theta_o2_rad, r)?)
}

/// The defective CDF with an explicit solver choice. Evaluations outside the
/// domain clamp: 0 below, F(upper) above.
pub fn conditional_contact_cdf_with(
    scenario: &RelayScenario,
    theta: f64,
    solver: SplitSolver,
) -> Result<f64> {
    let domain = contact_angle_domain(scenario)?;
    let theta = theta.clamp(domain.lower_rad, domain.upper_rad);
    let area = overlap_area(scenario, theta, solver)?;
    let shell = 4.0 * std::f64::consts::PI * scenario.geometry.shell_radius_km.powi(2);
    let p = (area / shell).clamp(0.0, 1.0);
    Ok(1.0 - (1.0 - p).powi(scenario.n_sat as i32))
}

/// The defective CDF of the conditional contact angle, using the closed-form
/// split.
pub fn conditional_contact_cdf(scenario: &RelayScenario, theta: f64) -> Result<f64> {
    conditional_contact_cdf_with(scenario, theta, SplitSolver::ClosedForm)
}

/// The CDF divided by its value at the domain upper bound, so it reaches 1.
/// Errors when the total mass is zero (certain outage).
pub fn conditional_contact_cdf_normalized(scenario: &RelayScenario, theta: f64) -> Result<f64> {
    conditional_contact_cdf_normalized_with(scenario, theta, SplitSolver::ClosedForm)
}

pub fn conditional_contact_cdf_normalized_with(
    scenario: &RelayScenario,
    theta: f64,
    solver: SplitSolver,
) -> Result<f64> {
    let domain = contact_angle_domain(scenario)?;
    let total = conditional_contact_cdf_with(scenario, domain.upper_rad, solver)?;
    if total == 0.0 {
        return Err(Error::CertainOutage);
    }
    Ok((conditional_contact_cdf_with(scenario, theta, solver)? / total).min(1.0))
}

/// Finite-difference density estimate of the contact-angle distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdfEstimate {
    pub density_per_rad: f64,
    /// True when the evaluation point sat within one step of a domain edge
    /// and a one-sided difference was used.
    pub one_sided: bool,
}

/// Central finite-difference step for the PDF; balances truncation against
/// cancellation for curves of this smoothness.
pub const PDF_STEP_RAD: f64 = 1e-5;

/// Density of the conditional contact angle at `theta`, by finite difference
/// of the defective CDF. `theta` must lie strictly inside the domain.
pub fn conditional_contact_pdf(scenario: &RelayScenario, theta: f64) -> Result<PdfEstimate> {
    let domain = contact_angle_domain(scenario)?;
    if !(theta > domain.lower_rad && theta < domain.upper_rad) {
        return Err(Error::Domain(format!(
            "pdf evaluation point {theta} not strictly inside [{}, {}]",
            domain.lower_rad, domain.upper_rad
        )));
    }
    let h = PDF_STEP_RAD;
    let f = |t: f64| conditional_contact_cdf(scenario, t);
    let (density, one_sided) = if theta - h < domain.lower_rad {
        ((f(theta + h)? - f(theta)?) / h, true)
    } else if theta + h > domain.upper_rad {
        ((f(theta)? - f(theta - h)?) / h, true)
    } else {
        ((f(theta + h)? - f(theta - h)?) / (2.0 * h), false)
    };
    Ok(PdfEstimate {
        density_per_rad: density,
        one_sided,
    })
}

/// Contact angle corresponding to a slant distance, by the law of cosines on
/// the Earth-center triangle.
pub fn distance_to_angle(geometry: &GeometryConfig, d_c_km: f64) -> Result<f64> {
    let (re, rs) = (geometry.earth_radius_km, geometry.shell_radius_km);
    if !(d_c_km >= rs - re - 1e-9 && d_c_km <= rs + re + 1e-9) {
        return Err(Error::Domain(format!(
            "contact distance {d_c_km} km outside [{}, {}]",
            rs - re,
            rs + re
        )));
    }
    Ok(safe_acos((re * re + rs * rs - d_c_km * d_c_km) / (2.0 * re * rs)))
}

/// Slant distance corresponding to a contact angle.
pub fn angle_to_distance(geometry: &GeometryConfig, theta_c_rad: f64) -> Result<f64> {
    if !(0.0..=std::f64::consts::PI).contains(&theta_c_rad) {
        return Err(Error::Domain(format!(
            "contact angle {theta_c_rad} outside [0, pi]"
        )));
    }
    let (re, rs) = (geometry.earth_radius_km, geometry.shell_radius_km);
    Ok((re * re + rs * rs - 2.0 * re * rs * theta_c_rad.cos()).sqrt())
}

/// The contact-distance CDF: the angle CDF reparametrized through the law of
/// cosines, domain included.
pub fn conditional_contact_distance_cdf(scenario: &RelayScenario, d_c_km: f64) -> Result<f64> {
    let theta = distance_to_angle(&scenario.geometry, d_c_km)?;
    conditional_contact_cdf(scenario, theta)
}

/// Trapezoidal Stieltjes expectation of `integrand` against the conditional
/// contact-distance distribution. With integrand identically 1 this returns
/// the total mass F(upper) - F(lower) (zero for the defective convention's
/// missing outage mass is excluded by construction).
pub fn expect_over_contact_distance<F: Fn(f64) -> f64>(
    scenario: &RelayScenario,
    integrand: F,
    grid_size: usize,
) -> Result<f64> {
    if grid_size < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid_size must be at least 2, got {grid_size}"
        )));
    }
    let domain = contact_angle_domain(scenario)?;
    let d_lo = angle_to_distance(&scenario.geometry, domain.lower_rad)?;
    let d_hi = angle_to_distance(&scenario.geometry, domain.upper_rad)?;
    let mut sum = 0.0;
    let mut prev_d = d_lo;
    let mut prev_f = conditional_contact_distance_cdf(scenario, d_lo)?;
    for i in 1..grid_size {
        let d = d_lo + (d_hi - d_lo) * i as f64 / (grid_size - 1) as f64;
        let f = conditional_contact_distance_cdf(scenario, d)?;
        sum += integrand(0.5 * (prev_d + d)) * (f - prev_f);
        prev_d = d;
        prev_f = f;
    }
    Ok(sum)
}

/// Evenly spaced grid over the contact-angle domain, endpoints included.
pub fn domain_grid(domain: &AngleDomain, grid_size: usize) -> Vec<f64> {
    let n = grid_size.max(2);
    (0..n)
        .map(|i| {
            domain.lower_rad
                + (domain.upper_rad - domain.lower_rad) * i as f64 / (n - 1) as f64
        })
        .collect()
}

/// Analytic CDF curve sampled on an even grid over the domain.
pub fn analytic_cdf_curve(
    scenario: &RelayScenario,
    grid_size: usize,
    convention: Convention,
    solver: SplitSolver,
) -> Result<CdfCurve> {
    if grid_size < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid_size must be at least 2, got {grid_size}"
        )));
    }
    let domain = contact_angle_domain(scenario)?;
    let grid = domain_grid(&domain, grid_size);
    let mut points = Vec::with_capacity(grid.len());
    for theta in grid {
        let p = match convention {
            Convention::Defective => conditional_contact_cdf_with(scenario, theta, solver)?,
            Convention::Normalized => {
                conditional_contact_cdf_normalized_with(scenario, theta, solver)?
            }
        };
        points.push((theta, p));
    }
    let curve = CdfCurve {
        points,
        convention,
        source: CurveSource::Analytic,
        fingerprint: scenario_fingerprint(scenario),
    };
    curve.validate()?;
    Ok(curve)
}
