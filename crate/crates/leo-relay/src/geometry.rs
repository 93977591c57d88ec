//! Spherical geometry primitives: dome angles, cap areas, the slice-area
//! quadrature and the overlap-split solvers that decompose the intersection
//! of two spherical caps.
//!
//! All angles are radians and all lengths kilometers. The slice area
//! `cap_slice_area` is an arc-length projection approximation (it is exact
//! only asymptotically for small caps); the exact region area is available
//! through the Monte-Carlo estimators, never silently substituted.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{rule_128, rule_256, GaussLegendre};

/// Mean Earth radius in kilometers.
pub const EARTH_RADIUS_KM: f64 = 6371.0;

/// Tolerance below which the closed-form split denominator (a - b) is treated
/// as degenerate and the symmetric limit is used instead.
pub const SYMMETRIC_EPS: f64 = 1e-9;

/// arcsin with a small slack for floating-point drift past +/-1.
pub(crate) fn safe_asin(x: f64) -> f64 {
    debug_assert!(x.abs() <= 1.0 + 1e-12, "asin argument {x} out of range");
    x.clamp(-1.0, 1.0).asin()
}

/// arccos with the same slack convention as [`safe_asin`].
pub(crate) fn safe_acos(x: f64) -> f64 {
    debug_assert!(x.abs() <= 1.0 + 1e-12, "acos argument {x} out of range");
    x.clamp(-1.0, 1.0).acos()
}

/// The two fixed spheres all the math lives on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometryConfig {
    pub earth_radius_km: f64,
    pub shell_radius_km: f64,
}

impl GeometryConfig {
    pub fn new(earth_radius_km: f64, shell_radius_km: f64) -> Result<Self> {
        if !(earth_radius_km > 0.0) || !(shell_radius_km > earth_radius_km) {
            return Err(Error::Domain(format!(
                "need shell_radius_km > earth_radius_km > 0, \
                 got earth = {earth_radius_km}, shell = {shell_radius_km}"
            )));
        }
        Ok(Self {
            earth_radius_km,
            shell_radius_km,
        })
    }

    /// Paper geometry: Earth radius 6371 km, 550 km constellation altitude.
    pub fn paper_default() -> Self {
        Self {
            earth_radius_km: EARTH_RADIUS_KM,
            shell_radius_km: EARTH_RADIUS_KM + 550.0,
        }
    }

    pub fn from_altitude(earth_radius_km: f64, altitude_km: f64) -> Result<Self> {
        Self::new(earth_radius_km, earth_radius_km + altitude_km)
    }

    pub fn altitude_km(&self) -> f64 {
        self.shell_radius_km - self.earth_radius_km
    }
}

/// A spherical cap described by its maximum dome angle: the largest central
/// angle between any two points of the cap. The half-angle of the cap from
/// its axis is `max_dome_angle_rad / 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphericalCap {
    pub max_dome_angle_rad: f64,
}

impl SphericalCap {
    pub fn new(max_dome_angle_rad: f64) -> Result<Self> {
        if !(max_dome_angle_rad > 0.0 && max_dome_angle_rad < std::f64::consts::PI) {
            return Err(Error::Domain(format!(
                "max dome angle must lie in (0, pi), got {max_dome_angle_rad}"
            )));
        }
        Ok(Self { max_dome_angle_rad })
    }

    pub fn half_angle_rad(&self) -> f64 {
        0.5 * self.max_dome_angle_rad
    }
}

/// How an [`OverlapSplit`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SplitMethod {
    ClosedForm,
    RootSolve,
    SymmetricLimit,
}

/// The pair of split dome angles decomposing the cap-intersection region into
/// a slice of each cap. The pair always satisfies the sum constraint
/// `theta_o1 + theta_o2 = theta_d1/2 + theta_d2/2 - c`, including after
/// clamping: an out-of-range component is projected along the constraint
/// line, not truncated independently. This keeps the overlap area continuous
/// down to the external tangency, where both components vanish.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapSplit {
    pub theta_o1_rad: f64,
    pub theta_o2_rad: f64,
    pub method: SplitMethod,
    /// True when the pair had to be projected back onto the feasible segment
    /// 0 <= theta_o_i <= theta_d_i of the sum-constraint line.
    pub clamped: bool,
}

impl OverlapSplit {
    fn clamp_into(theta_o1: f64, theta_o2: f64, theta_d1: f64, theta_d2: f64, method: SplitMethod) -> Self {
        // Incoming pair lies on the constraint line by construction. The
        // feasible segment for theta_o1 is nonempty since the constraint sum
        // is in [0, theta_d1/2 + theta_d2/2].
        let sum = theta_o1 + theta_o2;
        let c1 = theta_o1.clamp((sum - theta_d2).max(0.0), theta_d1.min(sum));
        OverlapSplit {
            theta_o1_rad: c1,
            theta_o2_rad: sum - c1,
            method,
            clamped: c1 != theta_o1,
        }
    }
}

/// One analysis instance: geometry, both caps' maximum dome angles, endpoint
/// chord distance and satellite count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelayScenario {
    pub geometry: GeometryConfig,
    pub theta_m1_rad: f64,
    pub theta_m2_rad: f64,
    pub distance_km: f64,
    pub n_sat: u32,
}

impl RelayScenario {
    pub fn new(
        geometry: GeometryConfig,
        theta_m1_rad: f64,
        theta_m2_rad: f64,
        distance_km: f64,
        n_sat: u32,
    ) -> Result<Self> {
        if !(theta_m1_rad > 0.0 && theta_m1_rad < std::f64::consts::PI) {
            return Err(Error::Domain(format!(
                "theta_m1 must lie in (0, pi), got {theta_m1_rad}"
            )));
        }
        if !(theta_m2_rad > 0.0 && theta_m2_rad < std::f64::consts::PI) {
            return Err(Error::Domain(format!(
                "theta_m2 must lie in (0, pi), got {theta_m2_rad}"
            )));
        }
        if !(distance_km >= 0.0 && distance_km <= 2.0 * geometry.earth_radius_km) {
            return Err(Error::Domain(format!(
                "distance {distance_km} km outside [0, Earth diameter]"
            )));
        }
        if n_sat == 0 {
            return Err(Error::Domain("n_sat must be at least 1".into()));
        }
        Ok(Self {
            geometry,
            theta_m1_rad,
            theta_m2_rad,
            distance_km,
            n_sat,
        })
    }

    /// The recurring term c = 2 arcsin(d / 2 R_earth).
    pub fn endpoint_central_angle_rad(&self) -> f64 {
        central_angle_from_chord(self.distance_km, self.geometry.earth_radius_km)
            .expect("validated at construction")
    }
}

/// Central angle subtended by a chord of the given length on a sphere:
/// 2 arcsin(chord / 2 radius).
pub fn central_angle_from_chord(chord_km: f64, sphere_radius_km: f64) -> Result<f64> {
    if !(chord_km >= 0.0 && chord_km <= 2.0 * sphere_radius_km) {
        return Err(Error::Domain(format!(
            "chord {chord_km} km outside [0, {}]",
            2.0 * sphere_radius_km
        )));
    }
    Ok(2.0 * safe_asin(chord_km / (2.0 * sphere_radius_km)))
}

/// Chord length subtended by a central angle: 2 radius sin(angle / 2).
pub fn chord_from_central_angle(angle_rad: f64, sphere_radius_km: f64) -> Result<f64> {
    if !(angle_rad >= 0.0 && angle_rad <= std::f64::consts::PI) {
        return Err(Error::Domain(format!(
            "central angle {angle_rad} outside [0, pi]"
        )));
    }
    Ok(2.0 * sphere_radius_km * (0.5 * angle_rad).sin())
}

/// Exact spherical-cap area 2 pi R^2 (1 - cos(theta_d / 2)). Used as an
/// upper bound and oracle for the approximate slice area.
pub fn cap_full_area(cap: SphericalCap, radius_km: f64) -> f64 {
    2.0 * std::f64::consts::PI * radius_km * radius_km * (1.0 - cap.half_angle_rad().cos())
}

/// Approximate area of the slice of a cap with dome angle `theta_d` cut off
/// beyond a plane, parametrized by the slice's dome angle `theta_o`.
///
/// The integral runs from R cos(theta_d/2) tan(theta_d/2 - theta_o) up to
/// R sin(theta_d/2) with integrand 2 R arcsin(sqrt(R_cone^2 - l^2) / R).
/// The substitution l = R_cone sin(phi) removes the square-root endpoint
/// behavior, after which a fixed 128-node Gauss-Legendre rule resolves the
/// smooth integrand to better than 1e-9 relative.
pub fn cap_slice_area(theta_d: f64, theta_o: f64, radius_km: f64) -> Result<f64> {
    cap_slice_area_with_rule(theta_d, theta_o, radius_km, rule_128())
}

/// As [`cap_slice_area`] but on the 256-node rule; exposed for the node
/// doubling self-check.
pub fn cap_slice_area_refined(theta_d: f64, theta_o: f64, radius_km: f64) -> Result<f64> {
    cap_slice_area_with_rule(theta_d, theta_o, radius_km, rule_256())
}

fn cap_slice_area_with_rule(
    theta_d: f64,
    theta_o: f64,
    radius_km: f64,
    rule: &GaussLegendre,
) -> Result<f64> {
    if !(theta_d >= 0.0 && theta_d < std::f64::consts::PI) {
        return Err(Error::Domain(format!(
            "theta_d {theta_d} outside [0, pi)"
        )));
    }
    if !(theta_o >= 0.0 && theta_o <= theta_d) {
        return Err(Error::Domain(format!(
            "theta_o {theta_o} outside [0, theta_d = {theta_d}]"
        )));
    }
    if theta_d == 0.0 || theta_o == 0.0 {
        // Bounds coincide: cos(t/2) tan(t/2) = sin(t/2).
        return Ok(0.0);
    }
    let half = 0.5 * theta_d;
    let r_cone = radius_km * half.sin();
    let lower = radius_km * half.cos() * (half - theta_o).tan();
    // Substituted variable phi with l = r_cone sin(phi).
    let phi_lower = safe_asin(lower / r_cone);
    let phi_upper = 0.5 * std::f64::consts::PI;
    let area = rule.integrate(phi_lower, phi_upper, |phi| {
        let cos_phi = phi.cos();
        2.0 * radius_km * safe_asin(r_cone * cos_phi / radius_km) * r_cone * cos_phi
    });
    Ok(area.max(0.0))
}

fn require_intersecting(theta_d1: f64, theta_d2: f64, c: f64) -> Result<f64> {
    let half_sum = 0.5 * theta_d1 + 0.5 * theta_d2;
    if half_sum <= c {
        return Err(Error::NonIntersecting {
            half_sum_rad: half_sum,
            c_rad: c,
        });
    }
    Ok(half_sum - c)
}

/// Closed-form overlap split obtained from the second-order Taylor step,
/// with a = cos(theta_d1/2), b = cos(theta_d2/2). Falls back to the exact
/// symmetric limit when the (a - b) denominator degenerates.
pub fn overlap_split_closed_form(theta_d1: f64, theta_d2: f64, c: f64) -> Result<OverlapSplit> {
    let sum = require_intersecting(theta_d1, theta_d2, c)?;
    let a = (0.5 * theta_d1).cos();
    let b = (0.5 * theta_d2).cos();
    if (a - b).abs() < SYMMETRIC_EPS {
        let half = 0.5 * sum;
        return Ok(OverlapSplit::clamp_into(
            half,
            half,
            theta_d1,
            theta_d2,
            SplitMethod::SymmetricLimit,
        ));
    }
    let discriminant = 2.0 * a * a - 4.0 * a * b + 2.0 * b * b + a * b * c * c;
    if discriminant < 0.0 {
        return Err(Error::NegativeDiscriminant {
            discriminant,
            theta_d1,
            theta_d2,
            c,
        });
    }
    let root = discriminant.sqrt();
    let theta_o1 = 0.5 * theta_d1 - (a * c - root) / (a - b);
    let theta_o2 = 0.5 * theta_d2 - (-b * c + root) / (a - b);
    Ok(OverlapSplit::clamp_into(
        theta_o1,
        theta_o2,
        theta_d1,
        theta_d2,
        SplitMethod::ClosedForm,
    ))
}

/// Overlap split from the exact trigonometric system, without the Taylor
/// step: substitutes theta_o2 via the sum constraint and solves
/// a cos(theta_d2/2 - theta_o2) = b cos(theta_d1/2 - theta_o1) by bracketing
/// bisection on theta_o1 to 1e-12 rad.
pub fn overlap_split_root_solve(theta_d1: f64, theta_d2: f64, c: f64) -> Result<OverlapSplit> {
    let sum = require_intersecting(theta_d1, theta_d2, c)?;
    let a = (0.5 * theta_d1).cos();
    let b = (0.5 * theta_d2).cos();
    if (a - b).abs() < SYMMETRIC_EPS {
        // Symmetric system: equal split is the exact root.
        let half = 0.5 * sum;
        return Ok(OverlapSplit::clamp_into(
            half,
            half,
            theta_d1,
            theta_d2,
            SplitMethod::SymmetricLimit,
        ));
    }
    let residual = |theta_o1: f64| {
        let theta_o2 = sum - theta_o1;
        a * (0.5 * theta_d2 - theta_o2).cos() - b * (0.5 * theta_d1 - theta_o1).cos()
    };
    let (mut lo, mut hi) = (0.0_f64, sum);
    let (f_lo, f_hi) = (residual(lo), residual(hi));
    if f_lo == 0.0 {
        return Ok(OverlapSplit::clamp_into(lo, sum, theta_d1, theta_d2, SplitMethod::RootSolve));
    }
    if f_hi == 0.0 {
        return Ok(OverlapSplit::clamp_into(hi, 0.0, theta_d1, theta_d2, SplitMethod::RootSolve));
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::GeometricDegeneracy { theta_d1, theta_d2, c });
    }
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        let f_mid = residual(mid);
        if f_mid == 0.0 {
            lo = mid;
            hi = mid;
        } else if f_mid.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let theta_o1 = 0.5 * (lo + hi);
    Ok(OverlapSplit::clamp_into(
        theta_o1,
        sum - theta_o1,
        theta_d1,
        theta_d2,
        SplitMethod::RootSolve,
    ))
}

/// Feasibility report for one scenario.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Feasibility {
    /// Whether the two visibility caps have an intersecting region:
    /// theta_m1 + theta_m2 > 4 arcsin(d / 2 R_earth).
    pub intersects: bool,
    /// Line-of-sight validity constraint theta_m_i < 2 arcsin(d / 2 R_earth).
    /// Reported as a warning flag, not a failure; small-d configurations
    /// violate it while still producing meaningful curves.
    pub los_valid: bool,
    /// Signed slack of the intersection inequality, in radians.
    pub margin_rad: f64,
}

pub fn feasibility_check(scenario: &RelayScenario) -> Feasibility {
    let c = scenario.endpoint_central_angle_rad();
    let margin = scenario.theta_m1_rad + scenario.theta_m2_rad - 2.0 * c;
    Feasibility {
        intersects: margin > 0.0,
        los_valid: scenario.theta_m1_rad < c && scenario.theta_m2_rad < c,
        margin_rad: margin,
    }
}
