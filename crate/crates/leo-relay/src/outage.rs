//! Relay-inaccessibility metrics: single-relay outage, multi-relay bent-pipe
//! outage with equal per-hop dome angles, and hop-count planning.

use serde::{Deserialize, Serialize};

use crate::distribution::{conditional_contact_cdf_with, contact_angle_domain, SplitSolver};
use crate::error::{Error, Result};
use crate::geometry::{central_angle_from_chord, feasibility_check, RelayScenario};

/// Default cap on the hop-count search. Beyond this, per-hop distances are
/// tiny and the equal-dome-angle model assumption dominates the answer.
pub const DEFAULT_MAX_HOPS: u32 = 64;

/// An outage probability together with a flag marking geometrically
/// infeasible inputs, which map to certain outage rather than an error so
/// that distance sweeps can cross the feasibility boundary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OutageResult {
    pub probability: f64,
    pub infeasible: bool,
}

/// Probability that no satellite lies in both endpoints' visibility caps:
/// 1 - F at the domain upper bound, with the defective CDF.
pub fn single_relay_outage(scenario: &RelayScenario) -> Result<OutageResult> {
    single_relay_outage_with(scenario, SplitSolver::ClosedForm)
}

pub fn single_relay_outage_with(
    scenario: &RelayScenario,
    solver: SplitSolver,
) -> Result<OutageResult> {
    if !feasibility_check(scenario).intersects {
        return Ok(OutageResult {
            probability: 1.0,
            infeasible: true,
        });
    }
    let domain = contact_angle_domain(scenario)?;
    let f_top = conditional_contact_cdf_with(scenario, domain.upper_rad, solver)?;
    Ok(OutageResult {
        probability: 1.0 - f_top,
        infeasible: false,
    })
}

/// Per-hop chord when a total endpoint chord `d` is split into `n_hops` hops
/// of equal central angle: 2 R sin(arcsin(d / 2R) / n_hops).
pub fn hop_chord_distance(d_km: f64, n_hops: u32, earth_radius_km: f64) -> Result<f64> {
    if n_hops == 0 {
        return Err(Error::InvalidArgument("n_hops must be at least 1".into()));
    }
    if n_hops == 1 {
        // sin(arcsin(x)) = x; returning d directly keeps the single-hop
        // path bit-identical to the undivided scenario.
        central_angle_from_chord(d_km, earth_radius_km)?;
        return Ok(d_km);
    }
    let total_angle = central_angle_from_chord(d_km, earth_radius_km)?;
    Ok(2.0 * earth_radius_km * (0.5 * total_angle / n_hops as f64).sin())
}

/// Bent-pipe outage over `n_hops` equal hops, assuming hop independence:
/// 1 - (1 - P_single(hop_chord))^n_hops.
pub fn multi_relay_outage(scenario: &RelayScenario, n_hops: u32) -> Result<OutageResult> {
    let hop = hop_chord_distance(
        scenario.distance_km,
        n_hops,
        scenario.geometry.earth_radius_km,
    )?;
    let per_hop = RelayScenario {
        distance_km: hop,
        ..*scenario
    };
    let single = single_relay_outage(&per_hop)?;
    if single.infeasible {
        return Ok(OutageResult {
            probability: 1.0,
            infeasible: true,
        });
    }
    Ok(OutageResult {
        probability: 1.0 - (1.0 - single.probability).powi(n_hops as i32),
        infeasible: false,
    })
}

/// Smallest hop count in [1, max_hops] whose multi-relay outage does not
/// exceed `epsilon`, or None when unattainable.
pub fn min_hops_for_outage_target(
    scenario: &RelayScenario,
    epsilon: f64,
    max_hops: u32,
) -> Result<Option<u32>> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "target outage must lie in (0, 1), got {epsilon}"
        )));
    }
    for n_hops in 1..=max_hops {
        if multi_relay_outage(scenario, n_hops)?.probability <= epsilon {
            return Ok(Some(n_hops));
        }
    }
    Ok(None)
}
