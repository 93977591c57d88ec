//! Conditional contact angle distributions for LEO satellite-relayed
//! ground-to-ground transmission.
//!
//! Satellites form a binomial point process on an orbital shell; a relay is
//! eligible when it lies in the visibility caps of both ground endpoints.
//! This crate provides the analytic CDF of the conditional contact angle,
//! the relay outage probabilities built on it, the contact-distance
//! transform, and a seeded Monte-Carlo simulator acting as independent
//! ground truth for every analytical quantity.

pub mod cli;
pub mod distribution;
pub mod error;
pub mod geometry;
pub mod montecarlo;
pub mod outage;
pub mod quadrature;

pub use error::{Error, Result};
pub use geometry::{
    cap_full_area, cap_slice_area, central_angle_from_chord, chord_from_central_angle,
    feasibility_check, overlap_split_closed_form, overlap_split_root_solve, Feasibility,
    GeometryConfig, OverlapSplit, RelayScenario, SphericalCap, SplitMethod,
};
pub use distribution::{
    analytic_cdf_curve, angle_to_distance, conditional_contact_cdf,
    conditional_contact_cdf_normalized, conditional_contact_distance_cdf, conditional_contact_pdf,
    contact_angle_domain, distance_to_angle, expect_over_contact_distance, AngleDomain, CdfCurve,
    Convention, CurveSource, SplitSolver,
};
pub use montecarlo::{
    empirical_cdf, multi_hop_outage_frequency, outage_frequency, overlap_area_estimate,
    sample_unit_sphere, slice_area_estimate, trial_contact_angle, HopSampling, McConfig,
    McEstimate,
};
pub use outage::{
    hop_chord_distance, min_hops_for_outage_target, multi_relay_outage, single_relay_outage,
    OutageResult,
};
