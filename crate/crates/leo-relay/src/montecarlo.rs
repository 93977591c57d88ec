//! Seeded Monte-Carlo ground truth: binomial point process sampling on the
//! orbital shell, empirical contact-angle CDFs, outage frequencies and
//! hit-count area estimates.
//!
//! All estimators run in deterministic chunks: chunk `i` draws from its own
//! counter-derived substream keyed by (master seed, i), and per-chunk
//! sufficient statistics merge associatively in chunk order, so results
//! depend only on (seed, trials, chunk_size) and never on worker count.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distribution::{CdfCurve, Convention, CurveSource};
use crate::distribution::scenario_fingerprint;
use crate::error::{Error, Result};
use crate::geometry::{safe_acos, RelayScenario};
use crate::outage::hop_chord_distance;

/// Trial budget, master seed and deterministic decomposition unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct McConfig {
    pub trials: u64,
    pub seed: u64,
    pub chunk_size: u64,
}

impl McConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self {
            trials,
            seed,
            chunk_size: 4096,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 || self.chunk_size == 0 {
            return Err(Error::InvalidArgument(
                "trials and chunk_size must both be at least 1".into(),
            ));
        }
        Ok(())
    }

    fn chunks(&self) -> Vec<(u64, u64)> {
        let mut out = Vec::new();
        let mut start = 0;
        let mut index = 0;
        while start < self.trials {
            let len = self.chunk_size.min(self.trials - start);
            out.push((index, len));
            start += len;
            index += 1;
        }
        out
    }
}

/// A Bernoulli-type Monte-Carlo result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
}

impl McEstimate {
    fn bernoulli(hits: u64, mc: &McConfig) -> Self {
        let n = mc.trials as f64;
        let p = hits as f64 / n;
        McEstimate {
            estimate: p,
            std_error: (p * (1.0 - p) / n).sqrt(),
            trials: mc.trials,
            seed: mc.seed,
        }
    }

    fn scaled(self, factor: f64) -> Self {
        McEstimate {
            estimate: self.estimate * factor,
            std_error: self.std_error * factor,
            ..self
        }
    }
}

/// Substream for one chunk, derived from the master seed and chunk index so
/// scheduling never shifts the stream.
pub fn chunk_rng(seed: u64, chunk_index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&chunk_index.to_le_bytes());
    key[16..24].copy_from_slice(&0x6c656f5f72656c61u64.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

/// Uniform point on the unit sphere via (z, azimuth) sampling.
pub fn sample_unit_sphere<R: Rng>(rng: &mut R) -> [f64; 3] {
    let z: f64 = rng.gen_range(-1.0..1.0);
    let azimuth: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let s = (1.0 - z * z).sqrt();
    [s * azimuth.cos(), s * azimuth.sin(), z]
}

/// Canonical ground-node placement: the transmitter on the pole axis, the
/// receiver rotated by the endpoint central angle in the xz-plane. The model
/// is rotationally symmetric, so fixing them loses no generality and keeps
/// runs reproducible.
pub fn place_ground_nodes(scenario: &RelayScenario) -> ([f64; 3], [f64; 3]) {
    let gamma = scenario.endpoint_central_angle_rad();
    ([0.0, 0.0, 1.0], [gamma.sin(), 0.0, gamma.cos()])
}

/// Precomputed per-scenario constants for the hot trial loop.
struct TrialSampler {
    n_sat: u32,
    cos_half1: f64,
    cos_half2: f64,
    rx_x: f64,
    rx_z: f64,
}

impl TrialSampler {
    fn new(scenario: &RelayScenario) -> Self {
        let (_, rx) = place_ground_nodes(scenario);
        TrialSampler {
            n_sat: scenario.n_sat,
            cos_half1: (0.5 * scenario.theta_m1_rad).cos(),
            cos_half2: (0.5 * scenario.theta_m2_rad).cos(),
            rx_x: rx[0],
            rx_z: rx[2],
        }
    }

    /// One constellation draw; returns the cosine of the conditional contact
    /// angle, or None on outage. The azimuth of a satellite is only consumed
    /// when its z already passes the transmitter gate; satellites outside the
    /// transmitter cap cannot be eligible, so the skipped draw changes
    /// nothing about the result's distribution.
    fn sample_cos<R: Rng>(&self, rng: &mut R) -> Option<f64> {
        let mut best_z = f64::NEG_INFINITY;
        for _ in 0..self.n_sat {
            let z: f64 = rng.gen_range(-1.0..1.0);
            if z < self.cos_half1 {
                continue;
            }
            let azimuth: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
            let x = (1.0 - z * z).sqrt() * azimuth.cos();
            if x * self.rx_x + z * self.rx_z >= self.cos_half2 && z > best_z {
                best_z = z;
            }
        }
        (best_z > f64::NEG_INFINITY).then_some(best_z)
    }
}

/// One trial: sample the constellation and return the conditional contact
/// angle, or None when no satellite lies in both caps.
pub fn trial_contact_angle<R: Rng>(scenario: &RelayScenario, rng: &mut R) -> Option<f64> {
    TrialSampler::new(scenario).sample_cos(rng).map(safe_acos)
}

/// Empirical CDF of the conditional contact angle on the given grid.
///
/// Defective convention: outage trials never count below any threshold.
/// Normalized convention divides by the non-outage count instead.
pub fn empirical_cdf(
    scenario: &RelayScenario,
    mc: &McConfig,
    grid: &[f64],
    convention: Convention,
) -> Result<CdfCurve> {
    mc.validate()?;
    if grid.len() < 2 || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "grid must contain at least 2 strictly increasing angles".into(),
        ));
    }
    let sampler = TrialSampler::new(scenario);
    let per_chunk: Vec<Vec<f64>> = mc
        .chunks()
        .par_iter()
        .map(|&(index, len)| {
            let mut rng = chunk_rng(mc.seed, index);
            let mut angles = Vec::new();
            for _ in 0..len {
                if let Some(cos_angle) = sampler.sample_cos(&mut rng) {
                    angles.push(safe_acos(cos_angle));
                }
            }
            angles
        })
        .collect();
    let mut angles: Vec<f64> = per_chunk.into_iter().flatten().collect();
    angles.sort_by(f64::total_cmp);
    let denominator = match convention {
        Convention::Defective => mc.trials as f64,
        Convention::Normalized => {
            if angles.is_empty() {
                return Err(Error::CertainOutage);
            }
            angles.len() as f64
        }
    };
    let points = grid
        .iter()
        .map(|&theta| {
            let count = angles.partition_point(|&a| a <= theta);
            (theta, count as f64 / denominator)
        })
        .collect();
    let curve = CdfCurve {
        points,
        convention,
        source: CurveSource::Empirical,
        fingerprint: format!(
            "{};trials={};seed={};chunk={}",
            scenario_fingerprint(scenario),
            mc.trials,
            mc.seed,
            mc.chunk_size
        ),
    };
    curve.validate()?;
    Ok(curve)
}

fn count_chunked<F>(mc: &McConfig, hit: F) -> u64
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    mc.chunks()
        .par_iter()
        .map(|&(index, len)| {
            let mut rng = chunk_rng(mc.seed, index);
            (0..len).filter(|_| hit(&mut rng)).count() as u64
        })
        .sum()
}

/// Frequency of relay outage over seeded trials.
pub fn outage_frequency(scenario: &RelayScenario, mc: &McConfig) -> Result<McEstimate> {
    mc.validate()?;
    let sampler = TrialSampler::new(scenario);
    let outages = count_chunked(mc, |rng| sampler.sample_cos(rng).is_none());
    Ok(McEstimate::bernoulli(outages, mc))
}

/// How multi-hop trials draw their constellations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum HopSampling {
    /// A fresh constellation per hop, matching the independence built into
    /// the analytic product form.
    #[default]
    IndependentPerHop,
    /// One constellation shared by all hops. Physically truer, but diverges
    /// from the product form's independence assumption.
    SharedConstellation,
}

/// Frequency of outage in at least one of `n_hops` equal hops.
pub fn multi_hop_outage_frequency(
    scenario: &RelayScenario,
    n_hops: u32,
    mc: &McConfig,
    sampling: HopSampling,
) -> Result<McEstimate> {
    mc.validate()?;
    if n_hops == 0 {
        return Err(Error::InvalidArgument("n_hops must be at least 1".into()));
    }
    let earth = scenario.geometry.earth_radius_km;
    let hop_chord = hop_chord_distance(scenario.distance_km, n_hops, earth)?;
    let hop_scenario = RelayScenario {
        distance_km: hop_chord,
        ..*scenario
    };
    let hop_angle = hop_scenario.endpoint_central_angle_rad();
    let cos_half1 = (0.5 * scenario.theta_m1_rad).cos();
    let cos_half2 = (0.5 * scenario.theta_m2_rad).cos();
    // Terrestrial relays along one great circle in the xz-plane.
    let nodes: Vec<[f64; 3]> = (0..=n_hops)
        .map(|k| {
            let angle = hop_angle * k as f64;
            [angle.sin(), 0.0, angle.cos()]
        })
        .collect();
    let n_sat = scenario.n_sat;

    let outages = match sampling {
        HopSampling::IndependentPerHop => {
            let sampler = TrialSampler::new(&hop_scenario);
            count_chunked(mc, |rng| {
                (0..n_hops).any(|_| sampler.sample_cos(rng).is_none())
            })
        }
        HopSampling::SharedConstellation => count_chunked(mc, |rng| {
            let mut hop_served = vec![false; n_hops as usize];
            for _ in 0..n_sat {
                let sat = sample_unit_sphere(rng);
                for (hop, served) in hop_served.iter_mut().enumerate() {
                    if *served {
                        continue;
                    }
                    let tx = nodes[hop];
                    let rx = nodes[hop + 1];
                    if sat[0] * tx[0] + sat[2] * tx[2] >= cos_half1
                        && sat[0] * rx[0] + sat[2] * rx[2] >= cos_half2
                    {
                        *served = true;
                    }
                }
            }
            hop_served.iter().any(|served| !served)
        }),
    };
    Ok(McEstimate::bernoulli(outages, mc))
}

/// Hit-count estimate of the cap-slice area: 4 pi R^2 times the fraction of
/// uniform sphere samples inside the cap and beyond the cutting plane.
pub fn slice_area_estimate(
    theta_d: f64,
    theta_o: f64,
    radius_km: f64,
    mc: &McConfig,
) -> Result<McEstimate> {
    mc.validate()?;
    if !(theta_d > 0.0 && theta_d < std::f64::consts::PI) {
        return Err(Error::Domain(format!("theta_d {theta_d} outside (0, pi)")));
    }
    if !(theta_o >= 0.0 && theta_o <= theta_d) {
        return Err(Error::Domain(format!(
            "theta_o {theta_o} outside [0, theta_d]"
        )));
    }
    let half = 0.5 * theta_d;
    let cos_half = half.cos();
    // Cutting-plane offset along the slice direction, unit sphere.
    let plane = cos_half * (half - theta_o).tan();
    let hits = count_chunked(mc, |rng| {
        let z: f64 = rng.gen_range(-1.0..1.0);
        if z < cos_half {
            return false;
        }
        let azimuth: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        (1.0 - z * z).sqrt() * azimuth.cos() >= plane
    });
    let sphere = 4.0 * std::f64::consts::PI * radius_km * radius_km;
    Ok(McEstimate::bernoulli(hits, mc).scaled(sphere))
}

/// Hit-count estimate of the overlap area of the transmitter's eligibility
/// cap at contact angle `theta` with the receiver's cap.
pub fn overlap_area_estimate(
    scenario: &RelayScenario,
    theta: f64,
    mc: &McConfig,
) -> Result<McEstimate> {
    mc.validate()?;
    if !(theta >= 0.0 && theta <= std::f64::consts::PI) {
        return Err(Error::Domain(format!("theta {theta} outside [0, pi]")));
    }
    let cos_theta = theta.cos();
    let cos_half2 = (0.5 * scenario.theta_m2_rad).cos();
    let (_, rx) = place_ground_nodes(scenario);
    let hits = count_chunked(mc, |rng| {
        let z: f64 = rng.gen_range(-1.0..1.0);
        if z < cos_theta {
            return false;
        }
        let azimuth: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let x = (1.0 - z * z).sqrt() * azimuth.cos();
        x * rx[0] + z * rx[2] >= cos_half2
    });
    let sphere = 4.0 * std::f64::consts::PI * scenario.geometry.shell_radius_km.powi(2);
    Ok(McEstimate::bernoulli(hits, mc).scaled(sphere))
}
