//! Sum-rate beamforming for a fixed stream association.
//!
//! Each stream is confined to the null space of the GBSs that do not decode
//! it, which removes every interference term those GBSs would see. Inside
//! that subspace the stream's beam is split into a unit-norm max-min
//! direction and a power, and the powers are water-filled across streams.

mod maxmin;
mod null_space;
mod waterfill;

pub use maxmin::{maxmin_direction, maxmin_direction_with, min_sinr, MaxMinDirection, MaxMinSettings};
pub use null_space::{null_space_basis, null_space_basis_with_tol, NullSpaceBasis};
pub use waterfill::{sum_rate, water_level, waterfill};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::association::Association;
use crate::channel::{ChannelSet, LinkNoiseProfile};
use crate::error::{Error, Result};
use crate::linalg::{self, CVector};
use crate::seed::{self, tag};

/// Numerical thresholds used by the solver and the output checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Pass threshold for the relative post-SIC interference residual.
    pub zf_residual: f64,
    /// Relative slack on the transmit power budget.
    pub power: f64,
    /// Iterate-change threshold of the max-min ascent.
    pub convergence: f64,
    /// Relative singular-value threshold for numerical nullity.
    pub nullity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            zf_residual: 1e-10,
            power: 1e-9,
            convergence: 1e-8,
            nullity: linalg::DEFAULT_NULLITY_TOL,
        }
    }
}

/// Power-independent part of a stream's design.
#[derive(Debug, Clone, PartialEq)]
pub struct StreamDesign {
    pub basis: NullSpaceBasis,
    /// Unit-norm direction inside the null space.
    pub direction: CVector,
    /// Max-min SINR of the group at unit transmit power.
    pub unit_gamma: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamformingSolution {
    /// Transmit beams `w_j`.
    #[serde(with = "linalg::interleaved")]
    pub beams: Vec<CVector>,
    /// Null-space coordinates of each beam.
    #[serde(with = "linalg::interleaved")]
    pub reduced_beams: Vec<CVector>,
    /// Stream rates in bits/s/Hz.
    pub rates: Vec<f64>,
    pub unit_gammas: Vec<f64>,
    /// Per-stream powers in watts.
    pub powers: Vec<f64>,
    /// Power budget in watts.
    pub total_power: f64,
    /// Streams whose group sees only zero reduced channels.
    pub degenerate: Vec<bool>,
}

impl BeamformingSolution {
    pub fn sum_rate(&self) -> f64 {
        self.rates.iter().sum()
    }

    pub fn radiated_power(&self) -> f64 {
        self.beams.iter().map(linalg::norm_sqr).sum()
    }
}

/// Post-SIC interference left at each GBS.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterferenceReport {
    /// `sum_{j not decoded at n} |h_n^H w_j|^2`, in watts.
    pub residuals: Vec<f64>,
    /// `max_n residual_n / (P max_m ||h_m||^2)`.
    pub max_relative_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Designs the power-independent part of every stream: its null-space
/// basis and unit-power max-min direction.
pub fn design_streams(
    channels: &ChannelSet,
    profile: &LinkNoiseProfile,
    association: &Association,
    seed: u64,
    tolerances: &Tolerances,
    settings: &MaxMinSettings,
) -> Result<Vec<StreamDesign>> {
    check_dimensions(channels, profile, association)?;
    let settings = MaxMinSettings {
        convergence_tol: tolerances.convergence,
        ..settings.clone()
    };
    (0..association.n_streams())
        .map(|j| {
            let basis = null_space_basis_with_tol(channels, association, j, tolerances.nullity)?;
            let members = association.group(j);
            let mut reduced: Vec<CVector> = members.iter().map(|&n| basis.reduce(&channels.channels[n])).collect();
            // Reduced channels at the numerical noise floor count as zero.
            let all_negligible = members
                .iter()
                .zip(&reduced)
                .all(|(&n, g)| g.norm() <= tolerances.nullity * channels.channels[n].norm());
            if all_negligible {
                reduced.iter_mut().for_each(|g| g.fill(Complex64::new(0.0, 0.0)));
            }
            let denominators: Vec<f64> = members.iter().map(|&n| profile.interference_plus_noise(n)).collect();
            let group_seed = seed::derive(seed, &[tag::SOLVER, j as u64]);
            let dir = maxmin_direction_with(&reduced, &denominators, group_seed, &settings)?;
            Ok(StreamDesign {
                basis,
                direction: dir.direction,
                unit_gamma: dir.gamma,
                degenerate: dir.degenerate,
            })
        })
        .collect()
}

/// Water-fills `total_power` over designed streams and forms the beams.
pub fn allocate_power(designs: &[StreamDesign], total_power: f64) -> Result<BeamformingSolution> {
    if !(total_power >= 0.0) || !total_power.is_finite() {
        return Err(Error::InvalidPower(total_power));
    }
    let unit_gammas: Vec<f64> = designs.iter().map(|d| d.unit_gamma).collect();
    let powers = waterfill(&unit_gammas, total_power);
    let reduced_beams: Vec<CVector> = designs
        .iter()
        .zip(&powers)
        .map(|(d, &p)| &d.direction * Complex64::new(p.sqrt(), 0.0))
        .collect();
    let beams = designs.iter().zip(&reduced_beams).map(|(d, r)| d.basis.lift(r)).collect();
    let rates = unit_gammas
        .iter()
        .zip(&powers)
        .map(|(&g, &p)| (1.0 + g * p).log2())
        .collect();
    Ok(BeamformingSolution {
        beams,
        reduced_beams,
        rates,
        unit_gammas,
        powers,
        total_power,
        degenerate: designs.iter().map(|d| d.degenerate).collect(),
    })
}

/// Maximizes the sum rate under zero interference for a fixed association.
pub fn solve_sum_rate(
    channels: &ChannelSet,
    profile: &LinkNoiseProfile,
    association: &Association,
    total_power: f64,
    seed: u64,
) -> Result<BeamformingSolution> {
    solve_sum_rate_with(
        channels,
        profile,
        association,
        total_power,
        seed,
        &Tolerances::default(),
        &MaxMinSettings::default(),
    )
}

pub fn solve_sum_rate_with(
    channels: &ChannelSet,
    profile: &LinkNoiseProfile,
    association: &Association,
    total_power: f64,
    seed: u64,
    tolerances: &Tolerances,
    settings: &MaxMinSettings,
) -> Result<BeamformingSolution> {
    if !(total_power >= 0.0) || !total_power.is_finite() {
        return Err(Error::InvalidPower(total_power));
    }
    let designs = design_streams(channels, profile, association, seed, tolerances, settings)?;
    allocate_power(&designs, total_power)
}

fn check_dimensions(channels: &ChannelSet, profile: &LinkNoiseProfile, association: &Association) -> Result<()> {
    if channels.n_gbs() != profile.len() || channels.n_gbs() != association.n_gbs() {
        return Err(Error::DimensionMismatch(format!(
            "{} channels, {} noise entries, association over {} GBSs",
            channels.n_gbs(),
            profile.len(),
            association.n_gbs()
        )));
    }
    Ok(())
}

fn check_solution(channels: &ChannelSet, association: &Association, solution: &BeamformingSolution) -> Result<()> {
    if channels.n_gbs() != association.n_gbs() || solution.beams.len() != association.n_streams() {
        return Err(Error::DimensionMismatch(format!(
            "{} beams for {} streams; association over {} GBSs, {} channels",
            solution.beams.len(),
            association.n_streams(),
            association.n_gbs(),
            channels.n_gbs()
        )));
    }
    if solution.beams.iter().any(|w| w.len() != channels.n_antennas()) {
        return Err(Error::DimensionMismatch("beam length differs from antenna count".into()));
    }
    Ok(())
}

/// Interference each GBS still sees after cancelling the stream it decodes.
pub fn verify_interference(
    channels: &ChannelSet,
    association: &Association,
    solution: &BeamformingSolution,
) -> Result<InterferenceReport> {
    verify_interference_with_tol(channels, association, solution, Tolerances::default().zf_residual)
}

pub fn verify_interference_with_tol(
    channels: &ChannelSet,
    association: &Association,
    solution: &BeamformingSolution,
    tolerance: f64,
) -> Result<InterferenceReport> {
    check_solution(channels, association, solution)?;
    let residuals: Vec<f64> = channels
        .channels
        .iter()
        .enumerate()
        .map(|(n, h)| {
            let decoded = association.decode_map()[n];
            solution
                .beams
                .iter()
                .enumerate()
                .filter(|&(j, _)| decoded != Some(j))
                .map(|(_, w)| linalg::inner(h, w).norm_sqr())
                .sum()
        })
        .collect();
    let max_gain = channels.channels.iter().map(linalg::norm_sqr).fold(0.0_f64, f64::max);
    let worst = residuals.iter().copied().fold(0.0_f64, f64::max);
    let reference = solution.total_power * max_gain;
    let max_relative_residual = if worst == 0.0 {
        0.0
    } else if reference > 0.0 {
        worst / reference
    } else {
        f64::INFINITY
    };
    Ok(InterferenceReport {
        residuals,
        max_relative_residual,
        tolerance,
        passed: max_relative_residual <= tolerance,
    })
}

/// Per-stream rate from the full decoding SINR, with every other stream's
/// received power counted as interference, minimized over the group.
pub fn achievable_rates(
    channels: &ChannelSet,
    profile: &LinkNoiseProfile,
    association: &Association,
    solution: &BeamformingSolution,
) -> Result<Vec<f64>> {
    check_dimensions(channels, profile, association)?;
    check_solution(channels, association, solution)?;
    Ok((0..association.n_streams())
        .map(|j| {
            association
                .group(j)
                .iter()
                .map(|&n| {
                    let h = &channels.channels[n];
                    let received: Vec<f64> = solution.beams.iter().map(|w| linalg::inner(h, w).norm_sqr()).collect();
                    let cross: f64 = received.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, p)| p).sum();
                    let sinr = received[j] / (cross + profile.interference_plus_noise(n));
                    (1.0 + sinr).log2()
                })
                .fold(f64::INFINITY, f64::min)
        })
        .collect())
}
