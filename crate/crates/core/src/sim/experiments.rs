use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::association::{self, Association};
use crate::beamforming::{self, BeamformingSolution, InterferenceReport, StreamDesign};
use crate::channel::{self, ChannelSet, LinkNoiseProfile, NetworkTopology};
use crate::dof::{self, DofResult};
use crate::error::{Error, Result};
use crate::seed;
use crate::units::dbm_to_watts;

use super::config::{AssociationMode, SimConfig};

/// One row of the DoF-versus-antennas table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DofRow {
    pub antennas: usize,
    pub dof_proposed: usize,
    /// Joint decoding over all GBSs: `min(M, N) = M`.
    pub dof_upper_bound: usize,
    /// Zero-forcing without interference cancellation supports no stream when `N > M`.
    pub dof_lower_bound: usize,
    pub group_sizes: Vec<usize>,
}

/// Maximum DoF for `M = 1..N-1` antennas.
pub fn run_dof_experiment(config: &SimConfig) -> Result<Vec<DofRow>> {
    let n = config.topology()?.n_gbs();
    if n < 2 {
        return Err(Error::AssumptionViolated { n_gbs: n, n_antennas: 1 });
    }
    (1..n)
        .map(|m| {
            let DofResult {
                n_streams,
                group_sizes,
                ..
            } = dof::dof_partition(n, m)?;
            Ok(DofRow {
                antennas: m,
                dof_proposed: n_streams,
                dof_upper_bound: m.min(n),
                dof_lower_bound: 0,
                group_sizes,
            })
        })
        .collect()
}

/// Channels, noise and association of one Monte Carlo trial.
#[derive(Debug, Clone)]
pub struct TrialSetup {
    pub seed: u64,
    pub channels: ChannelSet,
    pub profile: LinkNoiseProfile,
    pub sizes: DofResult,
    pub association: Association,
}

fn stream_sizes(config: &SimConfig, n_gbs: usize) -> Result<DofResult> {
    let j = match config.n_streams {
        Some(j) => j,
        None => dof::max_dof(n_gbs, config.antenna_count)?,
    };
    dof::group_sizes(n_gbs, j)
}

/// Draws the random inputs of a trial. Channels and terrestrial users depend
/// only on `seed`, so different association modes see the same draw.
pub fn setup_trial(
    config: &SimConfig,
    topology: &NetworkTopology,
    seed: u64,
    mode: AssociationMode,
) -> Result<TrialSetup> {
    let channels = channel::sample_channels(topology, &config.channel_params(), seed)?;
    let profile = channel::terrestrial_profile_with(
        &config.terrestrial_model(),
        topology,
        config.user_tx_power_dbm,
        config.noise_psd_dbm_hz,
        config.bandwidth_hz,
        seed,
    )?;
    let sizes = stream_sizes(config, topology.n_gbs())?;
    let association = match mode {
        AssociationMode::EffectiveSinr => {
            association::assign_by_effective_sinr_ordered(&channels, &profile, &sizes, config.size_order)?
        }
        AssociationMode::Random => association::assign_random(topology.n_gbs(), &sizes, seed)?,
    };
    Ok(TrialSetup {
        seed,
        channels,
        profile,
        sizes,
        association,
    })
}

fn design(config: &SimConfig, setup: &TrialSetup) -> Result<Vec<StreamDesign>> {
    beamforming::design_streams(
        &setup.channels,
        &setup.profile,
        &setup.association,
        setup.seed,
        &config.tolerances,
        &config.solver,
    )
}

/// Allocates power, then enforces the zero-interference gate and the power
/// budget.
fn solve_and_check(
    config: &SimConfig,
    setup: &TrialSetup,
    designs: &[StreamDesign],
    power_w: f64,
) -> Result<(BeamformingSolution, InterferenceReport)> {
    let solution = beamforming::allocate_power(designs, power_w)?;
    let report = beamforming::verify_interference_with_tol(
        &setup.channels,
        &setup.association,
        &solution,
        config.tolerances.zf_residual,
    )?;
    if !report.passed {
        return Err(Error::InterferenceViolation {
            seed: setup.seed,
            residual: report.max_relative_residual,
            tolerance: report.tolerance,
        });
    }
    let radiated = solution.radiated_power();
    if radiated > power_w * (1.0 + config.tolerances.power) {
        return Err(Error::Trial {
            seed: setup.seed,
            source: Box::new(Error::InvalidPower(radiated)),
        });
    }
    Ok((solution, report))
}

/// Aggregate of one (power, mode) sweep point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub power_dbm: f64,
    pub association_mode: AssociationMode,
    pub mean_sum_rate_bps_hz: f64,
    pub std_sum_rate: f64,
    pub per_stream_mean_rates: Vec<f64>,
    pub n_trials: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub bandwidth_hz: f64,
}

impl SweepResult {
    pub fn row(&self, power_dbm: f64, mode: AssociationMode) -> Option<&SweepRow> {
        self.rows
            .iter()
            .find(|r| r.power_dbm == power_dbm && r.association_mode == mode)
    }

    pub fn means(&self, mode: AssociationMode) -> Vec<f64> {
        self.rows
            .iter()
            .filter(|r| r.association_mode == mode)
            .map(|r| r.mean_sum_rate_bps_hz)
            .collect()
    }
}

/// Per-trial stream rates, indexed `[power][stream]`.
type TrialRates = Vec<Vec<f64>>;

fn run_trial(config: &SimConfig, topology: &NetworkTopology, seed: u64, mode: AssociationMode, powers_w: &[f64]) -> Result<TrialRates> {
    let wrap = |e: Error| match e {
        Error::InterferenceViolation { .. } | Error::Trial { .. } => e,
        other => Error::Trial {
            seed,
            source: Box::new(other),
        },
    };
    let setup = setup_trial(config, topology, seed, mode).map_err(wrap)?;
    let designs = design(config, &setup).map_err(wrap)?;
    powers_w
        .iter()
        .map(|&p| solve_and_check(config, &setup, &designs, p).map(|(s, _)| s.rates).map_err(wrap))
        .collect()
}

/// Mean and sample standard deviation, accumulated in order.
fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// Monte Carlo sum rate versus transmit power for each association mode.
///
/// Trial `k` uses seed `trial_seed(master_seed, k)` for every mode and power,
/// so modes are compared on paired draws. Trials run in parallel; results
/// are reduced in trial order, so output does not depend on scheduling.
pub fn run_rate_sweep(config: &SimConfig, modes: &[AssociationMode]) -> Result<SweepResult> {
    config.validate()?;
    let topology = config.topology()?;
    let grid = config.power_grid_dbm();
    let powers_w: Vec<f64> = grid.iter().map(|&p| dbm_to_watts(p)).collect();
    let seeds: Vec<u64> = (0..config.n_trials as u64)
        .map(|k| seed::trial_seed(config.master_seed, k))
        .collect();

    let mut per_mode: Vec<Vec<TrialRates>> = Vec::with_capacity(modes.len());
    for &mode in modes {
        let outcomes: Vec<Result<TrialRates>> = seeds
            .par_iter()
            .map(|&s| run_trial(config, &topology, s, mode, &powers_w))
            .collect();
        per_mode.push(outcomes.into_iter().collect::<Result<_>>()?);
    }

    let mut rows = Vec::with_capacity(grid.len() * modes.len());
    for (pi, &power_dbm) in grid.iter().enumerate() {
        for (mi, &mode) in modes.iter().enumerate() {
            let trials = &per_mode[mi];
            let sums: Vec<f64> = trials.iter().map(|t| t[pi].iter().sum()).collect();
            let (mean, std) = mean_std(&sums);
            let n_streams = trials[0][pi].len();
            let per_stream_mean_rates = (0..n_streams)
                .map(|j| trials.iter().map(|t| t[pi][j]).sum::<f64>() / trials.len() as f64)
                .collect();
            rows.push(SweepRow {
                power_dbm,
                association_mode: mode,
                mean_sum_rate_bps_hz: mean,
                std_sum_rate: std,
                per_stream_mean_rates,
                n_trials: trials.len(),
                seed: config.master_seed,
            });
        }
    }
    Ok(SweepResult {
        rows,
        bandwidth_hz: config.bandwidth_hz,
    })
}

/// Everything produced by one end-to-end solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SingleRecord {
    pub topology: NetworkTopology,
    pub channel_seed: u64,
    pub channels: ChannelSet,
    pub noise: LinkNoiseProfile,
    pub association_mode: AssociationMode,
    pub association: Association,
    /// `null` when the budget is 0 W.
    pub power_dbm: Option<f64>,
    pub power_w: f64,
    pub solution: BeamformingSolution,
    pub interference: InterferenceReport,
    /// Rates re-evaluated from the decoding SINR with all cross terms.
    pub rates: Vec<f64>,
    pub sum_rate_bps_hz: f64,
}

/// Solves one channel draw at one power level (`-inf` dBm means 0 W).
pub fn run_single(config: &SimConfig, seed: u64, power_dbm: f64) -> Result<SingleRecord> {
    config.validate()?;
    if power_dbm.is_nan() || power_dbm == f64::INFINITY {
        return Err(Error::InvalidPower(power_dbm));
    }
    let topology = config.topology()?;
    let setup = setup_trial(config, &topology, seed, config.association_mode)?;
    let designs = design(config, &setup)?;
    let power_w = dbm_to_watts(power_dbm);
    let (solution, interference) = solve_and_check(config, &setup, &designs, power_w)?;
    let rates = beamforming::achievable_rates(&setup.channels, &setup.profile, &setup.association, &solution)?;
    Ok(SingleRecord {
        sum_rate_bps_hz: solution.sum_rate(),
        topology,
        channel_seed: seed,
        channels: setup.channels,
        noise: setup.profile,
        association_mode: config.association_mode,
        association: setup.association,
        power_dbm: power_dbm.is_finite().then_some(power_dbm),
        power_w,
        solution,
        interference,
        rates,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dof_table_for_eight_gbs() {
        let rows = run_dof_experiment(&SimConfig::default()).unwrap();
        let dof: Vec<usize> = rows.iter().map(|r| r.dof_proposed).collect();
        assert_eq!(dof, vec![1, 1, 1, 1, 2, 2, 4]);
        assert!(rows.iter().all(|r| r.dof_upper_bound == r.antennas && r.dof_lower_bound == 0));
        assert_eq!(rows[6].group_sizes, vec![2, 2, 2, 2]);
        assert_eq!(rows[4].group_sizes, vec![4, 4]);
        assert_eq!(rows[0].group_sizes, vec![8]);
    }

    #[test]
    fn zero_watt_single_run() {
        let rec = run_single(&SimConfig::default(), 3, f64::NEG_INFINITY).unwrap();
        assert_eq!(rec.power_w, 0.0);
        assert_eq!(rec.power_dbm, None);
        assert!(rec.rates.iter().all(|&r| r == 0.0));
        assert!(rec.solution.rates.iter().all(|&r| r == 0.0));
    }

    #[test]
    fn mean_and_std() {
        let (m, s) = mean_std(&[1.0, 2.0, 3.0]);
        assert_eq!(m, 2.0);
        assert!((s - 1.0).abs() < 1e-15);
        assert_eq!(mean_std(&[4.0]), (4.0, 0.0));
    }

    #[test]
    fn small_sweep_shape() {
        let cfg = SimConfig {
            n_trials: 3,
            power_dbm_min: 20.0,
            power_dbm_max: 30.0,
            ..SimConfig::default()
        };
        let modes = [AssociationMode::EffectiveSinr, AssociationMode::Random];
        let res = run_rate_sweep(&cfg, &modes).unwrap();
        assert_eq!(res.rows.len(), 3 * 2);
        assert_eq!(res.rows[0].association_mode, AssociationMode::EffectiveSinr);
        assert_eq!(res.rows[1].association_mode, AssociationMode::Random);
        assert!(res.rows.iter().all(|r| r.per_stream_mean_rates.len() == 2 && r.n_trials == 3));
    }
}
