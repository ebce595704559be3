use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::association::SizeOrder;
use crate::beamforming::{MaxMinSettings, Tolerances};
use crate::channel::{self, ChannelModelParams, NetworkTopology, TerrestrialModel};
use crate::error::{Error, Result};

/// How streams are mapped to GBS groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssociationMode {
    /// Contiguous blocks of the effective-SINR ranking.
    EffectiveSinr,
    /// Uniformly random blocks.
    Random,
}

impl AssociationMode {
    pub fn as_str(&self) -> &'static str {
        match self {
            AssociationMode::EffectiveSinr => "effective_sinr",
            AssociationMode::Random => "random",
        }
    }
}

impl fmt::Display for AssociationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AssociationMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "effective_sinr" => Ok(AssociationMode::EffectiveSinr),
            "random" => Ok(AssociationMode::Random),
            other => Err(Error::Config(format!("unknown association mode `{other}`"))),
        }
    }
}

/// Parses a comma-separated mode list such as `effective_sinr,random`.
pub fn parse_modes(list: &str) -> Result<Vec<AssociationMode>> {
    let modes: Vec<AssociationMode> = list.split(',').map(str::parse).collect::<Result<_>>()?;
    if modes.is_empty() {
        return Err(Error::Config("at least one association mode is required".into()));
    }
    for (i, m) in modes.iter().enumerate() {
        if modes[..i].contains(m) {
            return Err(Error::Config(format!("association mode `{m}` listed twice")));
        }
    }
    Ok(modes)
}

/// Experiment configuration. Every field has a default; unknown keys are
/// rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    // topology
    pub n_gbs: usize,
    pub ring_radius_m: f64,
    pub uav_height_m: f64,
    pub cell_radius_m: f64,
    /// Explicit GBS ground positions; overrides the ring when present.
    pub gbs_positions: Option<Vec<[f64; 2]>>,

    // air-to-ground channel
    pub reference_gain_db: f64,
    pub rician_factor: f64,
    pub antenna_count: usize,
    pub antenna_spacing_wavelengths: f64,

    // terrestrial link
    pub user_tx_power_dbm: f64,
    pub noise_psd_dbm_hz: f64,
    pub bandwidth_hz: f64,
    pub terrestrial_path_loss_exponent: f64,
    pub terrestrial_reference_gain_db: f64,

    // power sweep
    pub power_dbm_min: f64,
    pub power_dbm_max: f64,
    pub power_dbm_step: f64,

    // trials
    pub n_trials: usize,
    pub master_seed: u64,

    pub association_mode: AssociationMode,
    pub size_order: SizeOrder,
    /// Stream count override; defaults to the maximum DoF.
    pub n_streams: Option<usize>,
    pub tolerances: Tolerances,
    pub solver: MaxMinSettings,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n_gbs: 8,
            ring_radius_m: 500.0,
            uav_height_m: 100.0,
            cell_radius_m: channel::DEFAULT_CELL_RADIUS_M,
            gbs_positions: None,
            reference_gain_db: -40.0,
            rician_factor: 3.0,
            antenna_count: 6,
            antenna_spacing_wavelengths: 0.5,
            user_tx_power_dbm: 23.0,
            noise_psd_dbm_hz: -169.0,
            bandwidth_hz: 10e6,
            terrestrial_path_loss_exponent: 3.5,
            terrestrial_reference_gain_db: -30.0,
            power_dbm_min: 13.0,
            power_dbm_max: 43.0,
            power_dbm_step: 5.0,
            n_trials: 100,
            master_seed: 0,
            association_mode: AssociationMode::EffectiveSinr,
            size_order: SizeOrder::AsGiven,
            n_streams: None,
            tolerances: Tolerances::default(),
            solver: MaxMinSettings::default(),
        }
    }
}

impl SimConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: SimConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        let cfg_err = |e: Error| Error::Config(e.to_string());
        self.topology().map_err(cfg_err)?;
        self.channel_params().validate().map_err(cfg_err)?;
        if !(self.bandwidth_hz > 0.0) || !self.bandwidth_hz.is_finite() {
            return Err(Error::Config("bandwidth_hz must be positive".into()));
        }
        for (name, v) in [
            ("user_tx_power_dbm", self.user_tx_power_dbm),
            ("noise_psd_dbm_hz", self.noise_psd_dbm_hz),
            ("terrestrial_reference_gain_db", self.terrestrial_reference_gain_db),
            ("power_dbm_min", self.power_dbm_min),
            ("power_dbm_max", self.power_dbm_max),
        ] {
            if !v.is_finite() {
                return Err(Error::Config(format!("{name} must be finite")));
            }
        }
        if !(self.terrestrial_path_loss_exponent >= 0.0) || !self.terrestrial_path_loss_exponent.is_finite() {
            return Err(Error::Config("terrestrial_path_loss_exponent must be >= 0".into()));
        }
        if self.power_dbm_min > self.power_dbm_max {
            return Err(Error::Config("power_dbm_min must not exceed power_dbm_max".into()));
        }
        if !(self.power_dbm_step > 0.0) || !self.power_dbm_step.is_finite() {
            return Err(Error::Config("power_dbm_step must be positive".into()));
        }
        if self.n_trials == 0 {
            return Err(Error::Config("n_trials must be >= 1".into()));
        }
        if let Some(j) = self.n_streams {
            let n = self.topology().map_err(cfg_err)?.n_gbs();
            if j == 0 || j > n || j > self.antenna_count {
                return Err(Error::Config(format!(
                    "n_streams = {j} must lie in 1..=min(N, M) = 1..={}",
                    n.min(self.antenna_count)
                )));
            }
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("tolerances.zf_residual", t.zf_residual),
            ("tolerances.power", t.power),
            ("tolerances.convergence", t.convergence),
            ("tolerances.nullity", t.nullity),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be positive")));
            }
        }
        if self.solver.stage_sharpness.is_empty() || self.solver.stage_sharpness.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
            return Err(Error::Config("solver.stage_sharpness must be a nonempty list of positive values".into()));
        }
        Ok(())
    }

    pub fn topology(&self) -> Result<NetworkTopology> {
        match &self.gbs_positions {
            Some(pos) => NetworkTopology::from_positions([0.0, 0.0, self.uav_height_m], pos.clone(), self.cell_radius_m),
            None => channel::build_topology(self.n_gbs, self.ring_radius_m, self.uav_height_m)?
                .with_cell_radius(self.cell_radius_m),
        }
    }

    pub fn channel_params(&self) -> ChannelModelParams {
        ChannelModelParams {
            reference_gain_db: self.reference_gain_db,
            rician_factor: self.rician_factor,
            antenna_count: self.antenna_count,
            antenna_spacing_wavelengths: self.antenna_spacing_wavelengths,
        }
    }

    pub fn terrestrial_model(&self) -> TerrestrialModel {
        TerrestrialModel {
            path_loss_exponent: self.terrestrial_path_loss_exponent,
            reference_gain_db: self.terrestrial_reference_gain_db,
        }
    }

    /// Sweep grid `min, min + step, ...` up to `max` (inclusive, with a small
    /// tolerance for accumulated rounding).
    pub fn power_grid_dbm(&self) -> Vec<f64> {
        let span = self.power_dbm_max - self.power_dbm_min;
        let count = (span / self.power_dbm_step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|k| self.power_dbm_min + k as f64 * self.power_dbm_step)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_the_reference_setup() {
        let c = SimConfig::default();
        c.validate().unwrap();
        assert_eq!((c.n_gbs, c.antenna_count), (8, 6));
        assert_eq!(c.uav_height_m, 100.0);
        assert_eq!(c.rician_factor, 3.0);
        assert_eq!(c.power_grid_dbm(), vec![13.0, 18.0, 23.0, 28.0, 33.0, 38.0, 43.0]);
    }

    #[test]
    fn partial_json_fills_defaults() {
        let c = SimConfig::from_json(r#"{"antenna_count": 7, "tolerances": {"zf_residual": 1e-8}}"#).unwrap();
        assert_eq!(c.antenna_count, 7);
        assert_eq!(c.tolerances.zf_residual, 1e-8);
        assert_eq!(c.tolerances.power, 1e-9);
        assert_eq!(c.n_gbs, 8);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(SimConfig::from_json(r#"{"antennas": 4}"#), Err(Error::Config(_))));
        assert!(matches!(
            SimConfig::from_json(r#"{"tolerances": {"zf": 1.0}}"#),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn invalid_values_are_rejected() {
        for bad in [
            r#"{"power_dbm_min": 40, "power_dbm_max": 30}"#,
            r#"{"power_dbm_step": 0}"#,
            r#"{"n_trials": 0}"#,
            r#"{"rician_factor": -1}"#,
            r#"{"uav_height_m": 0}"#,
            r#"{"n_streams": 7}"#,
            r#"{"bandwidth_hz": -5}"#,
            r#"{"association_mode": "greedy"}"#,
        ] {
            assert!(matches!(SimConfig::from_json(bad), Err(Error::Config(_))), "{bad}");
        }
    }

    #[test]
    fn explicit_positions_override_ring() {
        let c = SimConfig::from_json(r#"{"gbs_positions": [[100, 0], [0, 200], [-300, 0]]}"#).unwrap();
        let t = c.topology().unwrap();
        assert_eq!(t.n_gbs(), 3);
        assert!((t.distances[0] - (100.0f64.powi(2) + 100.0f64.powi(2)).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn mode_lists() {
        assert_eq!(
            parse_modes("effective_sinr,random").unwrap(),
            vec![AssociationMode::EffectiveSinr, AssociationMode::Random]
        );
        assert!(parse_modes("random,random").is_err());
        assert!(parse_modes("best").is_err());
    }

    #[test]
    fn grid_includes_endpoint_despite_rounding() {
        let c = SimConfig {
            power_dbm_min: 0.0,
            power_dbm_max: 0.3,
            power_dbm_step: 0.1,
            ..SimConfig::default()
        };
        assert_eq!(c.power_grid_dbm().len(), 4);
    }
}
