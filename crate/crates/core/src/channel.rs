//! Cellular topology, Rician air-to-ground channels and per-GBS
//! interference-plus-noise powers.
//!
//! The UAV carries a uniform linear array along the x-axis. Each GBS is
//! reduced to a single effective receive antenna, so the channel from the UAV
//! to GBS `n` is an `M`-vector
//!
//! ```text
//! h_n = sqrt(tau_0 / d_n^2) * ( sqrt(K/(K+1)) * a_n + sqrt(1/(K+1)) * g_n )
//! ```
//!
//! where `a_n` is the LoS steering vector, `g_n ~ CN(0, I)` and `K` is the
//! Rician factor.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CVector};
use crate::seed::{self, tag};
use crate::units::{db_to_linear, dbm_to_watts};

/// Parameters of the air-to-ground channel model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelModelParams {
    /// Channel power gain at the 1 m reference distance, in dB.
    pub reference_gain_db: f64,
    /// LoS-to-scattered power ratio (linear, >= 0).
    pub rician_factor: f64,
    /// Number of UAV antennas.
    pub antenna_count: usize,
    /// Element spacing of the linear array in wavelengths.
    pub antenna_spacing_wavelengths: f64,
}

impl Default for ChannelModelParams {
    fn default() -> Self {
        Self {
            reference_gain_db: -40.0,
            rician_factor: 3.0,
            antenna_count: 6,
            antenna_spacing_wavelengths: 0.5,
        }
    }
}

impl ChannelModelParams {
    pub fn new(
        reference_gain_db: f64,
        rician_factor: f64,
        antenna_count: usize,
        antenna_spacing_wavelengths: f64,
    ) -> Result<Self> {
        let p = Self {
            reference_gain_db,
            rician_factor,
            antenna_count,
            antenna_spacing_wavelengths,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.reference_gain_db.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "reference_gain_db must be finite (got {})",
                self.reference_gain_db
            )));
        }
        if !(self.rician_factor >= 0.0) || self.rician_factor.is_infinite() {
            return Err(Error::InvalidParameter(format!(
                "rician_factor must be finite and >= 0 (got {})",
                self.rician_factor
            )));
        }
        if self.antenna_count == 0 {
            return Err(Error::InvalidParameter("antenna_count must be >= 1".into()));
        }
        if !(self.antenna_spacing_wavelengths > 0.0) || self.antenna_spacing_wavelengths.is_infinite()
        {
            return Err(Error::InvalidParameter(format!(
                "antenna_spacing_wavelengths must be > 0 (got {})",
                self.antenna_spacing_wavelengths
            )));
        }
        Ok(())
    }

    pub fn reference_gain(&self) -> f64 {
        db_to_linear(self.reference_gain_db)
    }
}

/// UAV and GBS placement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkTopology {
    /// UAV position `[x, y, H]` in meters.
    pub uav_position: [f64; 3],
    /// GBS ground positions `[x, y]` in meters.
    pub gbs_positions: Vec<[f64; 2]>,
    /// UAV-to-GBS distances in meters.
    pub distances: Vec<f64>,
    /// Radius of the disk around each GBS in which its terrestrial user lies.
    pub cell_radius_m: f64,
}

pub const DEFAULT_CELL_RADIUS_M: f64 = 250.0;

/// Places `n_gbs` GBSs evenly on a ring of radius `ring_radius_m` around the
/// UAV's ground projection, with the UAV hovering at `uav_height_m`.
pub fn build_topology(n_gbs: usize, ring_radius_m: f64, uav_height_m: f64) -> Result<NetworkTopology> {
    if n_gbs == 0 {
        return Err(Error::InvalidGeometry("at least one GBS is required".into()));
    }
    if !(ring_radius_m > 0.0) || !ring_radius_m.is_finite() {
        return Err(Error::InvalidGeometry(format!(
            "ring radius must be positive (got {ring_radius_m})"
        )));
    }
    if !(uav_height_m > 0.0) || !uav_height_m.is_finite() {
        return Err(Error::InvalidGeometry(format!(
            "UAV height must be positive (got {uav_height_m})"
        )));
    }
    let gbs_positions = (0..n_gbs)
        .map(|k| {
            let angle = 2.0 * PI * k as f64 / n_gbs as f64;
            [ring_radius_m * angle.cos(), ring_radius_m * angle.sin()]
        })
        .collect();
    NetworkTopology::from_positions([0.0, 0.0, uav_height_m], gbs_positions, DEFAULT_CELL_RADIUS_M)
}

impl NetworkTopology {
    /// Builds a topology from explicit coordinates, deriving the distances.
    pub fn from_positions(
        uav_position: [f64; 3],
        gbs_positions: Vec<[f64; 2]>,
        cell_radius_m: f64,
    ) -> Result<Self> {
        if gbs_positions.is_empty() {
            return Err(Error::InvalidGeometry("at least one GBS is required".into()));
        }
        if !(cell_radius_m > 0.0) || !cell_radius_m.is_finite() {
            return Err(Error::InvalidGeometry(format!(
                "cell radius must be positive (got {cell_radius_m})"
            )));
        }
        if uav_position.iter().chain(gbs_positions.iter().flatten()).any(|c| !c.is_finite()) {
            return Err(Error::InvalidGeometry("coordinates must be finite".into()));
        }
        let distances: Vec<f64> = gbs_positions
            .iter()
            .map(|g| {
                let dx = g[0] - uav_position[0];
                let dy = g[1] - uav_position[1];
                (dx * dx + dy * dy + uav_position[2] * uav_position[2]).sqrt()
            })
            .collect();
        if let Some(i) = distances.iter().position(|&d| !(d > 0.0)) {
            return Err(Error::InvalidGeometry(format!("GBS {i} coincides with the UAV")));
        }
        Ok(Self {
            uav_position,
            gbs_positions,
            distances,
            cell_radius_m,
        })
    }

    pub fn with_cell_radius(mut self, cell_radius_m: f64) -> Result<Self> {
        if !(cell_radius_m > 0.0) || !cell_radius_m.is_finite() {
            return Err(Error::InvalidGeometry(format!(
                "cell radius must be positive (got {cell_radius_m})"
            )));
        }
        self.cell_radius_m = cell_radius_m;
        Ok(self)
    }

    pub fn n_gbs(&self) -> usize {
        self.gbs_positions.len()
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.n_gbs() {
            return Err(Error::IndexOutOfRange {
                index,
                len: self.n_gbs(),
            });
        }
        Ok(())
    }

    /// Cosine of the angle between the array axis (x) and the UAV-to-GBS ray.
    pub fn axis_cosine(&self, index: usize) -> Result<f64> {
        self.check_index(index)?;
        let dx = self.gbs_positions[index][0] - self.uav_position[0];
        Ok(dx / self.distances[index])
    }
}

/// LoS steering vector of the UAV array towards GBS `gbs_index`.
///
/// Entry `m` is `exp(-i 2 pi s m cos(phi))` for spacing `s` in wavelengths.
pub fn los_steering(
    topology: &NetworkTopology,
    gbs_index: usize,
    params: &ChannelModelParams,
) -> Result<CVector> {
    params.validate()?;
    let cos_phi = topology.axis_cosine(gbs_index)?;
    Ok(steering_vector(params.antenna_count, params.antenna_spacing_wavelengths, cos_phi))
}

pub fn steering_vector(antenna_count: usize, spacing: f64, cos_phi: f64) -> CVector {
    CVector::from_fn(antenna_count, |m, _| {
        Complex64::from_polar(1.0, -2.0 * PI * spacing * m as f64 * cos_phi)
    })
}

/// Sampled channels from the UAV to every GBS.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSet {
    #[serde(with = "linalg::interleaved")]
    pub channels: Vec<CVector>,
    /// LoS steering vectors; empty for hand-built channel sets.
    #[serde(with = "linalg::interleaved")]
    pub los_components: Vec<CVector>,
    pub params: ChannelModelParams,
    pub seed: u64,
}

impl ChannelSet {
    /// Wraps explicit channel vectors (no LoS components, seed 0).
    pub fn from_channels(channels: Vec<CVector>) -> Result<Self> {
        let m = channels
            .first()
            .map(|h| h.len())
            .ok_or_else(|| Error::InvalidParameter("channel set must not be empty".into()))?;
        if m == 0 || channels.iter().any(|h| h.len() != m) {
            return Err(Error::DimensionMismatch(
                "all channel vectors must share one nonzero length".into(),
            ));
        }
        Ok(Self {
            channels,
            los_components: Vec::new(),
            params: ChannelModelParams {
                antenna_count: m,
                ..ChannelModelParams::default()
            },
            seed: 0,
        })
    }

    pub fn n_gbs(&self) -> usize {
        self.channels.len()
    }

    pub fn n_antennas(&self) -> usize {
        self.params.antenna_count
    }

    pub fn channel(&self, index: usize) -> Result<&CVector> {
        self.channels.get(index).ok_or(Error::IndexOutOfRange {
            index,
            len: self.channels.len(),
        })
    }
}

/// Draws one Rician channel per GBS.
///
/// The scattered component of GBS `n` comes from its own stream keyed by
/// `(seed, n)`, so channels do not depend on evaluation order.
pub fn sample_channels(
    topology: &NetworkTopology,
    params: &ChannelModelParams,
    seed: u64,
) -> Result<ChannelSet> {
    params.validate()?;
    let k = params.rician_factor;
    let los_weight = (k / (k + 1.0)).sqrt();
    let nlos_weight = (1.0 / (k + 1.0)).sqrt();
    let tau0 = params.reference_gain();

    let mut channels = Vec::with_capacity(topology.n_gbs());
    let mut los_components = Vec::with_capacity(topology.n_gbs());
    for (n, &d) in topology.distances.iter().enumerate() {
        let los = los_steering(topology, n, params)?;
        let mut rng = seed::rng(seed, &[tag::CHANNEL, n as u64]);
        let amplitude = (tau0 / (d * d)).sqrt();
        let h = CVector::from_fn(params.antenna_count, |m, _| {
            let scattered = complex_gaussian(&mut rng);
            (los[m] * los_weight + scattered * nlos_weight) * amplitude
        });
        channels.push(h);
        los_components.push(los);
    }
    Ok(ChannelSet {
        channels,
        los_components,
        params: *params,
        seed,
    })
}

/// Circularly-symmetric complex Gaussian with unit variance.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Terrestrial-user signal power and noise power at each GBS, in watts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinkNoiseProfile {
    pub terrestrial_powers: Vec<f64>,
    pub noise_powers: Vec<f64>,
}

impl LinkNoiseProfile {
    pub fn new(terrestrial_powers: Vec<f64>, noise_powers: Vec<f64>) -> Result<Self> {
        if terrestrial_powers.len() != noise_powers.len() || noise_powers.is_empty() {
            return Err(Error::DimensionMismatch(format!(
                "{} terrestrial powers vs {} noise powers",
                terrestrial_powers.len(),
                noise_powers.len()
            )));
        }
        if terrestrial_powers.iter().any(|&q| !(q >= 0.0) || !q.is_finite()) {
            return Err(Error::InvalidParameter("terrestrial powers must be >= 0".into()));
        }
        if noise_powers.iter().any(|&s| !(s > 0.0) || !s.is_finite()) {
            return Err(Error::InvalidParameter("noise powers must be > 0".into()));
        }
        Ok(Self {
            terrestrial_powers,
            noise_powers,
        })
    }

    pub fn len(&self) -> usize {
        self.noise_powers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.noise_powers.is_empty()
    }

    /// `Q_n + sigma_n^2`.
    pub fn interference_plus_noise(&self, index: usize) -> f64 {
        self.terrestrial_powers[index] + self.noise_powers[index]
    }
}

/// Log-distance path loss between a terrestrial user and its GBS.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TerrestrialModel {
    pub path_loss_exponent: f64,
    /// Gain at the 1 m reference distance, in dB.
    pub reference_gain_db: f64,
}

impl Default for TerrestrialModel {
    fn default() -> Self {
        Self {
            path_loss_exponent: 3.5,
            reference_gain_db: -30.0,
        }
    }
}

impl TerrestrialModel {
    /// Received power in watts from a user transmitting `tx_power_dbm` at
    /// `distance_m`. Distances below the 1 m reference are clamped to it.
    pub fn received_power(&self, tx_power_dbm: f64, distance_m: f64) -> f64 {
        let d = distance_m.max(1.0);
        dbm_to_watts(tx_power_dbm) * db_to_linear(self.reference_gain_db) * d.powf(-self.path_loss_exponent)
    }
}

/// Terrestrial interference and noise at each GBS with the default
/// terrestrial path-loss model.
pub fn terrestrial_profile(
    topology: &NetworkTopology,
    user_tx_power_dbm: f64,
    noise_psd_dbm_hz: f64,
    bandwidth_hz: f64,
    seed: u64,
) -> Result<LinkNoiseProfile> {
    terrestrial_profile_with(
        &TerrestrialModel::default(),
        topology,
        user_tx_power_dbm,
        noise_psd_dbm_hz,
        bandwidth_hz,
        seed,
    )
}

/// Places one terrestrial user uniformly in the disk of radius
/// `topology.cell_radius_m` around each GBS and evaluates its received power.
/// Noise is `psd * bandwidth`, identical at every GBS.
pub fn terrestrial_profile_with(
    model: &TerrestrialModel,
    topology: &NetworkTopology,
    user_tx_power_dbm: f64,
    noise_psd_dbm_hz: f64,
    bandwidth_hz: f64,
    seed: u64,
) -> Result<LinkNoiseProfile> {
    if !(bandwidth_hz > 0.0) || !bandwidth_hz.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "bandwidth must be positive (got {bandwidth_hz})"
        )));
    }
    if !user_tx_power_dbm.is_finite() || !noise_psd_dbm_hz.is_finite() {
        return Err(Error::InvalidParameter("power levels must be finite".into()));
    }
    let noise = dbm_to_watts(noise_psd_dbm_hz) * bandwidth_hz;
    let radius = topology.cell_radius_m;
    let terrestrial_powers = (0..topology.n_gbs())
        .map(|n| {
            let mut rng = seed::rng(seed, &[tag::TERRESTRIAL, n as u64]);
            // Uniform in the disk: r = R sqrt(U).
            let r = radius * rng.random::<f64>().sqrt();
            model.received_power(user_tx_power_dbm, r)
        })
        .collect();
    LinkNoiseProfile::new(terrestrial_powers, vec![noise; topology.n_gbs()])
}

/// `||h_n||^2 / (Q_n + sigma_n^2)`.
pub fn effective_sinr(channels: &ChannelSet, profile: &LinkNoiseProfile, gbs_index: usize) -> Result<f64> {
    let h = channels.channel(gbs_index)?;
    if gbs_index >= profile.len() {
        return Err(Error::IndexOutOfRange {
            index: gbs_index,
            len: profile.len(),
        });
    }
    Ok(linalg::norm_sqr(h) / profile.interference_plus_noise(gbs_index))
}

pub fn effective_sinrs(channels: &ChannelSet, profile: &LinkNoiseProfile) -> Result<Vec<f64>> {
    if channels.n_gbs() != profile.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} channels vs {} noise entries",
            channels.n_gbs(),
            profile.len()
        )));
    }
    (0..channels.n_gbs())
        .map(|n| effective_sinr(channels, profile, n))
        .collect()
}
