//! Multi-beam uplink from a multi-antenna UAV to co-channel ground base
//! stations (GBSs) using NOMA with zero-forcing beamforming.
//!
//! Each GBS already serves a terrestrial user on the UAV's resource block and
//! must see zero residual interference from the UAV. GBSs that decode a UAV
//! stream cancel it before decoding their own user; all other GBSs are
//! protected by zero-forcing.
//!
//! Modules:
//! - [`channel`]: topology, Rician channels, interference-plus-noise powers
//! - [`dof`]: maximum DoF, balanced group sizes, feasibility checks
//! - [`association`]: stream-to-GBS decoding groups
//! - [`beamforming`]: null-space reduction, max-min directions, water-filling
//! - [`sim`]: experiment runners and output formats used by the CLI

pub mod association;
pub mod beamforming;
pub mod channel;
pub mod dof;
mod error;
pub mod linalg;
pub mod seed;
pub mod sim;
pub mod units;

pub use error::{Error, Result};
