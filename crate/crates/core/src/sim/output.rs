//! CSV and JSON emitters. Numbers use Rust's locale-free shortest
//! round-trip formatting.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};

use super::experiments::{DofRow, SweepResult};

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

fn join(values: impl IntoIterator<Item = String>) -> String {
    values.into_iter().collect::<Vec<_>>().join(";")
}

/// Columns: `M,dof_proposed,dof_upper_bound,dof_lower_bound,group_sizes`.
/// Group sizes are `;`-separated.
pub fn write_dof_csv<W: Write>(rows: &[DofRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["M", "dof_proposed", "dof_upper_bound", "dof_lower_bound", "group_sizes"])
        .map_err(csv_err)?;
    for r in rows {
        w.write_record([
            r.antennas.to_string(),
            r.dof_proposed.to_string(),
            r.dof_upper_bound.to_string(),
            r.dof_lower_bound.to_string(),
            join(r.group_sizes.iter().map(|s| s.to_string())),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

pub const SWEEP_HEADER: [&str; 8] = [
    "power_dbm",
    "association_mode",
    "mean_sum_rate_bps_hz",
    "std_sum_rate",
    "mean_sum_rate_mbps",
    "per_stream_mean_rates",
    "n_trials",
    "seed",
];

/// One row per (power, mode). `mean_sum_rate_mbps` scales the spectral
/// efficiency by the bandwidth; per-stream means are `;`-separated.
pub fn write_sweep_csv<W: Write>(result: &SweepResult, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_HEADER).map_err(csv_err)?;
    for r in &result.rows {
        w.write_record([
            r.power_dbm.to_string(),
            r.association_mode.to_string(),
            r.mean_sum_rate_bps_hz.to_string(),
            r.std_sum_rate.to_string(),
            (r.mean_sum_rate_bps_hz * result.bandwidth_hz / 1e6).to_string(),
            join(r.per_stream_mean_rates.iter().map(|x| x.to_string())),
            r.n_trials.to_string(),
            r.seed.to_string(),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Pretty-printed UTF-8 JSON document followed by a newline.
pub fn write_json<T: Serialize, W: Write>(value: &T, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| Error::Io(e.to_string()))?;
    out.write_all(b"\n")?;
    Ok(())
}
