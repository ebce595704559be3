use std::path::Path;
use std::process::{Command, Output};

use noma_uav::beamforming;
use noma_uav::sim::SingleRecord;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_noma-uav")).args(args).output().expect("run CLI")
}

fn write_config(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn dof_table_has_header_and_one_row_per_antenna_count() {
    let out = cli(&["dof"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "M,dof_proposed,dof_upper_bound,dof_lower_bound,group_sizes");
    assert_eq!(lines.len(), 8);
    assert_eq!(lines[7], "7,4,7,0,2;2;2;2");
}

#[test]
fn sweep_is_reproducible_and_sized() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "c.json", r#"{"n_trials": 1, "power_dbm_min": 10, "power_dbm_max": 20}"#);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let status = cli(&["sweep", "--config", &cfg, "--seed", "5", "--out", out.to_str().unwrap()]).status;
        assert!(status.success());
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    // Header plus 3 powers x 2 modes.
    assert_eq!(text.lines().count(), 1 + 3 * 2);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rdr.headers().unwrap().len(), 8);
    for row in rdr.records() {
        let row = row.unwrap();
        assert_eq!(&row[6], "1");
        assert_eq!(&row[7], "5");
    }
}

#[test]
fn single_record_round_trips_and_matches_reevaluation() {
    let out = cli(&["single", "--seed", "11", "--power-dbm", "25"]);
    assert!(out.status.success());
    let record: SingleRecord = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(record.channel_seed, 11);
    assert_eq!(record.power_dbm, Some(25.0));
    assert!(record.interference.passed);
    let again = serde_json::to_string_pretty(&record).unwrap() + "\n";
    assert_eq!(again.as_bytes(), out.stdout.as_slice());

    let rates = beamforming::achievable_rates(&record.channels, &record.noise, &record.association, &record.solution)
        .unwrap();
    for (a, b) in rates.iter().zip(&record.rates) {
        assert!((a - b).abs() <= 1e-9 * b.abs().max(1e-12));
    }
    let total: f64 = record.rates.iter().sum();
    assert!((total - record.sum_rate_bps_hz).abs() < 1e-9);
}

#[test]
fn zero_power_gives_zero_rate() {
    let out = cli(&["single", "--power-dbm", "-inf"]);
    assert!(out.status.success());
    let record: SingleRecord = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(record.power_dbm, None);
    assert_eq!(record.power_w, 0.0);
    assert_eq!(record.sum_rate_bps_hz, 0.0);
}

#[test]
fn exit_codes_distinguish_failure_kinds() {
    let dir = tempfile::tempdir().unwrap();

    let unknown = write_config(dir.path(), "unknown.json", r#"{"antennas": 4}"#);
    assert_eq!(cli(&["dof", "--config", &unknown]).status.code(), Some(2));
    assert_eq!(cli(&["sweep", "--modes", "greedy"]).status.code(), Some(2));
    assert_eq!(cli(&["single", "--power-dbm", "nan"]).status.code(), Some(2));
    assert_eq!(cli(&["dof", "--config", "/nonexistent/config.json"]).status.code(), Some(2));

    let square = write_config(dir.path(), "square.json", r#"{"antenna_count": 8}"#);
    assert_eq!(cli(&["single", "--config", &square]).status.code(), Some(3));

    let strict = write_config(dir.path(), "strict.json", r#"{"tolerances": {"zf_residual": 1e-300}}"#);
    let out = cli(&["single", "--config", &strict]);
    assert_eq!(out.status.code(), Some(4), "{}", String::from_utf8_lossy(&out.stderr));
}
