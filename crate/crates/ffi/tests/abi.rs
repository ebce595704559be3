use std::ffi::{c_char, CStr, CString};
use std::ptr;

use noma_uav_ffi::*;

fn take_string(p: *mut c_char) -> String {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { noma_string_free(p) };
    s
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(noma_last_error_message()) }.to_str().unwrap().to_owned()
}

fn config(json: &str) -> *mut NomaConfig {
    let json = CString::new(json).unwrap();
    let mut cfg = ptr::null_mut();
    assert_eq!(unsafe { noma_config_from_json(json.as_ptr(), &mut cfg) }, NomaStatus::Ok);
    cfg
}

#[test]
fn dof_queries() {
    let mut j = 0usize;
    assert_eq!(unsafe { noma_max_dof(8, 7, &mut j) }, NomaStatus::Ok);
    assert_eq!(j, 4);
    assert_eq!(unsafe { noma_max_dof(8, 8, &mut j) }, NomaStatus::Infeasible);
    assert!(!last_error().is_empty());

    let mut sizes = [0usize; 3];
    assert_eq!(unsafe { noma_group_sizes(8, 3, sizes.as_mut_ptr(), 3) }, NomaStatus::Ok);
    assert_eq!(sizes, [2, 3, 3]);
    assert_eq!(last_error(), "");
    assert_eq!(unsafe { noma_group_sizes(8, 3, sizes.as_mut_ptr(), 2) }, NomaStatus::BufferTooSmall);
    assert_eq!(unsafe { noma_max_dof(8, 7, ptr::null_mut()) }, NomaStatus::NullPointer);
}

#[test]
fn waterfill_matches_closed_form() {
    let gammas = [2.0, 1.0];
    let mut p = [0.0; 2];
    assert_eq!(unsafe { noma_waterfill(gammas.as_ptr(), 2, 1.0, p.as_mut_ptr()) }, NomaStatus::Ok);
    // Level 1.25: powers 1.25 - 0.5 and 1.25 - 1.
    assert!((p[0] - 0.75).abs() < 1e-12 && (p[1] - 0.25).abs() < 1e-12);
    assert_eq!(
        unsafe { noma_waterfill(gammas.as_ptr(), 2, f64::NAN, p.as_mut_ptr()) },
        NomaStatus::InvalidInput
    );
}

#[test]
fn config_lifecycle_and_validation() {
    let cfg = config(r#"{"antenna_count": 5}"#);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { noma_config_to_json(cfg, &mut out) }, NomaStatus::Ok);
    let text = take_string(out);
    assert!(text.contains("\"antenna_count\": 5"));
    unsafe { noma_config_free(cfg) };

    let bad = CString::new(r#"{"antennas": 5}"#).unwrap();
    let mut cfg = ptr::null_mut();
    assert_eq!(unsafe { noma_config_from_json(bad.as_ptr(), &mut cfg) }, NomaStatus::InvalidInput);
    assert!(cfg.is_null());
    assert!(last_error().contains("antennas"));

    let invalid_utf8 = [0xffu8, 0];
    assert_eq!(
        unsafe { noma_config_from_json(invalid_utf8.as_ptr().cast(), &mut cfg) },
        NomaStatus::InvalidUtf8
    );
    unsafe {
        noma_config_free(ptr::null_mut());
        noma_string_free(ptr::null_mut());
    }
}

#[test]
fn experiments_match_the_library() {
    let cfg = config(r#"{"n_trials": 2, "power_dbm_min": 20, "power_dbm_max": 30}"#);

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { noma_run_dof(cfg, &mut out) }, NomaStatus::Ok);
    assert_eq!(take_string(out).lines().count(), 8);

    let modes = CString::new("effective_sinr,random").unwrap();
    assert_eq!(unsafe { noma_run_sweep(cfg, modes.as_ptr(), &mut out) }, NomaStatus::Ok);
    let csv = take_string(out);
    let config = noma_uav::sim::SimConfig {
        n_trials: 2,
        power_dbm_min: 20.0,
        power_dbm_max: 30.0,
        ..Default::default()
    };
    let result = noma_uav::sim::run_rate_sweep(
        &config,
        &[noma_uav::sim::AssociationMode::EffectiveSinr, noma_uav::sim::AssociationMode::Random],
    )
    .unwrap();
    let mut expected = Vec::new();
    noma_uav::sim::output::write_sweep_csv(&result, &mut expected).unwrap();
    assert_eq!(csv.as_bytes(), expected.as_slice());

    let bad_modes = CString::new("best").unwrap();
    assert_eq!(unsafe { noma_run_sweep(cfg, bad_modes.as_ptr(), &mut out) }, NomaStatus::InvalidInput);

    assert_eq!(unsafe { noma_run_single(cfg, 3, 30.0, &mut out) }, NomaStatus::Ok);
    let record: noma_uav::sim::SingleRecord = serde_json::from_str(&take_string(out)).unwrap();
    assert!(record.interference.passed);
    assert_eq!(record.channel_seed, 3);

    assert_eq!(unsafe { noma_run_single(cfg, 3, f64::NEG_INFINITY, &mut out) }, NomaStatus::Ok);
    let record: noma_uav::sim::SingleRecord = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(record.sum_rate_bps_hz, 0.0);
    unsafe { noma_config_free(cfg) };
}

#[test]
fn interference_violation_is_reported() {
    let cfg = config(r#"{"tolerances": {"zf_residual": 1e-300}}"#);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { noma_run_single(cfg, 0, 30.0, &mut out) }, NomaStatus::InterferenceViolation);
    assert!(out.is_null());
    unsafe { noma_config_free(cfg) };
}

#[test]
fn null_config_is_rejected() {
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { noma_run_dof(ptr::null(), &mut out) }, NomaStatus::NullPointer);
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/noma_uav.h")).unwrap();
    for name in [
        "noma_last_error_message",
        "noma_string_free",
        "noma_config_default",
        "noma_config_from_json",
        "noma_config_free",
        "noma_config_to_json",
        "noma_max_dof",
        "noma_group_sizes",
        "noma_waterfill",
        "noma_run_dof",
        "noma_run_sweep",
        "noma_run_single",
        "typedef struct NomaConfig NomaConfig",
        "NOMA_STATUS_INTERFERENCE_VIOLATION = 5",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}
