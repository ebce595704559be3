//! C ABI for `noma-uav`.
//!
//! Every function returns a [`NomaStatus`]; results are written through out
//! pointers. On failure, [`noma_last_error_message`] describes the most recent
//! error on the calling thread. Strings returned by the library are owned by
//! the caller and must be released with [`noma_string_free`]; configurations
//! with [`noma_config_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use noma_uav::beamforming::waterfill;
use noma_uav::dof;
use noma_uav::sim::{self, output, SimConfig};
use noma_uav::Error;

/// Result code of every exported function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NomaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed configuration or parameter.
    InvalidInput = 3,
    /// Violated model assumption, infeasible grouping or rank deficiency.
    Infeasible = 4,
    /// A solution failed the zero-interference check.
    InterferenceViolation = 5,
    /// Output buffer too small.
    BufferTooSmall = 6,
    /// Unexpected internal failure.
    Internal = 7,
}

/// Opaque simulation configuration.
pub struct NomaConfig {
    inner: SimConfig,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(err: &Error) -> NomaStatus {
    match err {
        Error::Trial { source, .. } => status_of(source),
        Error::InterferenceViolation { .. } => NomaStatus::InterferenceViolation,
        e if e.exit_code() == 2 => NomaStatus::InvalidInput,
        _ => NomaStatus::Infeasible,
    }
}

/// Runs `body`, translating errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), (NomaStatus, String)>) -> NomaStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            NomaStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            NomaStatus::Internal
        }
    }
}

fn lib_err(e: Error) -> (NomaStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (NomaStatus, String) {
    (NomaStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (NomaStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (NomaStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn config_ref<'a>(cfg: *const NomaConfig) -> Result<&'a SimConfig, (NomaStatus, String)> {
    cfg.as_ref().map(|c| &c.inner).ok_or_else(|| null("config"))
}

unsafe fn write_string(out: *mut *mut c_char, bytes: Vec<u8>) -> Result<(), (NomaStatus, String)> {
    let s = CString::new(bytes).map_err(|_| (NomaStatus::Internal, "output contains a NUL byte".to_owned()))?;
    *out = s.into_raw();
    Ok(())
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn noma_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn noma_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Creates the default configuration.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn noma_config_default(out: *mut *mut NomaConfig) -> NomaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = Box::into_raw(Box::new(NomaConfig {
            inner: SimConfig::default(),
        }));
        Ok(())
    })
}

/// Parses a JSON configuration; omitted keys take their defaults.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn noma_config_from_json(json: *const c_char, out: *mut *mut NomaConfig) -> NomaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(json, "json")?;
        let inner = SimConfig::from_json(text).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(NomaConfig { inner }));
        Ok(())
    })
}

/// Releases a configuration. Null is ignored.
///
/// # Safety
/// `cfg` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn noma_config_free(cfg: *mut NomaConfig) {
    if !cfg.is_null() {
        drop(Box::from_raw(cfg));
    }
}

/// Serializes a configuration with every field filled in.
///
/// # Safety
/// `cfg` must be a live configuration and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn noma_config_to_json(cfg: *const NomaConfig, out: *mut *mut c_char) -> NomaStatus {
    guard(|| {
        let cfg = config_ref(cfg)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let text = serde_json::to_vec_pretty(cfg).map_err(|e| (NomaStatus::Internal, e.to_string()))?;
        write_string(out, text)
    })
}

/// Maximum number of streams for `n_gbs` GBSs and `n_antennas` antennas.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn noma_max_dof(n_gbs: usize, n_antennas: usize, out: *mut usize) -> NomaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = dof::max_dof(n_gbs, n_antennas).map_err(lib_err)?;
        Ok(())
    })
}

/// Balanced group sizes for `n_streams` streams, ascending. `out` must hold
/// `n_streams` entries.
///
/// # Safety
/// `out` must point to `capacity` writable elements.
#[no_mangle]
pub unsafe extern "C" fn noma_group_sizes(
    n_gbs: usize,
    n_streams: usize,
    out: *mut usize,
    capacity: usize,
) -> NomaStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let sizes = dof::group_sizes(n_gbs, n_streams).map_err(lib_err)?.group_sizes;
        if capacity < sizes.len() {
            return Err((NomaStatus::BufferTooSmall, format!("need {} entries", sizes.len())));
        }
        std::slice::from_raw_parts_mut(out, sizes.len()).copy_from_slice(&sizes);
        Ok(())
    })
}

/// Water-filling of `total_power` over streams with unit-power SINRs
/// `gammas[0..len]`; powers are written to `out[0..len]`.
///
/// # Safety
/// `gammas` and `out` must each point to `len` elements.
#[no_mangle]
pub unsafe extern "C" fn noma_waterfill(
    gammas: *const f64,
    len: usize,
    total_power: f64,
    out: *mut f64,
) -> NomaStatus {
    guard(|| {
        if len == 0 {
            return Ok(());
        }
        if gammas.is_null() || out.is_null() {
            return Err(null("gammas or out"));
        }
        let g = std::slice::from_raw_parts(gammas, len);
        if g.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
            return Err((NomaStatus::InvalidInput, "gammas must be finite and nonnegative".into()));
        }
        if !(total_power >= 0.0) || !total_power.is_finite() {
            return Err(lib_err(Error::InvalidPower(total_power)));
        }
        std::slice::from_raw_parts_mut(out, len).copy_from_slice(&waterfill(g, total_power));
        Ok(())
    })
}

/// Maximum-DoF table as CSV.
///
/// # Safety
/// `cfg` must be a live configuration and `out_csv` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn noma_run_dof(cfg: *const NomaConfig, out_csv: *mut *mut c_char) -> NomaStatus {
    guard(|| {
        let cfg = config_ref(cfg)?;
        if out_csv.is_null() {
            return Err(null("out_csv"));
        }
        let rows = sim::run_dof_experiment(cfg).map_err(lib_err)?;
        let mut buf = Vec::new();
        output::write_dof_csv(&rows, &mut buf).map_err(lib_err)?;
        write_string(out_csv, buf)
    })
}

/// Sum-rate sweep as CSV. `modes` is a comma-separated list such as
/// `"effective_sinr,random"`.
///
/// # Safety
/// `cfg` must be a live configuration, `modes` a NUL-terminated string and
/// `out_csv` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn noma_run_sweep(
    cfg: *const NomaConfig,
    modes: *const c_char,
    out_csv: *mut *mut c_char,
) -> NomaStatus {
    guard(|| {
        let cfg = config_ref(cfg)?;
        let modes = sim::parse_modes(read_str(modes, "modes")?).map_err(lib_err)?;
        if out_csv.is_null() {
            return Err(null("out_csv"));
        }
        let result = sim::run_rate_sweep(cfg, &modes).map_err(lib_err)?;
        let mut buf = Vec::new();
        output::write_sweep_csv(&result, &mut buf).map_err(lib_err)?;
        write_string(out_csv, buf)
    })
}

/// One end-to-end solve on the channel draw `seed`, as a JSON record.
/// `power_dbm` may be `-INFINITY` for a zero budget.
///
/// # Safety
/// `cfg` must be a live configuration and `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn noma_run_single(
    cfg: *const NomaConfig,
    seed: u64,
    power_dbm: f64,
    out_json: *mut *mut c_char,
) -> NomaStatus {
    guard(|| {
        let cfg = config_ref(cfg)?;
        if out_json.is_null() {
            return Err(null("out_json"));
        }
        let record = sim::run_single(cfg, seed, power_dbm).map_err(lib_err)?;
        let mut buf = Vec::new();
        output::write_json(&record, &mut buf).map_err(lib_err)?;
        write_string(out_json, buf)
    })
}
