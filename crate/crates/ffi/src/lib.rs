//! C ABI for the charging-lot simulator.
//!
//! Handles are opaque pointers created and destroyed by this library;
//! every fallible call returns a [`FlwcStatus`] and leaves a description
//! of the last failure in a thread-local buffer readable through
//! [`flwc_last_error_message`]. The generated header lives at
//! `include/flwc.h`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::path::PathBuf;

use flwc_core::fuzzy::{Fis, FuzzyError, RuleBase};
use flwc_core::metrics::compare_schemes;
use flwc_core::scenario::{sample_fleet, ScenarioConfig, ScenarioError};
use flwc_core::sim::SimError;

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlwcStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// A value or configuration was rejected; see the last error message.
    InvalidArgument = 3,
    /// An input was outside its mathematical domain.
    DomainError = 4,
    /// A rule, membership or configuration file failed to parse.
    ParseError = 5,
    /// A file could not be read.
    IoError = 6,
}

/// Opaque handle over an assembled fuzzy inference system.
pub struct FlwcFis(Fis);

/// Opaque handle over a scenario configuration.
pub struct FlwcConfig(ScenarioConfig);

/// Paired comparison of the two schemes on one sampled fleet.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlwcComparison {
    pub seed: u64,
    pub flwc_served: u32,
    pub fcfs_served: u32,
    pub flwc_unserved: u32,
    pub fcfs_unserved: u32,
    pub flwc_avg_utilization: f64,
    pub fcfs_avg_utilization: f64,
    /// Served-count difference, weight scheme minus arrival order.
    pub served_delta: i64,
    /// Average-utilization difference, weight scheme minus arrival order.
    pub avg_utilization_delta: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("NULs stripped");
    });
}

fn fail(status: FlwcStatus, err: &dyn std::error::Error) -> FlwcStatus {
    let mut message = err.to_string();
    let mut source = err.source();
    while let Some(cause) = source {
        message.push_str(": ");
        message.push_str(&cause.to_string());
        source = cause.source();
    }
    set_last_error(&message);
    status
}

fn scenario_status(err: &ScenarioError) -> FlwcStatus {
    match err {
        ScenarioError::InvalidValue { .. } | ScenarioError::UnknownKey { .. } => {
            FlwcStatus::InvalidArgument
        }
        ScenarioError::Parse { .. } => FlwcStatus::ParseError,
        ScenarioError::Io { .. } => FlwcStatus::IoError,
        ScenarioError::SocAboveTarget { .. } => FlwcStatus::DomainError,
    }
}

fn fuzzy_status(err: &FuzzyError) -> FlwcStatus {
    match err {
        FuzzyError::OutOfRange { .. } | FuzzyError::EmptyAggregate => FlwcStatus::DomainError,
        FuzzyError::Parse { .. } => FlwcStatus::ParseError,
        FuzzyError::Io { .. } => FlwcStatus::IoError,
        _ => FlwcStatus::InvalidArgument,
    }
}

/// # Safety
/// `ptr` must be null or a NUL-terminated string valid for the duration
/// of the call.
unsafe fn cstr_arg<'a>(ptr: *const c_char) -> Result<&'a str, FlwcStatus> {
    if ptr.is_null() {
        set_last_error("null pointer argument");
        return Err(FlwcStatus::NullArgument);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_last_error("argument is not valid UTF-8");
        FlwcStatus::InvalidUtf8
    })
}

/// Message describing the last failure on this thread. The pointer stays
/// valid until the next failing call on the same thread. Never null.
#[no_mangle]
pub extern "C" fn flwc_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Creates the built-in inference system. Never fails; free with
/// [`flwc_fis_free`].
#[no_mangle]
pub extern "C" fn flwc_fis_default() -> *mut FlwcFis {
    Box::into_raw(Box::new(FlwcFis(Fis::default())))
}

/// Builds an inference system from optional rule-base and
/// membership-parameter files (either may be null to keep the built-in
/// part). On success writes a handle to `out_fis`.
///
/// # Safety
/// `rules_path` and `mf_path` must each be null or valid NUL-terminated
/// strings; `out_fis` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn flwc_fis_from_files(
    rules_path: *const c_char,
    mf_path: *const c_char,
    out_fis: *mut *mut FlwcFis,
) -> FlwcStatus {
    if out_fis.is_null() {
        set_last_error("null pointer argument");
        return FlwcStatus::NullArgument;
    }
    let mut builder = Fis::builder();
    if !rules_path.is_null() {
        let path = match cstr_arg(rules_path) {
            Ok(p) => p,
            Err(status) => return status,
        };
        let rules = match RuleBase::from_file(PathBuf::from(path)) {
            Ok(r) => r,
            Err(e) => return fail(fuzzy_status(&e), &e),
        };
        builder = builder.rules(rules);
    }
    if !mf_path.is_null() {
        let path = match cstr_arg(mf_path) {
            Ok(p) => p,
            Err(status) => return status,
        };
        let overrides = match flwc_core::fuzzy::load_mf_overrides(PathBuf::from(path)) {
            Ok(o) => o,
            Err(e) => return fail(fuzzy_status(&e), &e),
        };
        builder = match builder.apply_overrides(&overrides) {
            Ok(b) => b,
            Err(e) => return fail(fuzzy_status(&e), &e),
        };
    }
    match builder.build() {
        Ok(fis) => {
            *out_fis = Box::into_raw(Box::new(FlwcFis(fis)));
            FlwcStatus::Ok
        }
        Err(e) => fail(fuzzy_status(&e), &e),
    }
}

/// Computes the scheduling weight for normalized state of charge and stay
/// time, both in [0, 1].
///
/// # Safety
/// `fis` must be a live handle from this library; `out_weight` must be a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn flwc_fis_compute_weight(
    fis: *const FlwcFis,
    soc: f64,
    stay_time: f64,
    out_weight: *mut f64,
) -> FlwcStatus {
    if fis.is_null() || out_weight.is_null() {
        set_last_error("null pointer argument");
        return FlwcStatus::NullArgument;
    }
    match (*fis).0.compute_weight(soc, stay_time) {
        Ok(w) => {
            *out_weight = w;
            FlwcStatus::Ok
        }
        Err(e) => fail(fuzzy_status(&e), &e),
    }
}

/// Releases a handle from [`flwc_fis_default`] or [`flwc_fis_from_files`].
/// Null is accepted and ignored.
///
/// # Safety
/// `fis` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn flwc_fis_free(fis: *mut FlwcFis) {
    if !fis.is_null() {
        drop(Box::from_raw(fis));
    }
}

/// Creates the built-in scenario configuration. Never fails; free with
/// [`flwc_config_free`].
#[no_mangle]
pub extern "C" fn flwc_config_default() -> *mut FlwcConfig {
    Box::into_raw(Box::new(FlwcConfig(ScenarioConfig::default())))
}

/// Loads a key-value configuration file over the defaults.
///
/// # Safety
/// `path` must be a valid NUL-terminated string; `out_config` must be a
/// valid pointer.
#[no_mangle]
pub unsafe extern "C" fn flwc_config_from_file(
    path: *const c_char,
    out_config: *mut *mut FlwcConfig,
) -> FlwcStatus {
    if out_config.is_null() {
        set_last_error("null pointer argument");
        return FlwcStatus::NullArgument;
    }
    let path = match cstr_arg(path) {
        Ok(p) => p,
        Err(status) => return status,
    };
    match ScenarioConfig::from_file(PathBuf::from(path)) {
        Ok(cfg) => {
            *out_config = Box::into_raw(Box::new(FlwcConfig(cfg)));
            FlwcStatus::Ok
        }
        Err(e) => fail(scenario_status(&e), &e),
    }
}

/// Sets one configuration field from its textual key and value, using the
/// same keys as the configuration file.
///
/// # Safety
/// `config` must be a live handle; `key` and `value` must be valid
/// NUL-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn flwc_config_set(
    config: *mut FlwcConfig,
    key: *const c_char,
    value: *const c_char,
) -> FlwcStatus {
    if config.is_null() {
        set_last_error("null pointer argument");
        return FlwcStatus::NullArgument;
    }
    let key = match cstr_arg(key) {
        Ok(k) => k,
        Err(status) => return status,
    };
    let value = match cstr_arg(value) {
        Ok(v) => v,
        Err(status) => return status,
    };
    match (*config).0.set(key, value) {
        Ok(()) => FlwcStatus::Ok,
        Err(e) => fail(scenario_status(&e), &e),
    }
}

/// Releases a configuration handle. Null is accepted and ignored.
///
/// # Safety
/// `config` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn flwc_config_free(config: *mut FlwcConfig) {
    if !config.is_null() {
        drop(Box::from_raw(config));
    }
}

/// Samples the fleet for `seed`, runs both schemes on it and writes the
/// paired comparison to `out`.
///
/// # Safety
/// `config` and `fis` must be live handles; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn flwc_compare(
    config: *const FlwcConfig,
    fis: *const FlwcFis,
    seed: u64,
    out: *mut FlwcComparison,
) -> FlwcStatus {
    if config.is_null() || fis.is_null() || out.is_null() {
        set_last_error("null pointer argument");
        return FlwcStatus::NullArgument;
    }
    let cfg = ScenarioConfig {
        seed,
        ..(*config).0.clone()
    };
    if let Err(e) = cfg.validate() {
        return fail(scenario_status(&e), &e);
    }
    let fleet = match sample_fleet(&cfg) {
        Ok(f) => f,
        Err(e) => return fail(scenario_status(&e), &e),
    };
    match compare_schemes(&fleet, &cfg, &(*fis).0) {
        Ok(report) => {
            *out = FlwcComparison {
                seed,
                flwc_served: report.flwc.served as u32,
                fcfs_served: report.fcfs.served as u32,
                flwc_unserved: report.flwc.unserved as u32,
                fcfs_unserved: report.fcfs.unserved as u32,
                flwc_avg_utilization: report.flwc.avg_utilization,
                fcfs_avg_utilization: report.fcfs.avg_utilization,
                served_delta: report.served_delta,
                avg_utilization_delta: report.avg_utilization_delta,
            };
            FlwcStatus::Ok
        }
        Err(e) => {
            let status = match &e {
                SimError::Weight { .. } => FlwcStatus::DomainError,
                SimError::UnsortedFleet => FlwcStatus::InvalidArgument,
                SimError::Config(c) => scenario_status(c),
            };
            fail(status, &e)
        }
    }
}
