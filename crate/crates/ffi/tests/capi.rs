//! Exercises the C surface the way a foreign binding would.

use std::ffi::{CStr, CString};
use std::ptr;

use flwc_ffi::*;

fn last_error() -> String {
    unsafe {
        CStr::from_ptr(flwc_last_error_message())
            .to_string_lossy()
            .into_owned()
    }
}

#[test]
fn weight_computation_through_the_c_surface() {
    let fis = flwc_fis_default();
    assert!(!fis.is_null());
    let mut weight = f64::NAN;
    let status = unsafe { flwc_fis_compute_weight(fis, 0.5, 0.5, &mut weight) };
    assert_eq!(status, FlwcStatus::Ok);
    assert!((weight - 0.5).abs() < 0.05, "got {weight}");

    let mut top = 0.0;
    let mut low = 0.0;
    unsafe {
        assert_eq!(flwc_fis_compute_weight(fis, 1.0, 0.0, &mut top), FlwcStatus::Ok);
        assert_eq!(flwc_fis_compute_weight(fis, 0.0, 1.0, &mut low), FlwcStatus::Ok);
    }
    assert!(top > weight && weight > low);

    let status = unsafe { flwc_fis_compute_weight(fis, 1.5, 0.5, &mut weight) };
    assert_eq!(status, FlwcStatus::DomainError);
    assert!(last_error().contains("1.5"), "message: {}", last_error());

    unsafe { flwc_fis_free(fis) };
}

#[test]
fn null_arguments_are_rejected_not_crashed() {
    let mut weight = 0.0;
    let status = unsafe { flwc_fis_compute_weight(ptr::null(), 0.5, 0.5, &mut weight) };
    assert_eq!(status, FlwcStatus::NullArgument);
    let fis = flwc_fis_default();
    let status = unsafe { flwc_fis_compute_weight(fis, 0.5, 0.5, ptr::null_mut()) };
    assert_eq!(status, FlwcStatus::NullArgument);
    unsafe {
        flwc_fis_free(fis);
        flwc_fis_free(ptr::null_mut());
        flwc_config_free(ptr::null_mut());
    }
}

#[test]
fn config_set_and_compare_are_deterministic() {
    let cfg = flwc_config_default();
    let fis = flwc_fis_default();
    let key = CString::new("n_evs").unwrap();
    let value = CString::new("40").unwrap();
    let status = unsafe { flwc_config_set(cfg, key.as_ptr(), value.as_ptr()) };
    assert_eq!(status, FlwcStatus::Ok);

    let bad_key = CString::new("bogus").unwrap();
    let status = unsafe { flwc_config_set(cfg, bad_key.as_ptr(), value.as_ptr()) };
    assert_eq!(status, FlwcStatus::InvalidArgument);
    assert!(last_error().contains("bogus"));

    let bad_value = CString::new("-3").unwrap();
    let power = CString::new("charge_power").unwrap();
    let status = unsafe { flwc_config_set(cfg, power.as_ptr(), bad_value.as_ptr()) };
    // Negative power parses but fails validation at compare time.
    assert_eq!(status, FlwcStatus::Ok);
    let mut out = FlwcComparison {
        seed: 0,
        flwc_served: 0,
        fcfs_served: 0,
        flwc_unserved: 0,
        fcfs_unserved: 0,
        flwc_avg_utilization: 0.0,
        fcfs_avg_utilization: 0.0,
        served_delta: 0,
        avg_utilization_delta: 0.0,
    };
    let status = unsafe { flwc_compare(cfg, fis, 0, &mut out) };
    assert_eq!(status, FlwcStatus::InvalidArgument);
    assert!(last_error().contains("charge_power"));

    let good = CString::new("60").unwrap();
    unsafe {
        assert_eq!(
            flwc_config_set(cfg, power.as_ptr(), good.as_ptr()),
            FlwcStatus::Ok
        );
    }

    let mut first = out;
    let mut second = out;
    unsafe {
        assert_eq!(flwc_compare(cfg, fis, 9, &mut first), FlwcStatus::Ok);
        assert_eq!(flwc_compare(cfg, fis, 9, &mut second), FlwcStatus::Ok);
    }
    assert_eq!(first, second);
    assert_eq!(first.seed, 9);
    assert_eq!(first.flwc_served + first.flwc_unserved, 40);
    assert_eq!(
        first.served_delta,
        i64::from(first.flwc_served) - i64::from(first.fcfs_served)
    );

    unsafe {
        flwc_config_free(cfg);
        flwc_fis_free(fis);
    }
}

#[test]
fn fis_from_files_loads_rules_and_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let rules_path = dir.path().join("const.rules");
    let mut rules = String::new();
    for soc in ["VL", "L", "M", "H", "VH"] {
        for stay in ["VS", "S", "M", "L", "VL_long"] {
            rules.push_str(&format!("{soc} {stay} -> MW\n"));
        }
    }
    std::fs::write(&rules_path, rules).unwrap();
    let c_rules = CString::new(rules_path.to_str().unwrap()).unwrap();

    let mut fis: *mut FlwcFis = ptr::null_mut();
    let status = unsafe { flwc_fis_from_files(c_rules.as_ptr(), ptr::null(), &mut fis) };
    assert_eq!(status, FlwcStatus::Ok);
    let mut weight = 0.0;
    unsafe {
        assert_eq!(
            flwc_fis_compute_weight(fis, 0.9, 0.1, &mut weight),
            FlwcStatus::Ok
        );
        flwc_fis_free(fis);
    }
    // Constant rules give the symmetric middle weight everywhere.
    assert_eq!(weight, 0.5);

    // A partial rule file is rejected with a parse-adjacent status.
    let partial = dir.path().join("partial.rules");
    std::fs::write(&partial, "VL VS -> MW\n").unwrap();
    let c_partial = CString::new(partial.to_str().unwrap()).unwrap();
    let mut fis2: *mut FlwcFis = ptr::null_mut();
    let status = unsafe { flwc_fis_from_files(c_partial.as_ptr(), ptr::null(), &mut fis2) };
    assert_eq!(status, FlwcStatus::InvalidArgument);
    assert!(fis2.is_null());
    assert!(last_error().contains("25"));

    // Missing file reports an I/O failure.
    let missing = CString::new("/nonexistent.rules").unwrap();
    let status = unsafe { flwc_fis_from_files(missing.as_ptr(), ptr::null(), &mut fis2) };
    assert_eq!(status, FlwcStatus::IoError);
}

#[test]
fn config_from_file_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("lot.conf");
    std::fs::write(&path, "n_evs = 7\nn_stations = 2\n").unwrap();
    let c_path = CString::new(path.to_str().unwrap()).unwrap();
    let mut cfg: *mut FlwcConfig = ptr::null_mut();
    let status = unsafe { flwc_config_from_file(c_path.as_ptr(), &mut cfg) };
    assert_eq!(status, FlwcStatus::Ok);

    let fis = flwc_fis_default();
    let mut out = FlwcComparison {
        seed: 0,
        flwc_served: 0,
        fcfs_served: 0,
        flwc_unserved: 0,
        fcfs_unserved: 0,
        flwc_avg_utilization: 0.0,
        fcfs_avg_utilization: 0.0,
        served_delta: 0,
        avg_utilization_delta: 0.0,
    };
    unsafe {
        assert_eq!(flwc_compare(cfg, fis, 1, &mut out), FlwcStatus::Ok);
    }
    assert_eq!(out.flwc_served + out.flwc_unserved, 7);
    unsafe {
        flwc_config_free(cfg);
        flwc_fis_free(fis);
    }
}

#[test]
fn generated_header_declares_the_surface() {
    let header = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("include")
        .join("flwc.h");
    let text = std::fs::read_to_string(&header).expect("header generated by build.rs");
    for needle in [
        "typedef struct FlwcFis FlwcFis;",
        "typedef struct FlwcConfig FlwcConfig;",
        "FlwcStatus",
        "FlwcComparison",
        "flwc_fis_default",
        "flwc_fis_from_files",
        "flwc_fis_compute_weight",
        "flwc_fis_free",
        "flwc_config_default",
        "flwc_config_from_file",
        "flwc_config_set",
        "flwc_config_free",
        "flwc_compare",
        "flwc_last_error_message",
    ] {
        assert!(text.contains(needle), "header missing `{needle}`");
    }
}
