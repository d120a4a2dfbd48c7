use std::f64::consts::FRAC_PI_3;
use std::ffi::{CStr, CString};
use std::ptr;

use ibi_ffi::*;

fn last_error() -> String {
    let p = ibi_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn dataset(rows: &[[f64; 2]], counts: [usize; 3]) -> *mut IbiDataset {
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    let mut ds = ptr::null_mut();
    let st = unsafe { ibi_dataset_new(flat.as_ptr(), 2, counts.as_ptr(), &mut ds) };
    assert_eq!(st, IbiStatus::Ok);
    ds
}

fn three_clusters() -> *mut IbiDataset {
    let mut rows = Vec::new();
    for (cx, cy) in [(0.0, 0.0), (3.0, 1.0), (6.0, 0.0)] {
        for i in 0..12 {
            let t = i as f64 / 12.0;
            rows.push([cx + (7.0 * t).sin() * 0.4, cy + (5.0 * t).cos() * 0.4]);
        }
    }
    dataset(&rows, [12, 12, 12])
}

#[test]
fn statistics_match_disk_point() {
    let (a, b, c) = ([0.0, 0.0], [1.0, 0.0], [2.0, 0.0]);
    let mut sp = IbiShapePoint::default();
    assert_eq!(unsafe { ibi_shape_point(a.as_ptr(), b.as_ptr(), c.as_ptr(), 2, &mut sp) }, IbiStatus::Ok);
    assert!((sp.r - 1.0).abs() < 1e-12 && (sp.phi - FRAC_PI_3).abs() < 1e-12);

    let mut s = IbiStatistics::default();
    assert_eq!(unsafe { ibi_statistics_from_polar(sp.r, sp.phi, &mut s) }, IbiStatus::Ok);
    assert!((s.tau - 1.0).abs() < 1e-12);

    let mut d = f64::NAN;
    assert_eq!(unsafe { ibi_shape_distance(0.0, 0.0, 1.0, FRAC_PI_3, &mut d) }, IbiStatus::Ok);
    assert!((d - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
}

#[test]
fn gamma_undefined_is_flagged_not_an_error() {
    // A = B: side c has zero length
    let (a, c) = ([0.0, 0.0], [2.0, 1.0]);
    let mut s = IbiStatistics::default();
    assert_eq!(unsafe { ibi_statistics(a.as_ptr(), a.as_ptr(), c.as_ptr(), 2, &mut s) }, IbiStatus::Ok);
    assert!(!s.gamma_defined && s.gamma.is_nan());
}

#[test]
fn bootstrap_pipeline_through_handles() {
    let ds = three_clusters();
    assert_eq!(unsafe { ibi_dataset_dim(ds) }, 2);
    assert_eq!(unsafe { ibi_dataset_group_size(ds, 2) }, 12);
    assert_eq!(unsafe { ibi_dataset_group_size(ds, 3) }, 0);

    let mut obs = IbiStatistics::default();
    assert_eq!(unsafe { ibi_observed(ds, &mut obs) }, IbiStatus::Ok);

    let mut ens = ptr::null_mut();
    assert_eq!(unsafe { ibi_bootstrap(ds, 200, 3, &mut ens) }, IbiStatus::Ok);
    assert_eq!(unsafe { ibi_ensemble_valid_count(ens) }, 200);

    let mut ci = IbiInterval::default();
    assert_eq!(unsafe { ibi_ensemble_tau_ci(ens, 0.95, &mut ci) }, IbiStatus::Ok);
    assert!(ci.lo <= ci.hi);
    let mut gci = IbiInterval::default();
    assert_eq!(unsafe { ibi_ensemble_gamma_ci(ens, 0.95, &mut gci) }, IbiStatus::Ok);

    let mut region = IbiRegionSummary::default();
    assert_eq!(unsafe { ibi_ensemble_region(ens, 0.8, &mut region) }, IbiStatus::Ok);
    assert!(region.members >= 160);
    assert!(region.min_tau.tau <= region.median.tau && region.median.tau <= region.max_tau.tau);

    let mut rep = IbiStatistics::default();
    assert_eq!(unsafe { ibi_ensemble_replicate(ens, 0, &mut rep) }, IbiStatus::Ok);
    assert_eq!(unsafe { ibi_ensemble_replicate(ens, 200, &mut rep) }, IbiStatus::InvalidArgument);
    assert!(last_error().contains("out of range"));

    let mut perm = IbiPermutation::default();
    assert_eq!(unsafe { ibi_permutation_test(ds, 99, 1, &mut perm) }, IbiStatus::Ok);
    assert_eq!(perm.k, 99);
    assert!(perm.p_tau > 0.0 && perm.p_tau <= 1.0);

    // same seed, same replicates
    let mut again = ptr::null_mut();
    assert_eq!(unsafe { ibi_bootstrap(ds, 200, 3, &mut again) }, IbiStatus::Ok);
    let mut rep2 = IbiStatistics::default();
    unsafe { ibi_ensemble_replicate(again, 0, &mut rep2) };
    assert_eq!(rep, rep2);

    unsafe {
        ibi_ensemble_free(again);
        ibi_ensemble_free(ens);
        ibi_dataset_free(ds);
    }
}

#[test]
fn errors_map_to_status_codes() {
    let mut ds = ptr::null_mut();
    let counts = [1usize, 1, 1];
    assert_eq!(
        unsafe { ibi_dataset_new(ptr::null(), 2, counts.as_ptr(), &mut ds) },
        IbiStatus::NullPointer
    );
    assert!(last_error().contains("data"));

    let path = CString::new("/nonexistent/iris.csv").unwrap();
    let col = CString::new("species").unwrap();
    let groups = CString::new("A=a,B=b,C=c").unwrap();
    let st = unsafe { ibi_dataset_load_csv(path.as_ptr(), col.as_ptr(), groups.as_ptr(), ptr::null(), &mut ds) };
    assert_eq!(st, IbiStatus::Io);

    let bad = CString::new("A=a,B=a,C=c").unwrap();
    let st = unsafe { ibi_dataset_load_csv(path.as_ptr(), col.as_ptr(), bad.as_ptr(), ptr::null(), &mut ds) };
    assert_eq!(st, IbiStatus::InvalidArgument);

    // every group mean is the same point
    let flat = [1.0; 6];
    let pairs = [2usize, 2, 2];
    let st = unsafe { ibi_dataset_new(flat.as_ptr(), 1, pairs.as_ptr(), &mut ds) };
    assert_eq!(st, IbiStatus::Ok);
    let mut obs = IbiStatistics::default();
    assert_eq!(unsafe { ibi_observed(ds, &mut obs) }, IbiStatus::Geometry);
    let mut std_ds = ptr::null_mut();
    assert_eq!(
        unsafe { ibi_dataset_standardize(ds, IbiStandardize::Feature, &mut std_ds) },
        IbiStatus::Data
    );
    unsafe { ibi_dataset_free(ds) };
}
