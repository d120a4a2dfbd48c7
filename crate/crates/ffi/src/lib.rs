//! C interface to `ibi-core`.
//!
//! Every function returns an [`IbiStatus`]; results go through out-pointers.
//! After a failure, [`ibi_last_error_message`] describes it. Datasets and
//! bootstrap ensembles are opaque handles released with their `_free`
//! function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;
use std::slice;

use ibi_core::inference::{
    self, percentile_ci, stratified_bootstrap, BootstrapEnsemble, DepthCloud, GroupedDataset, StandardizeMode,
};
use ibi_core::io::{load_csv, parse_group_mapping, LoadOptions};
use ibi_core::shape::{self, Configuration, ShapePoint};
use ibi_core::{Error, ShapeStatistics};

/// Result code of every call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IbiStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Io = 3,
    Data = 4,
    Geometry = 5,
    Inference = 6,
    /// `gamma` is undefined for the triangle.
    Undefined = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IbiStandardize {
    None = 0,
    Feature = 1,
    Whiten = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IbiShapePoint {
    pub r: f64,
    pub phi: f64,
    pub u: f64,
    pub v: f64,
}

/// Shape summary of one triangle. `gamma` is NaN when `gamma_defined` is false.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IbiStatistics {
    pub tau: f64,
    pub gamma: f64,
    pub gamma_defined: bool,
    pub r: f64,
    pub phi: f64,
    pub u: f64,
    pub v: f64,
    pub a2: f64,
    pub b2: f64,
    pub c2: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IbiInterval {
    pub lo: f64,
    pub hi: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IbiRegionSummary {
    pub level: f64,
    pub depth_threshold: f64,
    pub members: usize,
    pub area: f64,
    pub median: IbiStatistics,
    pub max_tau: IbiStatistics,
    pub min_tau: IbiStatistics,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IbiPermutation {
    pub k: usize,
    pub p_tau: f64,
    /// NaN when `p_gamma_defined` is false.
    pub p_gamma: f64,
    pub p_gamma_defined: bool,
}

/// Opaque grouped dataset.
pub struct IbiDataset(GroupedDataset);

/// Opaque bootstrap ensemble.
pub struct IbiEnsemble(BootstrapEnsemble);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> IbiStatus {
    match e {
        Error::UndefinedCosineIbi => IbiStatus::Undefined,
        _ => match e.exit_code() {
            2 => IbiStatus::InvalidArgument,
            3 => IbiStatus::Io,
            4 => IbiStatus::Data,
            5 => IbiStatus::Geometry,
            _ => IbiStatus::Inference,
        },
    }
}

struct Fail(IbiStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(IbiStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, recording any error or panic for `ibi_last_error_message`.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> IbiStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            IbiStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            IbiStatus::Panic
        }
    }
}

unsafe fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null("out"))
}

unsafe fn coords<'a>(p: *const f64, len: usize, what: &str) -> Result<&'a [f64], Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(slice::from_raw_parts(p, len))
}

unsafe fn string(p: *const c_char, what: &str) -> Result<String, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map(str::to_owned)
        .map_err(|_| Fail(IbiStatus::InvalidArgument, format!("{what} is not valid UTF-8")))
}

impl From<&ShapeStatistics> for IbiStatistics {
    fn from(s: &ShapeStatistics) -> Self {
        IbiStatistics {
            tau: s.tau,
            gamma: s.gamma.unwrap_or(f64::NAN),
            gamma_defined: s.gamma.is_some(),
            r: s.r,
            phi: s.phi,
            u: s.u,
            v: s.v,
            a2: s.a2,
            b2: s.b2,
            c2: s.c2,
        }
    }
}

impl From<&ShapePoint> for IbiShapePoint {
    fn from(s: &ShapePoint) -> Self {
        IbiShapePoint {
            r: s.r(),
            phi: s.phi(),
            u: s.u(),
            v: s.v(),
        }
    }
}

unsafe fn triangle(a: *const f64, b: *const f64, c: *const f64, p: usize) -> Result<Configuration, Fail> {
    let (a, b, c) = (coords(a, p, "a")?, coords(b, p, "b")?, coords(c, p, "c")?);
    Ok(Configuration::new(a, b, c)?)
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ibi_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ibi_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Shape coordinates of the triangle with vertices `a`, `b`, `c`, each
/// holding `p` coordinates.
///
/// # Safety
/// `a`, `b`, `c` must point to `p` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ibi_shape_point(
    a: *const f64,
    b: *const f64,
    c: *const f64,
    p: usize,
    out: *mut IbiShapePoint,
) -> IbiStatus {
    guard(|| {
        let out = out_ref(out)?;
        let sp = shape::shape_point(&triangle(a, b, c, p)?)?;
        *out = (&sp).into();
        Ok(())
    })
}

/// Both indices and the shape coordinates of a triangle.
///
/// # Safety
/// As for [`ibi_shape_point`].
#[no_mangle]
pub unsafe extern "C" fn ibi_statistics(
    a: *const f64,
    b: *const f64,
    c: *const f64,
    p: usize,
    out: *mut IbiStatistics,
) -> IbiStatus {
    guard(|| {
        let out = out_ref(out)?;
        let s = ShapeStatistics::from_configuration(&triangle(a, b, c, p)?)?;
        *out = (&s).into();
        Ok(())
    })
}

/// Statistics of the disk point `(r, phi)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ibi_statistics_from_polar(r: f64, phi: f64, out: *mut IbiStatistics) -> IbiStatus {
    guard(|| {
        let out = out_ref(out)?;
        let s = ShapeStatistics::from_shape_point(&ShapePoint::from_polar(r, phi)?)?;
        *out = (&s).into();
        Ok(())
    })
}

/// Riemannian shape distance between two disk points, in `[0, pi/2]`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ibi_shape_distance(
    r1: f64,
    phi1: f64,
    r2: f64,
    phi2: f64,
    out: *mut f64,
) -> IbiStatus {
    guard(|| {
        let out = out_ref(out)?;
        let s1 = ShapePoint::from_polar(r1, phi1)?;
        let s2 = ShapePoint::from_polar(r2, phi2)?;
        *out = shape::riemannian_distance_disk(&s1, &s2)?;
        Ok(())
    })
}

/// Builds a dataset from row-major observations: `counts[0]` rows of group
/// `A`, then `counts[1]` of `B`, then `counts[2]` of `C`, each row `p` wide.
///
/// # Safety
/// `data` must hold `p * (counts[0] + counts[1] + counts[2])` doubles,
/// `counts` three sizes; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ibi_dataset_new(
    data: *const f64,
    p: usize,
    counts: *const usize,
    out: *mut *mut IbiDataset,
) -> IbiStatus {
    guard(|| {
        let out = out_ref(out)?;
        if counts.is_null() {
            return Err(null("counts"));
        }
        let counts = slice::from_raw_parts(counts, 3);
        let total = counts
            .iter()
            .try_fold(0usize, |acc, &n| acc.checked_add(n))
            .and_then(|n| n.checked_mul(p))
            .ok_or_else(|| Fail(IbiStatus::InvalidArgument, "dataset size overflows".into()))?;
        let data = coords(data, total, "data")?;
        let mut start = 0;
        let groups = [0, 1, 2].map(|g| {
            let len = counts[g] * p;
            let rows = data[start..start + len].to_vec();
            start += len;
            rows
        });
        let names = (1..=p).map(|j| format!("x{j}")).collect();
        let ds = GroupedDataset::from_flat(names, groups)?;
        *out = Box::into_raw(Box::new(IbiDataset(ds)));
        Ok(())
    })
}

/// Loads a headed CSV file. `groups` maps labels as `A=x,B=y,C=z`;
/// `features` is a comma-separated column list or null for all others.
///
/// # Safety
/// String arguments must be NUL-terminated (or null where allowed);
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ibi_dataset_load_csv(
    path: *const c_char,
    group_col: *const c_char,
    groups: *const c_char,
    features: *const c_char,
    out: *mut *mut IbiDataset,
) -> IbiStatus {
    guard(|| {
        let out = out_ref(out)?;
        let path = string(path, "path")?;
        let opts = LoadOptions {
            group_col: string(group_col, "group_col")?,
            groups: parse_group_mapping(&string(groups, "groups")?)?,
            features: if features.is_null() {
                None
            } else {
                Some(string(features, "features")?.split(',').map(|s| s.trim().to_string()).collect())
            },
        };
        let ds = load_csv(Path::new(&path), &opts)?;
        *out = Box::into_raw(Box::new(IbiDataset(ds)));
        Ok(())
    })
}

/// Standardized copy of a dataset.
///
/// # Safety
/// `ds` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ibi_dataset_standardize(
    ds: *const IbiDataset,
    mode: IbiStandardize,
    out: *mut *mut IbiDataset,
) -> IbiStatus {
    guard(|| {
        let out = out_ref(out)?;
        let ds = ds.as_ref().ok_or_else(|| null("dataset"))?;
        let mode = match mode {
            IbiStandardize::None => StandardizeMode::None,
            IbiStandardize::Feature => StandardizeMode::Feature,
            IbiStandardize::Whiten => StandardizeMode::Whiten,
        };
        let s = inference::standardize(&ds.0, mode)?;
        *out = Box::into_raw(Box::new(IbiDataset(s)));
        Ok(())
    })
}

/// Feature count of a dataset, or 0 for a null handle.
///
/// # Safety
/// `ds` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ibi_dataset_dim(ds: *const IbiDataset) -> usize {
    ds.as_ref().map_or(0, |d| d.0.dim())
}

/// Rows in group `group` (0 = A, 1 = B, 2 = C), or 0.
///
/// # Safety
/// `ds` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ibi_dataset_group_size(ds: *const IbiDataset, group: usize) -> usize {
    match (ds.as_ref(), ibi_core::Group::from_index(group)) {
        (Some(d), Some(g)) => d.0.n(g),
        _ => 0,
    }
}

/// # Safety
/// `ds` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ibi_dataset_free(ds: *mut IbiDataset) {
    if !ds.is_null() {
        drop(Box::from_raw(ds));
    }
}

/// Statistics of the centroid triangle.
///
/// # Safety
/// `ds` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ibi_observed(ds: *const IbiDataset, out: *mut IbiStatistics) -> IbiStatus {
    guard(|| {
        let out = out_ref(out)?;
        let ds = ds.as_ref().ok_or_else(|| null("dataset"))?;
        *out = (&inference::observed_statistics(&ds.0)?).into();
        Ok(())
    })
}

/// Stratified bootstrap with `k` replicates.
///
/// # Safety
/// `ds` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ibi_bootstrap(
    ds: *const IbiDataset,
    k: usize,
    seed: u64,
    out: *mut *mut IbiEnsemble,
) -> IbiStatus {
    guard(|| {
        let out = out_ref(out)?;
        let ds = ds.as_ref().ok_or_else(|| null("dataset"))?;
        let ens = stratified_bootstrap(&ds.0, k, seed)?;
        *out = Box::into_raw(Box::new(IbiEnsemble(ens)));
        Ok(())
    })
}

/// Replicates with a defined shape, or 0 for a null handle.
///
/// # Safety
/// `ens` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ibi_ensemble_valid_count(ens: *const IbiEnsemble) -> usize {
    ens.as_ref().map_or(0, |e| e.0.valid().count())
}

/// Replicate `i` in generation order; [`IbiStatus::Geometry`] if its
/// centroids coincided.
///
/// # Safety
/// `ens` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ibi_ensemble_replicate(
    ens: *const IbiEnsemble,
    i: usize,
    out: *mut IbiStatistics,
) -> IbiStatus {
    guard(|| {
        let out = out_ref(out)?;
        let ens = ens.as_ref().ok_or_else(|| null("ensemble"))?;
        let rep = ens.0.replicates().get(i).ok_or_else(|| {
            Fail(IbiStatus::InvalidArgument, format!("replicate {i} out of range 0..{}", ens.0.k()))
        })?;
        let s = rep.as_ref().ok_or(Error::DegenerateConfiguration)?;
        *out = s.into();
        Ok(())
    })
}

/// Percentile interval for `tau`.
///
/// # Safety
/// `ens` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ibi_ensemble_tau_ci(ens: *const IbiEnsemble, level: f64, out: *mut IbiInterval) -> IbiStatus {
    guard(|| {
        let out = out_ref(out)?;
        let ens = ens.as_ref().ok_or_else(|| null("ensemble"))?;
        let (lo, hi) = percentile_ci(&ens.0.taus(), level)?;
        *out = IbiInterval { lo, hi };
        Ok(())
    })
}

/// Percentile interval for `gamma` over replicates where it is defined.
///
/// # Safety
/// `ens` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ibi_ensemble_gamma_ci(
    ens: *const IbiEnsemble,
    level: f64,
    out: *mut IbiInterval,
) -> IbiStatus {
    guard(|| {
        let out = out_ref(out)?;
        let ens = ens.as_ref().ok_or_else(|| null("ensemble"))?;
        let (lo, hi) = percentile_ci(&ens.0.gammas(), level)?;
        *out = IbiInterval { lo, hi };
        Ok(())
    })
}

/// Tukey-depth confidence region at `level`, summarized.
///
/// # Safety
/// `ens` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ibi_ensemble_region(
    ens: *const IbiEnsemble,
    level: f64,
    out: *mut IbiRegionSummary,
) -> IbiStatus {
    guard(|| {
        let out = out_ref(out)?;
        let ens = ens.as_ref().ok_or_else(|| null("ensemble"))?;
        let cr = DepthCloud::new(&ens.0)?.region(level)?;
        let s = inference::region_summary(&cr)?;
        *out = IbiRegionSummary {
            level: cr.level,
            depth_threshold: cr.depth_threshold,
            members: cr.members.len(),
            area: cr.area,
            median: (&s.median).into(),
            max_tau: (&s.max_tau).into(),
            min_tau: (&s.min_tau).into(),
        };
        Ok(())
    })
}

/// # Safety
/// `ens` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ibi_ensemble_free(ens: *mut IbiEnsemble) {
    if !ens.is_null() {
        drop(Box::from_raw(ens));
    }
}

/// Label-permutation p-values for `tau` and `gamma`.
///
/// # Safety
/// `ds` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ibi_permutation_test(
    ds: *const IbiDataset,
    k: usize,
    seed: u64,
    out: *mut IbiPermutation,
) -> IbiStatus {
    guard(|| {
        let out = out_ref(out)?;
        let ds = ds.as_ref().ok_or_else(|| null("dataset"))?;
        let r = inference::permutation_test(&ds.0, k, seed)?;
        *out = IbiPermutation {
            k: r.k,
            p_tau: r.p_tau,
            p_gamma: r.p_gamma.unwrap_or(f64::NAN),
            p_gamma_defined: r.p_gamma.is_some(),
        };
        Ok(())
    })
}
