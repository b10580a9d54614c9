//! C ABI for `bikmeans`.
//!
//! Objects are exposed as opaque handles created by `bk_*_new`/`bk_*_solve`
//! style functions and released with the matching `bk_*_free`. Every fallible
//! call returns a [`BkStatus`]; on failure the message is available from
//! [`bk_last_error`] on the same thread until the next failing call.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use bikmeans::local::{run_local_search, SearchConfig};
use bikmeans::lp::{normalize, solve_lp, FractionalSolution, LpOptions};
use bikmeans::reduce::{build_instance, ReductionConfig};
use bikmeans::round::{round_many, Openings, RoundingPlan};
use bikmeans::{bounds, oracle, Error, KMedianInstance, PointSet};

/// Result codes shared by all fallible functions.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    SizeLimit = 4,
    LpFailure = 5,
    Numeric = 6,
    Io = 7,
    Panic = 8,
}

impl From<&Error> for BkStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidPointSet(_)
            | Error::DimensionMismatch { .. }
            | Error::InvalidPartition(_)
            | Error::InvalidInstance(_)
            | Error::Config(_)
            | Error::Parse(_) => BkStatus::InvalidArgument,
            Error::Domain(_) => BkStatus::Domain,
            Error::CentroidSetTooLarge { .. } | Error::LpTooLarge { .. } | Error::SizeGuard(_) => {
                BkStatus::SizeLimit
            }
            Error::LpInfeasible | Error::LpUnbounded | Error::LpStall { .. } => BkStatus::LpFailure,
            Error::ProjectionFailure { .. } | Error::Invariant(_) | Error::Numeric(_) => BkStatus::Numeric,
            Error::Io(_) | Error::Json(_) | Error::Csv(_) => BkStatus::Io,
        }
    }
}

/// A set of points in ℝ^dim.
pub struct BkPoints(PointSet);

/// A discrete k-median instance.
pub struct BkInstance {
    inst: KMedianInstance,
    /// Input point index to demand index, when built by reduction.
    psi: Option<Vec<usize>>,
}

/// A normalized fractional LP solution.
pub struct BkLpSolution(FractionalSolution);

/// Summary of repeated randomized rounding.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct BkRoundStats {
    pub trials: usize,
    pub lp_value: f64,
    pub mean_cost: f64,
    pub mean_ratio: f64,
    pub std: f64,
    pub min_ratio: f64,
    pub max_ratio: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn guard(f: impl FnOnce() -> Result<(), BkStatus>) -> BkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BkStatus::Ok,
        Ok(Err(s)) => s,
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal panic: {msg}"));
            BkStatus::Panic
        }
    }
}

fn fail(e: Error) -> BkStatus {
    let status = BkStatus::from(&e);
    set_error(e.to_string());
    status
}

fn null(what: &str) -> BkStatus {
    set_error(format!("null pointer: {what}"));
    BkStatus::NullPointer
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, BkStatus> {
    // SAFETY: caller guarantees p is null or a live handle
    unsafe { p.as_ref() }.ok_or_else(|| null(what))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, BkStatus> {
    // SAFETY: caller guarantees p is null or valid for writes
    unsafe { p.as_mut() }.ok_or_else(|| null(what))
}

/// Message of the last failing call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn bk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies `n * dim` row-major coordinates into a new point set.
///
/// # Safety
/// `coords` must point to `n * dim` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bk_points_new(
    coords: *const f64,
    n: usize,
    dim: usize,
    out: *mut *mut BkPoints,
) -> BkStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out") }?;
        if coords.is_null() {
            return Err(null("coords"));
        }
        let len = n.checked_mul(dim).ok_or_else(|| fail(Error::Config("n * dim overflows".into())))?;
        // SAFETY: caller guarantees len readable values
        let slice = unsafe { std::slice::from_raw_parts(coords, len) };
        let x = PointSet::from_flat(dim, slice.to_vec()).map_err(fail)?;
        *out = Box::into_raw(Box::new(BkPoints(x)));
        Ok(())
    })
}

/// # Safety
/// `p` must be null or a handle from `bk_points_new` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bk_points_free(p: *mut BkPoints) {
    if !p.is_null() {
        // SAFETY: handle came from Box::into_raw
        drop(unsafe { Box::from_raw(p) });
    }
}

/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bk_points_len(p: *const BkPoints) -> usize {
    unsafe { p.as_ref() }.map_or(0, |p| p.0.len())
}

/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bk_points_dim(p: *const BkPoints) -> usize {
    unsafe { p.as_ref() }.map_or(0, |p| p.0.dim())
}

/// Squared-Euclidean instance over explicit demands and candidate centers.
///
/// # Safety
/// Handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bk_instance_new(
    demands: *const BkPoints,
    centers: *const BkPoints,
    out: *mut *mut BkInstance,
) -> BkStatus {
    guard(|| {
        let d = unsafe { deref(demands, "demands") }?;
        let c = unsafe { deref(centers, "centers") }?;
        let out = unsafe { out_ref(out, "out") }?;
        let inst = KMedianInstance::sq_euclidean(d.0.clone(), c.0.clone()).map_err(fail)?;
        *out = Box::into_raw(Box::new(BkInstance { inst, psi: None }));
        Ok(())
    })
}

/// Reduces a k-means input to a k-median instance with distortion `1 + epsilon`.
///
/// # Safety
/// `points` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bk_reduce(
    points: *const BkPoints,
    epsilon: f64,
    seed: u64,
    out: *mut *mut BkInstance,
) -> BkStatus {
    guard(|| {
        let x = unsafe { deref(points, "points") }?;
        let out = unsafe { out_ref(out, "out") }?;
        let cfg = ReductionConfig { seed, ..ReductionConfig::new(epsilon) };
        let r = build_instance(&x.0, &cfg).map_err(fail)?;
        *out = Box::into_raw(Box::new(BkInstance { inst: r.instance, psi: Some(r.psi) }));
        Ok(())
    })
}

/// # Safety
/// `p` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bk_instance_free(p: *mut BkInstance) {
    if !p.is_null() {
        // SAFETY: handle came from Box::into_raw
        drop(unsafe { Box::from_raw(p) });
    }
}

/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bk_instance_num_demands(p: *const BkInstance) -> usize {
    unsafe { p.as_ref() }.map_or(0, |p| p.inst.num_demands())
}

/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bk_instance_num_centers(p: *const BkInstance) -> usize {
    unsafe { p.as_ref() }.map_or(0, |p| p.inst.num_centers())
}

/// Writes the demand index of each input point into `psi` (length = number of
/// input points). Fails with `InvalidArgument` for instances not built by
/// `bk_reduce`.
///
/// # Safety
/// `psi` must have room for `len` values.
#[no_mangle]
pub unsafe extern "C" fn bk_instance_psi(p: *const BkInstance, psi: *mut usize, len: usize) -> BkStatus {
    guard(|| {
        let inst = unsafe { deref(p, "instance") }?;
        let map = inst.psi.as_ref().ok_or_else(|| fail(Error::Config("instance has no reduction map".into())))?;
        if psi.is_null() {
            return Err(null("psi"));
        }
        if len != map.len() {
            return Err(fail(Error::Config(format!("psi buffer holds {len}, need {}", map.len()))));
        }
        // SAFETY: caller guarantees len writable values
        unsafe { std::slice::from_raw_parts_mut(psi, len) }.copy_from_slice(map);
        Ok(())
    })
}

/// Solves the LP relaxation with `k` centers and normalizes the result.
///
/// # Safety
/// `inst` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bk_lp_solve(inst: *const BkInstance, k: usize, out: *mut *mut BkLpSolution) -> BkStatus {
    guard(|| {
        let inst = unsafe { deref(inst, "instance") }?;
        let out = unsafe { out_ref(out, "out") }?;
        let raw = solve_lp(&inst.inst, k, &LpOptions::default()).map_err(fail)?;
        *out = Box::into_raw(Box::new(BkLpSolution(normalize(&inst.inst, &raw))));
        Ok(())
    })
}

/// LP objective value, or NaN for a null handle.
///
/// # Safety
/// `sol` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn bk_lp_value(sol: *const BkLpSolution) -> f64 {
    unsafe { sol.as_ref() }.map_or(f64::NAN, |s| s.0.lp_value)
}

/// # Safety
/// `p` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bk_lp_free(p: *mut BkLpSolution) {
    if !p.is_null() {
        // SAFETY: handle came from Box::into_raw
        drop(unsafe { Box::from_raw(p) });
    }
}

/// Rounds `sol` onto `m` centers `trials` times and reports the statistics.
///
/// # Safety
/// Handles must be live and come from the same instance; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bk_round(
    inst: *const BkInstance,
    sol: *const BkLpSolution,
    m: usize,
    trials: usize,
    seed: u64,
    jobs: usize,
    out: *mut BkRoundStats,
) -> BkStatus {
    guard(|| {
        let inst = unsafe { deref(inst, "instance") }?;
        let sol = unsafe { deref(sol, "solution") }?;
        let out = unsafe { out_ref(out, "out") }?;
        if sol.0.num_demands() != inst.inst.num_demands() {
            return Err(fail(Error::Config("solution does not belong to this instance".into())));
        }
        let openings = Openings::from_m(sol.0.k, m).map_err(fail)?;
        let plan = RoundingPlan::new(&inst.inst, sol.0.clone(), openings).map_err(fail)?;
        let s = round_many(&plan, &inst.inst, trials, seed, jobs).map_err(fail)?;
        *out = BkRoundStats {
            trials: s.trials,
            lp_value: s.lp_value,
            mean_cost: s.mean_cost,
            mean_ratio: s.mean_ratio,
            std: s.std,
            min_ratio: s.min,
            max_ratio: s.max,
        };
        Ok(())
    })
}

/// Local search with greedy start; writes the `m` opened centers (ascending)
/// and the final cost.
///
/// # Safety
/// `opened` must have room for `m` values; `cost` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bk_local_search(
    inst: *const BkInstance,
    m: usize,
    p: usize,
    delta: f64,
    opened: *mut usize,
    cost: *mut f64,
) -> BkStatus {
    guard(|| {
        let inst = unsafe { deref(inst, "instance") }?;
        let cost = unsafe { out_ref(cost, "cost") }?;
        if opened.is_null() {
            return Err(null("opened"));
        }
        let cfg = SearchConfig { delta, ..SearchConfig::new(m, p) };
        let trace = run_local_search(&inst.inst, &cfg).map_err(fail)?;
        let centers = &trace.final_solution.opened;
        // SAFETY: caller guarantees m writable values; opened.len() == m
        unsafe { std::slice::from_raw_parts_mut(opened, centers.len()) }.copy_from_slice(centers);
        *cost = trace.final_solution.total_cost;
        Ok(())
    })
}

/// Exact k-means optimum by partition enumeration (small inputs only).
///
/// # Safety
/// `points` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bk_oracle_kmeans(points: *const BkPoints, k: usize, out: *mut f64) -> BkStatus {
    guard(|| {
        let x = unsafe { deref(points, "points") }?;
        let out = unsafe { out_ref(out, "out") }?;
        *out = oracle::brute_kmeans(&x.0, k).map_err(fail)?.opt_cost;
        Ok(())
    })
}

/// Exact discrete k-median optimum by subset enumeration (small inputs only).
///
/// # Safety
/// `inst` must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bk_oracle_kmedian(inst: *const BkInstance, k: usize, out: *mut f64) -> BkStatus {
    guard(|| {
        let inst = unsafe { deref(inst, "instance") }?;
        let out = unsafe { out_ref(out, "out") }?;
        *out = oracle::brute_kmedian(&inst.inst, k).map_err(fail)?.opt_cost;
        Ok(())
    })
}

/// Guarantee of LP rounding onto `beta * k` centers.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bk_alpha_lp_tight(beta: f64, out: *mut f64) -> BkStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out") }?;
        *out = bounds::alpha_lp_tight(beta).map_err(fail)?.value;
        Ok(())
    })
}

/// Guarantee of local search with swaps of size `p`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bk_alpha_local(beta: f64, p: u64, eps: f64, out: *mut f64) -> BkStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out") }?;
        *out = bounds::alpha_local(beta, p, eps).map_err(fail)?;
        Ok(())
    })
}

/// Guarantee of pipage rounding.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bk_alpha_pipage(beta: f64, out: *mut f64) -> BkStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out") }?;
        *out = bounds::alpha_pipage(beta).map_err(fail)?;
        Ok(())
    })
}
