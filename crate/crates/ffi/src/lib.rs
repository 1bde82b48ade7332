//! C ABI for the histoshep reconstruction library.
//!
//! The surface is a classic opaque-handle design: [`hs_operator_build`]
//! validates the inputs and returns a heap-owned operator through an out
//! pointer, the `hs_operator_*` calls use it, and [`hs_operator_free`]
//! releases it. Every call returns an [`HsStatus`]; on failure a thread-local
//! message with details is retrievable via [`hs_last_error`].
//!
//! The matching C header is generated by cbindgen into `include/histoshep.h`
//! at build time and committed with the sources.

use std::cell::RefCell;
use std::os::raw::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};

use histoshep::covering::CoveringError;
use histoshep::grid::SegmentGrid;
use histoshep::operator::{BuildError, BuildParams, EvalError, QuasiHistopolant};
use histoshep::shepard::{Placement, ShepardError};

/// Result of every ABI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HsStatus {
    /// Success.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Malformed input: non-finite or unsorted nodes, wrong lengths,
    /// jumps outside the domain or on nodes, `mu <= 0`, `K < 2`.
    InvalidInput = 2,
    /// The grid cannot support the requested configuration: inadmissible
    /// mesh, degree above the feasible maximum, or an unsatisfiable shared
    /// node pool.
    Infeasible = 3,
    /// Numerical failure: singular Gram system, residual out of bounds, or
    /// an internal invariant violation.
    Numerical = 4,
    /// An evaluation abscissa lies outside the operator's domain.
    OutOfDomain = 5,
}

/// Shepard node placement selector for [`hs_operator_build`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HsPlacement {
    /// Choose from the covering geometry (shared pool when windows overlap
    /// by more than a length tolerance, interior-equispaced otherwise).
    Auto = 0,
    /// K equispaced nodes in the open interior of every covering interval.
    Interior = 1,
    /// Nodes drawn from a per-group pool so overlaps share identical nodes.
    Shared = 2,
}

/// Opaque handle to a built quasi-histopolant.
pub struct HsOperator {
    inner: QuasiHistopolant,
}

/// Build summary snapshot, filled by [`hs_operator_info`].
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct HsInfo {
    /// Requested minimum local polynomial degree.
    pub d: usize,
    /// Shepard nodes per covering interval.
    pub k: usize,
    /// Inverse-distance weight exponent.
    pub mu: f64,
    /// Common covering interval length.
    pub radius: f64,
    /// Flattened covering count (number of local fits and node sets).
    pub m: usize,
    pub n_segments: usize,
    pub n_jumps: usize,
    /// Worst |∫p − datum| over all local fits.
    pub max_residual: f64,
    /// Worst condition estimate among the local Gram systems.
    pub max_gram_cond: f64,
    pub domain_min: f64,
    pub domain_max: f64,
    /// Placement actually used (never [`HsPlacement::Auto`]).
    pub placement: HsPlacement,
}

thread_local! {
    static LAST_ERROR: RefCell<Vec<u8>> = const { RefCell::new(Vec::new()) };
}

fn set_error(msg: impl std::fmt::Display) {
    LAST_ERROR.with(|slot| {
        let mut bytes = msg.to_string().into_bytes();
        bytes.retain(|&b| b != 0);
        *slot.borrow_mut() = bytes;
    });
}

fn fail(status: HsStatus, msg: impl std::fmt::Display) -> HsStatus {
    set_error(msg);
    status
}

fn classify_build(err: &BuildError) -> HsStatus {
    match err {
        BuildError::Grid(_) | BuildError::BadMu(_) => HsStatus::InvalidInput,
        BuildError::Covering(e) => match e {
            CoveringError::Grid(_) => HsStatus::InvalidInput,
            CoveringError::InadmissibleGrid { .. } | CoveringError::DegreeInfeasible { .. } => {
                HsStatus::Infeasible
            }
            CoveringError::CoverageViolation(_) => HsStatus::Numerical,
        },
        BuildError::Histopoly(_) => HsStatus::Numerical,
        BuildError::Shepard(e) => match e {
            ShepardError::BadK(_) => HsStatus::InvalidInput,
            ShepardError::PoolUnderflow { .. } => HsStatus::Infeasible,
            ShepardError::BadIndex { .. } => HsStatus::Numerical,
        },
    }
}

fn classify_eval(err: &EvalError) -> HsStatus {
    match err {
        EvalError::OutOfDomain { .. } => HsStatus::OutOfDomain,
        EvalError::Quadrature(_) => HsStatus::Numerical,
    }
}

/// Runs `body` with a panic guard so unwinding never crosses the ABI.
fn guarded(body: impl FnOnce() -> HsStatus) -> HsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            fail(HsStatus::Numerical, format!("internal panic: {msg}"))
        }
    }
}

/// Builds a quasi-histopolant from integral data.
///
/// `nodes` (length `n_nodes`) are the strictly increasing segment endpoints;
/// `integrals` (length `n_integrals = n_nodes - 1`) the data over each
/// segment; `jumps` (length `n_jumps`, may be null when `n_jumps` is 0) the
/// declared discontinuity abscissae. On success `*out` owns the operator and
/// must be released with [`hs_operator_free`].
///
/// # Safety
///
/// `nodes`, `integrals`, and (when `n_jumps > 0`) `jumps` must point to
/// readable arrays of the stated lengths; `out` must be a valid, writable
/// pointer. The call does not retain the input arrays.
#[no_mangle]
pub unsafe extern "C" fn hs_operator_build(
    nodes: *const f64,
    n_nodes: usize,
    integrals: *const f64,
    n_integrals: usize,
    jumps: *const f64,
    n_jumps: usize,
    d: usize,
    k: usize,
    mu: f64,
    placement: HsPlacement,
    out: *mut *mut HsOperator,
) -> HsStatus {
    if out.is_null() {
        return fail(HsStatus::NullPointer, "out pointer is null");
    }
    *out = std::ptr::null_mut();
    if nodes.is_null() || integrals.is_null() || (jumps.is_null() && n_jumps > 0) {
        return fail(HsStatus::NullPointer, "input array pointer is null");
    }
    let nodes = std::slice::from_raw_parts(nodes, n_nodes).to_vec();
    let integrals = std::slice::from_raw_parts(integrals, n_integrals).to_vec();
    let jumps: Vec<f64> = if n_jumps == 0 {
        Vec::new()
    } else {
        std::slice::from_raw_parts(jumps, n_jumps).to_vec()
    };

    guarded(move || {
        let grid = match SegmentGrid::new(nodes, integrals) {
            Ok(g) => g,
            Err(e) => return fail(HsStatus::InvalidInput, e),
        };
        let params = BuildParams {
            d,
            k,
            mu,
            placement: match placement {
                HsPlacement::Auto => None,
                HsPlacement::Interior => Some(Placement::InteriorEquispaced),
                HsPlacement::Shared => Some(Placement::SharedPool),
            },
        };
        match QuasiHistopolant::build(grid, &jumps, &params) {
            Ok(q) => {
                *out = Box::into_raw(Box::new(HsOperator { inner: q }));
                HsStatus::Ok
            }
            Err(e) => fail(classify_build(&e), e),
        }
    })
}

/// Evaluates the operator at a single abscissa.
///
/// # Safety
///
/// `op` must be a live handle from [`hs_operator_build`]; `out` must be a
/// valid, writable pointer.
#[no_mangle]
pub unsafe extern "C" fn hs_operator_evaluate(
    op: *const HsOperator,
    x: f64,
    out: *mut f64,
) -> HsStatus {
    if op.is_null() || out.is_null() {
        return fail(HsStatus::NullPointer, "operator or out pointer is null");
    }
    let op = &*op;
    guarded(|| match op.inner.evaluate(x) {
        Ok(y) => {
            *out = y;
            HsStatus::Ok
        }
        Err(e) => fail(classify_eval(&e), e),
    })
}

/// Evaluates the operator at `n` abscissae, writing `n` results to `out`.
/// On any failure the output buffer contents are unspecified.
///
/// # Safety
///
/// `op` must be a live handle; `xs` must point to `n` readable values and
/// `out` to `n` writable slots (`n = 0` is allowed, in which case both may
/// be null).
#[no_mangle]
pub unsafe extern "C" fn hs_operator_evaluate_many(
    op: *const HsOperator,
    xs: *const f64,
    n: usize,
    out: *mut f64,
) -> HsStatus {
    if op.is_null() {
        return fail(HsStatus::NullPointer, "operator pointer is null");
    }
    if n == 0 {
        return HsStatus::Ok;
    }
    if xs.is_null() || out.is_null() {
        return fail(HsStatus::NullPointer, "evaluation array pointer is null");
    }
    let op = &*op;
    let xs = std::slice::from_raw_parts(xs, n);
    let out = std::slice::from_raw_parts_mut(out, n);
    guarded(|| match op.inner.evaluate_many(xs) {
        Ok(ys) => {
            out.copy_from_slice(&ys);
            HsStatus::Ok
        }
        Err(e) => fail(classify_eval(&e), e),
    })
}

/// Fills `*out` with the build summary of a live operator.
///
/// # Safety
///
/// `op` must be a live handle; `out` must be a valid, writable pointer.
#[no_mangle]
pub unsafe extern "C" fn hs_operator_info(op: *const HsOperator, out: *mut HsInfo) -> HsStatus {
    if op.is_null() || out.is_null() {
        return fail(HsStatus::NullPointer, "operator or out pointer is null");
    }
    let op = &*op;
    let report = op.inner.report();
    let (domain_min, domain_max) = op.inner.domain();
    *out = HsInfo {
        d: report.d,
        k: report.k,
        mu: report.mu,
        radius: report.radius,
        m: report.m,
        n_segments: report.n_segments,
        n_jumps: report.n_jumps,
        max_residual: report.max_residual,
        max_gram_cond: report.max_gram_cond,
        domain_min,
        domain_max,
        placement: match op.inner.nodes().placement() {
            Placement::InteriorEquispaced => HsPlacement::Interior,
            Placement::SharedPool => HsPlacement::Shared,
        },
    };
    HsStatus::Ok
}

/// Releases an operator. Passing null is a no-op; a handle must not be used
/// after it has been freed.
///
/// # Safety
///
/// `op` must be null or a handle obtained from [`hs_operator_build`] that has
/// not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn hs_operator_free(op: *mut HsOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// Copies the calling thread's last error message into `buf` as a
/// NUL-terminated string, truncating to `cap - 1` bytes if needed. Returns
/// the full message length in bytes (excluding the NUL); call with a null
/// `buf` or `cap == 0` to query the required size. The message is updated by
/// every failing call on the same thread.
///
/// # Safety
///
/// When `buf` is non-null it must point to `cap` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn hs_last_error(buf: *mut c_char, cap: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let msg = slot.borrow();
        if !buf.is_null() && cap > 0 {
            let n = msg.len().min(cap - 1);
            std::ptr::copy_nonoverlapping(msg.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}
