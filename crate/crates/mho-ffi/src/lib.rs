//! C ABI over the core library: kernel evaluations, the closed-form
//! conditional entropy, and region construction behind an opaque handle.
//!
//! Conventions shared by every entry point:
//! - Outputs go through pointers; the return value is always an
//!   [`MhoStatus`].
//! - No pointer is retained past the call, except the region handle the
//!   caller owns until [`mho_region_free`].
//! - On any non-Ok status, [`mho_last_error_message`] returns a
//!   NUL-terminated description valid on the calling thread until its
//!   next failing call.
//!
//! The matching header is committed at `include/mho.h` together with the
//! `cbindgen.toml` that regenerates it.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CString};

use mho::info::{binary_convolution, binary_entropy, binary_entropy_inv};
use mho::regions::{
    inner_region, inner_vertices, outer_region, weak_region, GridConfig, ProblemSpec, RateRegion,
    RateTuple, RegionError,
};
use mho::single_letter::{phi, wz_critical_distortion, wz_rate, PhiArgs};

/// Result code for every FFI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MhoStatus {
    /// The call succeeded and every output was written.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A value was outside its documented domain.
    InvalidArgument = 2,
    /// The request was valid but exceeds a built-in size cap.
    Unsupported = 3,
    /// The queried helper rates admit no finite bound; the output is set
    /// to positive infinity.
    Infeasible = 4,
}

/// Opaque rate region handle. Created by [`mho_region_build`], released
/// by [`mho_region_free`].
pub struct MhoRegion {
    region: RateRegion,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized = message.replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).unwrap_or_default();
    });
}

fn fail(status: MhoStatus, message: &str) -> MhoStatus {
    set_error(message);
    status
}

fn fail_invalid(error: &dyn std::fmt::Display) -> MhoStatus {
    fail(MhoStatus::InvalidArgument, &error.to_string())
}

fn region_failure(error: &RegionError) -> MhoStatus {
    let status = match error {
        RegionError::CapExceeded { .. } | RegionError::VertexBudget { .. } => {
            MhoStatus::Unsupported
        }
        _ => MhoStatus::InvalidArgument,
    };
    fail(status, &error.to_string())
}

/// Writes a scalar result, treating a null output pointer as an error.
///
/// # Safety
/// `out` must be null or valid for a single f64 write.
unsafe fn write_scalar(
    out: *mut f64,
    value: Result<f64, impl std::fmt::Display>,
) -> MhoStatus {
    if out.is_null() {
        return fail(MhoStatus::NullArgument, "output pointer is null");
    }
    match value {
        Ok(v) => {
            unsafe { *out = v };
            MhoStatus::Ok
        }
        Err(e) => fail_invalid(&e),
    }
}

/// Binary entropy in bits of a probability in [0, 1].
///
/// # Safety
/// `out` must be valid for a single f64 write.
#[no_mangle]
pub unsafe extern "C" fn mho_binary_entropy(p: f64, out: *mut f64) -> MhoStatus {
    unsafe { write_scalar(out, binary_entropy(p)) }
}

/// Inverse binary entropy: the unique preimage in [0, 0.5] of a value in
/// [0, 1].
///
/// # Safety
/// `out` must be valid for a single f64 write.
#[no_mangle]
pub unsafe extern "C" fn mho_binary_entropy_inv(y: f64, out: *mut f64) -> MhoStatus {
    unsafe { write_scalar(out, binary_entropy_inv(y)) }
}

/// Crossover of the cascade of two binary symmetric channels.
///
/// # Safety
/// `out` must be valid for a single f64 write.
#[no_mangle]
pub unsafe extern "C" fn mho_binary_convolution(a: f64, b: f64, out: *mut f64) -> MhoStatus {
    unsafe { write_scalar(out, binary_convolution(&[a, b])) }
}

/// Rate-distortion function of a helper observed through crossover `p`
/// when the decoder already holds the primary source, at Hamming
/// distortion `d` in [0, p].
///
/// # Safety
/// `out` must be valid for a single f64 write.
#[no_mangle]
pub unsafe extern "C" fn mho_wz_rate(p: f64, d: f64, out: *mut f64) -> MhoStatus {
    unsafe { write_scalar(out, wz_rate(p, d)) }
}

/// Distortion where the helper rate curve leaves its convex envelope and
/// the tangent through (p, 0) takes over.
///
/// # Safety
/// `out` must be valid for a single f64 write.
#[no_mangle]
pub unsafe extern "C" fn mho_critical_distortion(p: f64, out: *mut f64) -> MhoStatus {
    unsafe { write_scalar(out, wz_critical_distortion(p).map(|c| c.value)) }
}

/// Closed-form conditional entropy of the primary bit given `len` helper
/// descriptions, each helper contributing an interleaved (crossover,
/// test-channel noise) pair: `pairs = [p_1, d_1, p_2, d_2, ...]`.
///
/// Exact for up to two helpers; an upper bound beyond that.
///
/// # Safety
/// Unless `len` is 0, `pairs` must point to `2 * len` readable f64
/// values. `out` must be valid for a single f64 write.
#[no_mangle]
pub unsafe extern "C" fn mho_phi(pairs: *const f64, len: usize, out: *mut f64) -> MhoStatus {
    if pairs.is_null() && len > 0 {
        return fail(MhoStatus::NullArgument, "pairs pointer is null");
    }
    let flat: &[f64] = if len == 0 {
        &[]
    } else {
        unsafe { std::slice::from_raw_parts(pairs, 2 * len) }
    };
    let paired: Vec<(f64, f64)> = flat.chunks_exact(2).map(|c| (c[0], c[1])).collect();
    let value = PhiArgs::new(&paired).and_then(|args| phi(&args));
    unsafe { write_scalar(out, value) }
}

/// Region kind selector for [`mho_region_build`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MhoRegionKind {
    /// Achievable bound under per-helper distortion caps.
    Inner = 0,
    /// Converse bound under per-helper distortion caps.
    Outer = 1,
    /// Exact region with no distortion constraints.
    Weak = 2,
}

/// Builds a rate region for `n` binary sources (one primary plus `n - 1`
/// helpers with conditionally independent observation noise).
///
/// `crossovers` holds the `n - 1` helper crossovers in (0, 0.5]. For the
/// inner and outer kinds, `caps` holds `n - 1` distortion caps in
/// [0, p_i]; for the weak kind `caps` must be null. `grid_step` controls
/// the inner bound's distortion sweep; pass 0 or a negative value for
/// the default of 1e-3. On success `*out` owns the handle.
///
/// # Safety
/// `crossovers` must point to `n - 1` readable f64 values, `caps` to
/// `n - 1` readable f64 values when non-null, and `out` must be valid
/// for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn mho_region_build(
    kind: c_int,
    n: usize,
    crossovers: *const f64,
    caps: *const f64,
    grid_step: f64,
    out: *mut *mut MhoRegion,
) -> MhoStatus {
    if out.is_null() {
        return fail(MhoStatus::NullArgument, "output pointer is null");
    }
    if crossovers.is_null() {
        return fail(MhoStatus::NullArgument, "crossovers pointer is null");
    }
    if n < 2 {
        return fail(
            MhoStatus::InvalidArgument,
            "a problem needs a primary source and at least one helper",
        );
    }
    let helpers = n - 1;
    let ps = unsafe { std::slice::from_raw_parts(crossovers, helpers) };
    let kind = match kind {
        0 => MhoRegionKind::Inner,
        1 => MhoRegionKind::Outer,
        2 => MhoRegionKind::Weak,
        other => {
            return fail(
                MhoStatus::InvalidArgument,
                &format!("unknown region kind {other}"),
            );
        }
    };
    let spec = match kind {
        MhoRegionKind::Weak => {
            if !caps.is_null() {
                return fail(
                    MhoStatus::InvalidArgument,
                    "the weak region takes no distortion caps",
                );
            }
            ProblemSpec::weak(ps)
        }
        MhoRegionKind::Inner | MhoRegionKind::Outer => {
            if caps.is_null() {
                return fail(MhoStatus::NullArgument, "caps pointer is null");
            }
            let ds = unsafe { std::slice::from_raw_parts(caps, helpers) };
            ProblemSpec::strong(ps, ds)
        }
    };
    let spec = match spec {
        Ok(spec) => spec,
        Err(error) => return region_failure(&error),
    };
    let grid = if grid_step > 0.0 {
        match GridConfig::new(grid_step) {
            Ok(grid) => grid,
            Err(error) => return region_failure(&error),
        }
    } else {
        GridConfig::default()
    };
    let built = match kind {
        MhoRegionKind::Inner => {
            inner_vertices(&spec, &grid).and_then(|vertices| inner_region(&spec, vertices))
        }
        MhoRegionKind::Outer => outer_region(&spec, &grid),
        MhoRegionKind::Weak => weak_region(&spec),
    };
    match built {
        Ok(region) => {
            let handle = Box::new(MhoRegion { region });
            unsafe { *out = Box::into_raw(handle) };
            MhoStatus::Ok
        }
        Err(error) => region_failure(&error),
    }
}

/// Least achievable primary rate over `len` helper rates, written to
/// `out`. Returns `Infeasible` (with `*out` set to +inf) when a helper
/// rate sits below its floor so no primary rate suffices.
///
/// # Safety
/// `region` must be a live handle from [`mho_region_build`],
/// `helper_rates` must point to `len` readable f64 values, and `out`
/// must be valid for a single f64 write.
#[no_mangle]
pub unsafe extern "C" fn mho_region_min_rate1(
    region: *const MhoRegion,
    helper_rates: *const f64,
    len: usize,
    out: *mut f64,
) -> MhoStatus {
    if region.is_null() || (helper_rates.is_null() && len > 0) {
        return fail(MhoStatus::NullArgument, "region or helper_rates is null");
    }
    if out.is_null() {
        return fail(MhoStatus::NullArgument, "output pointer is null");
    }
    let handle = unsafe { &*region };
    let rates: &[f64] = if len == 0 {
        &[]
    } else {
        unsafe { std::slice::from_raw_parts(helper_rates, len) }
    };
    match handle.region.min_rate1(rates) {
        Ok(Some(bound)) => {
            unsafe { *out = bound };
            MhoStatus::Ok
        }
        Ok(None) => {
            unsafe { *out = f64::INFINITY };
            fail(
                MhoStatus::Infeasible,
                "a helper rate sits below its floor; no primary rate suffices",
            )
        }
        Err(error) => region_failure(&error),
    }
}

/// Membership of a full rate tuple (primary rate first) at tolerance
/// `tol`, written to `out` as 1 or 0.
///
/// # Safety
/// `region` must be a live handle from [`mho_region_build`], `rates`
/// must point to `len` readable f64 values, and `out` must be valid for
/// a single int write.
#[no_mangle]
pub unsafe extern "C" fn mho_region_contains(
    region: *const MhoRegion,
    rates: *const f64,
    len: usize,
    tol: f64,
    out: *mut c_int,
) -> MhoStatus {
    if region.is_null() || rates.is_null() {
        return fail(MhoStatus::NullArgument, "region or rates is null");
    }
    if out.is_null() {
        return fail(MhoStatus::NullArgument, "output pointer is null");
    }
    let handle = unsafe { &*region };
    let slice = unsafe { std::slice::from_raw_parts(rates, len) };
    let tuple = match RateTuple::new(slice.to_vec()) {
        Ok(tuple) => tuple,
        Err(error) => return region_failure(&error),
    };
    match handle.region.contains(&tuple, tol) {
        Ok(inside) => {
            unsafe { *out = c_int::from(inside) };
            MhoStatus::Ok
        }
        Err(error) => region_failure(&error),
    }
}

/// Releases a region handle. Null is a no-op.
///
/// # Safety
/// `region` must be null or a handle from [`mho_region_build`] that has
/// not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn mho_region_free(region: *mut MhoRegion) {
    if !region.is_null() {
        drop(unsafe { Box::from_raw(region) });
    }
}

/// Description of the last failure on this thread, NUL-terminated. The
/// pointer stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mho_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;

    const H_02: f64 = 0.7219280948873623;

    fn last_error() -> String {
        unsafe { CStr::from_ptr(mho_last_error_message()) }
            .to_string_lossy()
            .into_owned()
    }

    #[test]
    fn scalar_kernels_round_trip() {
        let mut value = 0.0f64;
        unsafe {
            assert_eq!(mho_binary_entropy(0.5, &mut value), MhoStatus::Ok);
            assert_eq!(value, 1.0);
            assert_eq!(mho_binary_entropy(0.2, &mut value), MhoStatus::Ok);
            assert!((value - H_02).abs() < 1e-15);
            assert_eq!(mho_binary_entropy_inv(H_02, &mut value), MhoStatus::Ok);
            assert!((value - 0.2).abs() < 1e-12);
            assert_eq!(mho_binary_convolution(0.2, 0.0, &mut value), MhoStatus::Ok);
            assert!((value - 0.2).abs() < 1e-15);
            assert_eq!(mho_wz_rate(0.2, 0.2, &mut value), MhoStatus::Ok);
            assert_eq!(value, 0.0);
            assert_eq!(mho_critical_distortion(0.2, &mut value), MhoStatus::Ok);
            assert!((value - 0.047350767325861564).abs() < 1e-12);
        }
    }

    #[test]
    fn domain_errors_set_messages() {
        let mut value = 0.0f64;
        unsafe {
            assert_eq!(
                mho_binary_entropy(1.5, &mut value),
                MhoStatus::InvalidArgument
            );
            assert!(!last_error().is_empty());
            assert_eq!(
                mho_wz_rate(0.2, 0.3, &mut value),
                MhoStatus::InvalidArgument
            );
            assert_eq!(
                mho_binary_entropy(0.2, std::ptr::null_mut()),
                MhoStatus::NullArgument
            );
        }
    }

    #[test]
    fn phi_takes_interleaved_pairs() {
        let mut value = 0.0f64;
        let pairs = [0.2f64, 0.0, 0.3, 0.0];
        unsafe {
            assert_eq!(mho_phi(pairs.as_ptr(), 2, &mut value), MhoStatus::Ok);
            assert!((value - 0.6451769718917554).abs() < 1e-12);
            assert_eq!(mho_phi(std::ptr::null(), 0, &mut value), MhoStatus::Ok);
            assert_eq!(value, 1.0);
            assert_eq!(
                mho_phi(std::ptr::null(), 1, &mut value),
                MhoStatus::NullArgument
            );
        }
    }

    #[test]
    fn weak_region_handle_lifecycle() {
        let crossovers = [0.2f64];
        let mut handle: *mut MhoRegion = std::ptr::null_mut();
        unsafe {
            assert_eq!(
                mho_region_build(2, 2, crossovers.as_ptr(), std::ptr::null(), 0.0, &mut handle),
                MhoStatus::Ok
            );
            assert!(!handle.is_null());
            let mut bound = 0.0f64;
            let full = [1.0f64];
            assert_eq!(
                mho_region_min_rate1(handle, full.as_ptr(), 1, &mut bound),
                MhoStatus::Ok
            );
            assert!((bound - H_02).abs() < 1e-12);
            let mut inside: c_int = 0;
            let tuple = [1.0f64, 1.0];
            assert_eq!(
                mho_region_contains(handle, tuple.as_ptr(), 2, 1e-9, &mut inside),
                MhoStatus::Ok
            );
            assert_eq!(inside, 1);
            let origin = [0.0f64, 0.0];
            assert_eq!(
                mho_region_contains(handle, origin.as_ptr(), 2, 1e-9, &mut inside),
                MhoStatus::Ok
            );
            assert_eq!(inside, 0);
            mho_region_free(handle);
        }
    }

    #[test]
    fn strong_regions_report_floors_as_infeasible() {
        let crossovers = [0.2f64];
        let caps = [0.03f64];
        for kind in [0, 1] {
            let mut handle: *mut MhoRegion = std::ptr::null_mut();
            unsafe {
                assert_eq!(
                    mho_region_build(kind, 2, crossovers.as_ptr(), caps.as_ptr(), 0.01, &mut handle),
                    MhoStatus::Ok
                );
                let mut bound = 0.0f64;
                let below_floor = [0.1f64];
                assert_eq!(
                    mho_region_min_rate1(handle, below_floor.as_ptr(), 1, &mut bound),
                    MhoStatus::Infeasible
                );
                assert!(bound.is_infinite());
                let above_floor = [1.0f64];
                assert_eq!(
                    mho_region_min_rate1(handle, above_floor.as_ptr(), 1, &mut bound),
                    MhoStatus::Ok
                );
                assert!((bound - H_02).abs() < 1e-9, "kind {kind}: {bound}");
                mho_region_free(handle);
            }
        }
    }

    #[test]
    fn build_rejects_bad_requests() {
        let crossovers = [0.2f64];
        let caps = [0.03f64];
        let mut handle: *mut MhoRegion = std::ptr::null_mut();
        unsafe {
            assert_eq!(
                mho_region_build(7, 2, crossovers.as_ptr(), caps.as_ptr(), 0.0, &mut handle),
                MhoStatus::InvalidArgument
            );
            assert_eq!(
                mho_region_build(0, 2, crossovers.as_ptr(), std::ptr::null(), 0.0, &mut handle),
                MhoStatus::NullArgument
            );
            assert_eq!(
                mho_region_build(2, 2, crossovers.as_ptr(), caps.as_ptr(), 0.0, &mut handle),
                MhoStatus::InvalidArgument
            );
            let bad_p = [0.7f64];
            assert_eq!(
                mho_region_build(1, 2, bad_p.as_ptr(), caps.as_ptr(), 0.0, &mut handle),
                MhoStatus::InvalidArgument
            );
            assert!(last_error().contains("0.7"));
            let many_p = [0.2f64; 8];
            let many_d = [0.0f64; 8];
            assert_eq!(
                mho_region_build(1, 9, many_p.as_ptr(), many_d.as_ptr(), 0.0, &mut handle),
                MhoStatus::Unsupported
            );
            assert!(handle.is_null(), "failed builds must not write a handle");
        }
    }
}
