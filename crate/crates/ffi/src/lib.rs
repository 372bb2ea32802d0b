//! C ABI for the trispec library: opaque family handles, status codes,
//! caller-supplied buffers. Every entry point is panic-safe and returns a
//! `TsStatus`; the per-thread error message is available through
//! `ts_last_error_message`.

use num_complex::Complex64;
use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use trispec::family::{Alpha, OperatorFamily, Parity};
use trispec::taylor;

/// Status codes returned by every trispec entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TsStatus {
    /// Success.
    TsOk = 0,
    /// A pointer argument was null or a parameter malformed.
    TsInvalidArgument = 1,
    /// The operation is outside its mathematical domain
    /// (z beyond the certified disk, unsupported order, ...).
    TsDomainError = 2,
    /// An iterative solver failed to converge.
    TsNoConvergence = 3,
    /// The requested exact value does not exist for this family.
    TsExactUnavailable = 4,
    /// Internal panic; the handle remains valid.
    TsInternalError = 5,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(msg).ok();
    });
}

fn status_of(err: &trispec::Error) -> TsStatus {
    use trispec::Error::*;
    match err {
        NoConvergence { .. } => TsStatus::TsNoConvergence,
        ExactUnavailable { .. } => TsStatus::TsExactUnavailable,
        InvalidFamily(_) | BadCertificate { .. } | BadPath(_) => TsStatus::TsInvalidArgument,
        _ => TsStatus::TsDomainError,
    }
}

fn guard<F: FnOnce() -> Result<(), TsStatus>>(f: F) -> TsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TsStatus::TsOk,
        Ok(Err(status)) => status,
        Err(_) => {
            set_error("internal panic".into());
            TsStatus::TsInternalError
        }
    }
}

fn fail(err: trispec::Error) -> TsStatus {
    let status = status_of(&err);
    set_error(err.to_string());
    status
}

/// Opaque operator-family handle.
pub struct TsFamily {
    inner: OperatorFamily,
}

/// Message describing the most recent error on this thread, or null.
/// The pointer stays valid until the next failing call on the thread.
#[no_mangle]
pub extern "C" fn ts_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| {
        slot.borrow()
            .as_ref()
            .map(|s| s.as_ptr())
            .unwrap_or(std::ptr::null())
    })
}

/// Create a power family q_k = k^2, b_k = c_k = k^(num/den);
/// alpha = num/den must lie in [0, 2).
///
/// # Safety
/// `out` must be a valid pointer; the handle must be released with
/// `ts_family_free`.
#[no_mangle]
pub unsafe extern "C" fn ts_family_power(
    alpha_num: i32,
    alpha_den: u32,
    out: *mut *mut TsFamily,
) -> TsStatus {
    guard(|| {
        if out.is_null() {
            set_error("out pointer is null".into());
            return Err(TsStatus::TsInvalidArgument);
        }
        let alpha = Alpha::rational(alpha_num, alpha_den).map_err(fail)?;
        let fam = OperatorFamily::power(alpha).map_err(fail)?;
        unsafe { *out = Box::into_raw(Box::new(TsFamily { inner: fam })) };
        Ok(())
    })
}

/// Create a Whittaker-Hill family b_k = t - k, c_k = t + k with t >= 0;
/// `odd_parity` selects the (2k+1)^2 diagonal.
///
/// # Safety
/// `out` must be a valid pointer; the handle must be released with
/// `ts_family_free`.
#[no_mangle]
pub unsafe extern "C" fn ts_family_whittaker_hill(
    t: f64,
    odd_parity: bool,
    out: *mut *mut TsFamily,
) -> TsStatus {
    guard(|| {
        if out.is_null() {
            set_error("out pointer is null".into());
            return Err(TsStatus::TsInvalidArgument);
        }
        let parity = if odd_parity { Parity::Odd } else { Parity::Even };
        let fam = OperatorFamily::whittaker_hill(t, parity).map_err(fail)?;
        unsafe { *out = Box::into_raw(Box::new(TsFamily { inner: fam })) };
        Ok(())
    })
}

/// Release a family handle. Null is ignored.
///
/// # Safety
/// `fam` must be a handle returned by a constructor, released once.
#[no_mangle]
pub unsafe extern "C" fn ts_family_free(fam: *mut TsFamily) {
    if !fam.is_null() {
        drop(unsafe { Box::from_raw(fam) });
    }
}

/// Localization radius R_n = n^(1-alpha) / (8M) of the family.
///
/// # Safety
/// `fam` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn ts_localization_radius(fam: *const TsFamily, n: u32) -> f64 {
    if fam.is_null() || n == 0 {
        return f64::NAN;
    }
    unsafe { &*fam }.inner.radius(n)
}

/// All eigenvalues of the dim x dim truncation at z = z_re + i z_im,
/// sorted by real then imaginary part, written to the caller's buffers
/// (each of length dim). `out_residual`, if non-null, receives the
/// certified relative residual.
///
/// # Safety
/// `fam` must be valid; `out_re` and `out_im` must point to `dim` doubles.
#[no_mangle]
pub unsafe extern "C" fn ts_spectrum(
    fam: *const TsFamily,
    z_re: f64,
    z_im: f64,
    dim: usize,
    out_re: *mut f64,
    out_im: *mut f64,
    out_residual: *mut f64,
) -> TsStatus {
    guard(|| {
        if fam.is_null() || out_re.is_null() || out_im.is_null() || dim == 0 {
            set_error("null pointer or zero dimension".into());
            return Err(TsStatus::TsInvalidArgument);
        }
        let fam = unsafe { &*fam };
        let m = trispec::truncate(&fam.inner, Complex64::new(z_re, z_im), dim).map_err(fail)?;
        let s = trispec::eigen::spectrum(&m, 1e-10).map_err(fail)?;
        let re = unsafe { std::slice::from_raw_parts_mut(out_re, dim) };
        let im = unsafe { std::slice::from_raw_parts_mut(out_im, dim) };
        for (i, lam) in s.eigenvalues.iter().enumerate() {
            re[i] = lam.re;
            im[i] = lam.im;
        }
        if !out_residual.is_null() {
            unsafe { *out_residual = s.residual_tol };
        }
        Ok(())
    })
}

/// The n certified window eigenvalues at z (requires |z| <= R_n); buffers
/// of length n.
///
/// # Safety
/// `fam` must be valid; `out_re` and `out_im` must point to `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn ts_window_eigenvalues(
    fam: *const TsFamily,
    z_re: f64,
    z_im: f64,
    n: u32,
    tol: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> TsStatus {
    guard(|| {
        if fam.is_null() || out_re.is_null() || out_im.is_null() || n == 0 {
            set_error("null pointer or zero window".into());
            return Err(TsStatus::TsInvalidArgument);
        }
        let fam = unsafe { &*fam };
        let win =
            trispec::eigen::window_eigenvalues(&fam.inner, Complex64::new(z_re, z_im), n, tol)
                .map_err(fail)?;
        let re = unsafe { std::slice::from_raw_parts_mut(out_re, n as usize) };
        let im = unsafe { std::slice::from_raw_parts_mut(out_im, n as usize) };
        for (i, lam) in win.iter().enumerate() {
            re[i] = lam.re;
            im[i] = lam.im;
        }
        Ok(())
    })
}

/// Taylor coefficients a_2, a_4, ..., a_{2 k_max} of branch n as doubles
/// (buffer of length k_max).
///
/// # Safety
/// `fam` must be valid; `out` must point to `k_max` doubles.
#[no_mangle]
pub unsafe extern "C" fn ts_taylor_coefficients(
    fam: *const TsFamily,
    n: u32,
    k_max: u32,
    out: *mut f64,
) -> TsStatus {
    guard(|| {
        if fam.is_null() || out.is_null() || k_max == 0 {
            set_error("null pointer or zero order".into());
            return Err(TsStatus::TsInvalidArgument);
        }
        let fam = unsafe { &*fam };
        let ts = taylor::solve_branch_equation(&fam.inner, n, k_max).map_err(fail)?;
        let buf = unsafe { std::slice::from_raw_parts_mut(out, k_max as usize) };
        for k in 1..=k_max {
            buf[(k - 1) as usize] = ts.coeff_f64(k);
        }
        Ok(())
    })
}

/// Exact coefficient a_{2k}(n) rendered as "p/q"; only for families with
/// integer 2*alpha. The string must be released with `ts_string_free`.
///
/// # Safety
/// `fam` must be valid; `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ts_taylor_coefficient_exact(
    fam: *const TsFamily,
    n: u32,
    k: u32,
    out: *mut *mut c_char,
) -> TsStatus {
    guard(|| {
        if fam.is_null() || out.is_null() || k == 0 {
            set_error("null pointer or zero order".into());
            return Err(TsStatus::TsInvalidArgument);
        }
        let fam = unsafe { &*fam };
        let ts = taylor::solve_branch_equation_with(
            &fam.inner,
            n,
            k,
            taylor::Backend::Exact,
        )
        .map_err(fail)?;
        let rendered = ts.coeff(k).render();
        let cstr = CString::new(rendered).map_err(|_| TsStatus::TsInternalError)?;
        unsafe { *out = cstr.into_raw() };
        Ok(())
    })
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from a trispec call, released once.
#[no_mangle]
pub unsafe extern "C" fn ts_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Partial regularized trace sum_{m<=N} (E_m(z) - q_m - [p=1] a_2(m) z^2).
///
/// # Safety
/// `fam`, `out_re`, `out_im` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ts_partial_trace(
    fam: *const TsFamily,
    z_re: f64,
    z_im: f64,
    p: u32,
    n: u32,
    out_re: *mut f64,
    out_im: *mut f64,
) -> TsStatus {
    guard(|| {
        if fam.is_null() || out_re.is_null() || out_im.is_null() {
            set_error("null pointer".into());
            return Err(TsStatus::TsInvalidArgument);
        }
        let fam = unsafe { &*fam };
        let r = trispec::trace::partial_trace(&fam.inner, Complex64::new(z_re, z_im), p, n)
            .map_err(fail)?;
        unsafe {
            *out_re = r.partial_sum[0];
            *out_im = r.partial_sum[1];
        }
        Ok(())
    })
}

/// z^2 coefficient of the entire-function trace limit (0 below the
/// critical growth rate, -l/2 at it).
///
/// # Safety
/// `fam` and `out_z2` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ts_trace_limit_z2(
    fam: *const TsFamily,
    out_z2: *mut f64,
) -> TsStatus {
    guard(|| {
        if fam.is_null() || out_z2.is_null() {
            set_error("null pointer".into());
            return Err(TsStatus::TsInvalidArgument);
        }
        let fam = unsafe { &*fam };
        let q = trispec::trace::trace_limit(&fam.inner).map_err(fail)?;
        unsafe { *out_z2 = q.z2 };
        Ok(())
    })
}

/// Branch eigenvalue E_n(z) refined at the given truncation.
///
/// # Safety
/// `fam`, `out_re`, `out_im` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn ts_branch_value(
    fam: *const TsFamily,
    z_re: f64,
    z_im: f64,
    n: u32,
    truncation: usize,
    out_re: *mut f64,
    out_im: *mut f64,
) -> TsStatus {
    guard(|| {
        if fam.is_null() || out_re.is_null() || out_im.is_null() || n == 0 {
            set_error("null pointer or zero index".into());
            return Err(TsStatus::TsInvalidArgument);
        }
        let fam = unsafe { &*fam };
        let v = trispec::asympt::branch_value(
            &fam.inner,
            Complex64::new(z_re, z_im),
            n,
            truncation.max(4 * n as usize).max(64),
        )
        .map_err(fail)?
        .to_c64();
        unsafe {
            *out_re = v.re;
            *out_im = v.im;
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CStr;

    #[test]
    fn lifecycle_and_spectrum() {
        unsafe {
            let mut fam: *mut TsFamily = std::ptr::null_mut();
            assert_eq!(ts_family_power(1, 2, &mut fam), TsStatus::TsOk);
            assert!((ts_localization_radius(fam, 4) - 0.25).abs() < 1e-15);

            let mut re = [0.0; 5];
            let mut im = [0.0; 5];
            let mut res = 0.0;
            let st = ts_spectrum(fam, 0.0, 0.0, 5, re.as_mut_ptr(), im.as_mut_ptr(), &mut res);
            assert_eq!(st, TsStatus::TsOk);
            assert_eq!(re, [1.0, 4.0, 9.0, 16.0, 25.0]);

            ts_family_free(fam);
        }
    }

    #[test]
    fn exact_coefficient_string() {
        unsafe {
            let mut fam: *mut TsFamily = std::ptr::null_mut();
            ts_family_power(1, 2, &mut fam);
            let mut s: *mut c_char = std::ptr::null_mut();
            assert_eq!(ts_taylor_coefficient_exact(fam, 1, 3, &mut s), TsStatus::TsOk);
            assert_eq!(CStr::from_ptr(s).to_str().unwrap(), "-1/1215");
            ts_string_free(s);
            ts_family_free(fam);
        }
    }

    #[test]
    fn domain_errors_surface_as_status() {
        unsafe {
            let mut fam: *mut TsFamily = std::ptr::null_mut();
            assert_eq!(
                ts_family_power(5, 2, &mut fam), // alpha = 2.5 out of range
                TsStatus::TsInvalidArgument
            );
            assert!(!ts_last_error_message().is_null());

            ts_family_power(1, 2, &mut fam);
            let mut re = [0.0; 3];
            let mut im = [0.0; 3];
            // |z| far beyond R_3
            let st =
                ts_window_eigenvalues(fam, 2.0, 0.0, 3, 1e-9, re.as_mut_ptr(), im.as_mut_ptr());
            assert_eq!(st, TsStatus::TsDomainError);
            ts_family_free(fam);
        }
    }

    #[test]
    fn trace_limit_value() {
        unsafe {
            let mut fam: *mut TsFamily = std::ptr::null_mut();
            ts_family_power(1, 2, &mut fam);
            let mut z2 = 0.0;
            assert_eq!(ts_trace_limit_z2(fam, &mut z2), TsStatus::TsOk);
            assert!((z2 + 0.5).abs() < 1e-8);
            ts_family_free(fam);
        }
    }
}
