//! C interface to `anglekit`. Operators are opaque handles; every call
//! returns an `AkStatus` and leaves a message for `ak_last_error` on failure.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use anglekit::circlecs::{angle_operator_cyl, DistributionSpec};
use anglekit::halfcircle::{build_shift_family, full_angle};
use anglekit::linalg::{eigenvalues, BasisMode, BasisSpec, TruncatedOperator};
use anglekit::whquant::{self, angle_matrix, canonical_angle_b, PhaseSpacePoint, WeightSpec};
use anglekit::Error;

pub const AK_MODE_ONE_SIDED: i32 = 0;
pub const AK_MODE_TWO_SIDED: i32 = 1;
pub const AK_MODE_CYCLIC: i32 = 2;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    NonConvergence = 4,
    Numerical = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

/// Opaque square operator on a labelled basis.
pub struct AkOperator {
    inner: TruncatedOperator,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let mut bytes = msg.into().into_bytes();
    bytes.retain(|&b| b != 0);
    let c = CString::new(bytes).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(err: &Error) -> AkStatus {
    match err {
        Error::Domain { .. } | Error::Divergence { .. } | Error::MissingInterpolation(_) => AkStatus::Domain,
        Error::InvalidParameter(_) | Error::BasisMismatch(_) | Error::EmptyWindow { .. } => AkStatus::InvalidArgument,
        Error::NonConvergence { .. } => AkStatus::NonConvergence,
        _ => AkStatus::Numerical,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (AkStatus, String)>) -> AkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            AkStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            AkStatus::Panic
        }
    }
}

fn lift(err: Error) -> (AkStatus, String) {
    (status_of(&err), err.to_string())
}

fn null(name: &str) -> (AkStatus, String) {
    (AkStatus::NullPointer, format!("`{name}` is null"))
}

fn mode_of(mode: i32) -> Result<BasisMode, (AkStatus, String)> {
    match mode {
        AK_MODE_ONE_SIDED => Ok(BasisMode::OneSided),
        AK_MODE_TWO_SIDED => Ok(BasisMode::TwoSided),
        AK_MODE_CYCLIC => Ok(BasisMode::Cyclic),
        other => Err((AkStatus::InvalidArgument, format!("unknown basis mode {other}"))),
    }
}

unsafe fn store(out: *mut *mut AkOperator, op: TruncatedOperator) {
    *out = Box::into_raw(Box::new(AkOperator { inner: op }));
}

unsafe fn handle<'a>(op: *const AkOperator) -> Result<&'a TruncatedOperator, (AkStatus, String)> {
    op.as_ref().map(|h| &h.inner).ok_or_else(|| null("op"))
}

/// Message for the most recent failed call on this thread, or an empty
/// string after a successful call. The pointer stays valid until the next
/// call into this library on the same thread.
#[no_mangle]
pub extern "C" fn ak_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Full half-circle angle operator for the shift on a centred basis of
/// dimension `dim`. The result acts on the doubled space of size `2 * dim`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ak_halfcircle_angle(mode: i32, dim: usize, out: *mut *mut AkOperator) -> AkStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let basis = BasisSpec::centred(mode_of(mode)?, dim).map_err(lift)?;
        let fam = build_shift_family(basis).map_err(lift)?;
        store(out, full_angle(&fam).map_err(lift)?);
        Ok(())
    })
}

/// Quantized angle on the one-sided basis of dimension `dim`, for the
/// thermal weight with parameter `t` in `[0, 1)`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ak_wh_angle(t: f64, dim: usize, out: *mut *mut AkOperator) -> AkStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        store(out, angle_matrix(t, dim).map_err(lift)?);
        Ok(())
    })
}

/// Angle operator of the Gaussian circle coherent states with width
/// `sigma` on a centred two-sided basis of dimension `dim`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ak_circle_angle(sigma: f64, dim: usize, out: *mut *mut AkOperator) -> AkStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let dist = DistributionSpec::gaussian(sigma).map_err(lift)?;
        let basis = BasisSpec::centred(BasisMode::TwoSided, dim).map_err(lift)?;
        store(out, angle_operator_cyl(&dist, basis).map_err(lift)?);
        Ok(())
    })
}

/// Canonical angle `π I + i Σ_{1≤|n|≤Q} Uⁿ/n` on a centred cyclic or
/// two-sided basis.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn ak_canonical_angle(
    mode: i32,
    dim: usize,
    q_cutoff: usize,
    out: *mut *mut AkOperator,
) -> AkStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let basis = BasisSpec::centred(mode_of(mode)?, dim).map_err(lift)?;
        store(out, canonical_angle_b(basis, q_cutoff).map_err(lift)?);
        Ok(())
    })
}

/// Releases a handle. Passing NULL is a no-op.
///
/// # Safety
/// `op` must be NULL or a handle returned by this library that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn ak_operator_free(op: *mut AkOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// Writes the matrix dimension of `op` to `dim_out`.
///
/// # Safety
/// `op` must be a live handle and `dim_out` a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ak_operator_dim(op: *const AkOperator, dim_out: *mut usize) -> AkStatus {
    guard(|| {
        let a = handle(op)?;
        if dim_out.is_null() {
            return Err(null("dim_out"));
        }
        *dim_out = a.dim();
        Ok(())
    })
}

/// Writes the label attached to matrix row `row`.
///
/// # Safety
/// `op` must be a live handle and `label_out` a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ak_operator_label(op: *const AkOperator, row: usize, label_out: *mut i64) -> AkStatus {
    guard(|| {
        let a = handle(op)?;
        if label_out.is_null() {
            return Err(null("label_out"));
        }
        if row >= a.dim() {
            return Err((
                AkStatus::InvalidArgument,
                format!("row {row} outside dimension {}", a.dim()),
            ));
        }
        *label_out = a.basis().label(row);
        Ok(())
    })
}

/// Writes the real and imaginary parts of entry `(row, col)`.
///
/// # Safety
/// `op` must be a live handle; `re` and `im` must be valid writable pointers.
#[no_mangle]
pub unsafe extern "C" fn ak_operator_entry(
    op: *const AkOperator,
    row: usize,
    col: usize,
    re: *mut f64,
    im: *mut f64,
) -> AkStatus {
    guard(|| {
        let a = handle(op)?;
        if re.is_null() || im.is_null() {
            return Err(null(if re.is_null() { "re" } else { "im" }));
        }
        let d = a.dim();
        if row >= d || col >= d {
            return Err((
                AkStatus::InvalidArgument,
                format!("entry ({row}, {col}) outside dimension {d}"),
            ));
        }
        let z = a.get(row, col);
        *re = z.re;
        *im = z.im;
        Ok(())
    })
}

/// Ascending eigenvalues of the Hermitian operator `op`. `written` receives
/// the number of eigenvalues; when `capacity` is too small nothing is copied,
/// `written` holds the required length and `AK_STATUS_BUFFER_TOO_SMALL` is
/// returned. `values` may be NULL when `capacity` is 0.
///
/// # Safety
/// `op` must be a live handle, `values` must point to `capacity` writable
/// doubles, and `written` must be a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ak_operator_eigenvalues(
    op: *const AkOperator,
    values: *mut f64,
    capacity: usize,
    written: *mut usize,
) -> AkStatus {
    guard(|| {
        let a = handle(op)?;
        if written.is_null() {
            return Err(null("written"));
        }
        let d = a.dim();
        *written = d;
        if capacity < d {
            return Err((
                AkStatus::BufferTooSmall,
                format!("need room for {d} eigenvalues, got {capacity}"),
            ));
        }
        if values.is_null() {
            return Err(null("values"));
        }
        let ev = eigenvalues(a).map_err(lift)?;
        ptr::copy_nonoverlapping(ev.as_ptr(), values, d);
        Ok(())
    })
}

/// Lower symbol of `op` at `z = sqrt(j) e^{i gamma}` for the thermal weight
/// with parameter `t`. `op` must live on a one-sided basis. `leakage`
/// receives the probability mass lost to truncation and may be NULL.
///
/// # Safety
/// `op` must be a live handle; `re` and `im` must be valid writable
/// pointers; `leakage` must be NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn ak_lower_symbol(
    op: *const AkOperator,
    t: f64,
    j: f64,
    gamma: f64,
    re: *mut f64,
    im: *mut f64,
    leakage: *mut f64,
) -> AkStatus {
    guard(|| {
        let a = handle(op)?;
        if re.is_null() || im.is_null() {
            return Err(null(if re.is_null() { "re" } else { "im" }));
        }
        let weight = WeightSpec::thermal(t).map_err(lift)?;
        let point = PhaseSpacePoint::new(j, gamma).map_err(lift)?;
        let sym = whquant::lower_symbol(a, &weight, point).map_err(lift)?;
        *re = sym.value.re;
        *im = sym.value.im;
        if !leakage.is_null() {
            *leakage = sym.leakage;
        }
        Ok(())
    })
}

/// Matrix coefficient `F_{n n'}(t)` of the quantized angle.
///
/// # Safety
/// `out` must be a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn ak_f_coefficient(n: u64, np: u64, t: f64, out: *mut f64) -> AkStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = whquant::f_coefficient(n, np, t).map_err(lift)?;
        Ok(())
    })
}
