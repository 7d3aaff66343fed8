//! C interface to the `gpw` crate.
//!
//! Fields and waves are opaque handles made by `gpw_field_*`,
//! `gpw_wave_design` or `gpw_wave_from_record` and released with the
//! matching `*_free`. Every fallible
//! call returns a [`GpwStatus`]; the message of the last failure on the
//! calling thread is available from [`gpw_last_error`]. Strings returned by
//! the library must be released with [`gpw_string_free`].
#![allow(clippy::neg_cmp_op_on_partial_ord)] // `!(x > 0.0)` also rejects NaN

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use gpw::interp::{disk_error, fit_local, target_taylor};
use gpw::special::{airy_plane_solution, field_affine, field_constant, field_cutoff_profile};
use gpw::uwvf::{airy_domain, assemble, build_mesh, center_error, ImpedanceTrace, QuadratureRule, UwvfParams};
use gpw::{basis_set, design_gpw, CoefficientField, Gpw, GpwError, Normalization, Point};
use num_complex::Complex64;

/// Result of a call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GpwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ZeroLocalWavenumber = 3,
    UnsupportedDerivativeOrder = 4,
    OrderTooLarge = 5,
    ZeroN = 6,
    MixedAnchors = 7,
    RankDeficient = 8,
    OutOfValidatedRange = 9,
    BreaklineMisaligned = 10,
    QOutOfRange = 11,
    SingularSystem = 12,
    PointOutsideMesh = 13,
    DegenerateNorm = 14,
    Parse = 15,
    Panic = 16,
}

impl From<&GpwError> for GpwStatus {
    fn from(e: &GpwError) -> Self {
        match e {
            GpwError::ZeroLocalWavenumber { .. } => GpwStatus::ZeroLocalWavenumber,
            GpwError::UnsupportedDerivativeOrder { .. } => GpwStatus::UnsupportedDerivativeOrder,
            GpwError::OrderTooLarge { .. } => GpwStatus::OrderTooLarge,
            GpwError::ZeroN => GpwStatus::ZeroN,
            GpwError::MixedAnchors => GpwStatus::MixedAnchors,
            GpwError::RankDeficient { .. } => GpwStatus::RankDeficient,
            GpwError::OutOfValidatedRange { .. } => GpwStatus::OutOfValidatedRange,
            GpwError::BreaklineMisaligned { .. } => GpwStatus::BreaklineMisaligned,
            GpwError::QOutOfRange(_) => GpwStatus::QOutOfRange,
            GpwError::SingularSystem { .. } => GpwStatus::SingularSystem,
            GpwError::PointOutsideMesh { .. } => GpwStatus::PointOutsideMesh,
            GpwError::DegenerateNorm => GpwStatus::DegenerateNorm,
            GpwError::InvalidArgument(_) => GpwStatus::InvalidArgument,
            GpwError::Parse(_) => GpwStatus::Parse,
        }
    }
}

/// `N = sqrt(beta(G))`.
pub const GPW_NORM_BETA: u32 = 0;
/// `N = i`.
pub const GPW_NORM_CONST: u32 = 1;
/// `N` given by the caller.
pub const GPW_NORM_CUSTOM: u32 = 2;

pub const GPW_QUAD_BOOLE5: u32 = 0;
pub const GPW_QUAD_WEDDLE7: u32 = 1;
pub const GPW_QUAD_NC10: u32 = 2;

/// Coefficient field `beta`.
pub struct GpwField(Box<dyn CoefficientField>);

/// A designed generalized plane wave.
pub struct GpwWave(Gpw);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), GpwStatus>) -> GpwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GpwStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            GpwStatus::Panic
        }
    }
}

fn fail(e: GpwError) -> GpwStatus {
    set_error(&e.to_string());
    GpwStatus::from(&e)
}

fn invalid(msg: &str) -> GpwStatus {
    set_error(msg);
    GpwStatus::InvalidArgument
}

fn null(name: &str) -> GpwStatus {
    set_error(&format!("{name} is null"));
    GpwStatus::NullPointer
}

unsafe fn deref<'a, T>(p: *const T, name: &str) -> Result<&'a T, GpwStatus> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn write<T>(p: *mut T, name: &str, v: T) -> Result<(), GpwStatus> {
    if p.is_null() {
        return Err(null(name));
    }
    p.write(v);
    Ok(())
}

fn normalization(kind: u32, n_re: f64, n_im: f64) -> Result<Normalization, GpwStatus> {
    match kind {
        GPW_NORM_BETA => Ok(Normalization::BetaLocal),
        GPW_NORM_CONST => Ok(Normalization::ConstantI),
        GPW_NORM_CUSTOM => Ok(Normalization::Custom(Complex64::new(n_re, n_im))),
        _ => Err(invalid(&format!("unknown normalization kind {kind}"))),
    }
}

fn quadrature(kind: u32) -> Result<QuadratureRule, GpwStatus> {
    match kind {
        GPW_QUAD_BOOLE5 => Ok(QuadratureRule::Boole5),
        GPW_QUAD_WEDDLE7 => Ok(QuadratureRule::Weddle7),
        GPW_QUAD_NC10 => Ok(QuadratureRule::NewtonCotes10),
        _ => Err(invalid(&format!("unknown quadrature kind {kind}"))),
    }
}

/// Message of the last failed call on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gpw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by the library.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn gpw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// `beta = a x + b y + c`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gpw_field_affine(a: f64, b: f64, c: f64, out: *mut *mut GpwField) -> GpwStatus {
    guard(|| {
        let f = gpw::special::AffineField { a, b, c };
        write(out, "out", Box::into_raw(Box::new(GpwField(Box::new(f)))))
    })
}

/// `beta = c`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gpw_field_constant(c: f64, out: *mut *mut GpwField) -> GpwStatus {
    guard(|| write(out, "out", Box::into_raw(Box::new(GpwField(Box::new(field_constant(c)))))))
}

/// Piecewise-linear cut-off profile with parameter `kappa`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gpw_field_cutoff(kappa: f64, out: *mut *mut GpwField) -> GpwStatus {
    guard(|| write(out, "out", Box::into_raw(Box::new(GpwField(Box::new(field_cutoff_profile(kappa)))))))
}

/// Value of `beta` at `(x, y)`.
///
/// # Safety
/// `field` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gpw_field_value(field: *const GpwField, x: f64, y: f64, out: *mut f64) -> GpwStatus {
    guard(|| {
        let f = deref(field, "field")?;
        write(out, "out", f.0.value(Point::new(x, y)).re)
    })
}

/// # Safety
/// `field` must be null or a live handle, released once.
#[no_mangle]
pub unsafe extern "C" fn gpw_field_free(field: *mut GpwField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// Designs a wave of order `q` and direction `theta` at `(x, y)`.
/// `n_re`, `n_im` are only read for `GPW_NORM_CUSTOM`.
///
/// # Safety
/// `field` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gpw_wave_design(
    field: *const GpwField,
    x: f64,
    y: f64,
    q: u32,
    theta: f64,
    norm_kind: u32,
    n_re: f64,
    n_im: f64,
    out: *mut *mut GpwWave,
) -> GpwStatus {
    guard(|| {
        let f = deref(field, "field")?;
        let norm = normalization(norm_kind, n_re, n_im)?;
        let w = design_gpw(f.0.as_ref(), Point::new(x, y), q as usize, theta, norm).map_err(fail)?;
        write(out, "out", Box::into_raw(Box::new(GpwWave(w))))
    })
}

/// Parses a wave record.
///
/// # Safety
/// `record` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gpw_wave_from_record(record: *const c_char, out: *mut *mut GpwWave) -> GpwStatus {
    guard(|| {
        if record.is_null() {
            return Err(null("record"));
        }
        let text = CStr::from_ptr(record).to_str().map_err(|_| invalid("record is not UTF-8"))?;
        let w = Gpw::from_record(text).map_err(fail)?;
        write(out, "out", Box::into_raw(Box::new(GpwWave(w))))
    })
}

/// Text record of the wave; release with [`gpw_string_free`].
///
/// # Safety
/// `wave` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gpw_wave_to_record(wave: *const GpwWave, out: *mut *mut c_char) -> GpwStatus {
    guard(|| {
        let w = deref(wave, "wave")?;
        let s = CString::new(w.0.to_record()).map_err(|_| invalid("record contains NUL"))?;
        write(out, "out", s.into_raw())
    })
}

/// `phi(x, y)`.
///
/// # Safety
/// `wave` must be a live handle; `re`, `im` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gpw_wave_eval(wave: *const GpwWave, x: f64, y: f64, re: *mut f64, im: *mut f64) -> GpwStatus {
    guard(|| {
        let v = deref(wave, "wave")?.0.eval(Point::new(x, y));
        write(re, "re", v.re)?;
        write(im, "im", v.im)
    })
}

/// Gradient as `[re dx, im dx, re dy, im dy]`.
///
/// # Safety
/// `wave` must be a live handle; `out` must be valid for 4 writes.
#[no_mangle]
pub unsafe extern "C" fn gpw_wave_grad(wave: *const GpwWave, x: f64, y: f64, out: *mut f64) -> GpwStatus {
    guard(|| {
        let g = deref(wave, "wave")?.0.eval_grad(Point::new(x, y));
        if out.is_null() {
            return Err(null("out"));
        }
        for (k, v) in [g[0].re, g[0].im, g[1].re, g[1].im].into_iter().enumerate() {
            out.add(k).write(v);
        }
        Ok(())
    })
}

/// Phase coefficient `lambda_{i,j}`; zero beyond the stored degree.
///
/// # Safety
/// `wave` must be a live handle; `re`, `im` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gpw_wave_lambda(wave: *const GpwWave, i: u32, j: u32, re: *mut f64, im: *mut f64) -> GpwStatus {
    guard(|| {
        let w = deref(wave, "wave")?;
        let (i, j) = (i as usize, j as usize);
        let v = if i + j <= w.0.phase().cap() { w.0.lambda(i, j) } else { Complex64::new(0.0, 0.0) };
        write(re, "re", v.re)?;
        write(im, "im", v.im)
    })
}

/// Approximation order `q` of the wave.
///
/// # Safety
/// `wave` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gpw_wave_order(wave: *const GpwWave, out: *mut u32) -> GpwStatus {
    guard(|| write(out, "out", deref(wave, "wave")?.0.q() as u32))
}

/// # Safety
/// `wave` must be null or a live handle, released once.
#[no_mangle]
pub unsafe extern "C" fn gpw_wave_free(wave: *mut GpwWave) {
    if !wave.is_null() {
        drop(Box::from_raw(wave));
    }
}

/// Fits `Ai(x) exp(i y)` at `(x, y)` with `2n + 1` waves for `beta = x - 1`
/// and reports the largest value and gradient errors on the disk of radius
/// `h`.
///
/// # Safety
/// `err_value`, `err_grad` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gpw_airy_disk_error(
    x: f64,
    y: f64,
    n: u32,
    norm_kind: u32,
    h: f64,
    err_value: *mut f64,
    err_grad: *mut f64,
) -> GpwStatus {
    guard(|| {
        if n == 0 || !(h > 0.0) {
            return Err(invalid("need n >= 1 and h > 0"));
        }
        let norm = normalization(norm_kind, 0.0, 0.0)?;
        if let Normalization::Custom(_) = norm {
            return Err(invalid("custom normalization is not available here"));
        }
        let (n, g) = (n as usize, Point::new(x, y));
        let u = airy_plane_solution();
        let basis = basis_set(&field_affine(), g, n + 1, 2 * n + 1, norm).map_err(fail)?;
        let fit = target_taylor(&u, g, n).and_then(|t| fit_local(&basis, &t)).map_err(fail)?;
        let e = disk_error(&u, &fit, g, h).map_err(fail)?;
        write(err_value, "err_value", e.value)?;
        write(err_grad, "err_grad", e.grad)
    })
}

/// UWVF solve of the Airy problem on `[-6, 3] x [-1, 1]` with `nx * ny`
/// cells and `Q = 0`; reports the relative centre error and the condition
/// estimate.
///
/// # Safety
/// `error`, `cond` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn gpw_uwvf_airy(
    nx: u32,
    ny: u32,
    n: u32,
    norm_kind: u32,
    quad_kind: u32,
    gamma: f64,
    error: *mut f64,
    cond: *mut f64,
) -> GpwStatus {
    guard(|| {
        let params = UwvfParams {
            n: n as usize,
            norm: normalization(norm_kind, 0.0, 0.0)?,
            gamma,
            q: 0.0,
            quad: quadrature(quad_kind)?,
        };
        let mesh = build_mesh(airy_domain(), nx as usize, ny as usize, &[]).map_err(fail)?;
        let u = airy_plane_solution();
        let sys = assemble(&mesh, &field_affine(), params, &ImpedanceTrace(&u)).map_err(fail)?;
        let sol = sys.solve().map_err(fail)?;
        let e = center_error(&sys, &sol.x, &u).map_err(fail)?;
        write(error, "error", e)?;
        write(cond, "cond", sol.cond_estimate)
    })
}
