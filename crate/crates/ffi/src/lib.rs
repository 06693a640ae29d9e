//! C ABI over `nvortex`.
//!
//! Every fallible function returns an [`NvStatus`]; on failure a message is
//! available from [`nv_last_error_message`] on the same thread until the next
//! call. Handles are opaque and must be released with the matching `*_free`
//! function. Complex coefficients are passed as interleaved `re, im` pairs in
//! ascending degree.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use nvortex::quadrature::QuadratureConfig;
use nvortex::vortex::{GaugeConfiguration, VortexFamily, VortexSolution, WindingMode};
use nvortex::{run_case, CPoint, CaseConfig, Error, GeometryMode, Poly, RationalMap, C64};

/// Status codes returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Config = 3,
    /// The point is a pole, ramification point or otherwise excluded.
    ExcludedPoint = 4,
    /// The point lies outside the chart of the surface.
    OutsideDomain = 5,
    Numerical = 6,
    Io = 7,
    Panic = 8,
}

/// Chart normalisation of the surfaces, mirroring `GeometryMode`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NvMode {
    Fixed = 0,
    Normalised = 1,
}

/// Opaque handle to an exact vortex solution.
pub struct NvSolution {
    inner: VortexSolution,
}

/// Residuals of the two vortex equations at a point.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct NvResiduals {
    pub selfdual: f64,
    pub vortex2: f64,
}

/// Winding number with its predicted value.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct NvWinding {
    pub value: f64,
    pub expected: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> NvStatus {
    match e {
        Error::Config(_) | Error::InvalidConfiguration(_) | Error::DegenerateMap | Error::NotCoprime(_) => {
            NvStatus::Config
        }
        Error::ExcludedRegion | Error::PoleAtPoint | Error::SingularPoint(_) => NvStatus::ExcludedPoint,
        Error::DomainBoundary | Error::OutsideRegion | Error::UnsupportedDomain(_) => NvStatus::OutsideDomain,
        Error::NonFinite(_) => NvStatus::InvalidArgument,
        Error::Io(_) => NvStatus::Io,
        _ => NvStatus::Numerical,
    }
}

/// Run `f`, translating errors and panics into a status.
fn guard<F: FnOnce() -> Result<(), (NvStatus, String)>>(f: F) -> NvStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => NvStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            NvStatus::Panic
        }
    }
}

fn lib_err(e: Error) -> (NvStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (NvStatus, String) {
    (NvStatus::NullPointer, format!("{what} is null"))
}

/// # Safety
/// `data` must point to `2 * len` readable doubles, or be null with `len = 0`.
unsafe fn coefficients(data: *const f64, len: usize, what: &str) -> Result<Vec<C64>, (NvStatus, String)> {
    if len == 0 {
        return Err((NvStatus::InvalidArgument, format!("{what} is empty")));
    }
    if data.is_null() {
        return Err(null(what));
    }
    let flat = std::slice::from_raw_parts(data, 2 * len);
    Ok(flat.chunks_exact(2).map(|c| C64::new(c[0], c[1])).collect())
}

fn point(re: f64, im: f64) -> Result<CPoint, (NvStatus, String)> {
    CPoint::from_re_im(re, im).map_err(lib_err)
}

fn solution<'a>(sol: *const NvSolution) -> Result<&'a VortexSolution, (NvStatus, String)> {
    // SAFETY: non-null handles come from `nv_solution_new` and are live until freed.
    unsafe { sol.as_ref() }
        .map(|s| &s.inner)
        .ok_or_else(|| null("solution"))
}

/// Build the solution for the family `(c0, c2n, n, mode)` and the map
/// `f = f2/f1`. `f1` and `f2` hold `f1_len` and `f2_len` complex
/// coefficients. On success `*out` receives a new handle.
///
/// # Safety
/// Coefficient pointers must be valid for the given lengths and `out` must
/// be writable.
#[no_mangle]
pub unsafe extern "C" fn nv_solution_new(
    c0: i32,
    c2n: i32,
    n: f64,
    mode: NvMode,
    f1: *const f64,
    f1_len: usize,
    f2: *const f64,
    f2_len: usize,
    out: *mut *mut NvSolution,
) -> NvStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let f1 = coefficients(f1, f1_len, "f1")?;
        let f2 = coefficients(f2, f2_len, "f2")?;
        let mode = match mode {
            NvMode::Fixed => GeometryMode::Fixed,
            NvMode::Normalised => GeometryMode::Normalised,
        };
        let family = VortexFamily::new(c0, c2n, n, mode).map_err(lib_err)?;
        let map = RationalMap::new(Poly::new(f1), Poly::new(f2)).map_err(lib_err)?;
        let inner = VortexSolution::new(family, map).map_err(lib_err)?;
        *out = Box::into_raw(Box::new(NvSolution { inner }));
        Ok(())
    })
}

/// Release a handle. Null is ignored.
///
/// # Safety
/// `sol` must be null or a handle from [`nv_solution_new`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nv_solution_free(sol: *mut NvSolution) {
    if !sol.is_null() {
        drop(Box::from_raw(sol));
    }
}

/// The Higgs field `φⁿ` at `z = re + i·im`.
///
/// # Safety
/// `sol` must be a live handle; `out_re` and `out_im` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nv_solution_higgs(
    sol: *const NvSolution,
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> NvStatus {
    guard(|| {
        let s = solution(sol)?;
        if out_re.is_null() || out_im.is_null() {
            return Err(null("output"));
        }
        let phi = s.higgs_field(point(re, im)?).map_err(lib_err)?;
        *out_re = phi.v.re;
        *out_im = phi.v.im;
        Ok(())
    })
}

/// Moduli of the vortex-equation residuals at `z`.
///
/// # Safety
/// `sol` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nv_solution_residuals(
    sol: *const NvSolution,
    re: f64,
    im: f64,
    out: *mut NvResiduals,
) -> NvStatus {
    guard(|| {
        let s = solution(sol)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let p = point(re, im)?;
        *out = NvResiduals {
            selfdual: s.residual_selfdual(p).map_err(lib_err)?.norm(),
            vortex2: s.residual_vortex2(p).map_err(lib_err)?.norm(),
        };
        Ok(())
    })
}

/// The conformal factor `|φ|²ⁿ` of the Baptista metric at `z`.
///
/// # Safety
/// `sol` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nv_solution_baptista(sol: *const NvSolution, re: f64, im: f64, out: *mut f64) -> NvStatus {
    guard(|| {
        let s = solution(sol)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = s.baptista_factor(point(re, im)?).map_err(lib_err)?;
        Ok(())
    })
}

/// Winding number by flux quadrature: over the whole sphere when `global`
/// is non-zero (needs `C0 = 1`), otherwise summed over small loops around
/// the special points.
///
/// # Safety
/// `sol` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nv_solution_winding(sol: *const NvSolution, global: i32, out: *mut NvWinding) -> NvStatus {
    guard(|| {
        let s = solution(sol)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let mode = if global != 0 {
            WindingMode::Global
        } else {
            WindingMode::Local
        };
        let w = s.winding_number(mode, &QuadratureConfig::default()).map_err(lib_err)?;
        *out = NvWinding {
            value: w.value,
            expected: w.expected,
        };
        Ok(())
    })
}

/// Run every check of a JSON case configuration. On success `*out`
/// receives the JSON report, to be released with [`nv_string_free`]. A
/// report whose checks fail is still a success of this call.
///
/// # Safety
/// `config_json` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn nv_run_case_json(config_json: *const c_char, out: *mut *mut c_char) -> NvStatus {
    guard(|| {
        if config_json.is_null() {
            return Err(null("config_json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(config_json)
            .to_str()
            .map_err(|e| (NvStatus::InvalidArgument, e.to_string()))?;
        let cfg = CaseConfig::from_json(text).map_err(lib_err)?;
        let json = run_case(&cfg).and_then(|r| r.to_json()).map_err(lib_err)?;
        *out = CString::new(json).expect("JSON has no nul bytes").into_raw();
        Ok(())
    })
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn nv_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the last failure on this thread, or null. The pointer is
/// valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn nv_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static nul-terminated string.
#[no_mangle]
pub extern "C" fn nv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
