//! C ABI over the `tensurf` library: opaque surface handles, status codes,
//! sampling, pointwise residuals and identity checks (reports returned as
//! JSON strings).
//!
//! Conventions: every fallible call returns a [`TsfStatus`]; on failure a
//! thread-local message is available through [`tsf_last_error`]. Objects
//! created here are freed with the matching `*_free` function and never with
//! the C allocator.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use tensurf::identities::{run_identity, CheckOptions, IdentityId};
use tensurf::zoo::{self, ZooSurface};
use tensurf::GeomError;

/// Status code of every fallible C-ABI call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TsfStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Bad selector, identity name or parameter value.
    InvalidArgument = 3,
    /// Parameter point outside the surface domain.
    OutsideDomain = 4,
    /// Singular or near-singular metric at the requested point.
    SingularMetric = 5,
    /// Operation requires a closed surface.
    NotClosed = 6,
    /// Operation requires a patch with a boundary.
    NotPatch = 7,
    /// Operation not defined for this surface dimension.
    UnsupportedDimension = 8,
    /// Non-finite value encountered.
    NonFinite = 9,
    /// Any other numerical failure.
    Numerical = 10,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(message: &str) {
    let sanitized: Vec<u8> = message.bytes().filter(|&b| b != 0).collect();
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(sanitized).expect("nul bytes removed");
    });
}

fn status_of(err: &GeomError) -> TsfStatus {
    match err {
        GeomError::NonFinite(_) | GeomError::NonFiniteField { .. } => TsfStatus::NonFinite,
        GeomError::DimensionMismatch(_) | GeomError::IndexOutOfRange(_) => {
            TsfStatus::InvalidArgument
        }
        GeomError::SingularMetric { .. } => TsfStatus::SingularMetric,
        GeomError::OutsideDomain { .. } => TsfStatus::OutsideDomain,
        GeomError::NotClosed(_) => TsfStatus::NotClosed,
        GeomError::NotPatch(_) => TsfStatus::NotPatch,
        GeomError::UnsupportedDimension { .. } => TsfStatus::UnsupportedDimension,
        GeomError::InvalidParameter(_) => TsfStatus::InvalidArgument,
        GeomError::ZeroSpeed { .. } | GeomError::VolumeEstimation(_) => TsfStatus::Numerical,
    }
}

fn fail(err: &GeomError) -> TsfStatus {
    set_error(&err.to_string());
    status_of(err)
}

/// Opaque handle of a parametric surface (closed surface or patch).
pub struct TsfSurface {
    inner: ZooSurface,
}

/// Geometry bundle of one surface point. `gaussian_curvature` is NaN where
/// undefined (three-parameter surfaces). Only the first `ambient_dim`
/// entries of the vectors are meaningful.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct TsfSample {
    pub param_dim: u32,
    pub ambient_dim: u32,
    pub position: [f64; 4],
    pub normal: [f64; 4],
    pub area_element: f64,
    pub mean_curvature: f64,
    pub gaussian_curvature: f64,
    pub scalar_curvature: f64,
}

/// Pointwise residuals of the structural equations. `gauss` is NaN for
/// three-parameter surfaces.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct TsfResiduals {
    pub weingarten: f64,
    pub codazzi: f64,
    pub gauss: f64,
}

/// Library version as a static C string.
#[no_mangle]
pub extern "C" fn tsf_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr() as *const c_char
}

/// Message of the most recent failure on this thread. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tsf_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Builds a surface from a selector such as `"torus:R=2,r=0.5"`; see
/// `tensurf list` for the catalog. On success `*out` owns the handle.
///
/// # Safety
/// `selector` must be a valid NUL-terminated string and `out` a valid
/// pointer; the returned handle must be released with [`tsf_surface_free`].
#[no_mangle]
pub unsafe extern "C" fn tsf_surface_new(
    selector: *const c_char,
    out: *mut *mut TsfSurface,
) -> TsfStatus {
    if selector.is_null() || out.is_null() {
        set_error("null pointer argument");
        return TsfStatus::NullArgument;
    }
    let text = match CStr::from_ptr(selector).to_str() {
        Ok(text) => text,
        Err(_) => {
            set_error("selector is not valid UTF-8");
            return TsfStatus::InvalidUtf8;
        }
    };
    match zoo::from_selector(text) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(TsfSurface { inner }));
            TsfStatus::Ok
        }
        Err(err) => fail(&err),
    }
}

/// Releases a handle returned by [`tsf_surface_new`]. Null is a no-op.
///
/// # Safety
/// `surface` must be null or a pointer obtained from [`tsf_surface_new`]
/// that has not been freed already.
#[no_mangle]
pub unsafe extern "C" fn tsf_surface_free(surface: *mut TsfSurface) {
    if !surface.is_null() {
        drop(Box::from_raw(surface));
    }
}

/// Number of surface parameters (2 or 3); 0 for a null handle.
///
/// # Safety
/// `surface` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tsf_surface_param_dim(surface: *const TsfSurface) -> u32 {
    surface.as_ref().map_or(0, |s| s.inner.surface().param_dim() as u32)
}

/// Ambient dimension (3 or 4); 0 for a null handle.
///
/// # Safety
/// `surface` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tsf_surface_ambient_dim(surface: *const TsfSurface) -> u32 {
    surface.as_ref().map_or(0, |s| s.inner.surface().ambient_dim() as u32)
}

/// Evaluates the geometry bundle at a parameter point of length
/// `point_len` (must equal the parameter dimension).
///
/// # Safety
/// `surface` must be a live handle, `point` must reference `point_len`
/// doubles, and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tsf_surface_sample(
    surface: *const TsfSurface,
    point: *const f64,
    point_len: usize,
    out: *mut TsfSample,
) -> TsfStatus {
    let Some(handle) = surface.as_ref() else {
        set_error("null surface handle");
        return TsfStatus::NullArgument;
    };
    if point.is_null() || out.is_null() {
        set_error("null pointer argument");
        return TsfStatus::NullArgument;
    }
    let inner = handle.inner.surface();
    if point_len != inner.param_dim() {
        set_error(&format!(
            "parameter point of length {point_len}, surface expects {}",
            inner.param_dim()
        ));
        return TsfStatus::InvalidArgument;
    }
    let coords = std::slice::from_raw_parts(point, point_len);
    match inner.sample(coords) {
        Ok(sample) => {
            let mut position = [0.0f64; 4];
            let mut normal = [0.0f64; 4];
            position[..sample.ambient_dim].copy_from_slice(sample.position.as_slice());
            normal[..sample.ambient_dim].copy_from_slice(sample.normal.as_slice());
            *out = TsfSample {
                param_dim: sample.param_dim as u32,
                ambient_dim: sample.ambient_dim as u32,
                position,
                normal,
                area_element: sample.area_element,
                mean_curvature: sample.mean_curvature,
                gaussian_curvature: sample.gaussian_curvature.unwrap_or(f64::NAN),
                scalar_curvature: sample.scalar_curvature,
            };
            TsfStatus::Ok
        }
        Err(err) => fail(&err),
    }
}

/// Evaluates the Weingarten, Codazzi and Gauss residuals at a parameter
/// point. Pass 0 for either step to use the defaults (1e-5 analytic,
/// 1e-4 computed).
///
/// # Safety
/// Same contracts as [`tsf_surface_sample`].
#[no_mangle]
pub unsafe extern "C" fn tsf_surface_residuals(
    surface: *const TsfSurface,
    point: *const f64,
    point_len: usize,
    fd_step_analytic: f64,
    fd_step_computed: f64,
    out: *mut TsfResiduals,
) -> TsfStatus {
    let Some(handle) = surface.as_ref() else {
        set_error("null surface handle");
        return TsfStatus::NullArgument;
    };
    if point.is_null() || out.is_null() {
        set_error("null pointer argument");
        return TsfStatus::NullArgument;
    }
    let inner = handle.inner.surface();
    if point_len != inner.param_dim() {
        set_error(&format!(
            "parameter point of length {point_len}, surface expects {}",
            inner.param_dim()
        ));
        return TsfStatus::InvalidArgument;
    }
    let coords = std::slice::from_raw_parts(point, point_len);
    let h1 = if fd_step_analytic > 0.0 {
        fd_step_analytic
    } else {
        tensurf::surface::FD_STEP_ANALYTIC
    };
    let h2 = if fd_step_computed > 0.0 {
        fd_step_computed
    } else {
        tensurf::surface::FD_STEP_COMPUTED
    };
    let weingarten = match inner.weingarten_residual(coords, h1) {
        Ok(value) => value,
        Err(err) => return fail(&err),
    };
    let codazzi = match inner.codazzi_residual(coords, h2, false) {
        Ok(value) => value,
        Err(err) => return fail(&err),
    };
    let gauss = if inner.param_dim() == 2 {
        match inner.gauss_residual(coords) {
            Ok(value) => value,
            Err(err) => return fail(&err),
        }
    } else {
        f64::NAN
    };
    *out = TsfResiduals { weingarten, codazzi, gauss };
    TsfStatus::Ok
}

/// Runs one integral identity (by its id, e.g. `"IN=0"`, `"IR.NK"`,
/// `"patch-N"`) at `resolution` nodes per axis and `boundary_nodes` line
/// nodes per boundary segment (0 for the default). `*out_json` receives a
/// JSON array of report objects, to be released with [`tsf_string_free`].
///
/// # Safety
/// `surface` must be a live handle; `identity` a valid NUL-terminated
/// string; `out_json` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn tsf_identity_check(
    surface: *const TsfSurface,
    identity: *const c_char,
    resolution: u32,
    boundary_nodes: u32,
    out_json: *mut *mut c_char,
) -> TsfStatus {
    let Some(handle) = surface.as_ref() else {
        set_error("null surface handle");
        return TsfStatus::NullArgument;
    };
    if identity.is_null() || out_json.is_null() {
        set_error("null pointer argument");
        return TsfStatus::NullArgument;
    }
    let name = match CStr::from_ptr(identity).to_str() {
        Ok(text) => text,
        Err(_) => {
            set_error("identity name is not valid UTF-8");
            return TsfStatus::InvalidUtf8;
        }
    };
    let id = match IdentityId::parse(name) {
        Ok(id) => id,
        Err(err) => return fail(&err),
    };
    if resolution < 8 {
        set_error(&format!("resolution {resolution} below the minimum of 8"));
        return TsfStatus::InvalidArgument;
    }
    let boundary = if boundary_nodes == 0 {
        tensurf::identities::DEFAULT_BOUNDARY_NODES
    } else {
        boundary_nodes as usize
    };
    match run_identity(
        &handle.inner,
        id,
        &[resolution as usize],
        boundary,
        &CheckOptions::default(),
    ) {
        Ok(reports) => {
            let json = tensurf::report::render_json(&reports);
            let owned = CString::new(json).expect("JSON has no interior NUL");
            *out_json = owned.into_raw();
            TsfStatus::Ok
        }
        Err(err) => fail(&err),
    }
}

/// Releases a string returned by this library. Null is a no-op.
///
/// # Safety
/// `text` must be null or a pointer returned by a `tensurf-ffi` call that
/// has not been freed already.
#[no_mangle]
pub unsafe extern "C" fn tsf_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}
