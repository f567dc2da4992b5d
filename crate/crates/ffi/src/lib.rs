//! C ABI for so3cover.
//!
//! Sets are opaque `So3Set` handles created by `so3_generate`,
//! `so3_from_basis` or `so3_load` and released with `so3_set_free`. Every
//! fallible call returns an `So3Status`; on failure the message is available
//! from `so3_last_error` until the next failing call on the same thread.
//! Quaternions are `w, x, y, z` doubles.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use so3cover::bounds::lower_bound_radius;
use so3cover::delaunay::triangulate;
use so3cover::evaluate::error_histogram;
use so3cover::io::{load_qset, save_qset};
use so3cover::optimize::{generate, PipelineConfig};
use so3cover::{expand_orbit, laue_group, Error, GroupName, OrientationSet, Quaternion};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum So3Status {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidCount = 3,
    UnknownGroup = 4,
    Parse = 5,
    Io = 6,
    Geometry = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

/// Opaque orientation set.
pub struct So3Set {
    inner: OrientationSet,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn status_of(e: &Error) -> So3Status {
    match e {
        Error::InvalidCount { .. } => So3Status::InvalidCount,
        Error::UnknownGroup(_) => So3Status::UnknownGroup,
        Error::Parse { .. } => So3Status::Parse,
        Error::Io(_) => So3Status::Io,
        Error::InvalidQuaternion(_) | Error::AngleOutOfRange(..) | Error::TooFewPoints(_) | Error::Empty => {
            So3Status::InvalidArgument
        }
        _ => So3Status::Geometry,
    }
}

/// Runs `f`, recording any error or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), (So3Status, String)>) -> So3Status {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => So3Status::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            So3Status::Panic
        }
    }
}

fn lib_err(e: Error) -> (So3Status, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (So3Status, String) {
    (So3Status::NullPointer, format!("{what} is null"))
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, (So3Status, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| (So3Status::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn group_arg(p: *const c_char) -> Result<GroupName, (So3Status, String)> {
    str_arg(p, "group")?.parse::<GroupName>().map_err(lib_err)
}

fn into_handle(set: OrientationSet, out: *mut *mut So3Set) {
    // SAFETY: callers check `out` for null first.
    unsafe { *out = Box::into_raw(Box::new(So3Set { inner: set })) };
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn so3_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failing call on this thread; empty if none. Valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn so3_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Runs the optimization pipeline for `n` points on S³ (`n / 2` rotations)
/// with symmetry `group` (e.g. "C1", "O", "2I").
///
/// # Safety
/// `group` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn so3_generate(
    n: usize,
    group: *const c_char,
    restarts: u32,
    seed: u64,
    out: *mut *mut So3Set,
) -> So3Status {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let name = group_arg(group)?;
        let config = PipelineConfig { restarts: restarts as usize, seed, ..PipelineConfig::default() };
        let g = generate(n, &laue_group(name), &config).map_err(lib_err)?;
        into_handle(g.set, out);
        Ok(())
    })
}

/// Expands `count` basis quaternions (`4 * count` doubles, normalized on
/// input) under `group`.
///
/// # Safety
/// `quats` must point to `4 * count` doubles, `group` must be a
/// NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn so3_from_basis(
    quats: *const f64,
    count: usize,
    group: *const c_char,
    out: *mut *mut So3Set,
) -> So3Status {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        if quats.is_null() {
            return Err(null("quats"));
        }
        let name = group_arg(group)?;
        let raw = std::slice::from_raw_parts(quats, 4 * count);
        let basis = raw
            .chunks_exact(4)
            .map(|c| Quaternion::new(c[0], c[1], c[2], c[3]))
            .collect::<so3cover::Result<Vec<_>>>()
            .map_err(lib_err)?;
        if basis.is_empty() {
            return Err(lib_err(Error::Empty));
        }
        into_handle(expand_orbit(&basis, &laue_group(name)), out);
        Ok(())
    })
}

/// Loads a `.qset` file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn so3_load(path: *const c_char, out: *mut *mut So3Set) -> So3Status {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let file = load_qset(str_arg(path, "path")?).map_err(lib_err)?;
        into_handle(file.set, out);
        Ok(())
    })
}

/// Writes a `.qset` file: the basis, or every rotation if `expanded`.
///
/// # Safety
/// `set` must come from this library and `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn so3_save(set: *const So3Set, path: *const c_char, expanded: bool) -> So3Status {
    guard(|| {
        let set = set.as_ref().ok_or_else(|| null("set"))?;
        save_qset(str_arg(path, "path")?, &set.inner, expanded).map_err(lib_err)
    })
}

/// Number of points on S³ (twice the rotation count).
///
/// # Safety
/// `set` must be null or come from this library.
#[no_mangle]
pub unsafe extern "C" fn so3_set_len(set: *const So3Set) -> usize {
    set.as_ref().map_or(0, |s| s.inner.len())
}

/// Copies the points into `buf` as `4 * so3_set_len` doubles.
///
/// # Safety
/// `set` must come from this library and `buf` must hold `capacity` doubles.
#[no_mangle]
pub unsafe extern "C" fn so3_set_points(set: *const So3Set, buf: *mut f64, capacity: usize) -> So3Status {
    guard(|| {
        let set = set.as_ref().ok_or_else(|| null("set"))?;
        if buf.is_null() {
            return Err(null("buf"));
        }
        let need = 4 * set.inner.len();
        if capacity < need {
            return Err((So3Status::BufferTooSmall, format!("need {need} doubles, got {capacity}")));
        }
        let dst = std::slice::from_raw_parts_mut(buf, need);
        for (d, p) in dst.chunks_exact_mut(4).zip(&set.inner.points) {
            d.copy_from_slice(p);
        }
        Ok(())
    })
}

/// Covering radius in radians, from the Delaunay triangulation.
///
/// # Safety
/// `set` must come from this library and `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn so3_covering_radius(set: *const So3Set, out: *mut f64) -> So3Status {
    guard(|| {
        let set = set.as_ref().ok_or_else(|| null("set"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = triangulate(&set.inner.points).map_err(lib_err)?.covering_radius;
        Ok(())
    })
}

/// Conjectured lower bound on the covering radius of `n` points, in radians.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn so3_lower_bound_radius(n: usize, out: *mut f64) -> So3Status {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = lower_bound_radius(n).map_err(lib_err)?;
        Ok(())
    })
}

/// Misorientation histogram over `[0, 2θ]` in `bins` bins. `counts` receives
/// `bins` values; `max_deg` and `mean_deg` may be null.
///
/// # Safety
/// `set` must come from this library, `counts` must hold `bins` values and
/// the optional outputs must be null or valid.
#[no_mangle]
pub unsafe extern "C" fn so3_error_histogram(
    set: *const So3Set,
    samples: usize,
    bins: usize,
    seed: u64,
    counts: *mut u64,
    max_deg: *mut f64,
    mean_deg: *mut f64,
) -> So3Status {
    guard(|| {
        let set = set.as_ref().ok_or_else(|| null("set"))?;
        if counts.is_null() {
            return Err(null("counts"));
        }
        let h = error_histogram(&set.inner, samples, bins, seed).map_err(lib_err)?;
        std::slice::from_raw_parts_mut(counts, bins).copy_from_slice(&h.counts);
        if !max_deg.is_null() {
            *max_deg = h.max_deg;
        }
        if !mean_deg.is_null() {
            *mean_deg = h.mean_deg;
        }
        Ok(())
    })
}

/// Releases a set. Null is ignored.
///
/// # Safety
/// `set` must be null or come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn so3_set_free(set: *mut So3Set) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}
