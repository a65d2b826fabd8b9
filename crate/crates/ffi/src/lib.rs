//! C ABI for conifold-kit.
//!
//! Every function returns a [`CkStatus`]. Results come back through out
//! pointers; handles and strings allocated here must be released with the
//! matching `ck_*_free` function. On failure a message is available from
//! [`ck_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use conifold_kit::fibration::{amoeba_sample, factorized_coefficients, AmoebaGrid};
use conifold_kit::gw::gfunc::g_function_g;
use conifold_kit::gw::verify::verify_open_mirror_with;
use conifold_kit::lattice::{enumerate_maximal_triangulations, make_polygon, Family};
use conifold_kit::mirror::{mirror_deformed_g, mirror_deformed_o, mirror_resolved_g, mirror_resolved_o, KahlerParams};
use conifold_kit::series::TruncatedSeries;
use conifold_kit::toric::GGeometry;
use conifold_kit::verify::{verify_all, VerifyOptions};
use num_complex::Complex64;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CkStatus {
    Ok = 0,
    VerificationFailed = 1,
    InvalidArgument = 2,
    Io = 3,
    NullPointer = 4,
    Internal = 5,
}

/// Fixed resolution of a generalized conifold.
pub struct CkGeometry(GGeometry);

/// Truncated power series with exact rational coefficients.
pub struct CkSeries(TruncatedSeries);

/// Amoeba point cloud, `(b1, b2)` pairs.
pub struct CkAmoeba(Vec<(f64, f64)>);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn fail(status: CkStatus, msg: impl Into<String>) -> CkStatus {
    set_error(msg);
    status
}

fn invalid<E: std::fmt::Display>(e: E) -> CkStatus {
    fail(CkStatus::InvalidArgument, e.to_string())
}

fn guarded(f: impl FnOnce() -> CkStatus) -> CkStatus {
    set_error("");
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(CkStatus::Internal, "internal panic"),
    }
}

fn put_string(out: *mut *mut c_char, s: String) -> CkStatus {
    match CString::new(s) {
        Ok(c) => {
            // SAFETY: caller checked `out` is non-null.
            unsafe { *out = c.into_raw() };
            CkStatus::Ok
        }
        Err(_) => fail(CkStatus::Internal, "string contains NUL"),
    }
}

/// Message of the last failed call on this thread; empty after success.
/// Valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ck_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version, a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ck_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn ck_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

fn family(generalized: bool) -> Family {
    if generalized {
        Family::Generalized
    } else {
        Family::Orbifolded
    }
}

/// Number of maximal triangulations of the trapezoid (`generalized` true)
/// or the rectangle, by exhaustive enumeration bounded by `guard` points.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ck_triangulation_count(k: i64, l: i64, generalized: bool, guard: usize, out: *mut u64) -> CkStatus {
    if out.is_null() {
        return fail(CkStatus::NullPointer, "out is null");
    }
    guarded(|| {
        let poly = match make_polygon(family(generalized), k, l) {
            Ok(p) => p,
            Err(e) => return invalid(e),
        };
        match enumerate_maximal_triangulations(&poly, guard) {
            Ok(ts) => {
                *out = ts.len() as u64;
                CkStatus::Ok
            }
            Err(e) => invalid(e),
        }
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ck_geometry_new(k: i64, l: i64, out: *mut *mut CkGeometry) -> CkStatus {
    if out.is_null() {
        return fail(CkStatus::NullPointer, "out is null");
    }
    guarded(|| match GGeometry::new(k, l) {
        Ok(g) => {
            *out = Box::into_raw(Box::new(CkGeometry(g)));
            CkStatus::Ok
        }
        Err(e) => invalid(e),
    })
}

/// # Safety
/// `g` must come from [`ck_geometry_new`] and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ck_geometry_free(g: *mut CkGeometry) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Number of divisors with a g-function (the height-one rays).
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ck_geometry_divisor_count(g: *const CkGeometry, out: *mut usize) -> CkStatus {
    if g.is_null() || out.is_null() {
        return fail(CkStatus::NullPointer, "null argument");
    }
    *out = (*g).0.n_height_one();
    CkStatus::Ok
}

/// The g-function of divisor `p`, truncated at total degree `order`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ck_g_function(g: *const CkGeometry, p: usize, order: u32, out: *mut *mut CkSeries) -> CkStatus {
    if g.is_null() || out.is_null() {
        return fail(CkStatus::NullPointer, "null argument");
    }
    guarded(|| match g_function_g(&(*g).0, p, order) {
        Ok(s) => {
            *out = Box::into_raw(Box::new(CkSeries(s)));
            CkStatus::Ok
        }
        Err(e) => invalid(e),
    })
}

/// # Safety
/// `s` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ck_series_free(s: *mut CkSeries) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of nonzero terms.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ck_series_term_count(s: *const CkSeries, out: *mut usize) -> CkStatus {
    if s.is_null() || out.is_null() {
        return fail(CkStatus::NullPointer, "null argument");
    }
    *out = (*s).0.terms().len();
    CkStatus::Ok
}

/// JSON `{vars, order, terms: [{e, num, den}]}`; free with [`ck_string_free`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ck_series_to_json(s: *const CkSeries, out: *mut *mut c_char) -> CkStatus {
    if s.is_null() || out.is_null() {
        return fail(CkStatus::NullPointer, "null argument");
    }
    guarded(|| match serde_json::to_string(&(*s).0) {
        Ok(j) => put_string(out, j),
        Err(e) => fail(CkStatus::Internal, e.to_string()),
    })
}

/// Human-readable form, e.g. `C1 + 3/2*C1^2 + O(3)`; free with [`ck_string_free`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ck_series_to_string(s: *const CkSeries, out: *mut *mut c_char) -> CkStatus {
    if s.is_null() || out.is_null() {
        return fail(CkStatus::NullPointer, "null argument");
    }
    guarded(|| put_string(out, (*s).0.to_string()))
}

/// Checks the open mirror identity for divisor `p` using the series `gp`
/// in place of the computed g-function (pass null to use the computed one).
/// Returns `Ok` or `VerificationFailed`.
///
/// # Safety
/// `g` must be valid; `gp` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn ck_verify_open_mirror(g: *const CkGeometry, p: usize, order: u32, gp: *const CkSeries) -> CkStatus {
    if g.is_null() {
        return fail(CkStatus::NullPointer, "geometry is null");
    }
    guarded(|| {
        let geom = &(*g).0;
        let series = if gp.is_null() {
            match g_function_g(geom, p, order) {
                Ok(s) => s,
                Err(e) => return invalid(e),
            }
        } else {
            (*gp).0.clone()
        };
        match verify_open_mirror_with(geom, p, order, &series) {
            Ok(r) if r.ok => CkStatus::Ok,
            Ok(r) => fail(
                CkStatus::VerificationFailed,
                format!("{} mismatches, first at exponent {:?}", r.mismatches.len(), r.mismatches[0].exponent),
            ),
            Err(e) => invalid(e),
        }
    })
}

/// Runs the full verification suite and returns its JSON report through
/// `out` (also on `VerificationFailed`).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ck_verify_all(k: i64, l: i64, order: u32, seed: u64, out: *mut *mut c_char) -> CkStatus {
    if out.is_null() {
        return fail(CkStatus::NullPointer, "out is null");
    }
    guarded(|| {
        let opts = VerifyOptions { seed, ..VerifyOptions::default() };
        match verify_all(k, l, order, &opts) {
            Ok(r) => {
                let failed: Vec<&str> = r.checks.iter().filter(|c| !c.ok).map(|c| c.name).collect();
                let s = match serde_json::to_string(&r) {
                    Ok(s) => put_string(out, s),
                    Err(e) => return fail(CkStatus::Internal, e.to_string()),
                };
                if s != CkStatus::Ok {
                    return s;
                }
                if failed.is_empty() {
                    CkStatus::Ok
                } else {
                    fail(CkStatus::VerificationFailed, format!("failed checks: {}", failed.join(", ")))
                }
            }
            Err(e) => invalid(e),
        }
    })
}

/// Mirror equations as JSON. `name` is one of `resolved-G`, `deformed-G`,
/// `resolved-O`, `deformed-O`; Kähler parameters stay symbolic.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ck_mirror_json(
    name: *const c_char,
    k: i64,
    l: i64,
    order: u32,
    expanded: bool,
    out: *mut *mut c_char,
) -> CkStatus {
    if name.is_null() || out.is_null() {
        return fail(CkStatus::NullPointer, "null argument");
    }
    guarded(|| {
        let Ok(name) = CStr::from_ptr(name).to_str() else { return invalid("name is not UTF-8") };
        if k < l || l < 1 {
            return invalid(format!("invalid parameters k={k}, l={l}: need k >= l >= 1"));
        }
        let (ku, lu) = (k as usize, l as usize);
        let fam = match name {
            "resolved-G" => mirror_resolved_g(ku, lu, &KahlerParams::symbolic()),
            "deformed-G" => mirror_deformed_g(ku, lu),
            "resolved-O" => mirror_resolved_o(ku, lu, order),
            "deformed-O" => mirror_deformed_o(ku, lu),
            other => return invalid(format!("unknown mirror family {other:?}")),
        };
        match fam {
            Ok(f) => {
                let f = if expanded { f.expanded() } else { f };
                match serde_json::to_string(&f) {
                    Ok(s) => put_string(out, s),
                    Err(e) => fail(CkStatus::Internal, e.to_string()),
                }
            }
            Err(e) => invalid(e),
        }
    })
}

unsafe fn complex_slice(re: *const f64, im: *const f64, n: usize) -> Option<Vec<Complex64>> {
    if n > 0 && (re.is_null() || im.is_null()) {
        return None;
    }
    Some((0..n).map(|i| Complex64::new(*re.add(i), *im.add(i))).collect())
}

/// Samples the amoeba of `f(z) g(w) = 0` for monic `f`, `g` with the given
/// roots, on `radii x angles` circles in each variable.
///
/// # Safety
/// Root arrays must hold `nf` and `ng` values; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ck_amoeba_factorized(
    f_re: *const f64,
    f_im: *const f64,
    nf: usize,
    g_re: *const f64,
    g_im: *const f64,
    ng: usize,
    radii: usize,
    angles: usize,
    tol: f64,
    out: *mut *mut CkAmoeba,
) -> CkStatus {
    if out.is_null() {
        return fail(CkStatus::NullPointer, "out is null");
    }
    let (Some(f), Some(g)) = (complex_slice(f_re, f_im, nf), complex_slice(g_re, g_im, ng)) else {
        return fail(CkStatus::NullPointer, "root array is null");
    };
    guarded(|| {
        let grid = AmoebaGrid { radii, angles, both_directions: true, tol, ..AmoebaGrid::default() };
        match amoeba_sample(&factorized_coefficients(&f, &g), &grid) {
            Ok(s) => {
                *out = Box::into_raw(Box::new(CkAmoeba(s.points)));
                CkStatus::Ok
            }
            Err(e) => invalid(e),
        }
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn ck_amoeba_len(a: *const CkAmoeba, out: *mut usize) -> CkStatus {
    if a.is_null() || out.is_null() {
        return fail(CkStatus::NullPointer, "null argument");
    }
    *out = (*a).0.len();
    CkStatus::Ok
}

/// Copies up to `cap` points as interleaved `b1, b2` into `buf`, which must
/// hold `2 * cap` doubles; `written` receives the number of points copied.
///
/// # Safety
/// Pointers must be valid and `buf` large enough.
#[no_mangle]
pub unsafe extern "C" fn ck_amoeba_points(a: *const CkAmoeba, buf: *mut f64, cap: usize, written: *mut usize) -> CkStatus {
    if a.is_null() || written.is_null() || (cap > 0 && buf.is_null()) {
        return fail(CkStatus::NullPointer, "null argument");
    }
    let pts = &(*a).0;
    let n = pts.len().min(cap);
    for (i, (x, y)) in pts[..n].iter().enumerate() {
        *buf.add(2 * i) = *x;
        *buf.add(2 * i + 1) = *y;
    }
    *written = n;
    CkStatus::Ok
}

/// # Safety
/// `a` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ck_amoeba_free(a: *mut CkAmoeba) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}
