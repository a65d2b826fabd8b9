use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use conifold_kit_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ck_last_error()) }.to_string_lossy().into_owned()
}

unsafe fn take(s: *mut c_char) -> String {
    let out = CStr::from_ptr(s).to_string_lossy().into_owned();
    ck_string_free(s);
    out
}

#[test]
fn version_and_counts() {
    let v = unsafe { CStr::from_ptr(ck_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
    let mut n = 0u64;
    unsafe {
        assert_eq!(ck_triangulation_count(3, 2, true, 16, &mut n), CkStatus::Ok);
        assert_eq!(n, 10);
        assert_eq!(ck_triangulation_count(2, 2, false, 16, &mut n), CkStatus::Ok);
        assert_eq!(n, 64);
        assert_eq!(ck_triangulation_count(1, 2, true, 16, &mut n), CkStatus::InvalidArgument);
        assert!(last_error().contains("k >= l"));
        assert_eq!(ck_triangulation_count(2, 1, true, 16, ptr::null_mut()), CkStatus::NullPointer);
    }
}

#[test]
fn geometry_series_and_verification() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(ck_geometry_new(2, 1, &mut g), CkStatus::Ok);
        let mut d = 0;
        assert_eq!(ck_geometry_divisor_count(g, &mut d), CkStatus::Ok);
        assert_eq!(d, 5);

        let mut s = ptr::null_mut();
        assert_eq!(ck_g_function(g, 1, 3, &mut s), CkStatus::Ok);
        let mut terms = 0;
        assert_eq!(ck_series_term_count(s, &mut terms), CkStatus::Ok);
        assert_eq!(terms, 3);
        let mut txt = ptr::null_mut();
        assert_eq!(ck_series_to_string(s, &mut txt), CkStatus::Ok);
        assert_eq!(take(txt), "C1 + 3/2*C1^2 + 10/3*C1^3 + O(4)");
        let mut js = ptr::null_mut();
        assert_eq!(ck_series_to_json(s, &mut js), CkStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(js)).unwrap();
        assert_eq!(v["order"], 3);

        assert_eq!(ck_verify_open_mirror(g, 1, 3, ptr::null()), CkStatus::Ok);
        assert_eq!(last_error(), "");
        // g_0 vanishes, so feeding g_1 for divisor 0 must fail
        assert_eq!(ck_verify_open_mirror(g, 0, 3, s), CkStatus::VerificationFailed);
        assert!(last_error().contains("mismatches"));
        assert_eq!(ck_g_function(g, 9, 3, &mut s), CkStatus::InvalidArgument);

        ck_series_free(s);
        ck_geometry_free(g);
        ck_geometry_free(ptr::null_mut());
        ck_series_free(ptr::null_mut());
        ck_string_free(ptr::null_mut());
        assert_eq!(ck_geometry_divisor_count(ptr::null(), &mut d), CkStatus::NullPointer);
    }
}

#[test]
fn verify_all_report() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(ck_verify_all(1, 1, 4, 3, &mut out), CkStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["ok"], true);
        assert_eq!(ck_verify_all(1, 1, 0, 3, &mut out), CkStatus::InvalidArgument);
    }
}

#[test]
fn mirror_json() {
    unsafe {
        let name = CString::new("resolved-G").unwrap();
        let mut out = ptr::null_mut();
        assert_eq!(ck_mirror_json(name.as_ptr(), 2, 1, 4, false, &mut out), CkStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
        assert_eq!(v["relations"].as_array().unwrap().len(), 2);
        let bad = CString::new("resolved-X").unwrap();
        assert_eq!(ck_mirror_json(bad.as_ptr(), 2, 1, 4, false, &mut out), CkStatus::InvalidArgument);
        assert_eq!(ck_mirror_json(name.as_ptr(), 1, 2, 4, false, &mut out), CkStatus::InvalidArgument);
        assert_eq!(ck_mirror_json(ptr::null(), 2, 1, 4, false, &mut out), CkStatus::NullPointer);
    }
}

#[test]
fn amoeba_points() {
    let (fr, fi) = ([0.5, -2.0], [0.0, 0.3]);
    let (gr, gi) = ([3.0], [0.0]);
    unsafe {
        let mut a = ptr::null_mut();
        let st = ck_amoeba_factorized(fr.as_ptr(), fi.as_ptr(), 2, gr.as_ptr(), gi.as_ptr(), 1, 8, 16, 1e-9, &mut a);
        assert_eq!(st, CkStatus::Ok);
        let mut n = 0;
        assert_eq!(ck_amoeba_len(a, &mut n), CkStatus::Ok);
        // one w-root per z sample, two z-roots per w sample
        assert_eq!(n, 8 * 16 * 3);
        let mut buf = vec![0.0; 2 * n];
        let mut w = 0;
        assert_eq!(ck_amoeba_points(a, buf.as_mut_ptr(), n, &mut w), CkStatus::Ok);
        assert_eq!(w, n);
        let lines = [0.5f64.ln(), (4.0f64 + 0.09).sqrt().ln()];
        for p in buf.chunks(2) {
            let d = lines.iter().map(|x| (p[0] - x).abs()).fold((p[1] - 3f64.ln()).abs(), f64::min);
            assert!(d < 1e-6, "{p:?}");
        }
        ck_amoeba_free(a);
        let st = ck_amoeba_factorized(ptr::null(), ptr::null(), 2, gr.as_ptr(), gi.as_ptr(), 1, 8, 16, 1e-9, &mut a);
        assert_eq!(st, CkStatus::NullPointer);
        let st = ck_amoeba_factorized(fr.as_ptr(), fi.as_ptr(), 2, gr.as_ptr(), gi.as_ptr(), 1, 0, 16, 1e-9, &mut a);
        assert_eq!(st, CkStatus::InvalidArgument);
    }
}

/// The generated header must compile as C and as C++.
#[test]
fn header_compiles() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/conifold_kit.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for sym in ["CK_STATUS_VERIFICATION_FAILED = 1", "ck_verify_all", "typedef struct CkGeometry CkGeometry"] {
        assert!(text.contains(sym), "{sym}");
    }
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"conifold_kit.h\"\nint main(void) { CkGeometry *g = 0; CkStatus s = ck_geometry_new(2, 1, &g); ck_geometry_free(g); return s == CK_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let inc = format!("-I{}", header.parent().unwrap().display());
    for (compiler, extra) in [("cc", vec!["-std=c99"]), ("c++", vec!["-x", "c++"])] {
        let status = Command::new(compiler)
            .args(["-fsyntax-only", "-Wall", "-Werror", &inc])
            .args(&extra)
            .arg(&src)
            .status()
            .unwrap_or_else(|e| panic!("{compiler}: {e}"));
        assert!(status.success(), "{compiler} rejected the header");
    }
}
