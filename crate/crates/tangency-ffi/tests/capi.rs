use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use tangency_ffi::*;

fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { tangency_string_free(s) };
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(tangency_last_error()) }.to_str().unwrap().to_string()
}

fn generate(name: &str, n: usize, k: usize) -> (TangencyStatus, *mut TangencyFamily) {
    let name = CString::new(name).unwrap();
    let mut f = ptr::null_mut();
    let s = unsafe { tangency_generate(name.as_ptr(), n, k, 7, &mut f) };
    (s, f)
}

#[test]
fn generate_count_analyze() {
    let (s, f) = generate("three-n-minus-4", 9, 0);
    assert_eq!(s, TangencyStatus::Ok);
    assert_eq!(unsafe { tangency_family_len(f) }, 9);

    let mut t = 0;
    assert_eq!(unsafe { tangency_count_tangencies(f, &mut t) }, TangencyStatus::Ok);
    assert_eq!(t, 23);

    let mut out = ptr::null_mut();
    let mut pass = -1;
    assert_eq!(unsafe { tangency_analyze(f, &mut out, &mut pass) }, TangencyStatus::Ok);
    let rep = take(out);
    assert!(rep.contains("\"totalTangencies\": 23"), "{rep}");
    assert_eq!(pass, 1);
    unsafe { tangency_family_free(f) };
}

#[test]
fn json_round_trip() {
    let (_, f) = generate("lines", 5, 0);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { tangency_family_to_json(f, &mut out) }, TangencyStatus::Ok);
    let text = take(out);
    unsafe { tangency_family_free(f) };

    let c = CString::new(text.clone()).unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(unsafe { tangency_family_from_json(c.as_ptr(), &mut g) }, TangencyStatus::Ok);
    let mut again = ptr::null_mut();
    unsafe { tangency_family_to_json(g, &mut again) };
    assert_eq!(take(again), text);
    unsafe { tangency_family_free(g) };
}

#[test]
fn triple_point_is_invalid() {
    let json = r#"{"curves":[
        {"id":"a","vertices":[["0","0"],["2","2"]]},
        {"id":"b","vertices":[["0","2"],["2","0"]]},
        {"id":"c","vertices":[["0","1"],["2","1"]]}]}"#;
    let c = CString::new(json).unwrap();
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { tangency_family_from_json(c.as_ptr(), &mut f) }, TangencyStatus::Ok);

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { tangency_validate(f, &mut out) }, TangencyStatus::InvalidFamily);
    assert!(take(out).contains("\"valid\":false") || !last_error().is_empty());

    let mut t = 0;
    assert_eq!(unsafe { tangency_count_tangencies(f, &mut t) }, TangencyStatus::InvalidFamily);
    let mut pass = -1;
    assert_eq!(unsafe { tangency_analyze(f, &mut out, &mut pass) }, TangencyStatus::InvalidFamily);
    take(out);
    assert_eq!(pass, 0);
    unsafe { tangency_family_free(f) };
}

#[test]
fn error_codes() {
    let mut f = ptr::null_mut();
    assert_eq!(unsafe { tangency_family_from_json(ptr::null(), &mut f) }, TangencyStatus::NullPointer);
    assert!(f.is_null());

    let bad = CString::new("{\"curves\": 3}").unwrap();
    assert_eq!(unsafe { tangency_family_from_json(bad.as_ptr(), &mut f) }, TangencyStatus::Parse);
    assert!(!last_error().is_empty());

    let utf = b"\xff\xfe\0";
    assert_eq!(unsafe { tangency_family_from_json(utf.as_ptr().cast(), &mut f) }, TangencyStatus::InvalidUtf8);

    assert_eq!(generate("lines", 1, 0).0, TangencyStatus::BadParameter);
    assert!(last_error().contains("minimum"), "{}", last_error());
    assert_eq!(generate("spiral", 4, 0).0, TangencyStatus::BadParameter);

    assert_eq!(unsafe { tangency_family_to_json(ptr::null(), ptr::null_mut()) }, TangencyStatus::NullPointer);
    assert_eq!(unsafe { tangency_family_len(ptr::null()) }, 0);
    unsafe {
        tangency_family_free(ptr::null_mut());
        tangency_string_free(ptr::null_mut());
    }
}

#[test]
fn header_is_current_and_compiles() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/tangency.h")).unwrap();
    for sym in [
        "tangency_family_from_json",
        "tangency_generate",
        "tangency_family_free",
        "tangency_family_len",
        "tangency_family_to_json",
        "tangency_validate",
        "tangency_count_tangencies",
        "tangency_analyze",
        "tangency_string_free",
        "tangency_last_error",
        "TANGENCY_STATUS_INVALID_FAMILY = 4",
    ] {
        assert!(header.contains(sym), "header lacks {sym}");
    }
    // syntax check with whatever C compiler is around
    let Some(cc) = ["cc", "clang", "gcc"].into_iter().find(|c| Command::new(c).arg("--version").output().is_ok())
    else {
        eprintln!("no C compiler; header syntax not checked");
        return;
    };
    let src = tempfile_path("capi_check.c");
    std::fs::write(
        &src,
        "#include \"tangency.h\"\nint main(void){TangencyFamily*f=0;char*s=0;\
         if(tangency_generate(\"lines\",4,0,1,&f)!=TANGENCY_STATUS_OK)return 1;\
         tangency_analyze(f,&s,0);tangency_string_free(s);tangency_family_free(f);return 0;}\n",
    )
    .unwrap();
    let st = Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(dir.join("include"))
        .arg(&src)
        .status()
        .unwrap();
    assert!(st.success());
}

fn tempfile_path(name: &str) -> std::path::PathBuf {
    let d = std::env::temp_dir().join(format!("tangency-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d.join(name)
}
