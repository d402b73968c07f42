use std::ffi::CStr;
use std::ptr;

use ubbcert_ffi::*;

fn basis(d: usize, set: u32, cut: u32) -> *mut UbbBasis {
    let mut b = ptr::null_mut();
    let s = unsafe { ubb_basis_build(d, set, cut, UBB_COMPLETION_INDEX, &mut b) };
    assert_eq!(s, UbbStatus::Ok);
    assert!(!b.is_null());
    b
}

fn take_string(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { ubb_string_free(s) };
    out
}

#[test]
fn upb_round_trip() {
    let b = basis(3, UBB_SET_UPB, UBB_CUT_NONE);
    let (mut n, mut g) = (0usize, 0usize);
    unsafe {
        assert_eq!(ubb_basis_len(b, &mut n), UbbStatus::Ok);
        assert_eq!(ubb_basis_complement_dim(b, &mut g), UbbStatus::Ok);
    }
    assert_eq!((n, g), (19, 8));

    let mut num = [0i64; 27];
    let mut den = [0i64; 27];
    let s = unsafe { ubb_basis_coefficients(b, 18, num.as_mut_ptr(), den.as_mut_ptr(), 27) };
    assert_eq!(s, UbbStatus::Ok);
    assert!(num.iter().all(|&x| x == 1) && den.iter().all(|&x| x == 1));

    let mut text = ptr::null_mut();
    assert_eq!(unsafe { ubb_basis_export(b, &mut text) }, UbbStatus::Ok);
    assert!(take_string(text).starts_with("# d=3 set=upb\n"));

    let mut p = ptr::null_mut();
    assert_eq!(unsafe { ubb_projector_new(b, &mut p) }, UbbStatus::Ok);
    let mut r = 0usize;
    assert_eq!(unsafe { ubb_projector_rank(p, &mut r) }, UbbStatus::Ok);
    assert_eq!(r, 8);
    for cut in [UBB_CUT_A, UBB_CUT_B, UBB_CUT_C] {
        let mut ppt = false;
        assert_eq!(
            unsafe { ubb_projector_is_ppt(p, cut, &mut ppt) },
            UbbStatus::Ok
        );
        assert!(ppt);
    }
    let mut text = ptr::null_mut();
    assert_eq!(unsafe { ubb_projector_export(p, &mut text) }, UbbStatus::Ok);
    assert!(take_string(text).starts_with("rmat 27 27\n"));
    unsafe {
        ubb_projector_free(p);
        ubb_basis_free(b);
    }
}

#[test]
fn asymmetric_marginals() {
    let b = basis(3, UBB_SET_UBB_ASYM, UBB_CUT_C);
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { ubb_projector_new(b, &mut p) }, UbbStatus::Ok);
    for cut in [UBB_CUT_A, UBB_CUT_B] {
        let mut r = 0usize;
        assert_eq!(
            unsafe { ubb_projector_bimarginal_rank(p, cut, &mut r) },
            UbbStatus::Ok
        );
        assert_eq!(r, 7);
        let mut ppt = true;
        assert_eq!(
            unsafe { ubb_projector_is_ppt(p, cut, &mut ppt) },
            UbbStatus::Ok
        );
        assert!(!ppt);
        let mut lemma = false;
        assert_eq!(
            unsafe { ubb_projector_lemma1(p, cut, &mut lemma) },
            UbbStatus::Ok
        );
        assert!(lemma);
    }
    unsafe {
        ubb_projector_free(p);
        ubb_basis_free(b);
    }
}

#[test]
fn errors_set_status_and_message() {
    let mut b = ptr::null_mut();
    let s = unsafe { ubb_basis_build(2, UBB_SET_UPB, UBB_CUT_NONE, UBB_COMPLETION_INDEX, &mut b) };
    assert_eq!(s, UbbStatus::InvalidDimension);
    assert!(b.is_null());
    assert!(take_string(ubb_last_error()).contains("at least 3"));

    let s = unsafe {
        ubb_basis_build(
            3,
            UBB_SET_UBB_ASYM,
            UBB_CUT_NONE,
            UBB_COMPLETION_INDEX,
            &mut b,
        )
    };
    assert_eq!(s, UbbStatus::InvalidArgument);
    let s = unsafe { ubb_basis_build(3, 9, UBB_CUT_NONE, UBB_COMPLETION_INDEX, &mut b) };
    assert_eq!(s, UbbStatus::InvalidArgument);
    let s = unsafe {
        ubb_basis_build(
            3,
            UBB_SET_UPB,
            UBB_CUT_NONE,
            UBB_COMPLETION_INDEX,
            ptr::null_mut(),
        )
    };
    assert_eq!(s, UbbStatus::NullPointer);

    let mut n = 0usize;
    assert_eq!(
        unsafe { ubb_basis_len(ptr::null(), &mut n) },
        UbbStatus::NullPointer
    );

    let b = basis(3, UBB_SET_UPB, UBB_CUT_NONE);
    let mut num = [0i64; 27];
    let mut den = [0i64; 27];
    let s = unsafe { ubb_basis_coefficients(b, 19, num.as_mut_ptr(), den.as_mut_ptr(), 27) };
    assert_eq!(s, UbbStatus::OutOfRange);
    let s = unsafe { ubb_basis_coefficients(b, 0, num.as_mut_ptr(), den.as_mut_ptr(), 8) };
    assert_eq!(s, UbbStatus::OutOfRange);
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { ubb_projector_new(b, &mut p) }, UbbStatus::Ok);
    let mut ppt = false;
    assert_eq!(
        unsafe { ubb_projector_is_ppt(p, UBB_CUT_NONE, &mut ppt) },
        UbbStatus::InvalidArgument
    );

    // A successful call clears the message.
    assert_eq!(unsafe { ubb_basis_len(b, &mut n) }, UbbStatus::Ok);
    assert!(ubb_last_error().is_null());
    unsafe {
        ubb_projector_free(p);
        ubb_basis_free(b);
        ubb_basis_free(ptr::null_mut());
        ubb_string_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_the_api() {
    let header =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/ubbcert.h")).unwrap();
    for name in [
        "ubb_basis_build",
        "ubb_basis_coefficients",
        "ubb_projector_is_ppt",
        "ubb_projector_lemma1",
        "ubb_last_error",
        "ubb_string_free",
        "UBB_STATUS_OK",
        "UBB_SET_UBB_ASYM",
        "typedef struct UbbBasis UbbBasis",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
