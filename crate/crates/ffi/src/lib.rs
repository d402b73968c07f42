//! C ABI for building bases and certifying their complement projectors.
//!
//! Objects are opaque handles created by `ubb_*_new`/`ubb_basis_build` and
//! released with the matching `*_free`. Every fallible call returns a
//! [`UbbStatus`]; on failure `ubb_last_error` describes the most recent error
//! on the calling thread. Strings returned by the library are owned by the
//! caller and released with [`ubb_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ubbcert::analysis::{
    bimarginal, complement_projector, cut_pt, lemma1_criterion, SubspaceProjector,
};
use ubbcert::basis::{build, BasisKind, BasisSet};
use ubbcert::cube::Completion;
use ubbcert::export::write_state_set;
use ubbcert::linalg::{rank, write_rmat};
use ubbcert::parties::Bipartition;
use ubbcert::Error;

pub const UBB_SET_TOPB: u32 = 0;
pub const UBB_SET_UPB: u32 = 1;
pub const UBB_SET_UBB_SYM: u32 = 2;
pub const UBB_SET_UBB_ASYM: u32 = 3;

/// Bipartition `A|BC`.
pub const UBB_CUT_A: u32 = 0;
/// Bipartition `AC|B`.
pub const UBB_CUT_B: u32 = 1;
/// Bipartition `AB|C`.
pub const UBB_CUT_C: u32 = 2;
/// No cut (every set except the asymmetric UBB).
pub const UBB_CUT_NONE: u32 = 255;

pub const UBB_COMPLETION_INDEX: u32 = 0;
pub const UBB_COMPLETION_REVERSED: u32 = 1;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UbbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidDimension = 2,
    InvalidArgument = 3,
    OutOfRange = 4,
    /// A coefficient does not fit in 64-bit numerator/denominator.
    Overflow = 5,
    Internal = 6,
    Panic = 7,
}

/// Opaque basis handle.
pub struct UbbBasis(BasisSet);

/// Opaque complement-projector handle.
pub struct UbbProjector(SubspaceProjector);

thread_local! {
    static LAST_ERROR: RefCell<Option<String>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg.into()));
}

fn fail(status: UbbStatus, msg: impl Into<String>) -> UbbStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> UbbStatus {
    let status = match e {
        Error::InvalidDimension(_) => UbbStatus::InvalidDimension,
        Error::InvalidArgument(_) | Error::LayerOutOfRange { .. } => UbbStatus::InvalidArgument,
        _ => UbbStatus::Internal,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> UbbStatus) -> UbbStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panic".into());
        fail(UbbStatus::Panic, msg)
    })
}

macro_rules! deref {
    ($p:expr) => {
        match unsafe { $p.as_ref() } {
            Some(x) => x,
            None => return fail(UbbStatus::NullPointer, concat!(stringify!($p), " is null")),
        }
    };
}

macro_rules! out {
    ($p:expr, $v:expr) => {{
        if $p.is_null() {
            return fail(UbbStatus::NullPointer, concat!(stringify!($p), " is null"));
        }
        unsafe { $p.write($v) };
    }};
}

fn parse_cut(cut: u32) -> Result<Option<Bipartition>, UbbStatus> {
    match cut {
        UBB_CUT_A => Ok(Some(Bipartition::SplitA)),
        UBB_CUT_B => Ok(Some(Bipartition::SplitB)),
        UBB_CUT_C => Ok(Some(Bipartition::SplitC)),
        UBB_CUT_NONE => Ok(None),
        _ => Err(fail(
            UbbStatus::InvalidArgument,
            format!("unknown cut {cut}"),
        )),
    }
}

fn require_cut(cut: u32) -> Result<Bipartition, UbbStatus> {
    parse_cut(cut)?.ok_or_else(|| fail(UbbStatus::InvalidArgument, "a cut is required"))
}

fn into_c_string(s: String, out: *mut *mut c_char) -> UbbStatus {
    match CString::new(s) {
        Ok(c) => {
            out!(out, c.into_raw());
            UbbStatus::Ok
        }
        Err(_) => fail(UbbStatus::Internal, "string contains NUL"),
    }
}

/// Message for the last failed call on this thread, or NULL. Free with
/// [`ubb_string_free`].
#[no_mangle]
pub extern "C" fn ubb_last_error() -> *mut c_char {
    LAST_ERROR
        .with(|e| e.borrow().clone())
        .and_then(|s| CString::new(s).ok())
        .map_or(ptr::null_mut(), CString::into_raw)
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ubb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Builds a basis of the `UBB_SET_*` kind on the `d x d x d` cube.
///
/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn ubb_basis_build(
    d: usize,
    set: u32,
    cut: u32,
    completion: u32,
    out: *mut *mut UbbBasis,
) -> UbbStatus {
    guard(|| {
        let cut = match parse_cut(cut) {
            Ok(c) => c,
            Err(s) => return s,
        };
        let kind = match (set, cut) {
            (UBB_SET_TOPB, None) => BasisKind::Topb,
            (UBB_SET_UPB, None) => BasisKind::Upb,
            (UBB_SET_UBB_SYM, None) => BasisKind::UbbSymmetric,
            (UBB_SET_UBB_ASYM, Some(c)) => BasisKind::UbbAsymmetric(c),
            (UBB_SET_UBB_ASYM, None) => {
                return fail(UbbStatus::InvalidArgument, "ubb-asym needs a cut")
            }
            (0..=2, Some(_)) => {
                return fail(UbbStatus::InvalidArgument, "only ubb-asym takes a cut")
            }
            _ => return fail(UbbStatus::InvalidArgument, format!("unknown set {set}")),
        };
        let completion = match completion {
            UBB_COMPLETION_INDEX => Completion::IndexOrder,
            UBB_COMPLETION_REVERSED => Completion::Reversed,
            _ => {
                return fail(
                    UbbStatus::InvalidArgument,
                    format!("unknown completion {completion}"),
                )
            }
        };
        if out.is_null() {
            return fail(UbbStatus::NullPointer, "out is null");
        }
        match build(d, kind, completion) {
            Ok(b) => {
                out!(out, Box::into_raw(Box::new(UbbBasis(b))));
                UbbStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `b` must be NULL or a handle from [`ubb_basis_build`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ubb_basis_free(b: *mut UbbBasis) {
    if !b.is_null() {
        drop(unsafe { Box::from_raw(b) });
    }
}

/// Number of states in the basis.
///
/// # Safety
/// `b` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ubb_basis_len(b: *const UbbBasis, out: *mut usize) -> UbbStatus {
    guard(|| {
        let b = deref!(b);
        out!(out, b.0.len());
        UbbStatus::Ok
    })
}

/// Dimension of the orthogonal complement, `d^3 - len`.
///
/// # Safety
/// `b` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ubb_basis_complement_dim(
    b: *const UbbBasis,
    out: *mut usize,
) -> UbbStatus {
    guard(|| {
        let b = deref!(b);
        out!(out, b.0.complement_dim());
        UbbStatus::Ok
    })
}

/// Exact coefficients of state `index` as `d^3` numerator/denominator pairs.
///
/// # Safety
/// `b` must be a live handle; `num` and `den` must each hold `len` values.
#[no_mangle]
pub unsafe extern "C" fn ubb_basis_coefficients(
    b: *const UbbBasis,
    index: usize,
    num: *mut i64,
    den: *mut i64,
    len: usize,
) -> UbbStatus {
    guard(|| {
        let b = deref!(b);
        if num.is_null() || den.is_null() {
            return fail(UbbStatus::NullPointer, "num or den is null");
        }
        let Some(state) = b.0.states.get(index) else {
            return fail(
                UbbStatus::OutOfRange,
                format!("state {index} of {}", b.0.len()),
            );
        };
        let coeffs = state.coeffs();
        if len != coeffs.dim() {
            return fail(
                UbbStatus::OutOfRange,
                format!("buffers hold {len}, need {}", coeffs.dim()),
            );
        }
        let num = unsafe { std::slice::from_raw_parts_mut(num, len) };
        let den = unsafe { std::slice::from_raw_parts_mut(den, len) };
        for (i, x) in coeffs.iter().enumerate() {
            match (i64::try_from(x.numer()), i64::try_from(x.denom())) {
                (Ok(n), Ok(d)) => {
                    num[i] = n;
                    den[i] = d;
                }
                _ => return fail(UbbStatus::Overflow, format!("coefficient {i} is {x}")),
            }
        }
        UbbStatus::Ok
    })
}

/// The basis in the state-set text format.
///
/// # Safety
/// `b` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ubb_basis_export(b: *const UbbBasis, out: *mut *mut c_char) -> UbbStatus {
    guard(|| {
        let b = deref!(b);
        into_c_string(write_state_set(&b.0), out)
    })
}

/// Projector onto the orthogonal complement of the basis.
///
/// # Safety
/// `b` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ubb_projector_new(
    b: *const UbbBasis,
    out: *mut *mut UbbProjector,
) -> UbbStatus {
    guard(|| {
        let b = deref!(b);
        if out.is_null() {
            return fail(UbbStatus::NullPointer, "out is null");
        }
        match complement_projector(&b.0) {
            Ok(p) => {
                out!(out, Box::into_raw(Box::new(UbbProjector(p))));
                UbbStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `p` must be NULL or a handle from [`ubb_projector_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ubb_projector_free(p: *mut UbbProjector) {
    if !p.is_null() {
        drop(unsafe { Box::from_raw(p) });
    }
}

/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ubb_projector_rank(p: *const UbbProjector, out: *mut usize) -> UbbStatus {
    guard(|| {
        let p = deref!(p);
        out!(out, p.0.rank);
        UbbStatus::Ok
    })
}

/// Exact test that the partial transpose across `cut` is positive
/// semidefinite.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ubb_projector_is_ppt(
    p: *const UbbProjector,
    cut: u32,
    out: *mut bool,
) -> UbbStatus {
    guard(|| {
        let p = deref!(p);
        let cut = match require_cut(cut) {
            Ok(c) => c,
            Err(s) => return s,
        };
        match cut_pt(&p.0, cut) {
            Ok(r) => {
                out!(out, r.psd);
                UbbStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Rank of the two-party marginal on the pair side of `cut`.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ubb_projector_bimarginal_rank(
    p: *const UbbProjector,
    cut: u32,
    out: *mut usize,
) -> UbbStatus {
    guard(|| {
        let p = deref!(p);
        let cut = match require_cut(cut) {
            Ok(c) => c,
            Err(s) => return s,
        };
        match bimarginal(&p.0.matrix, p.0.d, cut) {
            Ok(m) => {
                out!(out, rank(&m));
                UbbStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Marginal-rank criterion across `cut`: true when the projector rank is
/// below the larger marginal rank.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ubb_projector_lemma1(
    p: *const UbbProjector,
    cut: u32,
    out: *mut bool,
) -> UbbStatus {
    guard(|| {
        let p = deref!(p);
        let cut = match require_cut(cut) {
            Ok(c) => c,
            Err(s) => return s,
        };
        match lemma1_criterion(&p.0, cut) {
            Ok(v) => {
                out!(out, v);
                UbbStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// The projector in the `rmat` text format.
///
/// # Safety
/// `p` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn ubb_projector_export(
    p: *const UbbProjector,
    out: *mut *mut c_char,
) -> UbbStatus {
    guard(|| {
        let p = deref!(p);
        into_c_string(write_rmat(&p.0.matrix), out)
    })
}
