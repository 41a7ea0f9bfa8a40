//! C interface to `ballotope`.
//!
//! Every function returns a [`BallotopeStatus`] and writes results through
//! out-parameters. On failure, [`ballotope_last_error`] describes the most
//! recent error on the calling thread. Handles are opaque and must be
//! released with their matching `_free` function; strings written through
//! `char **` are released with [`ballotope_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ballotope::rational::parse_rational_list;
use ballotope::vertex::{vertex_to_bbs, interior_vertex_to_bbs, VertexSet};
use ballotope::{BallotError, BitSequence, GapVector};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BallotopeStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Precondition = 4,
    CapExceeded = 5,
    OutOfRange = 6,
    Panic = 7,
}

impl From<&BallotError> for BallotopeStatus {
    fn from(e: &BallotError) -> Self {
        match e {
            BallotError::InvalidBits(_) | BallotError::ParseRational { .. } => Self::Parse,
            BallotError::Precondition(_) => Self::Precondition,
            BallotError::CapExceeded { .. } => Self::CapExceeded,
        }
    }
}

/// Opaque gap vector.
pub struct BallotopeGapVector(GapVector);

/// Opaque list of polytope vertices.
pub struct BallotopeVertexSet(VertexSet);

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct BallotopeMembership {
    pub in_cone: bool,
    pub in_polytope: bool,
    pub in_cone_interior: bool,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct BallotopeCut {
    /// Smallest left-rotation that lands in the cone.
    pub canonical: usize,
    /// Number of rotations in the cone.
    pub cut_count: usize,
    pub unique: bool,
    pub generic: bool,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct BallotopeVolume {
    pub estimate: f64,
    pub std_error: f64,
    pub hits: u64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct BallotopeUnimodularity {
    pub submatrices_tested: usize,
    pub invertible_count: usize,
    pub all_unimodular: bool,
    pub all_flat: bool,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

struct Failure(BallotopeStatus, String);

impl From<BallotError> for Failure {
    fn from(e: BallotError) -> Self {
        Failure((&e).into(), e.to_string())
    }
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

/// Runs `f`, converting errors and panics into a status and a stored message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> BallotopeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            BallotopeStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(&format!("panic: {msg}"));
            BallotopeStatus::Panic
        }
    }
}

fn null(name: &str) -> Failure {
    Failure(BallotopeStatus::NullPointer, format!("{name} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(BallotopeStatus::InvalidUtf8, format!("{name}: {e}")))
}

unsafe fn write<T>(out: *mut T, value: T, name: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

unsafe fn handle<'a, T>(h: *const T, name: &str) -> Result<&'a T, Failure> {
    h.as_ref().ok_or_else(|| null(name))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior NUL").into_raw()
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ballotope_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the last failed call on this thread, or "" after a success.
/// Valid until the next ballotope call on the same thread.
#[no_mangle]
pub extern "C" fn ballotope_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a pointer obtained from this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ballotope_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Whether `bits` (a string of '0'/'1') is a bidirectional ballot sequence.
///
/// # Safety
/// `bits` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ballotope_is_bbs(bits: *const c_char, out: *mut bool) -> BallotopeStatus {
    guard(|| {
        let b: BitSequence = read_str(bits, "bits")?.parse()?;
        write(out, ballotope::is_bbs(&b), "out")
    })
}

/// Number of bidirectional ballot sequences of length `n`, as a decimal string.
///
/// # Safety
/// `out` must be writable; free the result with `ballotope_string_free`.
#[no_mangle]
pub unsafe extern "C" fn ballotope_count_bbs(n: usize, out: *mut *mut c_char) -> BallotopeStatus {
    guard(|| {
        if n == 0 {
            return Err(Failure(BallotopeStatus::Precondition, "n must be >= 1".into()));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        write(out, to_c_string(ballotope::count_bbs(n).to_string()), "out")
    })
}

/// Parses a comma-separated list of rationals ("3/4", "1.78", "2") of odd length.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ballotope_gap_vector_parse(
    text: *const c_char,
    out: *mut *mut BallotopeGapVector,
) -> BallotopeStatus {
    guard(|| {
        let v = GapVector::new(parse_rational_list(read_str(text, "text")?)?)?;
        if out.is_null() {
            return Err(null("out"));
        }
        write(out, Box::into_raw(Box::new(BallotopeGapVector(v))), "out")
    })
}

/// # Safety
/// `v` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ballotope_gap_vector_len(
    v: *const BallotopeGapVector,
    out: *mut usize,
) -> BallotopeStatus {
    guard(|| write(out, handle(v, "v")?.0.dim(), "out"))
}

/// Entries formatted as "[p/q,...]".
///
/// # Safety
/// `v` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ballotope_gap_vector_to_string(
    v: *const BallotopeGapVector,
    out: *mut *mut c_char,
) -> BallotopeStatus {
    guard(|| {
        let s = handle(v, "v")?.0.to_string();
        if out.is_null() {
            return Err(null("out"));
        }
        write(out, to_c_string(s), "out")
    })
}

/// # Safety
/// `v` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ballotope_gap_vector_membership(
    v: *const BallotopeGapVector,
    out: *mut BallotopeMembership,
) -> BallotopeStatus {
    guard(|| {
        let r = ballotope::membership(&handle(v, "v")?.0);
        write(
            out,
            BallotopeMembership {
                in_cone: r.in_cone,
                in_polytope: r.in_polytope,
                in_cone_interior: r.in_cone_interior,
            },
            "out",
        )
    })
}

/// Rotations of a non-negative necklace that land in the ballot cone.
///
/// # Safety
/// `v` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ballotope_gap_vector_cut(
    v: *const BallotopeGapVector,
    out: *mut BallotopeCut,
) -> BallotopeStatus {
    guard(|| {
        let c = ballotope::cut_necklace(&handle(v, "v")?.0)?;
        write(
            out,
            BallotopeCut {
                canonical: c.canonical.get(),
                cut_count: c.cuts.len(),
                unique: c.unique,
                generic: c.generic,
            },
            "out",
        )
    })
}

/// # Safety
/// `v` must be null or a handle from `ballotope_gap_vector_parse`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ballotope_gap_vector_free(v: *mut BallotopeGapVector) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// All vertices of the polytope in dimension `2n-1`, sorted lexicographically.
/// Fails with `CAP_EXCEEDED` for `n > 10`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ballotope_vertex_set_enumerate(
    n: usize,
    out: *mut *mut BallotopeVertexSet,
) -> BallotopeStatus {
    guard(|| {
        let set = ballotope::enumerate_vertices(n)?;
        if out.is_null() {
            return Err(null("out"));
        }
        write(out, Box::into_raw(Box::new(BallotopeVertexSet(set))), "out")
    })
}

/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ballotope_vertex_set_len(
    set: *const BallotopeVertexSet,
    out: *mut usize,
) -> BallotopeStatus {
    guard(|| write(out, handle(set, "set")?.0.len(), "out"))
}

/// Coordinates per vertex, `2n-1`.
///
/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ballotope_vertex_set_dim(
    set: *const BallotopeVertexSet,
    out: *mut usize,
) -> BallotopeStatus {
    guard(|| write(out, 2 * handle(set, "set")?.0.n - 1, "out"))
}

unsafe fn vertex_at<'a>(
    set: *const BallotopeVertexSet,
    index: usize,
) -> Result<(&'a VertexSet, usize), Failure> {
    let s = &handle(set, "set")?.0;
    if index >= s.len() {
        return Err(Failure(
            BallotopeStatus::OutOfRange,
            format!("index {index} out of range for {} vertices", s.len()),
        ));
    }
    Ok((s, index))
}

/// Copies vertex `index` into `buf` (0/1 bytes). `buf_len` must be at least the dimension.
///
/// # Safety
/// `set` must be a live handle; `buf` must have room for `buf_len` bytes.
#[no_mangle]
pub unsafe extern "C" fn ballotope_vertex_set_get(
    set: *const BallotopeVertexSet,
    index: usize,
    buf: *mut u8,
    buf_len: usize,
) -> BallotopeStatus {
    guard(|| {
        let (s, i) = vertex_at(set, index)?;
        let entries = s.vertices[i].entries();
        if buf.is_null() {
            return Err(null("buf"));
        }
        if buf_len < entries.len() {
            return Err(Failure(
                BallotopeStatus::OutOfRange,
                format!("buffer holds {buf_len} bytes, vertex needs {}", entries.len()),
            ));
        }
        ptr::copy_nonoverlapping(entries.as_ptr(), buf, entries.len());
        Ok(())
    })
}

/// Whether vertex `index` lies in the interior of the cone.
///
/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ballotope_vertex_set_is_interior(
    set: *const BallotopeVertexSet,
    index: usize,
    out: *mut bool,
) -> BallotopeStatus {
    guard(|| {
        let (s, i) = vertex_at(set, index)?;
        write(out, s.interior_flags[i], "out")
    })
}

/// Ballot sequence of vertex `index`: length `2n+3`, or `2n-1` with `interior`
/// (which requires an interior vertex and `n >= 2`).
///
/// # Safety
/// `set` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ballotope_vertex_set_to_bbs(
    set: *const BallotopeVertexSet,
    index: usize,
    interior: bool,
    out: *mut *mut c_char,
) -> BallotopeStatus {
    guard(|| {
        let (s, i) = vertex_at(set, index)?;
        let v = &s.vertices[i];
        let b = if interior { interior_vertex_to_bbs(v)? } else { vertex_to_bbs(v)? };
        if out.is_null() {
            return Err(null("out"));
        }
        write(out, to_c_string(b.to_string()), "out")
    })
}

/// # Safety
/// `set` must be null or a handle from `ballotope_vertex_set_enumerate`, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn ballotope_vertex_set_free(set: *mut BallotopeVertexSet) {
    if !set.is_null() {
        drop(Box::from_raw(set));
    }
}

/// Monte Carlo volume of the polytope; deterministic in `(n, samples, seed)`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ballotope_mc_volume(
    n: usize,
    samples: u64,
    seed: u64,
    out: *mut BallotopeVolume,
) -> BallotopeStatus {
    guard(|| {
        let e = ballotope::mc_volume(n, samples, seed)?;
        write(out, BallotopeVolume { estimate: e.estimate, std_error: e.stderr, hits: e.hits }, "out")
    })
}

/// Flat elimination over every square row subset of the constraint matrix (`n <= 4`).
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn ballotope_verify_unimodularity(
    n: usize,
    out: *mut BallotopeUnimodularity,
) -> BallotopeStatus {
    guard(|| {
        let r = ballotope::verify_unimodularity(n)?;
        write(
            out,
            BallotopeUnimodularity {
                submatrices_tested: r.submatrices_tested,
                invertible_count: r.invertible_count,
                all_unimodular: r.all_unimodular,
                all_flat: r.all_flat,
            },
            "out",
        )
    })
}
