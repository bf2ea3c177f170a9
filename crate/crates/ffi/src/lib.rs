//! C ABI over the `profound` library.
//!
//! Every fallible function returns a [`ProfoundStatus`] and writes its result
//! through an out-pointer. On failure [`profound_last_error`] describes what
//! went wrong on the calling thread. Handles are opaque and owned by the
//! caller until passed to the matching `_free` function. Strings returned
//! through `char **` are owned by the caller and released with
//! [`profound_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use profound::k3::{self, BilinearLattice};
use profound::lefschetz::{self, Direction, TwistWord};
use profound::linalg::{Filtration, Matrix};
use profound::mwf::{self, NilpotentEndo};
use profound::snc::{self, SncFixture};
use profound::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfoundStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    DimensionMismatch = 4,
    NotNilpotent = 5,
    DegeneratePairing = 6,
    InvalidInput = 7,
    NotAPositiveTwist = 8,
    OutOfRange = 9,
    Panic = 10,
}

/// Direction of a Hurwitz move.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProfoundDirection {
    Right = 0,
    Left = 1,
}

/// A dense rational matrix.
pub struct ProfoundMatrix(Matrix);

/// An increasing filtration of `Q^n`.
pub struct ProfoundFiltration(Filtration);

/// An ordered word of positive Dehn twists in SL2(Z).
pub struct ProfoundWord(TwistWord);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn status_of(e: &Error) -> ProfoundStatus {
    match e {
        Error::Parse(_) => ProfoundStatus::Parse,
        Error::DimensionMismatch(_) | Error::ShapeMismatch(_) => ProfoundStatus::DimensionMismatch,
        Error::NotNilpotent => ProfoundStatus::NotNilpotent,
        Error::DegeneratePairing => ProfoundStatus::DegeneratePairing,
        Error::NotAPositiveTwist(_) => ProfoundStatus::NotAPositiveTwist,
        Error::PositionOutOfRange { .. } => ProfoundStatus::OutOfRange,
        _ => ProfoundStatus::InvalidInput,
    }
}

struct Fail(ProfoundStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(ProfoundStatus::NullArgument, format!("{what} is null"))
}

/// Runs `f`, records any error or panic, and turns it into a status.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> ProfoundStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            ProfoundStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            ProfoundStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(ProfoundStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fail> {
    let c = CString::new(s).map_err(|_| Fail(ProfoundStatus::InvalidInput, "string contains NUL".into()))?;
    put(out, c.into_raw(), "out")
}

/// Message describing the previous call on this thread if it failed, or null.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn profound_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn profound_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn profound_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// matrices

/// Matrix from `rows * cols` integers in row-major order.
///
/// # Safety
/// `entries` must point to `rows * cols` values (it may be null when that is 0);
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn profound_matrix_new(
    rows: usize,
    cols: usize,
    entries: *const i64,
    out: *mut *mut ProfoundMatrix,
) -> ProfoundStatus {
    guard(|| {
        let n = rows.checked_mul(cols).ok_or_else(|| Fail(ProfoundStatus::OutOfRange, "matrix too large".into()))?;
        let data = if n == 0 {
            &[][..]
        } else if entries.is_null() {
            return Err(null("entries"));
        } else {
            std::slice::from_raw_parts(entries, n)
        };
        let m = Matrix::from_ints(rows, cols, data)?;
        put(out, Box::into_raw(Box::new(ProfoundMatrix(m))), "out")
    })
}

/// Matrix from JSON rows; entries are integers or rational strings like `"-3/4"`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn profound_matrix_from_json(json: *const c_char, out: *mut *mut ProfoundMatrix) -> ProfoundStatus {
    guard(|| {
        let text = str_arg(json, "json")?;
        let m: Matrix = serde_json::from_str(text).map_err(|e| Fail(ProfoundStatus::Parse, e.to_string()))?;
        put(out, Box::into_raw(Box::new(ProfoundMatrix(m))), "out")
    })
}

/// # Safety
/// `m` must be a live matrix handle.
#[no_mangle]
pub unsafe extern "C" fn profound_matrix_rows(m: *const ProfoundMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.rows())
}

/// # Safety
/// `m` must be a live matrix handle.
#[no_mangle]
pub unsafe extern "C" fn profound_matrix_cols(m: *const ProfoundMatrix) -> usize {
    m.as_ref().map_or(0, |m| m.0.cols())
}

/// # Safety
/// `m` must be null or a matrix handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn profound_matrix_free(m: *mut ProfoundMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

// monodromy weight filtration

/// Weight filtration of the nilpotent matrix `n` centered at `center`.
///
/// # Safety
/// `n` must be a live matrix handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn profound_mwf_compute(
    n: *const ProfoundMatrix,
    center: i64,
    out: *mut *mut ProfoundFiltration,
) -> ProfoundStatus {
    guard(|| {
        let op = NilpotentEndo::new(handle(n, "n")?.0.clone(), center)?;
        let f = mwf::weight_filtration(&op);
        put(out, Box::into_raw(Box::new(ProfoundFiltration(f))), "out")
    })
}

/// Whether `f` satisfies the defining properties of the weight filtration of `n`.
///
/// # Safety
/// `n` and `f` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn profound_mwf_check(
    n: *const ProfoundMatrix,
    center: i64,
    f: *const ProfoundFiltration,
    out: *mut bool,
) -> ProfoundStatus {
    guard(|| {
        let op = NilpotentEndo::new(handle(n, "n")?.0.clone(), center)?;
        let ok = mwf::check_mwf_axioms(&op, &handle(f, "f")?.0)?;
        put(out, ok, "out")
    })
}

/// # Safety
/// `f` must be a live filtration handle.
#[no_mangle]
pub unsafe extern "C" fn profound_filtration_ambient_dim(f: *const ProfoundFiltration) -> usize {
    f.as_ref().map_or(0, |f| f.0.ambient_dim())
}

/// `dim F_j`.
///
/// # Safety
/// `f` must be a live filtration handle.
#[no_mangle]
pub unsafe extern "C" fn profound_filtration_step_dim(f: *const ProfoundFiltration, j: i64) -> usize {
    f.as_ref().map_or(0, |f| f.0.get(j).dim())
}

/// `dim F_j / F_{j-1}`.
///
/// # Safety
/// `f` must be a live filtration handle.
#[no_mangle]
pub unsafe extern "C" fn profound_filtration_graded_dim(f: *const ProfoundFiltration, j: i64) -> usize {
    f.as_ref().map_or(0, |f| f.0.graded_dim(j))
}

/// Steps and graded dimensions as JSON.
///
/// # Safety
/// `f` must be a live filtration handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn profound_filtration_to_json(f: *const ProfoundFiltration, out: *mut *mut c_char) -> ProfoundStatus {
    guard(|| {
        let s = serde_json::to_string(&handle(f, "f")?.0).expect("filtration serializes");
        put_string(out, s)
    })
}

/// # Safety
/// `f` must be null or a filtration handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn profound_filtration_free(f: *mut ProfoundFiltration) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

// twist words

/// Word from JSON: an array of `[[a,b],[c,d]]` matrices or `{"s":..,"t":..}` letters.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn profound_word_from_json(json: *const c_char, out: *mut *mut ProfoundWord) -> ProfoundStatus {
    guard(|| {
        let w = lefschetz::parse_word(str_arg(json, "json")?)?;
        put(out, Box::into_raw(Box::new(ProfoundWord(w))), "out")
    })
}

/// # Safety
/// `w` must be a live word handle.
#[no_mangle]
pub unsafe extern "C" fn profound_word_len(w: *const ProfoundWord) -> usize {
    w.as_ref().map_or(0, |w| w.0.len())
}

/// Total monodromy as `{a, b, c, d}`; `OutOfRange` if an entry exceeds 64 bits.
///
/// # Safety
/// `w` must be a live word handle; `out` must point to four writable values.
#[no_mangle]
pub unsafe extern "C" fn profound_word_product(w: *const ProfoundWord, out: *mut i64) -> ProfoundStatus {
    guard(|| {
        let m = lefschetz::total_monodromy(&handle(w, "w")?.0);
        if out.is_null() {
            return Err(null("out"));
        }
        for (i, x) in m.entries().into_iter().enumerate() {
            let v = i64::try_from(x).map_err(|_| Fail(ProfoundStatus::OutOfRange, format!("entry {x} exceeds 64 bits")))?;
            out.add(i).write(v);
        }
        Ok(())
    })
}

/// Hurwitz move on the letters at 0-based positions `i` and `i + 1`.
///
/// # Safety
/// `w` must be a live word handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn profound_word_hurwitz(
    w: *const ProfoundWord,
    i: usize,
    direction: ProfoundDirection,
    out: *mut *mut ProfoundWord,
) -> ProfoundStatus {
    guard(|| {
        let dir = match direction {
            ProfoundDirection::Right => Direction::Right,
            ProfoundDirection::Left => Direction::Left,
        };
        let moved = lefschetz::hurwitz_move(&handle(w, "w")?.0, i, dir)?;
        put(out, Box::into_raw(Box::new(ProfoundWord(moved))), "out")
    })
}

/// Extends `w` to a word with identity product and length divisible by 12.
///
/// # Safety
/// `w` must be a live word handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn profound_word_complete(w: *const ProfoundWord, out: *mut *mut ProfoundWord) -> ProfoundStatus {
    guard(|| {
        let full = lefschetz::complete_to_sphere(&handle(w, "w")?.0)?;
        put(out, Box::into_raw(Box::new(ProfoundWord(full))), "out")
    })
}

/// Eleven positive twists whose product is the inverse of the twist `{a, b, c, d}`.
///
/// # Safety
/// `m` must point to four values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn profound_word_invert_twist(m: *const i64, out: *mut *mut ProfoundWord) -> ProfoundStatus {
    guard(|| {
        if m.is_null() {
            return Err(null("m"));
        }
        let e = std::slice::from_raw_parts(m, 4);
        let t = lefschetz::SL2Matrix::from_i64(e[0], e[1], e[2], e[3])?;
        let w = lefschetz::factor_inverse_twist(&t)?;
        put(out, Box::into_raw(Box::new(ProfoundWord(w))), "out")
    })
}

/// # Safety
/// `w` must be a live word handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn profound_word_to_json(w: *const ProfoundWord, out: *mut *mut c_char) -> ProfoundStatus {
    guard(|| {
        let s = serde_json::to_string(handle(w, "w")?.0.letters()).expect("letters serialize");
        put_string(out, s)
    })
}

/// # Safety
/// `w` must be null or a word handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn profound_word_free(w: *mut ProfoundWord) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

// lattices and weight tables

/// Whether the perverse filtration of the elliptic K3 with fiber class `beta`
/// equals the filtration built from `N_{beta,rho}`. Vectors are expressions
/// like `"e2+f2"` over the K3 basis labels.
///
/// # Safety
/// `beta` and `rho` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn profound_k3_pw_check(beta: *const c_char, rho: *const c_char, out: *mut bool) -> ProfoundStatus {
    guard(|| {
        let l = BilinearLattice::k3();
        let b = l.parse_vector(str_arg(beta, "beta")?)?;
        let r = l.parse_vector(str_arg(rho, "rho")?)?;
        put(out, k3::k3_pw_check(&l, &b, &r)?, "out")
    })
}

/// `⟨x, y⟩` on the K3 lattice.
///
/// # Safety
/// `x` and `y` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn profound_k3_pair(x: *const c_char, y: *const c_char, out: *mut i64) -> ProfoundStatus {
    guard(|| {
        let l = BilinearLattice::k3();
        let v = l.pair(&l.parse_vector(str_arg(x, "x")?)?, &l.parse_vector(str_arg(y, "y")?)?)?;
        let n = i64::try_from(v.to_integer()).map_err(|_| Fail(ProfoundStatus::OutOfRange, "pairing exceeds 64 bits".into()))?;
        put(out, n, "out")
    })
}

/// Weight table of an snc fixture (JSON text, with cohomology) as
/// `[{"degree", "weight", "dim"}]`.
///
/// # Safety
/// `fixture_json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn profound_snc_weight_table_json(fixture_json: *const c_char, out: *mut *mut c_char) -> ProfoundStatus {
    guard(|| {
        let fixture: SncFixture =
            serde_json::from_str(str_arg(fixture_json, "fixture_json")?).map_err(|e| Fail(ProfoundStatus::Parse, e.to_string()))?;
        let (pair, coh) = fixture.pair_with_cohomology()?;
        let table = snc::weight_ss(&pair, &coh)?;
        put_string(out, serde_json::to_string(&table).expect("table serializes"))
    })
}

/// Runs the command line tool on `argc` arguments (without the program name)
/// and returns its JSON report and exit code.
///
/// # Safety
/// `argv` must point to `argc` NUL-terminated strings; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn profound_run(
    argc: c_int,
    argv: *const *const c_char,
    report_json: *mut *mut c_char,
    exit_code: *mut c_int,
) -> ProfoundStatus {
    guard(|| {
        let argc = usize::try_from(argc).map_err(|_| Fail(ProfoundStatus::OutOfRange, "negative argc".into()))?;
        if argc > 0 && argv.is_null() {
            return Err(null("argv"));
        }
        let mut args = vec!["profound".to_string()];
        for i in 0..argc {
            args.push(str_arg(*argv.add(i), "argv[i]")?.to_string());
        }
        let report = profound::cli::run(args);
        put(exit_code, report.exit_code, "exit_code")?;
        put_string(report_json, report.to_json())
    })
}
