//! C interface. Matrices are row-major `double` arrays with `-INFINITY` for ε;
//! indices and word letters are 0-based. Every function returns an [`MpStatus`];
//! on failure [`mp_last_error`] describes the cause.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use maxplus_csr::bounds::ambient_csr_bound;
use maxplus_csr::cli;
use maxplus_csr::csr::{csr_terms, rank_compress, verdict_from_terms};
use maxplus_csr::{Ensemble, Error, MaxPlus, MaxPlusMatrix, Word};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    DimensionMismatch = 3,
    Divergent = 4,
    PreconditionFailed = 5,
    InternalError = 6,
    Panic = 7,
}

/// Opaque max-plus matrix.
pub struct MpMatrix {
    inner: MaxPlusMatrix,
}

/// Opaque generator set with its critical structure.
pub struct MpEnsemble {
    inner: Ensemble,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> MpStatus {
    match e {
        Error::DimensionMismatch { .. } | Error::NotSquare { .. } | Error::SizeMismatch { .. } => {
            MpStatus::DimensionMismatch
        }
        Error::Divergent { .. } => MpStatus::Divergent,
        Error::Precondition(_) | Error::NonNegativeLambdaStar { .. } => MpStatus::PreconditionFailed,
        Error::Consistency(_) | Error::PeriodicityCap { .. } | Error::Json(_) | Error::Io(_) => {
            MpStatus::InternalError
        }
        _ => MpStatus::InvalidArgument,
    }
}

fn guard(f: impl FnOnce() -> Result<(), (MpStatus, String)>) -> MpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MpStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside maxplus_csr".into());
            MpStatus::Panic
        }
    }
}

fn lift<T>(r: maxplus_csr::Result<T>) -> Result<T, (MpStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(name: &str) -> (MpStatus, String) {
    (MpStatus::NullPointer, format!("{name} is null"))
}

unsafe fn borrow<'a, T>(p: *const T, name: &str) -> Result<&'a T, (MpStatus, String)> {
    p.as_ref().ok_or_else(|| null(name))
}

unsafe fn write<T>(out: *mut T, value: T, name: &str) -> Result<(), (MpStatus, String)> {
    if out.is_null() {
        return Err(null(name));
    }
    out.write(value);
    Ok(())
}

unsafe fn read_word(word: *const usize, len: usize) -> Result<Word, (MpStatus, String)> {
    if word.is_null() {
        return Err(null("word"));
    }
    let letters = std::slice::from_raw_parts(word, len).to_vec();
    lift(Word::new(letters))
}

fn boxed_matrix(m: MaxPlusMatrix) -> *mut MpMatrix {
    Box::into_raw(Box::new(MpMatrix { inner: m }))
}

/// Text of the last error on this thread. Valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn mp_status_message(status: MpStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        MpStatus::Ok => b"ok\0",
        MpStatus::NullPointer => b"null pointer argument\0",
        MpStatus::InvalidArgument => b"invalid argument\0",
        MpStatus::DimensionMismatch => b"dimension mismatch\0",
        MpStatus::Divergent => b"series diverges\0",
        MpStatus::PreconditionFailed => b"precondition failed\0",
        MpStatus::InternalError => b"internal consistency failure\0",
        MpStatus::Panic => b"panic\0",
    };
    s.as_ptr().cast()
}

/// Builds a `rows x cols` matrix from `rows * cols` row-major values.
///
/// # Safety
/// `data` must point to `rows * cols` readable doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mp_matrix_new(rows: usize, cols: usize, data: *const f64, out: *mut *mut MpMatrix) -> MpStatus {
    guard(|| {
        if data.is_null() {
            return Err(null("data"));
        }
        let len = rows.checked_mul(cols).ok_or((MpStatus::InvalidArgument, "size overflow".into()))?;
        let values = std::slice::from_raw_parts(data, len);
        let mut grid = Vec::with_capacity(rows);
        for (i, row) in values.chunks(cols.max(1)).take(rows).enumerate() {
            let mut r = Vec::with_capacity(cols);
            for (j, &x) in row.iter().enumerate() {
                r.push(MaxPlus::try_from_f64(x).map_err(|reason| {
                    (MpStatus::InvalidArgument, format!("entry ({i}, {j}): {reason}"))
                })?);
            }
            grid.push(r);
        }
        let m = lift(MaxPlusMatrix::from_rows(grid))?;
        write(out, boxed_matrix(m), "out")
    })
}

/// # Safety
/// `m` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mp_matrix_free(m: *mut MpMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mp_matrix_shape(m: *const MpMatrix, rows: *mut usize, cols: *mut usize) -> MpStatus {
    guard(|| {
        let m = borrow(m, "matrix")?;
        write(rows, m.inner.rows(), "rows")?;
        write(cols, m.inner.cols(), "cols")
    })
}

/// Entry `(i, j)`, `-INFINITY` for ε.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mp_matrix_get(m: *const MpMatrix, i: usize, j: usize, out: *mut f64) -> MpStatus {
    guard(|| {
        let m = borrow(m, "matrix")?;
        if i >= m.inner.rows() || j >= m.inner.cols() {
            return Err((MpStatus::InvalidArgument, format!("index ({i}, {j}) out of range")));
        }
        write(out, m.inner.get(i, j).to_f64(), "out")
    })
}

/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mp_matrix_multiply(a: *const MpMatrix, b: *const MpMatrix, out: *mut *mut MpMatrix) -> MpStatus {
    guard(|| {
        let a = borrow(a, "a")?;
        let b = borrow(b, "b")?;
        let m = lift(a.inner.multiply(&b.inner))?;
        write(out, boxed_matrix(m), "out")
    })
}

/// `a^k`, with `a^0` the identity.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mp_matrix_power(a: *const MpMatrix, k: usize, out: *mut *mut MpMatrix) -> MpStatus {
    guard(|| {
        let a = borrow(a, "a")?;
        let m = lift(a.inner.power(k))?;
        write(out, boxed_matrix(m), "out")
    })
}

/// Kleene star; fails with `DIVERGENT` when some cycle has positive weight.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mp_matrix_kleene_star(a: *const MpMatrix, out: *mut *mut MpMatrix) -> MpStatus {
    guard(|| {
        let a = borrow(a, "a")?;
        let m = lift(a.inner.kleene_star())?;
        write(out, boxed_matrix(m), "out")
    })
}

/// Builds an ensemble from `count` square matrices of equal size. The matrices are copied.
///
/// # Safety
/// `matrices` must point to `count` valid matrix pointers.
#[no_mangle]
pub unsafe extern "C" fn mp_ensemble_new(
    matrices: *const *const MpMatrix,
    count: usize,
    out: *mut *mut MpEnsemble,
) -> MpStatus {
    guard(|| {
        if matrices.is_null() {
            return Err(null("matrices"));
        }
        let mut gens = Vec::with_capacity(count);
        for &p in std::slice::from_raw_parts(matrices, count) {
            gens.push(borrow(p, "matrix")?.inner.clone());
        }
        let e = lift(Ensemble::build(gens))?;
        write(out, Box::into_raw(Box::new(MpEnsemble { inner: e })), "out")
    })
}

/// # Safety
/// `e` must come from this library and not be freed twice. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mp_ensemble_free(e: *mut MpEnsemble) {
    if !e.is_null() {
        drop(Box::from_raw(e));
    }
}

/// λ*, `-INFINITY` when no cycle avoids the critical nodes.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mp_ensemble_lambda_star(e: *const MpEnsemble, out: *mut f64) -> MpStatus {
    guard(|| {
        let e = borrow(e, "ensemble")?;
        write(out, e.inner.lambda_star.to_f64(), "out")
    })
}

/// Product of the visualised generators along `word`.
///
/// # Safety
/// `word` must point to `len` letters; other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mp_ensemble_gamma_product(
    e: *const MpEnsemble,
    word: *const usize,
    len: usize,
    out: *mut *mut MpMatrix,
) -> MpStatus {
    guard(|| {
        let e = borrow(e, "ensemble")?;
        let w = read_word(word, len)?;
        let m = lift(maxplus_csr::gamma_product(&e.inner, &w))?;
        write(out, boxed_matrix(m), "out")
    })
}

/// Whether the product equals its CSR product. On inequality the first differing
/// entry is written to `row`/`col`; otherwise both are set to `SIZE_MAX`.
///
/// # Safety
/// `word` must point to `len` letters; other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mp_ensemble_is_csr(
    e: *const MpEnsemble,
    word: *const usize,
    len: usize,
    holds: *mut bool,
    row: *mut usize,
    col: *mut usize,
) -> MpStatus {
    guard(|| {
        let e = borrow(e, "ensemble")?;
        let w = read_word(word, len)?;
        let v = lift(maxplus_csr::is_csr(&e.inner, &w))?;
        let (r, c) = v.witness.map_or((usize::MAX, usize::MAX), |w| (w.row, w.col));
        write(holds, v.holds, "holds")?;
        write(row, r, "row")?;
        write(col, c, "col")
    })
}

/// Explicit transient bound and the resulting minimal length.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mp_ensemble_ambient_bound(e: *const MpEnsemble, bound: *mut f64, k: *mut usize) -> MpStatus {
    guard(|| {
        let e = borrow(e, "ensemble")?;
        let r = lift(ambient_csr_bound(&e.inner))?;
        write(bound, r.ambient_bound, "bound")?;
        write(k, r.ambient_k, "k")
    })
}

/// Number of columns of the compressed CSR factor for `word`.
///
/// # Safety
/// `word` must point to `len` letters; other pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mp_ensemble_rank_bound(
    e: *const MpEnsemble,
    word: *const usize,
    len: usize,
    out: *mut usize,
) -> MpStatus {
    guard(|| {
        let e = borrow(e, "ensemble")?;
        let w = read_word(word, len)?;
        let terms = lift(csr_terms(&e.inner, &w))?;
        lift(verdict_from_terms(&terms))?;
        let f = lift(rank_compress(&terms))?;
        write(out, f.rank_bound, "out")
    })
}

/// Analysis report as a JSON string; release it with [`mp_string_free`].
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn mp_ensemble_analyze_json(e: *const MpEnsemble, out: *mut *mut c_char) -> MpStatus {
    guard(|| {
        let e = borrow(e, "ensemble")?;
        let v = lift(cli::analysis(&e.inner))?;
        let text = v.to_string();
        let c = CString::new(text).map_err(|_| (MpStatus::InternalError, "report contains NUL".into()))?;
        write(out, c.into_raw(), "out")
    })
}

/// # Safety
/// `s` must come from this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
