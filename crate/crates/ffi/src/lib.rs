//! C ABI over poskit.
//!
//! Every function returns a `PoskitStatus`; results go through out-pointers.
//! Matrices are opaque `PoskitMatrix` handles freed with `poskit_matrix_free`.
//! Strings handed out are freed with `poskit_string_free`. After a nonzero
//! status, `poskit_last_error` gives a message for the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use poskit::exactmat::{self, RatMatrix};
use poskit::flags::{self, Flag, FlagTriple};
use poskit::liealg::LieAlgebraSpec;
use poskit::siegel::{self, Tolerance, C64};
use poskit::symplectic::{self, Lagrangian};
use poskit::thetapos::{self, ThetaChoice};
use poskit::{totpos, Error};

/// Status codes. Zero is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PoskitStatus {
    Ok = 0,
    NullPointer = 1,
    Shape = 2,
    Domain = 3,
    Precondition = 4,
    Singular = 5,
    Parse = 6,
    InvalidUtf8 = 7,
    Panic = 8,
}

/// Family selector for Lie algebra calls.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PoskitFamily {
    /// sl(n)
    Sl = 0,
    /// sp(2n)
    Sp = 1,
    /// so(p,q)
    So = 2,
}

/// Opaque exact rational matrix.
pub struct PoskitMatrix {
    inner: RatMatrix,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PoskitStatus {
    match e {
        Error::Shape(_) => PoskitStatus::Shape,
        Error::Domain(_) => PoskitStatus::Domain,
        Error::Precondition(_) => PoskitStatus::Precondition,
        Error::Singular => PoskitStatus::Singular,
        Error::Parse(_) => PoskitStatus::Parse,
    }
}

struct Fail(PoskitStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(PoskitStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> PoskitStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            PoskitStatus::Ok
        }
        Ok(Err(Fail(s, m))) => {
            set_error(&m);
            s
        }
        Err(_) => {
            set_error("internal panic");
            PoskitStatus::Panic
        }
    }
}

unsafe fn mat<'a>(m: *const PoskitMatrix, what: &str) -> Result<&'a RatMatrix, Fail> {
    m.as_ref().map(|h| &h.inner).ok_or_else(|| null(what))
}

unsafe fn out<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or_else(|| null(what))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s).to_str().map_err(|_| Fail(PoskitStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn give_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).unwrap_or_default().into_raw()
}

fn give_matrix(m: RatMatrix) -> *mut PoskitMatrix {
    Box::into_raw(Box::new(PoskitMatrix { inner: m }))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

/// Message for the last failed call on this thread, or null. Owned by the library.
#[no_mangle]
pub extern "C" fn poskit_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn poskit_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// # Safety
/// `s` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn poskit_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

// ---------- matrices ----------

/// Builds a matrix from row-major integer numerators over a common denominator.
///
/// # Safety
/// `num` must point to `rows * cols` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn poskit_matrix_from_i64(
    rows: usize,
    cols: usize,
    num: *const i64,
    den: i64,
    out_m: *mut *mut PoskitMatrix,
) -> PoskitStatus {
    guard(|| {
        let o = out(out_m, "out")?;
        if den == 0 {
            return Err(Fail(PoskitStatus::Domain, "zero denominator".into()));
        }
        let data = slice(num, rows * cols, "num")?;
        let m = RatMatrix::from_vec(rows, cols, data.iter().map(|&x| exactmat::qf(x, den)).collect())?;
        *o = give_matrix(m);
        Ok(())
    })
}

/// Parses a JSON array of rows; entries are integers or strings like "3/2".
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn poskit_matrix_from_json(json: *const c_char, out_m: *mut *mut PoskitMatrix) -> PoskitStatus {
    guard(|| {
        let o = out(out_m, "out")?;
        let text = read_str(json, "json")?;
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| Fail(PoskitStatus::Parse, format!("malformed JSON: {e}")))?;
        *o = give_matrix(exactmat::matrix_from_json(&v)?);
        Ok(())
    })
}

/// # Safety
/// `m` must come from this library or be null.
#[no_mangle]
pub unsafe extern "C" fn poskit_matrix_free(m: *mut PoskitMatrix) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// # Safety
/// Handles and out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn poskit_matrix_shape(m: *const PoskitMatrix, rows: *mut usize, cols: *mut usize) -> PoskitStatus {
    guard(|| {
        let a = mat(m, "m")?;
        *out(rows, "rows")? = a.rows();
        *out(cols, "cols")? = a.cols();
        Ok(())
    })
}

/// Entry (i, j) as a string like "-3/2". Free with `poskit_string_free`.
///
/// # Safety
/// Handles and out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn poskit_matrix_entry(m: *const PoskitMatrix, i: usize, j: usize, out_s: *mut *mut c_char) -> PoskitStatus {
    guard(|| {
        let a = mat(m, "m")?;
        let o = out(out_s, "out")?;
        if i >= a.rows() || j >= a.cols() {
            return Err(Fail(PoskitStatus::Shape, format!("index ({i},{j}) out of range")));
        }
        *o = give_string(exactmat::fmt_rational(&a[(i, j)]));
        Ok(())
    })
}

/// The matrix as JSON rows of strings. Free with `poskit_string_free`.
///
/// # Safety
/// Handles and out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn poskit_matrix_to_json(m: *const PoskitMatrix, out_s: *mut *mut c_char) -> PoskitStatus {
    guard(|| {
        let a = mat(m, "m")?;
        *out(out_s, "out")? = give_string(exactmat::matrix_to_json(a).to_string());
        Ok(())
    })
}

/// # Safety
/// Handles and out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn poskit_matrix_mul(a: *const PoskitMatrix, b: *const PoskitMatrix, out_m: *mut *mut PoskitMatrix) -> PoskitStatus {
    guard(|| {
        let p = mat(a, "a")?.matmul(mat(b, "b")?)?;
        *out(out_m, "out")? = give_matrix(p);
        Ok(())
    })
}

/// Exact determinant as a string.
///
/// # Safety
/// Handles and out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn poskit_det(m: *const PoskitMatrix, out_s: *mut *mut c_char) -> PoskitStatus {
    guard(|| {
        let d = exactmat::det(mat(m, "m")?)?;
        *out(out_s, "out")? = give_string(exactmat::fmt_rational(&d));
        Ok(())
    })
}

/// k-th compound matrix, rows and columns in lexicographic order.
///
/// # Safety
/// Handles and out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn poskit_compound(m: *const PoskitMatrix, k: usize, out_m: *mut *mut PoskitMatrix) -> PoskitStatus {
    guard(|| {
        let c = exactmat::compound(mat(m, "m")?, k)?;
        *out(out_m, "out")? = give_matrix(c);
        Ok(())
    })
}

// ---------- total positivity ----------

/// # Safety
/// Handles and out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn poskit_is_totally_positive(m: *const PoskitMatrix, result: *mut bool) -> PoskitStatus {
    guard(|| {
        *out(result, "result")? = totpos::is_totally_positive(mat(m, "m")?);
        Ok(())
    })
}

/// Positivity in the unipotent upper triangular sense; the input must be upper unitriangular.
///
/// # Safety
/// Handles and out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn poskit_is_u_positive(m: *const PoskitMatrix, result: *mut bool) -> PoskitStatus {
    guard(|| {
        *out(result, "result")? = totpos::is_u_positive(mat(m, "m")?)?;
        Ok(())
    })
}

/// Distinct positive simple spectrum check at tolerance `tol`.
///
/// # Safety
/// Handles and out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn poskit_spectrum_check(m: *const PoskitMatrix, tol: f64, result: *mut bool) -> PoskitStatus {
    guard(|| {
        let a = mat(m, "m")?;
        Tolerance::new(tol)?;
        *out(result, "result")? = totpos::gk_spectrum_check(a, tol);
        Ok(())
    })
}

/// m = L D U with L lower unitriangular, D positive diagonal, U upper unitriangular.
///
/// # Safety
/// Handles and out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn poskit_whitney(
    m: *const PoskitMatrix,
    lower: *mut *mut PoskitMatrix,
    diag: *mut *mut PoskitMatrix,
    upper: *mut *mut PoskitMatrix,
) -> PoskitStatus {
    guard(|| {
        let a = mat(m, "m")?;
        let (l, d, u) = (out(lower, "lower")?, out(diag, "diag")?, out(upper, "upper")?);
        let f = totpos::whitney_factorize(a)?;
        *l = give_matrix(f.lower);
        *d = give_matrix(f.diag);
        *u = give_matrix(f.upper);
        Ok(())
    })
}

/// Product of elementary factors along a reduced word (1-based letters),
/// parameter k being num[k]/den[k].
///
/// # Safety
/// `letters`, `num` and `den` each have `len` entries; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn poskit_param_word(
    n: usize,
    letters: *const usize,
    num: *const i64,
    den: *const i64,
    len: usize,
    out_m: *mut *mut PoskitMatrix,
) -> PoskitStatus {
    guard(|| {
        let o = out(out_m, "out")?;
        let w = totpos::ReducedWord::new(slice(letters, len, "letters")?.to_vec(), n)?;
        let (nu, de) = (slice(num, len, "num")?, slice(den, len, "den")?);
        if de.contains(&0) {
            return Err(Fail(PoskitStatus::Domain, "zero denominator".into()));
        }
        let params: Vec<_> = nu.iter().zip(de).map(|(&a, &b)| exactmat::qf(a, b)).collect();
        *o = give_matrix(totpos::param_f(&w, &params)?);
        Ok(())
    })
}

// ---------- flags ----------

unsafe fn flag(m: *const PoskitMatrix, what: &str) -> Result<Flag, Fail> {
    Ok(Flag::new(mat(m, what)?.clone())?)
}

/// Triple ratio T_{a,b,c} of three flags given by basis matrices (columns span the flag).
///
/// # Safety
/// Handles and out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn poskit_triple_ratio(
    first: *const PoskitMatrix,
    second: *const PoskitMatrix,
    third: *const PoskitMatrix,
    a: usize,
    b: usize,
    c: usize,
    out_s: *mut *mut c_char,
) -> PoskitStatus {
    guard(|| {
        let o = out(out_s, "out")?;
        let r = flags::triple_ratio(&flag(first, "first")?, &flag(second, "second")?, &flag(third, "third")?, a, b, c)?;
        *o = give_string(exactmat::fmt_rational(&r));
        Ok(())
    })
}

/// Positivity of a flag triple: `method` 0 uses triple ratios, 1 uses the unipotent criterion.
///
/// # Safety
/// Handles and out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn poskit_flags_positive(
    first: *const PoskitMatrix,
    second: *const PoskitMatrix,
    third: *const PoskitMatrix,
    method: u32,
    result: *mut bool,
) -> PoskitStatus {
    guard(|| {
        let o = out(result, "result")?;
        let t = FlagTriple::new(flag(first, "first")?, flag(second, "second")?, flag(third, "third")?)?;
        *o = match method {
            0 => flags::is_bd_positive(&t),
            1 => flags::is_gw_positive(&t),
            _ => return Err(Fail(PoskitStatus::Domain, format!("unknown method {method}"))),
        };
        Ok(())
    })
}

// ---------- Maslov ----------

unsafe fn lagrangian(m: *const PoskitMatrix, what: &str) -> Result<Lagrangian, Fail> {
    Ok(Lagrangian::new(mat(m, what)?.clone())?)
}

/// Maslov index of three Lagrangians, each a 2n x n basis matrix.
///
/// # Safety
/// Handles and out-pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn poskit_maslov_index(
    l1: *const PoskitMatrix,
    l2: *const PoskitMatrix,
    l3: *const PoskitMatrix,
    result: *mut i64,
) -> PoskitStatus {
    guard(|| {
        let o = out(result, "result")?;
        *o = symplectic::maslov_index(&lagrangian(l1, "l1")?, &lagrangian(l2, "l2")?, &lagrangian(l3, "l3")?)?;
        Ok(())
    })
}

// ---------- Lie algebras ----------

fn spec(family: PoskitFamily, n: usize, p: usize, q: usize) -> Result<LieAlgebraSpec, Fail> {
    Ok(match family {
        PoskitFamily::Sl => LieAlgebraSpec::sl(n)?,
        PoskitFamily::Sp => LieAlgebraSpec::sp(n)?,
        PoskitFamily::So => LieAlgebraSpec::so(p, q)?,
    })
}

/// Restricted root data as JSON: Dynkin type, rank, and roots with multiplicities.
///
/// # Safety
/// `out_s` must be writable.
#[no_mangle]
pub unsafe extern "C" fn poskit_restricted_roots(family: PoskitFamily, n: usize, p: usize, q: usize, out_s: *mut *mut c_char) -> PoskitStatus {
    guard(|| {
        let o = out(out_s, "out")?;
        let s = spec(family, n, p, q)?;
        let dec = s.restricted_roots();
        let roots: Vec<_> = dec
            .roots
            .iter()
            .map(|r| serde_json::json!({"root": r.label(), "multiplicity": r.multiplicity}))
            .collect();
        let v = serde_json::json!({"family": s.family.to_string(), "dynkin": dec.dynkin, "rank": s.rank(), "split": s.is_split(), "roots": roots});
        *o = give_string(v.to_string());
        Ok(())
    })
}

/// Whether the algebra admits a positive structure for the 1-based simple-root subset `theta`.
///
/// # Safety
/// `theta` has `len` entries; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn poskit_theta_check(
    family: PoskitFamily,
    n: usize,
    p: usize,
    q: usize,
    theta: *const usize,
    len: usize,
    result: *mut bool,
) -> PoskitStatus {
    guard(|| {
        let o = out(result, "result")?;
        let s = spec(family, n, p, q)?;
        let th = ThetaChoice::new(slice(theta, len, "theta")?.to_vec(), s.rank())?;
        *o = thetapos::admits_theta_positive(&s, &th)?.admits;
        Ok(())
    })
}

// ---------- Siegel ----------

unsafe fn complex_square(re: *const f64, im: *const f64, n: usize) -> Result<siegel::CMatrix, Fail> {
    let (r, i) = (slice(re, n * n, "re")?, slice(im, n * n, "im")?);
    Ok(siegel::CMatrix::from_fn(n, n, |a, b| C64::new(r[a * n + b], i[a * n + b])))
}

/// g(Z) = (AZ + B)(CZ + D)^-1 for real symplectic g (2n x 2n, row-major) and Z in the upper half-space.
///
/// # Safety
/// `g` has 4n^2 entries; `z_re`, `z_im`, `out_re`, `out_im` have n^2.
#[no_mangle]
pub unsafe extern "C" fn poskit_siegel_act(
    n: usize,
    g: *const f64,
    z_re: *const f64,
    z_im: *const f64,
    eps: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> PoskitStatus {
    guard(|| {
        let tol = Tolerance::new(eps)?;
        let gs = slice(g, 4 * n * n, "g")?;
        let gm = siegel::RMatrix::from_fn(2 * n, 2 * n, |a, b| gs[a * 2 * n + b]);
        let z = complex_square(z_re, z_im, n)?;
        if out_re.is_null() || out_im.is_null() {
            return Err(null("out"));
        }
        let w = siegel::mobius(&gm, &z, tol)?;
        let (or, oi) = (std::slice::from_raw_parts_mut(out_re, n * n), std::slice::from_raw_parts_mut(out_im, n * n));
        for a in 0..n {
            for b in 0..n {
                or[a * n + b] = w[(a, b)].re;
                oi[a * n + b] = w[(a, b)].im;
            }
        }
        Ok(())
    })
}

/// Stratum of W in the closed bounded domain: -1 outside, 0 Shilov boundary,
/// r in 1..n-1 boundary of that rank, n interior.
///
/// # Safety
/// `w_re`, `w_im` have n^2 entries; `result` must be writable.
#[no_mangle]
pub unsafe extern "C" fn poskit_siegel_classify(n: usize, w_re: *const f64, w_im: *const f64, eps: f64, result: *mut i64) -> PoskitStatus {
    guard(|| {
        let o = out(result, "result")?;
        let tol = Tolerance::new(eps)?;
        let w = complex_square(w_re, w_im, n)?;
        *o = match siegel::classify(&w, tol)? {
            siegel::Stratum::Outside => -1,
            siegel::Stratum::Shilov => 0,
            siegel::Stratum::Boundary { rank } => rank as i64,
            siegel::Stratum::Interior => n as i64,
        };
        Ok(())
    })
}

// ---------- acceptance ----------

/// Runs the acceptance criteria; `only` may be null, a criterion id, name or group.
/// Writes the JSON results and whether every selected criterion passed.
///
/// # Safety
/// `only` is null or NUL-terminated; out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn poskit_accept(seed: u64, only: *const c_char, eps: f64, all_passed: *mut bool, out_s: *mut *mut c_char) -> PoskitStatus {
    guard(|| {
        let (o, p) = (out(out_s, "out")?, out(all_passed, "all_passed")?);
        let tol = Tolerance::new(eps)?;
        let sel = if only.is_null() { None } else { Some(read_str(only, "only")?) };
        if let Some(s) = sel {
            if !poskit::cli::accept::is_known_selector(s) {
                return Err(Fail(PoskitStatus::Domain, format!("unknown criterion selector {s}")));
            }
        }
        let res = poskit::cli::accept::acceptance_suite(seed, sel, tol);
        *p = res.iter().all(|c| c.passed);
        *o = give_string(serde_json::Value::Array(res.iter().map(|c| c.to_json()).collect()).to_string());
        Ok(())
    })
}
