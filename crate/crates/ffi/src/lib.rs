//! C interface to `obstruct`.
//!
//! Every function returns an [`ObstructStatus`]. On failure the message is
//! available from [`obstruct_last_error`] on the same thread. Strings
//! handed out by the library are freed with [`obstruct_string_free`];
//! handles with their own `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::sync::Arc;

use clap::Parser;
use obstruct::cli::{self, Cli, Output};
use obstruct::graded::{format_element, mul, GradedAlgebra, GradedAlgebraPresentation, PresentationSpec, Regular};
use obstruct::groupcohom::{cohomology_ring, cyclic_m3, CyclicGroup, CyclicM3};
use obstruct::hochschild::{coboundary_decide, DecideOptions, TupleWindow, Verdict};
use obstruct::Error;

#[repr(C)]
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum ObstructStatus {
    Ok = 0,
    Internal = 1,
    WindowOverflow = 2,
    InvalidInput = 3,
    NullPointer = 4,
    Panic = 5,
}

/// A finitely presented graded algebra.
pub struct ObstructAlgebra {
    inner: Arc<GradedAlgebraPresentation>,
}

/// The triple product of a cyclic group's cohomology ring.
pub struct ObstructTripleProduct {
    inner: CyclicM3,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> ObstructStatus {
    match cli::exit_code(e) {
        cli::EXIT_OVERFLOW => ObstructStatus::WindowOverflow,
        cli::EXIT_INVALID => ObstructStatus::InvalidInput,
        _ => ObstructStatus::Internal,
    }
}

enum Failure {
    Lib(Error),
    Status(ObstructStatus, String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ObstructStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ObstructStatus::Ok,
        Ok(Err(Failure::Lib(e))) => {
            set_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Failure::Status(s, msg))) => {
            set_error(msg);
            s
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("panic: {msg}"));
            ObstructStatus::Panic
        }
    }
}

fn null(name: &str) -> Failure {
    Failure::Status(ObstructStatus::NullPointer, format!("{name} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(name));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Status(ObstructStatus::InvalidInput, format!("{name} is not UTF-8")))
}

fn to_c(s: String) -> Result<*mut c_char, Failure> {
    CString::new(s)
        .map(CString::into_raw)
        .map_err(|_| Failure::Status(ObstructStatus::Internal, "interior NUL in output".into()))
}

fn window_ok(window: i64) -> Result<(), Failure> {
    if window > cli::MAX_SIZE {
        return Err(Error::overflow(window, 0, cli::MAX_SIZE).into());
    }
    Ok(())
}

fn group(order: u32) -> Result<CyclicGroup, Failure> {
    Ok(CyclicGroup::new(order)?)
}

/// Message of the last failed call on this thread, or NULL. The pointer
/// stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn obstruct_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn obstruct_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn obstruct_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds an algebra from a presentation JSON document.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn obstruct_algebra_from_json(json: *const c_char, out: *mut *mut ObstructAlgebra) -> ObstructStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let text = read_str(json, "json")?;
        let spec: PresentationSpec = serde_json::from_str(text).map_err(Error::from)?;
        let inner = Arc::new(GradedAlgebraPresentation::from_spec(&spec)?);
        *out = Box::into_raw(Box::new(ObstructAlgebra { inner }));
        Ok(())
    })
}

/// The mod-p cohomology ring of the cyclic group of the given prime
/// power order, materialised in degrees `[0, window]`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn obstruct_algebra_group_cohomology(
    order: u32,
    window: i64,
    out: *mut *mut ObstructAlgebra,
) -> ObstructStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        window_ok(window)?;
        let inner = Arc::new(cohomology_ring(group(order)?, window)?);
        *out = Box::into_raw(Box::new(ObstructAlgebra { inner }));
        Ok(())
    })
}

/// # Safety
/// `alg` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn obstruct_algebra_free(alg: *mut ObstructAlgebra) {
    if !alg.is_null() {
        drop(Box::from_raw(alg));
    }
}

/// Dimension of the algebra in degree `deg`.
///
/// # Safety
/// `alg` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn obstruct_algebra_dim(alg: *const ObstructAlgebra, deg: i64, out: *mut usize) -> ObstructStatus {
    guard(|| {
        let alg = alg.as_ref().ok_or_else(|| null("alg"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = alg.inner.dim(deg)?;
        Ok(())
    })
}

/// Normal form of the product of two homogeneous expressions, as a newly
/// allocated string.
///
/// # Safety
/// `alg` must be a live handle, `a` and `b` NUL-terminated strings and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn obstruct_algebra_multiply(
    alg: *const ObstructAlgebra,
    a: *const c_char,
    b: *const c_char,
    out: *mut *mut c_char,
) -> ObstructStatus {
    guard(|| {
        let alg = alg.as_ref().ok_or_else(|| null("alg"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let r = alg.inner.as_ref();
        let x = r.element(read_str(a, "a")?)?;
        let y = r.element(read_str(b, "b")?)?;
        let p = mul(r, &x, &y)?;
        *out = to_c(format_element(r.field(), |b| r.label(b), &p))?;
        Ok(())
    })
}

/// Transfers the product structure of the cyclic group's endomorphism
/// dg algebra to cohomology on `[0, window]`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn obstruct_triple_product_cyclic(
    order: u32,
    window: i64,
    out: *mut *mut ObstructTripleProduct,
) -> ObstructStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        window_ok(window)?;
        let inner = cyclic_m3(group(order)?, window, None)?;
        *out = Box::into_raw(Box::new(ObstructTripleProduct { inner }));
        Ok(())
    })
}

/// Decides whether the triple product class vanishes on tuples of total
/// degree at most `size`. Writes 1 for a nontrivial class, 0 otherwise.
///
/// # Safety
/// `tp` must be a live handle and `nontrivial` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn obstruct_triple_product_decide(
    tp: *const ObstructTripleProduct,
    size: i64,
    nontrivial: *mut i32,
) -> ObstructStatus {
    guard(|| {
        let tp = tp.as_ref().ok_or_else(|| null("tp"))?;
        if nontrivial.is_null() {
            return Err(null("nontrivial"));
        }
        window_ok(size)?;
        let c = &tp.inner;
        let v = coboundary_decide(
            &c.m3,
            c.ring.as_ref(),
            &Regular(c.ring.clone()),
            &TupleWindow::total(size),
            DecideOptions::default(),
        )?;
        *nontrivial = i32::from(v.verdict == Verdict::Nontrivial);
        Ok(())
    })
}

/// # Safety
/// `tp` must be NULL or a handle from this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn obstruct_triple_product_free(tp: *mut ObstructTripleProduct) {
    if !tp.is_null() {
        drop(Box::from_raw(tp));
    }
}

/// Runs a command-line invocation given as a JSON array of arguments
/// (without the program name), e.g. `["m3", "cyclic:3", "--window", "6"]`.
/// The result document is written to `out` as a newly allocated string.
///
/// # Safety
/// `args_json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn obstruct_run(args_json: *const c_char, out: *mut *mut c_char) -> ObstructStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let args: Vec<String> = serde_json::from_str(read_str(args_json, "args_json")?).map_err(Error::from)?;
        let cli = Cli::try_parse_from(std::iter::once("obstruct".to_string()).chain(args))
            .map_err(|e| Failure::Status(ObstructStatus::InvalidInput, e.to_string()))?;
        let text = match cli::run(&cli)? {
            Output::Json(v) => serde_json::to_string(&v).map_err(Error::from)?,
            Output::Text { text, .. } => text,
        };
        *out = to_c(text)?;
        Ok(())
    })
}
