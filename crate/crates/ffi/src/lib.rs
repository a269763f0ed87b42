//! C interface to bellgap.
//!
//! Functionals are opaque `BgFunctional` handles created by the constructor
//! functions and released with `bg_functional_free`. Every fallible call
//! returns a `BgStatus`; on failure `bg_last_error` describes the cause for
//! the calling thread. Strings returned by the library are released with
//! `bg_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use bellgap::games::{self, KvParams, Recipe};
use bellgap::io::{load_game, save_game, GameFile};
use bellgap::quantum::{constructed_strategy, correlation_seesaw};
use bellgap::solvers::{self, QuantumOptions, SolverOptions, ValueClass};
use bellgap::{BellFunctional, Error};

/// Opaque handle to a Bell functional or game.
pub struct BgFunctional {
    functional: BellFunctional,
    recipe: Option<Recipe>,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BgStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Unsupported = 3,
    Budget = 4,
    Io = 5,
    Format = 6,
    Internal = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BgClass {
    Local = 0,
    BilocalGeneral = 1,
    BilocalNs = 2,
    Ns = 3,
    QuantumLower = 4,
    LocalCor = 5,
    BilocalCor = 6,
    NsCor = 7,
}

impl From<BgClass> for ValueClass {
    fn from(c: BgClass) -> Self {
        match c {
            BgClass::Local => ValueClass::Local,
            BgClass::BilocalGeneral => ValueClass::BilocalGeneral,
            BgClass::BilocalNs => ValueClass::BilocalNs,
            BgClass::Ns => ValueClass::Ns,
            BgClass::QuantumLower => ValueClass::QuantumLower,
            BgClass::LocalCor => ValueClass::LocalCor,
            BgClass::BilocalCor => ValueClass::BilocalCor,
            BgClass::NsCor => ValueClass::NsCor,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(BgStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match &e {
            Error::Budget { .. } => BgStatus::Budget,
            Error::Unsupported(_) => BgStatus::Unsupported,
            Error::Io(_) => BgStatus::Io,
            Error::Format(_) | Error::Json(_) => BgStatus::Format,
            Error::Internal(_) | Error::Lp(_) => BgStatus::Internal,
            Error::Dimension(_) | Error::Domain(_) | Error::Validation(_) => BgStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(BgStatus::NullPointer, format!("{what} is null"))
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> BgStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => BgStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            BgStatus::Panic
        }
    }
}

unsafe fn handle<'a>(f: *const BgFunctional) -> Result<&'a BgFunctional, Failure> {
    f.as_ref().ok_or_else(|| null("functional handle"))
}

unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| Failure(BgStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn emit(out: *mut *mut BgFunctional, functional: BellFunctional, recipe: Option<Recipe>) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(BgFunctional { functional, recipe }));
    Ok(())
}

/// Message of the last failed call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn bg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_chsh_game(out: *mut *mut BgFunctional) -> BgStatus {
    guard(|| emit(out, games::chsh_game(), Some(Recipe::Chsh)))
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_chsh_correlation(out: *mut *mut BgFunctional) -> BgStatus {
    guard(|| emit(out, games::chsh_correlation_functional(), Some(Recipe::ChshCor)))
}

/// Khot-Vishnoi game with `2^l` answers. A NaN `eta` selects `1/2 - 1/l`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_kv_game(l: u32, eta: f64, out: *mut *mut BgFunctional) -> BgStatus {
    guard(|| {
        let p = if eta.is_nan() {
            KvParams::new(l)?
        } else {
            KvParams::with_eta(l, eta)?
        };
        let r = Recipe::Kv { l, eta: p.eta() };
        emit(out, r.build()?, Some(r))
    })
}

/// Tripartite Hadamard correlation functional with `n` inputs per party.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_hadamard_correlation(n: usize, out: *mut *mut BgFunctional) -> BgStatus {
    guard(|| {
        let r = Recipe::HadamardCor { n };
        emit(out, r.build()?, Some(r))
    })
}

/// # Safety
/// Handles must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_tensor(
    left: *const BgFunctional,
    right: *const BgFunctional,
    out: *mut *mut BgFunctional,
) -> BgStatus {
    guard(|| {
        let (l, r) = (handle(left)?, handle(right)?);
        let recipe = l.recipe.clone().zip(r.recipe.clone()).map(|(a, b)| Recipe::Tensor {
            left: Box::new(a),
            right: Box::new(b),
        });
        emit(out, games::tensor_product(&l.functional, &r.functional)?, recipe)
    })
}

/// # Safety
/// `base` must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_hat(base: *const BgFunctional, out: *mut *mut BgFunctional) -> BgStatus {
    guard(|| {
        let b = handle(base)?;
        let recipe = b.recipe.clone().map(|r| Recipe::Hat { base: Box::new(r) });
        emit(out, games::hat_construction(&b.functional)?, recipe)
    })
}

/// # Safety
/// `base` must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_tilde(base: *const BgFunctional, out: *mut *mut BgFunctional) -> BgStatus {
    guard(|| {
        let b = handle(base)?;
        let recipe = b.recipe.clone().map(|r| Recipe::Tilde { base: Box::new(r) });
        emit(out, games::tilde_construction(&b.functional)?, recipe)
    })
}

/// # Safety
/// `path` must be a NUL-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_functional_load(path: *const c_char, out: *mut *mut BgFunctional) -> BgStatus {
    guard(|| {
        let (f, recipe) = load_game(Path::new(text(path, "path")?))?;
        emit(out, f, recipe)
    })
}

/// # Safety
/// `f` must be live; `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn bg_functional_save(f: *const BgFunctional, path: *const c_char) -> BgStatus {
    guard(|| {
        let h = handle(f)?;
        save_game(Path::new(text(path, "path")?), &h.functional, h.recipe.as_ref())?;
        Ok(())
    })
}

/// Game-file JSON; release with `bg_string_free`.
///
/// # Safety
/// `f` must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_functional_to_json(f: *const BgFunctional, out: *mut *mut c_char) -> BgStatus {
    guard(|| {
        let h = handle(f)?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let json = GameFile::from_functional(&h.functional, h.recipe.as_ref())?.to_json()?;
        *out = CString::new(json).expect("JSON has no nul bytes").into_raw();
        Ok(())
    })
}

/// Number of parties, or 0 for a null handle.
///
/// # Safety
/// `f` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn bg_functional_parties(f: *const BgFunctional) -> usize {
    f.as_ref().map_or(0, |h| h.functional.parties())
}

/// Number of dense coefficients, or 0 for a null handle.
///
/// # Safety
/// `f` must be null or live.
#[no_mangle]
pub unsafe extern "C" fn bg_functional_len(f: *const BgFunctional) -> usize {
    f.as_ref().map_or(0, |h| h.functional.coeffs().len())
}

/// Copies the dense coefficients into `buf`, which holds `len` doubles.
///
/// # Safety
/// `f` must be live; `buf` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn bg_functional_coeffs(f: *const BgFunctional, buf: *mut f64, len: usize) -> BgStatus {
    guard(|| {
        let c = handle(f)?.functional.coeffs();
        if buf.is_null() {
            return Err(null("buffer"));
        }
        if len < c.len() {
            return Err(Failure(
                BgStatus::InvalidArgument,
                format!("buffer holds {len} values, {} needed", c.len()),
            ));
        }
        ptr::copy_nonoverlapping(c.as_ptr(), buf, c.len());
        Ok(())
    })
}

/// Value over `class`. `budget` 0 selects the default budget. Quantum lower
/// bounds use the constructed strategy of games built here, and see-saw
/// with qubits and `seeds` starts for correlation functionals.
///
/// # Safety
/// `f` must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn bg_value(
    f: *const BgFunctional,
    class: BgClass,
    budget: u64,
    seeds: u64,
    out: *mut f64,
) -> BgStatus {
    guard(|| {
        let h = handle(f)?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let opts = if budget == 0 {
            SolverOptions::default()
        } else {
            SolverOptions::with_budget(budget)
        };
        let class = ValueClass::from(class);
        let strategy = match (&h.recipe, class, h.functional.is_correlation()) {
            (Some(r), ValueClass::QuantumLower, false) => Some(constructed_strategy(r)?),
            _ => None,
        };
        let qopts = QuantumOptions {
            dims: None,
            seeds: seeds.max(1),
            strategy,
        };
        *out = solvers::value(&h.functional, class, &opts, &qopts)?.value;
        Ok(())
    })
}

/// See-saw lower bound for a correlation functional at the given local dimensions.
///
/// # Safety
/// `f` must be live; `dims` must be valid for `ndims` reads; `out` for a write.
#[no_mangle]
pub unsafe extern "C" fn bg_seesaw(
    f: *const BgFunctional,
    dims: *const usize,
    ndims: usize,
    seeds: u64,
    out: *mut f64,
) -> BgStatus {
    guard(|| {
        let h = handle(f)?;
        if dims.is_null() || out.is_null() {
            return Err(null("dimension or output pointer"));
        }
        let d = std::slice::from_raw_parts(dims, ndims);
        *out = correlation_seesaw(&h.functional, d, seeds)?.value;
        Ok(())
    })
}

/// # Safety
/// `f` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bg_functional_free(f: *mut BgFunctional) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn bg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
