//! C ABI for the scoring engine. Handles are opaque; every call returns a
//! `PmcStatus` and writes results through out-pointers. Strings returned by
//! the library are heap-allocated copies released with `pmc_string_free`.
//! On any non-Ok status, `pmc_last_error_message` describes the failure for
//! the current thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use pmckit::engine::{evaluate_all, IntensityLevel, PmcResult};
use pmckit::report::results_to_csv;
use pmckit::schema::{builtin_schema, load_schema, IndicatorSchema};
use pmckit::scoring::{load_scorecards, Scorecard};
use pmckit::{Error, ErrorClass};

/// Result of every API call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PmcStatus {
    /// The call succeeded.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 2,
    /// Input failed validation (bad path, malformed file, unknown id).
    Validation = 3,
    /// Computation failed on valid input.
    Computation = 4,
    /// An index argument was out of range.
    OutOfBounds = 5,
    /// The library caught an internal panic.
    Panic = 6,
}

/// Intensity bracket of one document.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PmcLevel {
    Low = 0,
    Acceptable = 1,
    Good = 2,
    Perfect = 3,
}

impl From<IntensityLevel> for PmcLevel {
    fn from(level: IntensityLevel) -> Self {
        match level {
            IntensityLevel::Low => PmcLevel::Low,
            IntensityLevel::Acceptable => PmcLevel::Acceptable,
            IntensityLevel::Good => PmcLevel::Good,
            IntensityLevel::Perfect => PmcLevel::Perfect,
        }
    }
}

/// Opaque indicator schema handle.
pub struct PmcSchema {
    inner: IndicatorSchema,
}

/// Opaque scorecard collection handle.
pub struct PmcScorecards {
    inner: Vec<Scorecard>,
}

/// Opaque result collection handle.
pub struct PmcResults {
    inner: Vec<PmcResult>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(err: &Error) -> PmcStatus {
    match err.class() {
        ErrorClass::Validation => PmcStatus::Validation,
        ErrorClass::Computation => PmcStatus::Computation,
    }
}

fn fail(status: PmcStatus, message: String) -> PmcStatus {
    set_error(message);
    status
}

/// Run a body with panic containment; the body returns a status.
fn guarded(body: impl FnOnce() -> PmcStatus) -> PmcStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(payload) => {
            let text = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            fail(PmcStatus::Panic, format!("internal panic: {text}"))
        }
    }
}

/// # Safety
/// `ptr` must be null or a valid NUL-terminated string.
unsafe fn str_arg<'a>(ptr: *const c_char, name: &str) -> Result<&'a str, PmcStatus> {
    if ptr.is_null() {
        return Err(fail(PmcStatus::NullArgument, format!("{name} is null")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| fail(PmcStatus::InvalidUtf8, format!("{name} is not valid UTF-8")))
}

unsafe fn write_out<T>(out: *mut T, value: T, name: &str) -> PmcStatus {
    if out.is_null() {
        return fail(PmcStatus::NullArgument, format!("{name} is null"));
    }
    out.write(value);
    PmcStatus::Ok
}

unsafe fn ref_arg<'a, T>(ptr: *const T, name: &str) -> Result<&'a T, PmcStatus> {
    if ptr.is_null() {
        Err(fail(PmcStatus::NullArgument, format!("{name} is null")))
    } else {
        Ok(&*ptr)
    }
}

fn c_string(s: &str) -> *mut c_char {
    // Interior NULs cannot appear in our identifiers; replace defensively.
    CString::new(s)
        .unwrap_or_else(|_| CString::new(s.replace('\0', " ")).unwrap())
        .into_raw()
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn pmc_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Message for the most recent failure on this thread, or null if none.
/// The returned string is a copy; release it with `pmc_string_free`.
#[no_mangle]
pub extern "C" fn pmc_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(c) => c_string(c.to_str().unwrap_or("invalid error text")),
        None => std::ptr::null_mut(),
    })
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `ptr` must have been returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn pmc_string_free(ptr: *mut c_char) {
    if !ptr.is_null() {
        drop(CString::from_raw(ptr));
    }
}

/// Load the built-in indicator schema.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pmc_schema_builtin(out: *mut *mut PmcSchema) -> PmcStatus {
    guarded(|| {
        let handle = Box::new(PmcSchema {
            inner: builtin_schema(),
        });
        write_out(out, Box::into_raw(handle), "out")
    })
}

/// Load an indicator schema from a TOML file.
///
/// # Safety
/// `path` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn pmc_schema_load(
    path: *const c_char,
    out: *mut *mut PmcSchema,
) -> PmcStatus {
    guarded(|| {
        let path = match str_arg(path, "path") {
            Ok(p) => p,
            Err(status) => return status,
        };
        match load_schema(Path::new(path)) {
            Ok(inner) => write_out(out, Box::into_raw(Box::new(PmcSchema { inner })), "out"),
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// Release a schema handle. Null is ignored.
///
/// # Safety
/// `schema` must be null or an unreleased handle from this library.
#[no_mangle]
pub unsafe extern "C" fn pmc_schema_free(schema: *mut PmcSchema) {
    if !schema.is_null() {
        drop(Box::from_raw(schema));
    }
}

/// Number of main variables in the schema.
///
/// # Safety
/// Pointer arguments must be valid.
#[no_mangle]
pub unsafe extern "C" fn pmc_schema_main_count(
    schema: *const PmcSchema,
    out: *mut usize,
) -> PmcStatus {
    guarded(|| {
        let schema = match ref_arg(schema, "schema") {
            Ok(s) => s,
            Err(status) => return status,
        };
        write_out(out, schema.inner.main_variables.len(), "out")
    })
}

/// Identifier of the main variable at `index`; release with `pmc_string_free`.
///
/// # Safety
/// Pointer arguments must be valid.
#[no_mangle]
pub unsafe extern "C" fn pmc_schema_main_id(
    schema: *const PmcSchema,
    index: usize,
    out: *mut *mut c_char,
) -> PmcStatus {
    guarded(|| {
        let schema = match ref_arg(schema, "schema") {
            Ok(s) => s,
            Err(status) => return status,
        };
        match schema.inner.main_variables.get(index) {
            Some(main) => write_out(out, c_string(&main.id), "out"),
            None => fail(
                PmcStatus::OutOfBounds,
                format!(
                    "main index {index} out of range 0..{}",
                    schema.inner.main_variables.len()
                ),
            ),
        }
    })
}

/// Load scorecards from CSV, validated against the schema.
///
/// # Safety
/// Pointer arguments must be valid.
#[no_mangle]
pub unsafe extern "C" fn pmc_scorecards_load(
    path: *const c_char,
    schema: *const PmcSchema,
    out: *mut *mut PmcScorecards,
) -> PmcStatus {
    guarded(|| {
        let path = match str_arg(path, "path") {
            Ok(p) => p,
            Err(status) => return status,
        };
        let schema = match ref_arg(schema, "schema") {
            Ok(s) => s,
            Err(status) => return status,
        };
        match load_scorecards(Path::new(path), &schema.inner) {
            Ok(inner) => write_out(
                out,
                Box::into_raw(Box::new(PmcScorecards { inner })),
                "out",
            ),
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// Release a scorecard handle. Null is ignored.
///
/// # Safety
/// `cards` must be null or an unreleased handle from this library.
#[no_mangle]
pub unsafe extern "C" fn pmc_scorecards_free(cards: *mut PmcScorecards) {
    if !cards.is_null() {
        drop(Box::from_raw(cards));
    }
}

/// Number of documents covered by the scorecards.
///
/// # Safety
/// Pointer arguments must be valid.
#[no_mangle]
pub unsafe extern "C" fn pmc_scorecards_len(
    cards: *const PmcScorecards,
    out: *mut usize,
) -> PmcStatus {
    guarded(|| {
        let cards = match ref_arg(cards, "cards") {
            Ok(c) => c,
            Err(status) => return status,
        };
        write_out(out, cards.inner.len(), "out")
    })
}

/// Score every document against the schema.
///
/// # Safety
/// Pointer arguments must be valid.
#[no_mangle]
pub unsafe extern "C" fn pmc_score(
    schema: *const PmcSchema,
    cards: *const PmcScorecards,
    out: *mut *mut PmcResults,
) -> PmcStatus {
    guarded(|| {
        let schema = match ref_arg(schema, "schema") {
            Ok(s) => s,
            Err(status) => return status,
        };
        let cards = match ref_arg(cards, "cards") {
            Ok(c) => c,
            Err(status) => return status,
        };
        match evaluate_all(&cards.inner, &schema.inner) {
            Ok(inner) => write_out(out, Box::into_raw(Box::new(PmcResults { inner })), "out"),
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}

/// Release a result handle. Null is ignored.
///
/// # Safety
/// `results` must be null or an unreleased handle from this library.
#[no_mangle]
pub unsafe extern "C" fn pmc_results_free(results: *mut PmcResults) {
    if !results.is_null() {
        drop(Box::from_raw(results));
    }
}

/// Number of scored documents.
///
/// # Safety
/// Pointer arguments must be valid.
#[no_mangle]
pub unsafe extern "C" fn pmc_results_len(
    results: *const PmcResults,
    out: *mut usize,
) -> PmcStatus {
    guarded(|| {
        let results = match ref_arg(results, "results") {
            Ok(r) => r,
            Err(status) => return status,
        };
        write_out(out, results.inner.len(), "out")
    })
}

unsafe fn result_at<'a>(
    results: *const PmcResults,
    index: usize,
) -> Result<&'a PmcResult, PmcStatus> {
    let results = ref_arg(results, "results")?;
    results.inner.get(index).ok_or_else(|| {
        fail(
            PmcStatus::OutOfBounds,
            format!("result index {index} out of range 0..{}", results.inner.len()),
        )
    })
}

/// Document id at `index`; release with `pmc_string_free`.
///
/// # Safety
/// Pointer arguments must be valid.
#[no_mangle]
pub unsafe extern "C" fn pmc_results_doc_id(
    results: *const PmcResults,
    index: usize,
    out: *mut *mut c_char,
) -> PmcStatus {
    guarded(|| match result_at(results, index) {
        Ok(r) => write_out(out, c_string(&r.doc_id), "out"),
        Err(status) => status,
    })
}

/// Index value for the document at `index`.
///
/// # Safety
/// Pointer arguments must be valid.
#[no_mangle]
pub unsafe extern "C" fn pmc_results_pmc(
    results: *const PmcResults,
    index: usize,
    out: *mut f64,
) -> PmcStatus {
    guarded(|| match result_at(results, index) {
        Ok(r) => write_out(out, r.pmc_f64(), "out"),
        Err(status) => status,
    })
}

/// Guarantee intensity for the document at `index`.
///
/// # Safety
/// Pointer arguments must be valid.
#[no_mangle]
pub unsafe extern "C" fn pmc_results_g(
    results: *const PmcResults,
    index: usize,
    out: *mut f64,
) -> PmcStatus {
    guarded(|| match result_at(results, index) {
        Ok(r) => write_out(out, r.g_f64(), "out"),
        Err(status) => status,
    })
}

/// Intensity bracket for the document at `index`.
///
/// # Safety
/// Pointer arguments must be valid.
#[no_mangle]
pub unsafe extern "C" fn pmc_results_level(
    results: *const PmcResults,
    index: usize,
    out: *mut PmcLevel,
) -> PmcStatus {
    guarded(|| match result_at(results, index) {
        Ok(r) => write_out(out, r.level.into(), "out"),
        Err(status) => status,
    })
}

/// Number of main-variable values for the document at `index`.
///
/// # Safety
/// Pointer arguments must be valid.
#[no_mangle]
pub unsafe extern "C" fn pmc_results_main_count(
    results: *const PmcResults,
    index: usize,
    out: *mut usize,
) -> PmcStatus {
    guarded(|| match result_at(results, index) {
        Ok(r) => write_out(out, r.main_values.len(), "out"),
        Err(status) => status,
    })
}

/// Value of the `main_index`-th main variable for the document at `index`.
///
/// # Safety
/// Pointer arguments must be valid.
#[no_mangle]
pub unsafe extern "C" fn pmc_results_main_value(
    results: *const PmcResults,
    index: usize,
    main_index: usize,
    out: *mut f64,
) -> PmcStatus {
    guarded(|| match result_at(results, index) {
        Ok(r) if main_index < r.main_values.len() => {
            write_out(out, r.main_f64(main_index), "out")
        }
        Ok(r) => fail(
            PmcStatus::OutOfBounds,
            format!(
                "main index {main_index} out of range 0..{}",
                r.main_values.len()
            ),
        ),
        Err(status) => status,
    })
}

/// Full results table as CSV; release with `pmc_string_free`.
///
/// # Safety
/// Pointer arguments must be valid.
#[no_mangle]
pub unsafe extern "C" fn pmc_results_csv(
    results: *const PmcResults,
    out: *mut *mut c_char,
) -> PmcStatus {
    guarded(|| {
        let results = match ref_arg(results, "results") {
            Ok(r) => r,
            Err(status) => return status,
        };
        match results_to_csv(&results.inner) {
            Ok(csv) => write_out(out, c_string(&csv), "out"),
            Err(e) => fail(status_of(&e), e.to_string()),
        }
    })
}
