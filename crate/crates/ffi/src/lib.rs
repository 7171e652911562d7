//! C ABI for strictmiz.
//!
//! Conventions:
//! * Every fallible function returns an [`SmStatus`]; on anything other than
//!   `SM_STATUS_OK` the thread-local last error holds a description, readable with
//!   [`sm_last_error`].
//! * Strings passed in are NUL-terminated UTF-8 and are borrowed.
//! * Strings handed out through `out` parameters are owned by the caller and
//!   must be released with [`sm_string_free`].
//! * Tables are opaque; release them with [`sm_table_free`].
//!
//! For input errors (`SM_STATUS_INPUT_ERROR`) the last error is the same error
//! document the CLI prints and the HTTP service returns.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use strictmiz::pipeline::{render, OutputFormat, View};
use strictmiz::printer::PrintConfig;
use strictmiz::wsm::is_wsm;
use strictmiz::{default_table, load_notation_table, NotationTable};

/// Opaque notation table.
pub struct SmTable(NotationTable);

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullArgument = 1,
    /// An input string was not valid UTF-8.
    InvalidUtf8 = 2,
    /// The article text was rejected; the last error is an error document.
    InputError = 3,
    /// The notation table source was rejected.
    TableError = 4,
    /// An argument was out of range, such as a width below 20.
    InvalidArgument = 5,
    /// Internal failure; the library state is still usable.
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmFormat {
    Text = 0,
    Xml = 1,
}

/// Formats cross the boundary as plain integers so that an out-of-range
/// value from C is an error rather than undefined behavior.
fn output_format(raw: u32) -> Option<OutputFormat> {
    match raw {
        x if x == SmFormat::Text as u32 => Some(OutputFormat::Text),
        x if x == SmFormat::Xml as u32 => Some(OutputFormat::Xml),
        _ => None,
    }
}

fn bad_format(raw: u32) -> SmStatus {
    guard(|| Err(Failure(SmStatus::InvalidArgument, format!("unknown format {raw}"))))
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).expect("NUL removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(SmStatus, String);

type Outcome<T> = Result<T, Failure>;

/// Runs `f`, records any failure, and converts panics into `SM_STATUS_PANIC`.
fn guard(f: impl FnOnce() -> Outcome<SmStatus>) -> SmStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, message))) => {
            set_last_error(&message);
            status
        }
        Err(_) => {
            set_last_error("internal error");
            SmStatus::Panic
        }
    }
}

unsafe fn borrow_str<'a>(p: *const c_char, what: &str) -> Outcome<&'a str> {
    if p.is_null() {
        return Err(Failure(SmStatus::NullArgument, format!("{what} is NULL")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(SmStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn borrow_table<'a>(p: *const SmTable) -> Outcome<&'a NotationTable> {
    p.as_ref().map(|t| &t.0).ok_or_else(|| Failure(SmStatus::NullArgument, "table is NULL".into()))
}

unsafe fn give(out: *mut *mut c_char, text: String) -> Outcome<SmStatus> {
    let c = CString::new(text).map_err(|_| Failure(SmStatus::InputError, "output contains a NUL byte".into()))?;
    *out = c.into_raw();
    Ok(SmStatus::Ok)
}

unsafe fn run_view(
    table: *const SmTable,
    text: *const c_char,
    source_name: *const c_char,
    out: *mut *mut c_char,
    view: View,
) -> SmStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure(SmStatus::NullArgument, "out is NULL".into()));
        }
        *out = ptr::null_mut();
        let table = borrow_table(table)?;
        let text = borrow_str(text, "text")?;
        let name = if source_name.is_null() { "" } else { borrow_str(source_name, "source_name")? };
        let rendered = render(view, text, name, table).map_err(|e| Failure(SmStatus::InputError, e.document()))?;
        give(out, rendered)
    })
}

/// The bundled default table. Never NULL.
#[no_mangle]
pub extern "C" fn sm_table_default() -> *mut SmTable {
    Box::into_raw(Box::new(SmTable(default_table())))
}

/// Loads a table from its source text.
///
/// # Safety
/// `source` must be NULL or a NUL-terminated string; `out` must be NULL or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn sm_table_load(source: *const c_char, out: *mut *mut SmTable) -> SmStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure(SmStatus::NullArgument, "out is NULL".into()));
        }
        *out = ptr::null_mut();
        let source = borrow_str(source, "source")?;
        let table = load_notation_table(source).map_err(|e| Failure(SmStatus::TableError, e.to_string()))?;
        *out = Box::into_raw(Box::new(SmTable(table)));
        Ok(SmStatus::Ok)
    })
}

/// # Safety
/// `table` must be NULL or come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sm_table_free(table: *mut SmTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// Parse-tree XML. `source_name` may be NULL.
///
/// # Safety
/// Pointers must be NULL or valid; `text` and `source_name` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn sm_parse_xml(
    table: *const SmTable,
    text: *const c_char,
    source_name: *const c_char,
    out: *mut *mut c_char,
) -> SmStatus {
    run_view(table, text, source_name, out, View::Parse)
}

/// Pretty-printed text at `width` columns (at least 20).
///
/// # Safety
/// Pointers must be NULL or valid; `text` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn sm_pretty(
    table: *const SmTable,
    text: *const c_char,
    width: u32,
    out: *mut *mut c_char,
) -> SmStatus {
    let Some(config) = PrintConfig::new(width as usize, PrintConfig::default().indent) else {
        return guard(|| {
            Err(Failure(SmStatus::InvalidArgument, format!("width must be at least {}", PrintConfig::MIN_WIDTH)))
        });
    };
    run_view(table, text, ptr::null(), out, View::Pretty(config))
}

/// Weakly strict form; `format` is an `sm_format` value.
///
/// # Safety
/// Pointers must be NULL or valid; `text` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn sm_wsm(
    table: *const SmTable,
    text: *const c_char,
    format: u32,
    out: *mut *mut c_char,
) -> SmStatus {
    match output_format(format) {
        Some(f) => run_view(table, text, ptr::null(), out, View::Wsm(f)),
        None => bad_format(format),
    }
}

/// More strict form; `format` is an `sm_format` value.
///
/// # Safety
/// Pointers must be NULL or valid; `text` NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn sm_msm(
    table: *const SmTable,
    text: *const c_char,
    format: u32,
    out: *mut *mut c_char,
) -> SmStatus {
    match output_format(format) {
        Some(f) => run_view(table, text, ptr::null(), out, View::Msm(f)),
        None => bad_format(format),
    }
}

/// 1 if `text` is in weakly strict form, 0 if not, -1 if `text` is NULL or
/// not UTF-8.
///
/// # Safety
/// `text` must be NULL or NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn sm_is_wsm(text: *const c_char) -> c_int {
    let mut answer = -1;
    guard(|| {
        answer = c_int::from(is_wsm(borrow_str(text, "text")?));
        Ok(SmStatus::Ok)
    });
    answer
}

/// Description of the last failure on this thread, or NULL. The pointer
/// stays valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn sm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be NULL or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn sm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn sm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
