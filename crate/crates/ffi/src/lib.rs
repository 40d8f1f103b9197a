//! C ABI for `icefold`.
//!
//! Objects are opaque handles released with their `_free` function. Every
//! call returns an [`IcefoldStatus`]; results come back through out
//! pointers, structured results as JSON strings released with
//! [`icefold_string_free`]. The message of the last failure on the calling
//! thread is available from [`icefold_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use icefold::character::{cluster_character, projected_character};
use icefold::cluster::row_ordered_orbits;
use icefold::error::Error;
use icefold::format::{parse_quiver_file, QuiverFile};
use icefold::mutation::{fold_quiver_matrix, FoldConvention};
use icefold::quiver::exchange_matrix;
use icefold::session::{Move, Session};
use serde_json::json;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IcefoldStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IcefoldConvention {
    Row = 0,
    Column = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IcefoldMove {
    Orbit = 0,
    Vertex = 1,
}

/// A parsed `.iq` file.
pub struct IcefoldFile(QuiverFile);

/// An exploration session.
pub struct IcefoldSession(Session);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(IcefoldStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = if e.root().is_parse() {
            IcefoldStatus::Parse
        } else {
            IcefoldStatus::Domain
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(IcefoldStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> IcefoldStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            IcefoldStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            IcefoldStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, Failure> {
    if s.is_null() {
        return Err(null("text"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|e| Failure(IcefoldStatus::InvalidUtf8, e.to_string()))
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn write_json(out: *mut *mut c_char, v: serde_json::Value) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("out"));
    }
    *out = CString::new(v.to_string()).expect("json has no NUL").into_raw();
    Ok(())
}

unsafe fn file_ref<'a>(f: *const IcefoldFile) -> Result<&'a QuiverFile, Failure> {
    f.as_ref().map(|f| &f.0).ok_or_else(|| null("file"))
}

unsafe fn session_mut<'a>(s: *mut IcefoldSession) -> Result<&'a mut Session, Failure> {
    s.as_mut().map(|s| &mut s.0).ok_or_else(|| null("session"))
}

/// Parses `.iq` text into a new file handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn icefold_file_parse(text: *const c_char, out: *mut *mut IcefoldFile) -> IcefoldStatus {
    guard(|| {
        let f = parse_quiver_file(str_arg(text)?)?;
        write_out(out, IcefoldFile(f))
    })
}

/// # Safety
/// `file` must come from [`icefold_file_parse`] or be null.
#[no_mangle]
pub unsafe extern "C" fn icefold_file_free(file: *mut IcefoldFile) {
    if !file.is_null() {
        drop(Box::from_raw(file));
    }
}

/// Folded exchange matrix as JSON: `rows`, `cols`, `entries`, `symmetrizer`,
/// `column_symmetrizer`.
///
/// # Safety
/// `file` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn icefold_fold_matrix(
    file: *const IcefoldFile,
    convention: IcefoldConvention,
    out: *mut *mut c_char,
) -> IcefoldStatus {
    guard(|| {
        let f = file_ref(file)?;
        let act = f.require_action()?;
        let conv = match convention {
            IcefoldConvention::Row => FoldConvention::Row,
            IcefoldConvention::Column => FoldConvention::Column,
        };
        let m = fold_quiver_matrix(&f.quiver, &act, conv)?;
        write_json(
            out,
            json!({
                "rows": m.matrix.rows(),
                "cols": m.matrix.cols(),
                "entries": m.matrix.entries(),
                "symmetrizer": m.symmetrizer,
                "column_symmetrizer": m.right_symmetrizer(),
            }),
        )
    })
}

/// Cluster character of the file's MODULE section as JSON: `character`,
/// `index`, and `projected` when the file has a group.
///
/// # Safety
/// `file` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn icefold_cluster_character(file: *const IcefoldFile, out: *mut *mut c_char) -> IcefoldStatus {
    guard(|| {
        let f = file_ref(file)?;
        let datum = f
            .module
            .as_ref()
            .ok_or_else(|| Failure(IcefoldStatus::Domain, "the file has no MODULE section".into()))?;
        let b = exchange_matrix(&f.quiver)?;
        let mut v = json!({
            "character": cluster_character(&f.quiver, datum, &b)?.to_string(),
            "index": datum.index(&f.quiver)?,
        });
        if let Some(act) = f.action()? {
            let orbits = row_ordered_orbits(&f.quiver, &act);
            v["projected"] = json!(projected_character(&f.quiver, datum, &b, &orbits)?.to_string());
        }
        write_json(out, v)
    })
}

/// Starts a session on a copy of `file`.
///
/// # Safety
/// `file` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn icefold_session_new(file: *const IcefoldFile, out: *mut *mut IcefoldSession) -> IcefoldStatus {
    guard(|| {
        let s = Session::new(file_ref(file)?.clone())?;
        write_out(out, IcefoldSession(s))
    })
}

/// # Safety
/// `session` must come from [`icefold_session_new`] or be null.
#[no_mangle]
pub unsafe extern "C" fn icefold_session_free(session: *mut IcefoldSession) {
    if !session.is_null() {
        drop(Box::from_raw(session));
    }
}

/// Applies one move. On failure the session is unchanged.
///
/// # Safety
/// `session` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn icefold_session_mutate(
    session: *mut IcefoldSession,
    kind: IcefoldMove,
    vertex: u32,
) -> IcefoldStatus {
    guard(|| {
        let s = session_mut(session)?;
        let m = match kind {
            IcefoldMove::Orbit => Move::Orbit(vertex),
            IcefoldMove::Vertex => Move::Vertex(vertex),
        };
        s.apply(m)?;
        Ok(())
    })
}

/// Drops the last move; `undone` is set to false when there was none.
///
/// # Safety
/// `session` must be a live handle; `undone` may be null.
#[no_mangle]
pub unsafe extern "C" fn icefold_session_undo(session: *mut IcefoldSession, undone: *mut bool) -> IcefoldStatus {
    guard(|| {
        let changed = session_mut(session)?.undo()?;
        if !undone.is_null() {
            *undone = changed;
        }
        Ok(())
    })
}

/// Current state as JSON: history, both seeds and the commutation flag.
///
/// # Safety
/// `session` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn icefold_session_state(session: *mut IcefoldSession, out: *mut *mut c_char) -> IcefoldStatus {
    guard(|| {
        let s = session_mut(session)?;
        write_json(out, json!(s.state()))
    })
}

/// Message of the last failure on this thread, or null. Release it with
/// [`icefold_string_free`].
#[no_mangle]
pub extern "C" fn icefold_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |c| c.clone().into_raw()))
}

/// # Safety
/// `s` must be a string returned by this library or null.
#[no_mangle]
pub unsafe extern "C" fn icefold_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
