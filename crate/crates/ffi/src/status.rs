use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use carleman_lift::{Error, ErrorKind};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// A documented precondition does not hold (strip, time range, ...).
    Precondition = 3,
    /// Integration or branch tracking failed.
    Numeric = 4,
    Io = 5,
    /// The output buffer is shorter than required.
    BufferTooSmall = 6,
    /// A panic was caught at the boundary.
    Panic = 7,
}

pub(crate) struct Failure {
    status: ClStatus,
    message: String,
}

impl Failure {
    pub(crate) fn new(status: ClStatus, message: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
        }
    }

    pub(crate) fn null(name: &str) -> Self {
        Self::new(ClStatus::NullPointer, format!("`{name}` is null"))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e.kind() {
            ErrorKind::Usage => ClStatus::InvalidArgument,
            ErrorKind::Precondition => ClStatus::Precondition,
            ErrorKind::Numeric => ClStatus::Numeric,
            ErrorKind::Io => ClStatus::Io,
        };
        Self::new(status, e.to_string())
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

/// Run `f`, translate its outcome into a status and record the message.
pub(crate) fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ClStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ClStatus::Ok,
        Ok(Err(failure)) => {
            set_last_error(failure.message);
            failure.status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_last_error(format!("panic: {msg}"));
            ClStatus::Panic
        }
    }
}

/// Copy the message of the last failed call on this thread into `buf`.
///
/// Returns the length of the message including the terminating NUL, or 0 if
/// no call has failed yet. The copy is truncated to `len` bytes (always NUL
/// terminated when `len > 0`); pass a null `buf` to query the size.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn cl_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let slot = slot.borrow();
        let Some(msg) = slot.as_ref() else {
            return 0;
        };
        let bytes = msg.as_bytes_with_nul();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len);
            std::ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n - 1) = 0;
        }
        bytes.len()
    })
}
