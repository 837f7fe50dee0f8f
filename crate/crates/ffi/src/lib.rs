// SPDX-License-Identifier: Apache-2.0

//! C interface to `weihrauch-steps`.
//!
//! Objects are opaque handles created by `ws_*_parse`/`ws_compile` and
//! released with the matching `ws_*_free`. Every fallible call returns a
//! `WsStatus`; on failure the message is kept per thread and can be copied
//! out with `ws_last_error_message`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use weihrauch_steps::cantor::CantorPoint;
use weihrauch_steps::normalize::{compile_reduction, NormalizeError};
use weihrauch_steps::transducer::witness::Certificate;
use weihrauch_steps::truthtable::TruthTable;
use weihrauch_steps::verify::{check_witness, sample_points, Status, DEPTH_SCHEDULE};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Refused = 4,
    Internal = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WsVerdict {
    Pass = 0,
    Fail = 1,
    Undetermined = 2,
}

/// Opaque truth table.
pub struct WsTable(TruthTable);

/// Opaque compiled witness with its certificate.
pub struct WsWitness(Certificate);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(msg).expect("no interior nul")));
}

fn guard(f: impl FnOnce() -> Result<(), (WsStatus, String)>) -> WsStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => WsStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside weihrauch-steps");
            WsStatus::Panic
        }
    }
}

unsafe fn c_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (WsStatus, String)> {
    if p.is_null() {
        return Err((WsStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (WsStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

fn null(what: &str) -> (WsStatus, String) {
    (WsStatus::NullPointer, format!("{what} is null"))
}

/// Parses a table in file form (`n=2` then `0111`) or inline form (`2:0111`).
///
/// # Safety
/// `text` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ws_table_parse(text: *const c_char, out: *mut *mut WsTable) -> WsStatus {
    guard(|| {
        let s = c_str(text, "text")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let t = if s.contains('\n') || s.starts_with("n=") || s.starts_with("hex=") {
            TruthTable::parse(s)
        } else {
            TruthTable::parse_inline(s.trim())
        }
        .map_err(|e| (WsStatus::Parse, e.to_string()))?;
        *out = Box::into_raw(Box::new(WsTable(t)));
        Ok(())
    })
}

/// # Safety
/// `table` must come from `ws_table_parse` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ws_table_free(table: *mut WsTable) {
    if !table.is_null() {
        drop(Box::from_raw(table));
    }
}

/// # Safety
/// `table` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ws_table_dim(table: *const WsTable, out: *mut usize) -> WsStatus {
    guard(|| {
        let t = table.as_ref().ok_or_else(|| null("table"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = t.0.dim();
        Ok(())
    })
}

/// Writes `l(F)`, the longest alternation along an increasing chain.
///
/// # Safety
/// `table` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ws_table_alternation_length(table: *const WsTable, out: *mut usize) -> WsStatus {
    guard(|| {
        let t = table.as_ref().ok_or_else(|| null("table"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = t.0.alternation_length();
        Ok(())
    })
}

/// Compiles a witness for `s^F_α ≤ s^G_α`; refused with `REFUSED` when
/// `l(F) > l(G)`.
///
/// # Safety
/// `source` and `target` must be live handles, `alpha` a valid C string and
/// `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ws_compile(
    source: *const WsTable,
    target: *const WsTable,
    alpha: *const c_char,
    out: *mut *mut WsWitness,
) -> WsStatus {
    guard(|| {
        let f = source.as_ref().ok_or_else(|| null("source"))?;
        let g = target.as_ref().ok_or_else(|| null("target"))?;
        let a: CantorPoint = c_str(alpha, "alpha")?
            .parse()
            .map_err(|e: weihrauch_steps::cantor::CantorError| (WsStatus::Parse, e.to_string()))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let plan = compile_reduction(&f.0, &g.0, &a).map_err(|e| match e {
            NormalizeError::Impossible { .. } | NormalizeError::Improper(_) => (WsStatus::Refused, e.to_string()),
            e => (WsStatus::Internal, e.to_string()),
        })?;
        *out = Box::into_raw(Box::new(WsWitness(plan.certificate)));
        Ok(())
    })
}

/// Parses certificate text into a witness handle.
///
/// # Safety
/// `text` must be a valid C string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ws_witness_parse(text: *const c_char, out: *mut *mut WsWitness) -> WsStatus {
    guard(|| {
        let s = c_str(text, "text")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let cert = Certificate::parse(s).map_err(|e| (WsStatus::Parse, e.to_string()))?;
        cert.witness().map_err(|e| (WsStatus::Parse, e.to_string()))?;
        *out = Box::into_raw(Box::new(WsWitness(cert)));
        Ok(())
    })
}

/// # Safety
/// `witness` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ws_witness_free(witness: *mut WsWitness) {
    if !witness.is_null() {
        drop(Box::from_raw(witness));
    }
}

/// Certificate text; release it with `ws_string_free`.
///
/// # Safety
/// `witness` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ws_witness_certificate(witness: *const WsWitness, out: *mut *mut c_char) -> WsStatus {
    guard(|| {
        let w = witness.as_ref().ok_or_else(|| null("witness"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = CString::new(w.0.to_text()).expect("no nul").into_raw();
        Ok(())
    })
}

/// Checks the witness on `samples` seeded sample tuples around the source
/// thresholds.
///
/// # Safety
/// `witness` must be a live handle and `verdict` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ws_witness_verify(
    witness: *const WsWitness,
    samples: usize,
    seed: u64,
    verdict: *mut WsVerdict,
) -> WsStatus {
    guard(|| {
        let w = witness.as_ref().ok_or_else(|| null("witness"))?;
        let verdict = verdict.as_mut().ok_or_else(|| null("verdict"))?;
        let pair = w.0.witness().map_err(|e| (WsStatus::Internal, e.to_string()))?;
        let internal = |e: weihrauch_steps::verify::VerifyError| (WsStatus::Internal, e.to_string());
        let mut tuples = Vec::new();
        if let weihrauch_steps::transducer::Problem::StepF { thresholds, .. } = &pair.source {
            let mut ts = thresholds.clone();
            ts.sort();
            ts.dedup();
            for t in &ts {
                tuples.extend(sample_points(t, pair.source.arity(), samples, seed).map_err(internal)?);
            }
        } else {
            return Err((WsStatus::Refused, "only step-function certificates are supported".into()));
        }
        let report = check_witness(&pair, &tuples, &DEPTH_SCHEDULE).map_err(internal)?;
        *verdict = match report.status {
            Status::Pass => WsVerdict::Pass,
            Status::Fail => WsVerdict::Fail,
            Status::Undetermined => WsVerdict::Undetermined,
        };
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ws_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Length in bytes of the last error message on this thread, excluding the
/// terminating nul; 0 when there is none.
#[no_mangle]
pub extern "C" fn ws_last_error_length() -> usize {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(0, |m| m.as_bytes().len()))
}

/// Copies the last error message into `buf` (nul-terminated, truncated to
/// `len - 1` bytes). Returns the number of bytes copied, excluding the nul.
///
/// # Safety
/// `buf` must point to at least `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn ws_last_error_message(buf: *mut c_char, len: usize) -> usize {
    if buf.is_null() || len == 0 {
        return 0;
    }
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let bytes = e.as_ref().map_or(&[][..], |m| m.as_bytes());
        let n = bytes.len().min(len - 1);
        ptr::copy_nonoverlapping(bytes.as_ptr().cast::<c_char>(), buf, n);
        *buf.add(n) = 0;
        n
    })
}
