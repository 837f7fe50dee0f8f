// SPDX-License-Identifier: Apache-2.0

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use weihrauch_steps_ffi::*;

fn last_error() -> String {
    let mut buf = vec![0 as c_char; ws_last_error_length() + 1];
    unsafe {
        ws_last_error_message(buf.as_mut_ptr(), buf.len());
        CStr::from_ptr(buf.as_ptr()).to_string_lossy().into_owned()
    }
}

fn table(text: &str) -> *mut WsTable {
    let c = CString::new(text).unwrap();
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { ws_table_parse(c.as_ptr(), &mut t) }, WsStatus::Ok);
    t
}

#[test]
fn table_round_trip() {
    let t = table("n=3\n10010110\n");
    let (mut n, mut l) = (0, 0);
    unsafe {
        assert_eq!(ws_table_dim(t, &mut n), WsStatus::Ok);
        assert_eq!(ws_table_alternation_length(t, &mut l), WsStatus::Ok);
        ws_table_free(t);
    }
    assert_eq!((n, l), (3, 3));
}

#[test]
fn compile_verify_and_certificate() {
    let (f, g) = (table("2:0111"), table("2:0001"));
    let alpha = CString::new("(01)").unwrap();
    let mut w = ptr::null_mut();
    let mut verdict = WsVerdict::Fail;
    let mut text = ptr::null_mut();
    unsafe {
        assert_eq!(ws_compile(f, g, alpha.as_ptr(), &mut w), WsStatus::Ok);
        assert_eq!(ws_witness_verify(w, 64, 0, &mut verdict), WsStatus::Ok);
        assert_eq!(ws_witness_certificate(w, &mut text), WsStatus::Ok);
        let cert = CStr::from_ptr(text).to_str().unwrap().to_owned();
        assert!(cert.starts_with("certificate v1\n") && cert.ends_with("end\n"));
        let mut again = ptr::null_mut();
        assert_eq!(ws_witness_parse(text, &mut again), WsStatus::Ok);
        ws_string_free(text);
        ws_witness_free(again);
        ws_witness_free(w);
        ws_table_free(f);
        ws_table_free(g);
    }
    assert_eq!(verdict, WsVerdict::Pass);
}

#[test]
fn errors_set_messages() {
    let (f, g) = (table("2:1001"), table("2:0001"));
    let alpha = CString::new("(01)").unwrap();
    let mut w = ptr::null_mut();
    unsafe {
        assert_eq!(ws_compile(f, g, alpha.as_ptr(), &mut w), WsStatus::Refused);
        assert!(w.is_null());
        assert_eq!(last_error(), "l(source)=2 > l(target)=1");
        let bad = CString::new("2:01").unwrap();
        let mut t = ptr::null_mut();
        assert_eq!(ws_table_parse(bad.as_ptr(), &mut t), WsStatus::Parse);
        assert!(!last_error().is_empty());
        assert_eq!(ws_table_parse(ptr::null(), &mut t), WsStatus::NullPointer);
        let mut n = 0;
        assert_eq!(ws_table_dim(ptr::null(), &mut n), WsStatus::NullPointer);
        assert_eq!(ws_table_dim(f, &mut n), WsStatus::Ok);
        assert_eq!(ws_last_error_length(), 0);
        let cert = CString::new("certificate v1\nsource lpo\n").unwrap();
        assert_eq!(ws_witness_parse(cert.as_ptr(), &mut w), WsStatus::Parse);
        ws_table_free(f);
        ws_table_free(g);
        ws_table_free(ptr::null_mut());
    }
}

#[test]
fn truncated_error_buffer() {
    let bad = CString::new("x").unwrap();
    let mut t = ptr::null_mut();
    unsafe {
        assert_eq!(ws_table_parse(bad.as_ptr(), &mut t), WsStatus::Parse);
        let mut buf = [1 as c_char; 4];
        assert_eq!(ws_last_error_message(buf.as_mut_ptr(), 4), 3);
        assert_eq!(buf[3], 0);
    }
}

#[test]
fn header_declares_every_symbol() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/weihrauch_steps.h")).unwrap();
    for sym in [
        "ws_table_parse",
        "ws_table_free",
        "ws_table_alternation_length",
        "ws_compile",
        "ws_witness_verify",
        "ws_witness_certificate",
        "ws_string_free",
        "ws_last_error_message",
        "typedef struct WsTable WsTable",
    ] {
        assert!(header.contains(sym), "{sym}");
    }
}
