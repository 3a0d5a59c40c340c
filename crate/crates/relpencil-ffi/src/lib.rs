//! C ABI over the relpencil library.
//!
//! All structured data crosses the boundary as JSON in NUL-terminated UTF-8
//! strings, matching the CLI formats exactly. Every call returns a status
//! code (`RELPENCIL_OK` on success) and, where applicable, writes a
//! heap-allocated output string the caller must release with
//! [`relpencil_string_free`]. Pencils can also be held as opaque handles to
//! avoid repeated parsing.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use relpencil::error::Error;
use relpencil::pencil::{
    build_kronecker, invariants_from_weyr, pencil_weyr_via_kernel, pencil_weyr_via_range,
    strictly_equivalent_pencils, Pencil,
};
use relpencil::perturb::{perturbation_bound_report, run_perturbation_trials, TrialConfig};
use relpencil::relation::LinearRelation;
use relpencil::weyr::weyr_characteristic;

/// Success.
pub const RELPENCIL_OK: i32 = 0;
/// Malformed input: bad JSON, bad UTF-8, null pointer, shape violations.
pub const RELPENCIL_ERR_INPUT: i32 = 2;
/// Eigenvalue discovery left unresolved factors.
pub const RELPENCIL_ERR_UNRESOLVED: i32 = 3;
/// Internal invariant violation (cross-checks disagree).
pub const RELPENCIL_ERR_INTERNAL: i32 = 4;

/// Opaque parsed pencil.
pub struct RelpencilPencil {
    inner: Pencil,
}

fn to_code(e: &Error) -> i32 {
    e.exit_code()
}

/// Serialize a value (or an error object) into a fresh C string at `out`.
fn write_out(out: *mut *mut c_char, text: String) {
    if out.is_null() {
        return;
    }
    let c = CString::new(text).unwrap_or_else(|_| CString::new("{}").unwrap());
    unsafe { *out = c.into_raw() };
}

fn write_err(out: *mut *mut c_char, e: &Error) -> i32 {
    let code = to_code(e);
    write_out(
        out,
        format!(
            "{{\"error\":{},\"code\":{}}}",
            serde_json::to_string(&e.to_string()).unwrap_or_else(|_| "\"\"".into()),
            code
        ),
    );
    code
}

/// # Safety: `ptr` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, Error> {
    if ptr.is_null() {
        return Err(Error::Parse("null input pointer".into()));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| Error::Parse("input is not valid UTF-8".into()))
}

fn parse<T: serde::de::DeserializeOwned>(text: &str) -> Result<T, Error> {
    Ok(serde_json::from_str(text)?)
}

fn ok_json<T: serde::Serialize>(out: *mut *mut c_char, value: &T) -> i32 {
    match serde_json::to_string(value) {
        Ok(text) => {
            write_out(out, text);
            RELPENCIL_OK
        }
        Err(e) => write_err(out, &Error::Json(e)),
    }
}

/// Release a string returned by any function of this library.
///
/// # Safety
/// `s` must be a pointer previously returned through an output parameter of
/// this library, or null.
#[no_mangle]
pub unsafe extern "C" fn relpencil_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Weyr characteristic of a linear relation. `relation_json` is
/// {"m": ..., "basis": matrix}; writes WeyrCharacteristic JSON to `out`.
///
/// # Safety
/// `relation_json` must be a valid NUL-terminated string; `out` must be null
/// or a valid pointer slot.
#[no_mangle]
pub unsafe extern "C" fn relpencil_weyr_relation(
    relation_json: *const c_char,
    out: *mut *mut c_char,
) -> i32 {
    let run = || -> Result<String, Error> {
        let relation: LinearRelation = parse(read_str(relation_json)?)?;
        Ok(serde_json::to_string(&weyr_characteristic(&relation, &[]))?)
    };
    match run() {
        Ok(text) => {
            write_out(out, text);
            RELPENCIL_OK
        }
        Err(e) => write_err(out, &e),
    }
}

fn weyr_pencil_impl(p: &Pencil, representation: &str) -> Result<String, Error> {
    let weyr = match representation {
        "kernel" => pencil_weyr_via_kernel(p, &[])?,
        "range" => pencil_weyr_via_range(p, &[])?,
        "both" | "" => {
            let k = pencil_weyr_via_kernel(p, &[])?;
            let r = pencil_weyr_via_range(p, &[])?;
            if k != r {
                return Err(Error::InconsistentInvariants(
                    "kernel and range routes disagree".into(),
                ));
            }
            k
        }
        other => return Err(Error::Parse(format!("unknown representation '{}'", other))),
    };
    let invariants = invariants_from_weyr(&weyr);
    Ok(serde_json::to_string(&serde_json::json!({
        "weyr": weyr,
        "invariants": invariants,
    }))?)
}

/// Weyr characteristic and Kronecker invariants of a pencil.
/// `pencil_json` is {"n", "m", "E", "F"}; `representation` is "kernel",
/// "range", "both", or null (= "both").
///
/// # Safety
/// Pointers must be valid as in [`relpencil_weyr_relation`];
/// `representation` may be null.
#[no_mangle]
pub unsafe extern "C" fn relpencil_weyr_pencil(
    pencil_json: *const c_char,
    representation: *const c_char,
    out: *mut *mut c_char,
) -> i32 {
    let run = || -> Result<String, Error> {
        let p: Pencil = parse(read_str(pencil_json)?)?;
        let rep = if representation.is_null() { "both" } else { read_str(representation)? };
        weyr_pencil_impl(&p, rep)
    };
    match run() {
        Ok(text) => {
            write_out(out, text);
            RELPENCIL_OK
        }
        Err(e) => write_err(out, &e),
    }
}

/// Assemble the Kronecker canonical pencil from invariants JSON
/// {"finite", "alpha", "beta", "gamma"}; writes Pencil JSON.
///
/// # Safety
/// As in [`relpencil_weyr_relation`].
#[no_mangle]
pub unsafe extern "C" fn relpencil_build_kronecker(
    invariants_json: *const c_char,
    out: *mut *mut c_char,
) -> i32 {
    let run = || -> Result<String, Error> {
        let inv = parse(read_str(invariants_json)?)?;
        Ok(serde_json::to_string(&build_kronecker(&inv))?)
    };
    match run() {
        Ok(text) => {
            write_out(out, text);
            RELPENCIL_OK
        }
        Err(e) => write_err(out, &e),
    }
}

/// Strict equivalence of two pencils; writes {"equivalent": bool}.
///
/// # Safety
/// As in [`relpencil_weyr_relation`].
#[no_mangle]
pub unsafe extern "C" fn relpencil_equiv(
    pencil_json_1: *const c_char,
    pencil_json_2: *const c_char,
    out: *mut *mut c_char,
) -> i32 {
    let run = || -> Result<String, Error> {
        let p: Pencil = parse(read_str(pencil_json_1)?)?;
        let q: Pencil = parse(read_str(pencil_json_2)?)?;
        let equivalent = strictly_equivalent_pencils(&p, &q)?;
        Ok(format!("{{\"equivalent\":{}}}", equivalent))
    };
    match run() {
        Ok(text) => {
            write_out(out, text);
            RELPENCIL_OK
        }
        Err(e) => write_err(out, &e),
    }
}

/// Smith invariant factors of sE - F; writes
/// {"invariant_factors": [[coefficient strings]], "display": [strings]}.
///
/// # Safety
/// As in [`relpencil_weyr_relation`].
#[no_mangle]
pub unsafe extern "C" fn relpencil_smith(
    pencil_json: *const c_char,
    out: *mut *mut c_char,
) -> i32 {
    let run = || -> Result<String, Error> {
        let p: Pencil = parse(read_str(pencil_json)?)?;
        let factors = p.invariant_factors();
        let display: Vec<String> = factors.iter().map(|f| f.to_string()).collect();
        Ok(serde_json::to_string(&serde_json::json!({
            "invariant_factors": factors,
            "display": display,
        }))?)
    };
    match run() {
        Ok(text) => {
            write_out(out, text);
            RELPENCIL_OK
        }
        Err(e) => write_err(out, &e),
    }
}

/// Rank-one perturbation bound report for pencils P and Q; writes
/// BoundReport JSON.
///
/// # Safety
/// As in [`relpencil_weyr_relation`].
#[no_mangle]
pub unsafe extern "C" fn relpencil_perturb_report(
    pencil_json_p: *const c_char,
    pencil_json_q: *const c_char,
    out: *mut *mut c_char,
) -> i32 {
    let run = || -> Result<String, Error> {
        let p: Pencil = parse(read_str(pencil_json_p)?)?;
        let q: Pencil = parse(read_str(pencil_json_q)?)?;
        Ok(serde_json::to_string(&perturbation_bound_report(&p, &q, &[])?)?)
    };
    match run() {
        Ok(text) => {
            write_out(out, text);
            RELPENCIL_OK
        }
        Err(e) => write_err(out, &e),
    }
}

/// Seeded randomized perturbation trials; deterministic per seed. Writes the
/// TrialSummary JSON.
///
/// # Safety
/// `out` must be null or a valid pointer slot.
#[no_mangle]
pub unsafe extern "C" fn relpencil_perturb_trials(
    trials: usize,
    max_size: usize,
    seed: u64,
    out: *mut *mut c_char,
) -> i32 {
    let summary = run_perturbation_trials(&TrialConfig { trials, max_size, seed });
    ok_json(out, &summary)
}

/// Parse a pencil into an opaque handle for repeated use. On success writes
/// the handle to `out_handle`; release it with [`relpencil_pencil_free`].
///
/// # Safety
/// `pencil_json` as in [`relpencil_weyr_relation`]; `out_handle` must be a
/// valid pointer slot; `out_error` may be null.
#[no_mangle]
pub unsafe extern "C" fn relpencil_pencil_parse(
    pencil_json: *const c_char,
    out_handle: *mut *mut RelpencilPencil,
    out_error: *mut *mut c_char,
) -> i32 {
    if out_handle.is_null() {
        return RELPENCIL_ERR_INPUT;
    }
    *out_handle = ptr::null_mut();
    let run = || -> Result<Pencil, Error> { parse(read_str(pencil_json)?) };
    match run() {
        Ok(inner) => {
            *out_handle = Box::into_raw(Box::new(RelpencilPencil { inner }));
            RELPENCIL_OK
        }
        Err(e) => write_err(out_error, &e),
    }
}

/// Release a pencil handle.
///
/// # Safety
/// `handle` must come from [`relpencil_pencil_parse`], or be null.
#[no_mangle]
pub unsafe extern "C" fn relpencil_pencil_free(handle: *mut RelpencilPencil) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Row count of the pencil behind a handle (0 for null).
///
/// # Safety
/// `handle` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn relpencil_pencil_rows(handle: *const RelpencilPencil) -> usize {
    handle.as_ref().map_or(0, |h| h.inner.n)
}

/// Column count of the pencil behind a handle (0 for null).
///
/// # Safety
/// `handle` must be valid or null.
#[no_mangle]
pub unsafe extern "C" fn relpencil_pencil_cols(handle: *const RelpencilPencil) -> usize {
    handle.as_ref().map_or(0, |h| h.inner.m)
}

/// Weyr characteristic + invariants for a pencil handle; `representation`
/// as in [`relpencil_weyr_pencil`].
///
/// # Safety
/// `handle` must be valid; other pointers as in [`relpencil_weyr_pencil`].
#[no_mangle]
pub unsafe extern "C" fn relpencil_pencil_weyr(
    handle: *const RelpencilPencil,
    representation: *const c_char,
    out: *mut *mut c_char,
) -> i32 {
    let Some(h) = handle.as_ref() else {
        return write_err(out, &Error::Parse("null pencil handle".into()));
    };
    let run = || -> Result<String, Error> {
        let rep = if representation.is_null() { "both" } else { read_str(representation)? };
        weyr_pencil_impl(&h.inner, rep)
    };
    match run() {
        Ok(text) => {
            write_out(out, text);
            RELPENCIL_OK
        }
        Err(e) => write_err(out, &e),
    }
}

/// Strict equivalence of two pencil handles; writes 1 or 0 to `out_equal`.
///
/// # Safety
/// Handles must be valid; `out_equal` must be a valid pointer slot;
/// `out_error` may be null.
#[no_mangle]
pub unsafe extern "C" fn relpencil_pencil_equiv(
    handle_1: *const RelpencilPencil,
    handle_2: *const RelpencilPencil,
    out_equal: *mut i32,
    out_error: *mut *mut c_char,
) -> i32 {
    let (Some(a), Some(b)) = (handle_1.as_ref(), handle_2.as_ref()) else {
        return write_err(out_error, &Error::Parse("null pencil handle".into()));
    };
    if out_equal.is_null() {
        return RELPENCIL_ERR_INPUT;
    }
    match strictly_equivalent_pencils(&a.inner, &b.inner) {
        Ok(equal) => {
            *out_equal = equal as i32;
            RELPENCIL_OK
        }
        Err(e) => write_err(out_error, &e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    unsafe fn take(out: *mut c_char) -> String {
        let s = CStr::from_ptr(out).to_str().unwrap().to_string();
        relpencil_string_free(out);
        s
    }

    #[test]
    fn weyr_pencil_roundtrip() {
        let inv = cstr(r#"{"finite":[],"alpha":[],"beta":[2,1,1],"gamma":[]}"#);
        let mut out: *mut c_char = ptr::null_mut();
        unsafe {
            assert_eq!(relpencil_build_kronecker(inv.as_ptr(), &mut out), RELPENCIL_OK);
            let pencil_json = take(out);
            let pencil = cstr(&pencil_json);
            let mut out2: *mut c_char = ptr::null_mut();
            assert_eq!(
                relpencil_weyr_pencil(pencil.as_ptr(), ptr::null(), &mut out2),
                RELPENCIL_OK
            );
            let text = take(out2);
            assert!(text.contains(r#""b":[3,1]"#), "{}", text);
        }
    }

    #[test]
    fn error_paths() {
        let bad = cstr("not json");
        let mut out: *mut c_char = ptr::null_mut();
        unsafe {
            assert_eq!(
                relpencil_weyr_relation(bad.as_ptr(), &mut out),
                RELPENCIL_ERR_INPUT
            );
            let text = take(out);
            assert!(text.contains("\"code\":2"));
            assert_eq!(
                relpencil_weyr_relation(ptr::null(), &mut out),
                RELPENCIL_ERR_INPUT
            );
            relpencil_string_free(out);
        }
    }

    #[test]
    fn handle_lifecycle() {
        let pencil = cstr(
            r#"{"n":2,"m":2,"E":{"rows":2,"cols":2,"entries":["1","0","0","1"]},"F":{"rows":2,"cols":2,"entries":["0","1","0","0"]}}"#,
        );
        unsafe {
            let mut handle: *mut RelpencilPencil = ptr::null_mut();
            assert_eq!(
                relpencil_pencil_parse(pencil.as_ptr(), &mut handle, ptr::null_mut()),
                RELPENCIL_OK
            );
            assert_eq!(relpencil_pencil_rows(handle), 2);
            assert_eq!(relpencil_pencil_cols(handle), 2);
            let mut equal = -1;
            assert_eq!(
                relpencil_pencil_equiv(handle, handle, &mut equal, ptr::null_mut()),
                RELPENCIL_OK
            );
            assert_eq!(equal, 1);
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(
                relpencil_pencil_weyr(handle, ptr::null(), &mut out),
                RELPENCIL_OK
            );
            let text = take(out);
            assert!(text.contains("\"lambda\":\"0\""), "{}", text);
            relpencil_pencil_free(handle);
        }
    }
}
