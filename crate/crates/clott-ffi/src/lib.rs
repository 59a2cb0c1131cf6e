//! C ABI over the kernel: parse a judgement once into an opaque handle,
//! then check, evaluate, or normalise it; run the lemma suites by name.
//! Every returned string is heap-allocated and must be released with
//! `clott_string_free`.

use std::ffi::{c_char, CStr, CString};
use std::ptr;

use clott::harness::{run_all, run_suite, SuiteConfig};
use clott::interp::{interp_ctx, interp_term};
use clott::semantics::{Bounds, SemValue};
use clott::syntax::{parse_file, print_term, Judgement};
use clott::typecheck;
use clott::worlds::{Truncation, World};

/// Status codes shared by every entry point.
#[repr(C)]
#[derive(PartialEq, Eq, Clone, Copy)]
pub enum ClottStatus {
    ClottOk = 0,
    ClottParseError = 1,
    ClottTypeError = 2,
    ClottEvalError = 3,
    ClottVerifyFailed = 4,
    ClottBadArgument = 5,
}

/// An opaque parsed judgement.
pub struct ClottProgram {
    judgement: Judgement,
}

fn out_string(slot: *mut *mut c_char, s: String) {
    if slot.is_null() {
        return;
    }
    let c = CString::new(s).unwrap_or_else(|_| CString::new("invalid string").unwrap());
    unsafe { *slot = c.into_raw() };
}

unsafe fn read_str<'a>(p: *const c_char) -> Option<&'a str> {
    if p.is_null() {
        return None;
    }
    CStr::from_ptr(p).to_str().ok()
}

/// Parses a judgement file. Returns null on error, with a diagnostic in
/// `error_out` when that is non-null.
///
/// # Safety
/// `source` must be a valid NUL-terminated UTF-8 string; `error_out`, when
/// non-null, must point to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn clott_parse(
    source: *const c_char,
    error_out: *mut *mut c_char,
) -> *mut ClottProgram {
    let Some(src) = read_str(source) else {
        out_string(error_out, "source must be valid UTF-8".into());
        return ptr::null_mut();
    };
    match parse_file(src) {
        Ok(f) => Box::into_raw(Box::new(ClottProgram { judgement: f.judgement })),
        Err(e) => {
            out_string(error_out, e.to_string());
            ptr::null_mut()
        }
    }
}

/// Releases a program handle.
///
/// # Safety
/// `program` must come from `clott_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn clott_program_free(program: *mut ClottProgram) {
    if !program.is_null() {
        drop(Box::from_raw(program));
    }
}

/// Typechecks the judgement; on failure the diagnostics JSON carries the
/// rule name and message.
///
/// # Safety
/// `program` must be a live handle; `diagnostics_out` as in `clott_parse`.
#[no_mangle]
pub unsafe extern "C" fn clott_program_check(
    program: *const ClottProgram,
    diagnostics_out: *mut *mut c_char,
) -> ClottStatus {
    let Some(p) = program.as_ref() else { return ClottStatus::ClottBadArgument };
    match typecheck::check(&p.judgement) {
        Ok(d) => {
            out_string(
                diagnostics_out,
                serde_json::json!({"status": "ok", "rule": d.rule}).to_string(),
            );
            ClottStatus::ClottOk
        }
        Err(e) => {
            out_string(diagnostics_out, e.to_json().to_string());
            ClottStatus::ClottTypeError
        }
    }
}

/// Evaluates the subject of a typing judgement at a world given as JSON;
/// the value comes back in the documented JSON encoding. `env_json` may be
/// null for closed contexts.
///
/// # Safety
/// Pointer arguments as in `clott_parse`.
#[no_mangle]
pub unsafe extern "C" fn clott_program_eval(
    program: *const ClottProgram,
    world_json: *const c_char,
    env_json: *const c_char,
    value_out: *mut *mut c_char,
) -> ClottStatus {
    let Some(p) = program.as_ref() else { return ClottStatus::ClottBadArgument };
    let Some(wstr) = read_str(world_json) else { return ClottStatus::ClottBadArgument };
    let Judgement::Typing(ctx, term, _) = &p.judgement else {
        out_string(value_out, "evaluation needs a typing judgement".into());
        return ClottStatus::ClottBadArgument;
    };
    if let Err(e) = typecheck::check(&p.judgement) {
        out_string(value_out, e.to_string());
        return ClottStatus::ClottTypeError;
    }
    let world = match serde_json::from_str::<serde_json::Value>(wstr)
        .map_err(|e| e.to_string())
        .and_then(|v| World::from_json(&v))
    {
        Ok(w) => w,
        Err(e) => {
            out_string(value_out, e);
            return ClottStatus::ClottBadArgument;
        }
    };
    let bounds = Bounds::new(Truncation::default(), 4);
    let env = match read_str(env_json) {
        None => SemValue::Star,
        Some(estr) => {
            let parsed = serde_json::from_str::<serde_json::Value>(estr)
                .map_err(|e| clott::Error::Sem(e.to_string()))
                .and_then(|v| SemValue::from_json(&v));
            match parsed {
                Ok(v) => v,
                Err(e) => {
                    out_string(value_out, e.to_string());
                    return ClottStatus::ClottBadArgument;
                }
            }
        }
    };
    match interp_ctx(ctx).contains(&world, &env, &bounds) {
        Ok(true) => {}
        Ok(false) => {
            out_string(value_out, "environment is not an element of the context".into());
            return ClottStatus::ClottBadArgument;
        }
        Err(e) => {
            out_string(value_out, e.to_string());
            return ClottStatus::ClottEvalError;
        }
    }
    match interp_term(ctx, term).and_then(|t| t.eval(&world, &env, &bounds)) {
        Ok(v) => {
            out_string(value_out, v.to_json(&bounds).to_string());
            ClottStatus::ClottOk
        }
        Err(e) => {
            out_string(value_out, e.to_string());
            ClottStatus::ClottEvalError
        }
    }
}

/// Prints the β-normal form of the subject term.
///
/// # Safety
/// Pointer arguments as in `clott_parse`.
#[no_mangle]
pub unsafe extern "C" fn clott_program_normalize(
    program: *const ClottProgram,
    term_out: *mut *mut c_char,
) -> ClottStatus {
    let Some(p) = program.as_ref() else { return ClottStatus::ClottBadArgument };
    let Judgement::Typing(_, term, _) = &p.judgement else {
        return ClottStatus::ClottBadArgument;
    };
    if let Err(e) = typecheck::check(&p.judgement) {
        out_string(term_out, e.to_string());
        return ClottStatus::ClottTypeError;
    }
    match typecheck::normalize(term) {
        Ok(nf) => {
            out_string(term_out, print_term(&nf));
            ClottStatus::ClottOk
        }
        Err(e) => {
            out_string(term_out, e.to_string());
            ClottStatus::ClottEvalError
        }
    }
}

/// Runs one lemma suite (or all of them when `suite` is null) at the given
/// truncation; the JSON report lands in `report_out`.
///
/// # Safety
/// Pointer arguments as in `clott_parse`.
#[no_mangle]
pub unsafe extern "C" fn clott_verify(
    suite: *const c_char,
    max_clocks: u32,
    max_ticks: u32,
    report_out: *mut *mut c_char,
) -> ClottStatus {
    let cfg = SuiteConfig {
        trunc: Truncation::new(max_clocks as usize, max_ticks),
        nat_bound: 4,
        seed: 0,
    };
    let reports = match read_str(suite) {
        Some(name) => run_suite(name, &cfg).map(|r| vec![r]),
        None => run_all(&cfg),
    };
    match reports {
        Ok(rs) => {
            let ok = rs.iter().all(|r| r.ok());
            let json: Vec<serde_json::Value> = rs.iter().map(|r| r.to_json()).collect();
            out_string(report_out, serde_json::Value::Array(json).to_string());
            if ok {
                ClottStatus::ClottOk
            } else {
                ClottStatus::ClottVerifyFailed
            }
        }
        Err(e) => {
            out_string(report_out, e.to_string());
            ClottStatus::ClottBadArgument
        }
    }
}

/// Releases a string returned by any entry point.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn clott_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cstr(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    unsafe fn take(p: *mut c_char) -> String {
        let s = CStr::from_ptr(p).to_str().unwrap().to_string();
        clott_string_free(p);
        s
    }

    #[test]
    fn parse_check_eval_roundtrip() {
        unsafe {
            let src = cstr(
                "clocks k; ctx; (lam (x : Later (a:k) Str[k]) pair 0 x) \
                 (dfix k (lam (x : Later (a:k) Str[k]) pair 0 x)) : Str[k]",
            );
            let mut err: *mut c_char = ptr::null_mut();
            let prog = clott_parse(src.as_ptr(), &mut err);
            assert!(!prog.is_null());
            let mut diag: *mut c_char = ptr::null_mut();
            assert!(clott_program_check(prog, &mut diag) == ClottStatus::ClottOk);
            take(diag);
            let world = cstr(r#"{"clocks":{"l0":2},"valuation":{"k":"l0"}}"#);
            let mut val: *mut c_char = ptr::null_mut();
            let st = clott_program_eval(prog, world.as_ptr(), ptr::null(), &mut val);
            assert!(st == ClottStatus::ClottOk);
            assert_eq!(take(val), r#"[0,[0,[0,"*"]]]"#);
            clott_program_free(prog);
        }
    }

    #[test]
    fn type_errors_carry_the_rule() {
        unsafe {
            let src = cstr(
                "clocks k; ctx; dfix k (lam (x : Later (a:k) Str[k]) adv x k k) \
                 : Later (a:k) Str[k]",
            );
            let mut err: *mut c_char = ptr::null_mut();
            let prog = clott_parse(src.as_ptr(), &mut err);
            assert!(!prog.is_null());
            let mut diag: *mut c_char = ptr::null_mut();
            assert!(clott_program_check(prog, &mut diag) == ClottStatus::ClottTypeError);
            let d = take(diag);
            assert!(d.contains("diamond-app"), "diagnostics {d}");
            clott_program_free(prog);
        }
    }

    #[test]
    fn parse_errors_return_null_and_a_message() {
        unsafe {
            let src = cstr("clocks k; ctx; lam (");
            let mut err: *mut c_char = ptr::null_mut();
            let prog = clott_parse(src.as_ptr(), &mut err);
            assert!(prog.is_null());
            assert!(!err.is_null());
            take(err);
        }
    }

    #[test]
    fn verify_one_suite_through_the_abi() {
        unsafe {
            let suite = cstr("streams");
            let mut rep: *mut c_char = ptr::null_mut();
            let st = clott_verify(suite.as_ptr(), 2, 2, &mut rep);
            assert!(st == ClottStatus::ClottOk);
            let r = take(rep);
            let v: serde_json::Value = serde_json::from_str(&r).unwrap();
            assert_eq!(v[0]["suite"], "streams");
        }
    }
}
