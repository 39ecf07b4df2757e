//! C ABI for the `jc-control` crate.
//!
//! Design rules:
//!
//! - Every function returns a [`JccStatus`]; results travel through out
//!   pointers. `JCC_STATUS_OK` (0) means all out parameters were written.
//! - Heap objects cross the boundary as opaque handles ([`JccParams`],
//!   [`JccSingularList`]) with matching `_free` functions. Strings returned
//!   by the library must be released with [`jcc_string_free`].
//! - Null pointers are rejected, never dereferenced. Panics are caught at
//!   the boundary and reported as `JCC_STATUS_PANIC`.
//!
//! The generated header lives at `include/jc_control.h` (rebuilt by
//! `build.rs` via cbindgen on every compile).

use std::ffi::{c_char, c_int, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use jc_control::chain::{self, Verdict};
use jc_control::coupling;
use jc_control::model::{self, Labeling, LevelIndex, ModelParams, Sign};
use jc_control::resonance::{self, SingularEnumeration, SingularFamily};
use jc_control::Error;

/// Status code returned by every FFI function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JccStatus {
    /// Success; all out parameters are valid.
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Model parameters out of range (e.g. ω ≤ 0 or Ω ≤ 0).
    InvalidParams = 2,
    /// Level index out of range (n < −1, or ν invalid for the level).
    InvalidLevel = 3,
    /// Argument outside the domain of the requested computation.
    Domain = 4,
    /// A computation produced a non-finite value.
    NonFinite = 5,
    /// The caller-provided buffer was too small; nothing was written.
    BufferTooSmall = 6,
    /// An internal panic was caught at the FFI boundary.
    Panic = 7,
}

/// Verdict of chain certification.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JccVerdict {
    /// Connected chain, no frequency coincidences, no coupled degeneracies.
    CertifiedNonResonant = 0,
    /// Some chain transition frequency coincides with another coupled one.
    ResonanceFound = 1,
    /// Chain disconnected, dead edge, or coupled degenerate levels.
    CouplingBroken = 2,
}

/// Equation family that produced a singular coupling value.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JccFamily {
    /// g = 0.
    Zero = 0,
    /// Eigenvalue crossing with the next (n+1, −) level.
    CritEig = 1,
    /// 2ω = f_{m+1} + f_m − f_{n+1} + f_n.
    OnePlusC = 2,
    /// 2ω = f_{m+1} − f_m − f_{n+1} + f_n.
    OneD = 3,
    /// 2ω = f_{m+1} + f_m − f_{n+1} − f_n.
    TwoC = 4,
}

/// Opaque handle to a validated (ω, Ω, g) parameter set.
pub struct JccParams(ModelParams);

/// Opaque handle to an enumeration of the singular coupling set.
pub struct JccSingularList(SingularEnumeration);

fn status_of(err: &Error) -> JccStatus {
    match err {
        Error::InvalidParams(_) => JccStatus::InvalidParams,
        Error::InvalidLevel(_) => JccStatus::InvalidLevel,
        Error::Domain(_) | Error::Parse(_) | Error::Dimension(_) => JccStatus::Domain,
        Error::NonFinite(_) => JccStatus::NonFinite,
        Error::Io(_) => JccStatus::Domain,
    }
}

/// Runs `body` with panics converted to `JCC_STATUS_PANIC`.
fn guarded(body: impl FnOnce() -> JccStatus) -> JccStatus {
    catch_unwind(AssertUnwindSafe(body)).unwrap_or(JccStatus::Panic)
}

/// Converts a ±1 integer into a branch sign.
fn sign_of(nu: c_int) -> Result<Sign, JccStatus> {
    match nu {
        1 => Ok(Sign::Plus),
        -1 => Ok(Sign::Minus),
        _ => Err(JccStatus::InvalidLevel),
    }
}

fn level_of(params: &ModelParams, n: c_int, nu: c_int) -> Result<LevelIndex, JccStatus> {
    if n == -1 {
        return Ok(LevelIndex::spurious(params));
    }
    let level = LevelIndex::new(n, sign_of(nu)?).map_err(|e| status_of(&e))?;
    level.validate(params).map_err(|e| status_of(&e))?;
    Ok(level)
}

fn family_of(family: JccFamily) -> SingularFamily {
    match family {
        JccFamily::Zero => SingularFamily::Zero,
        JccFamily::CritEig => SingularFamily::CritEig,
        JccFamily::OnePlusC => SingularFamily::OnePlusC,
        JccFamily::OneD => SingularFamily::OneD,
        JccFamily::TwoC => SingularFamily::TwoC,
    }
}

fn family_code(family: SingularFamily) -> JccFamily {
    match family {
        SingularFamily::Zero => JccFamily::Zero,
        SingularFamily::CritEig => JccFamily::CritEig,
        SingularFamily::OnePlusC => JccFamily::OnePlusC,
        SingularFamily::OneD => JccFamily::OneD,
        SingularFamily::TwoC => JccFamily::TwoC,
    }
}

macro_rules! nonnull {
    ($($ptr:expr),+) => {
        if $($ptr.is_null())||+ {
            return JccStatus::NullPointer;
        }
    };
}

/// Allocates a parameter handle for mode frequency `omega`, qubit frequency
/// `capital_omega`, and coupling `g`. On success writes the handle to `out`;
/// release it with `jcc_params_free`.
#[no_mangle]
pub extern "C" fn jcc_params_new(
    omega: f64,
    capital_omega: f64,
    g: f64,
    out: *mut *mut JccParams,
) -> JccStatus {
    nonnull!(out);
    guarded(|| match ModelParams::new(omega, capital_omega, g) {
        Ok(p) => {
            unsafe { *out = Box::into_raw(Box::new(JccParams(p))) };
            JccStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Releases a handle from `jcc_params_new`. Null is a no-op.
#[no_mangle]
pub extern "C" fn jcc_params_free(params: *mut JccParams) {
    if !params.is_null() {
        drop(unsafe { Box::from_raw(params) });
    }
}

/// Writes the detuning Δ = Ω − ω.
#[no_mangle]
pub extern "C" fn jcc_detuning(params: *const JccParams, out: *mut f64) -> JccStatus {
    nonnull!(params, out);
    guarded(|| {
        unsafe { *out = (*params).0.detuning() };
        JccStatus::Ok
    })
}

/// Writes the half-gap frequency f_n = √(Δ² + 4g²(n+1)) / 2, n ≥ −1.
#[no_mangle]
pub extern "C" fn jcc_f(params: *const JccParams, n: c_int, out: *mut f64) -> JccStatus {
    nonnull!(params, out);
    guarded(|| match model::f(unsafe { &(*params).0 }, n) {
        Ok(v) => {
            unsafe { *out = v };
            JccStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Writes the dressed energy of level (n, ν). `nu` is +1 or −1; it is
/// ignored for the spurious level n = −1.
#[no_mangle]
pub extern "C" fn jcc_energy(
    params: *const JccParams,
    n: c_int,
    nu: c_int,
    out: *mut f64,
) -> JccStatus {
    nonnull!(params, out);
    guarded(|| {
        let p = unsafe { &(*params).0 };
        let level = match level_of(p, n, nu) {
            Ok(l) => l,
            Err(s) => return s,
        };
        match model::energy(p, level, Labeling::Magnitude) {
            Ok(v) => {
                unsafe { *out = v };
                JccStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Writes the mixing angle θ_n and its cosine/sine halves (c_n, s_n).
/// Any of the three out pointers may be null to skip that value.
#[no_mangle]
pub extern "C" fn jcc_mixing(
    params: *const JccParams,
    n: c_int,
    theta: *mut f64,
    c: *mut f64,
    s: *mut f64,
) -> JccStatus {
    nonnull!(params);
    guarded(|| match model::mixing(unsafe { &(*params).0 }, n) {
        Ok(mix) => {
            if !theta.is_null() {
                unsafe { *theta = mix.theta };
            }
            if !c.is_null() {
                unsafe { *c = mix.c };
            }
            if !s.is_null() {
                unsafe { *s = mix.s };
            }
            JccStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Writes the dressed-basis matrix element of the first control (X⊗1)
/// between levels (na, nua) and (nb, nub).
#[no_mangle]
pub extern "C" fn jcc_h1_element(
    params: *const JccParams,
    na: c_int,
    nua: c_int,
    nb: c_int,
    nub: c_int,
    out: *mut f64,
) -> JccStatus {
    nonnull!(params, out);
    guarded(|| {
        let p = unsafe { &(*params).0 };
        let (a, b) = match (level_of(p, na, nua), level_of(p, nb, nub)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        match coupling::h1_element(p, a, b) {
            Ok(v) => {
                unsafe { *out = v };
                JccStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Writes the complex matrix element of the second control (P⊗1) as
/// (re, im). It is purely imaginary: i times the first control's element,
/// oriented toward the higher block.
#[no_mangle]
pub extern "C" fn jcc_h2_element(
    params: *const JccParams,
    na: c_int,
    nua: c_int,
    nb: c_int,
    nub: c_int,
    re: *mut f64,
    im: *mut f64,
) -> JccStatus {
    nonnull!(params, re, im);
    guarded(|| {
        let p = unsafe { &(*params).0 };
        let (a, b) = match (level_of(p, na, nua), level_of(p, nb, nub)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(s), _) | (_, Err(s)) => return s,
        };
        match coupling::h2_element(p, a, b) {
            Ok(v) => {
                unsafe {
                    *re = v.re;
                    *im = v.im;
                }
                JccStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// First-order crossing point of level (n, ν) with (n+1, −). Writes
/// `found` = true and the non-negative root to `g_star` when the levels
/// cross; `found` = false (g_star untouched) otherwise.
#[no_mangle]
pub extern "C" fn jcc_g1_crossing(
    params: *const JccParams,
    n: c_int,
    nu: c_int,
    found: *mut bool,
    g_star: *mut f64,
) -> JccStatus {
    nonnull!(params, found, g_star);
    guarded(|| {
        let p = unsafe { &(*params).0 };
        let level = match level_of(p, n, nu) {
            Ok(l) => l,
            Err(s) => return s,
        };
        match resonance::g1_crossing(p, level) {
            Ok(root) => {
                unsafe {
                    *found = root.is_some();
                    if let Some(g) = root {
                        *g_star = g;
                    }
                }
                JccStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Second-order crossing point of level (n, ν) with (n+2, −); same contract
/// as `jcc_g1_crossing`. These crossings are benign (the coupling between
/// the crossing levels vanishes identically).
#[no_mangle]
pub extern "C" fn jcc_g2_crossing(
    params: *const JccParams,
    n: c_int,
    nu: c_int,
    found: *mut bool,
    g_star: *mut f64,
) -> JccStatus {
    nonnull!(params, found, g_star);
    guarded(|| {
        let p = unsafe { &(*params).0 };
        let level = match level_of(p, n, nu) {
            Ok(l) => l,
            Err(s) => return s,
        };
        match resonance::g2_crossing(p, level) {
            Ok(root) => {
                unsafe {
                    *found = root.is_some();
                    if let Some(g) = root {
                        *g_star = g;
                    }
                }
                JccStatus::Ok
            }
            Err(e) => status_of(&e),
        }
    })
}

/// Solves the resonance equation of `family` for indices (m, n), writing up
/// to `cap` non-negative roots (ascending) into `roots` and the total count
/// into `written`. Returns `JCC_STATUS_BUFFER_TOO_SMALL` (with `written` set
/// to the required count) when `cap` is insufficient.
#[no_mangle]
pub extern "C" fn jcc_solve_s2(
    omega: f64,
    capital_omega: f64,
    family: JccFamily,
    m: c_int,
    n: c_int,
    roots: *mut f64,
    cap: usize,
    written: *mut usize,
) -> JccStatus {
    nonnull!(written);
    if cap > 0 && roots.is_null() {
        return JccStatus::NullPointer;
    }
    guarded(|| match resonance::solve_s2(omega, capital_omega, family_of(family), m, n) {
        Ok(found) => {
            unsafe { *written = found.len() };
            if found.len() > cap {
                return JccStatus::BufferTooSmall;
            }
            for (i, g) in found.iter().enumerate() {
                unsafe { *roots.add(i) = *g };
            }
            JccStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Enumerates the singular coupling set on [0, g_max] with all level and
/// family indices capped at `n_cap`. Release the handle with
/// `jcc_singular_free`.
#[no_mangle]
pub extern "C" fn jcc_singular_enumerate(
    omega: f64,
    capital_omega: f64,
    g_max: f64,
    n_cap: c_int,
    out: *mut *mut JccSingularList,
) -> JccStatus {
    nonnull!(out);
    guarded(|| match resonance::enumerate_singular(omega, capital_omega, g_max, n_cap) {
        Ok(e) => {
            unsafe { *out = Box::into_raw(Box::new(JccSingularList(e))) };
            JccStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Writes the number of distinct singular points in the list.
#[no_mangle]
pub extern "C" fn jcc_singular_len(list: *const JccSingularList, out: *mut usize) -> JccStatus {
    nonnull!(list, out);
    guarded(|| {
        unsafe { *out = (*list).0.points.len() };
        JccStatus::Ok
    })
}

/// Writes the `idx`-th singular point (ascending in g): its location
/// `g_star`, the equation family of its first witness, and how many
/// witnesses it has. `family` and `tag_count` may be null to skip them.
#[no_mangle]
pub extern "C" fn jcc_singular_get(
    list: *const JccSingularList,
    idx: usize,
    g_star: *mut f64,
    family: *mut JccFamily,
    tag_count: *mut usize,
) -> JccStatus {
    nonnull!(list, g_star);
    guarded(|| {
        let points = unsafe { &(*list).0.points };
        let Some(point) = points.get(idx) else {
            return JccStatus::Domain;
        };
        unsafe {
            *g_star = point.g_star;
            if !family.is_null() {
                *family = family_code(point.tags[0].family);
            }
            if !tag_count.is_null() {
                *tag_count = point.tags.len();
            }
        }
        JccStatus::Ok
    })
}

/// Writes whether the index cap provably truncated the enumeration (larger
/// indices would contribute further points inside [0, g_max]).
#[no_mangle]
pub extern "C" fn jcc_singular_may_truncate(
    list: *const JccSingularList,
    out: *mut bool,
) -> JccStatus {
    nonnull!(list, out);
    guarded(|| {
        unsafe { *out = (*list).0.may_truncate };
        JccStatus::Ok
    })
}

/// Releases a handle from `jcc_singular_enumerate`. Null is a no-op.
#[no_mangle]
pub extern "C" fn jcc_singular_free(list: *mut JccSingularList) {
    if !list.is_null() {
        drop(unsafe { Box::from_raw(list) });
    }
}

/// Certifies the transition chain at the handle's coupling, truncated at
/// `n_max`: connectivity, frequency coincidences within `tol`, and coupled
/// degeneracies. Edge amplitudes at or below `threshold` count as broken;
/// pass a negative `threshold` for the library default.
#[no_mangle]
pub extern "C" fn jcc_certify(
    params: *const JccParams,
    n_max: c_int,
    tol: f64,
    threshold: f64,
    verdict: *mut JccVerdict,
) -> JccStatus {
    nonnull!(params, verdict);
    let threshold = if threshold < 0.0 { chain::DEFAULT_THRESHOLD } else { threshold };
    guarded(|| match chain::certify(unsafe { &(*params).0 }, n_max, tol, threshold) {
        Ok(report) => {
            unsafe {
                *verdict = match report.verdict {
                    Verdict::CertifiedNonResonant => JccVerdict::CertifiedNonResonant,
                    Verdict::ResonanceFound => JccVerdict::ResonanceFound,
                    Verdict::CouplingBroken => JccVerdict::CouplingBroken,
                };
            }
            JccStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Like `jcc_certify`, but writes the full report as a NUL-terminated JSON
/// string (same schema as the `jcctl certify` command). Release the string
/// with `jcc_string_free`.
#[no_mangle]
pub extern "C" fn jcc_certify_json(
    params: *const JccParams,
    n_max: c_int,
    tol: f64,
    threshold: f64,
    out: *mut *mut c_char,
) -> JccStatus {
    nonnull!(params, out);
    let threshold = if threshold < 0.0 { chain::DEFAULT_THRESHOLD } else { threshold };
    guarded(|| match chain::certify(unsafe { &(*params).0 }, n_max, tol, threshold) {
        Ok(report) => {
            let json = serde_json::to_string_pretty(&report).expect("report serializes");
            let cstr = CString::new(json).expect("JSON has no interior NUL");
            unsafe { *out = cstr.into_raw() };
            JccStatus::Ok
        }
        Err(e) => status_of(&e),
    })
}

/// Releases a string returned by this library. Null is a no-op.
#[no_mangle]
pub extern "C" fn jcc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
