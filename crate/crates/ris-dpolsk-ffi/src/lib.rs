//! C ABI for the `ris-dpolsk` library: opaque scenario handles, status-code
//! returns, and flat result structs so other languages can bind without
//! knowing any Rust.
//!
//! Conventions, applied uniformly:
//!
//! - Fallible calls return [`RisDpolskStatus`]; results are written through
//!   out-pointers only when the status is `RIS_DPOLSK_STATUS_OK`.
//! - A failing call stores a human-readable message in thread-local storage;
//!   retrieve it with [`ris_dpolsk_last_error`].
//! - Every entry point catches panics and reports them as a `Panic` status
//!   instead of unwinding across the ABI.
//! - Handles returned by the constructors must be released exactly once with
//!   [`ris_dpolsk_scenario_free`].
//!
//! The matching C header is generated into `include/ris_dpolsk.h` by the
//! build script and committed alongside the crate.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use ris_dpolsk::channel::link_budget;
use ris_dpolsk::config::ConfigFile;
use ris_dpolsk::simulation::{self, RunSpec, Scheme};
use ris_dpolsk::theory;
use ris_dpolsk::{Error, QuadratureSpec, Scenario};

/// Outcome of a C-ABI call.
#[repr(C)]
#[derive(Clone, Copy, Debug, Eq, PartialEq)]
pub enum RisDpolskStatus {
    /// The call succeeded and all out-pointers were written.
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// An argument or configuration failed validation; see
    /// `ris_dpolsk_last_error` for the field and reason.
    InvalidArgument = 2,
    /// A numerical routine failed to converge or was evaluated outside its
    /// domain.
    NumericalError = 3,
    /// An internal invariant was violated; the call was aborted safely.
    Panic = 4,
}

/// Modulation scheme selector for `ris_dpolsk_run`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Eq, PartialEq)]
pub enum RisDpolskScheme {
    /// Differential polarization keying, non-coherent Stokes-space detection.
    Dpolsk = 0,
    /// Coherent polarization keying; the receiver de-rotates with its
    /// (possibly erroneous) rotation estimate.
    Cpolsk = 1,
}

impl From<RisDpolskScheme> for Scheme {
    fn from(s: RisDpolskScheme) -> Self {
        match s {
            RisDpolskScheme::Dpolsk => Scheme::Dpolsk,
            RisDpolskScheme::Cpolsk => Scheme::Cpolsk,
        }
    }
}

/// Opaque handle to a fully validated link scenario.
pub struct RisDpolskScenario {
    inner: Scenario,
}

/// One Monte Carlo result row: the operating point, the simulated bit error
/// rate with its 95 % Wilson confidence interval, and the matching
/// theoretical value.
#[repr(C)]
#[derive(Clone, Copy, Debug)]
pub struct RisDpolskBerResult {
    /// Total reflecting surface area in square meters.
    pub area_m2: f64,
    /// Number of reflecting units.
    pub num_units: usize,
    /// Average received SNR (linear).
    pub gamma_linear: f64,
    /// Average received SNR (dB).
    pub gamma_db: f64,
    /// errors_count / trials.
    pub ber_simulated: f64,
    /// Number of bit errors observed.
    pub errors_count: u64,
    /// Number of data bits simulated.
    pub trials: u64,
    /// Lower edge of the 95 % Wilson interval.
    pub ci_low: f64,
    /// Upper edge of the 95 % Wilson interval.
    pub ci_high: f64,
    /// Theoretical bit error rate of the chosen scheme at this SNR.
    pub ber_theory: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_last_error(msg: impl Into<String>) {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = msg.into());
}

/// Maps a library error onto the coarse C status taxonomy: numerical
/// failures (non-convergence, domain) keep their own code, everything else
/// is an invalid argument.
fn status_for(e: &Error) -> RisDpolskStatus {
    match e.exit_code() {
        2 => RisDpolskStatus::NumericalError,
        _ => RisDpolskStatus::InvalidArgument,
    }
}

fn fail(status: RisDpolskStatus, msg: impl Into<String>) -> RisDpolskStatus {
    set_last_error(msg);
    status
}

fn fail_with(e: &Error) -> RisDpolskStatus {
    fail(status_for(e), e.to_string())
}

/// Runs `f`, converting any panic into a `Panic` status with the panic
/// payload recorded as the last error. Nothing unwinds past this point.
fn guarded(f: impl FnOnce() -> RisDpolskStatus) -> RisDpolskStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".to_string());
            fail(RisDpolskStatus::Panic, format!("internal panic: {msg}"))
        }
    }
}

/// Copies the message of the calling thread's most recent failure into
/// `buf` (NUL-terminated, truncated to fit `len` bytes) and returns the
/// full message length in bytes, excluding the terminator. Call with a null
/// `buf` or zero `len` to query the required size. The message is empty
/// until a call on this thread fails.
///
/// # Safety
///
/// If `buf` is non-null it must point to at least `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn ris_dpolsk_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|slot| {
        let msg = slot.borrow();
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            std::ptr::copy_nonoverlapping(bytes.as_ptr(), buf as *mut u8, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Returns the library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ris_dpolsk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Creates a scenario with the library's reference configuration (the same
/// defaults the CLI uses when no config file is given). Returns null only
/// if construction fails internally; free with `ris_dpolsk_scenario_free`.
#[no_mangle]
pub extern "C" fn ris_dpolsk_scenario_default() -> *mut RisDpolskScenario {
    let built = catch_unwind(|| {
        ConfigFile::default()
            .to_scenario()
            .map(|inner| Box::into_raw(Box::new(RisDpolskScenario { inner })))
    });
    match built {
        Ok(Ok(ptr)) => ptr,
        Ok(Err(e)) => {
            set_last_error(e.to_string());
            std::ptr::null_mut()
        }
        Err(_) => {
            set_last_error("internal panic while building the default scenario");
            std::ptr::null_mut()
        }
    }
}

/// Parses a scenario from a NUL-terminated JSON document using the same
/// schema as the CLI config file (unknown keys are rejected; omitted fields
/// take their defaults) and writes a new handle to `out` on success.
///
/// # Safety
///
/// `json` must be a valid NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ris_dpolsk_scenario_from_json(
    json: *const c_char,
    out: *mut *mut RisDpolskScenario,
) -> RisDpolskStatus {
    guarded(|| {
        if json.is_null() {
            return fail(RisDpolskStatus::NullArgument, "json must not be null");
        }
        if out.is_null() {
            return fail(RisDpolskStatus::NullArgument, "out must not be null");
        }
        let text = match CStr::from_ptr(json).to_str() {
            Ok(t) => t,
            Err(_) => {
                return fail(RisDpolskStatus::InvalidArgument, "json must be valid UTF-8")
            }
        };
        let config: ConfigFile = match serde_json::from_str(text) {
            Ok(c) => c,
            Err(e) => return fail(RisDpolskStatus::InvalidArgument, format!("config: {e}")),
        };
        match config.to_scenario() {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(RisDpolskScenario { inner }));
                RisDpolskStatus::Ok
            }
            Err(e) => fail_with(&e),
        }
    })
}

/// Releases a scenario handle. Passing null is a no-op; passing the same
/// handle twice is undefined behavior.
///
/// # Safety
///
/// `scenario` must be null or a handle obtained from this library that has
/// not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn ris_dpolsk_scenario_free(scenario: *mut RisDpolskScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}

/// Writes the scenario's number of reflecting units to `out`.
///
/// # Safety
///
/// `scenario` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ris_dpolsk_scenario_num_units(
    scenario: *const RisDpolskScenario,
    out: *mut usize,
) -> RisDpolskStatus {
    guarded(|| {
        if scenario.is_null() {
            return fail(RisDpolskStatus::NullArgument, "scenario must not be null");
        }
        if out.is_null() {
            return fail(RisDpolskStatus::NullArgument, "out must not be null");
        }
        *out = (*scenario).inner.num_units();
        RisDpolskStatus::Ok
    })
}

/// Writes the scenario's total reflecting surface area (m²) to `out`.
///
/// # Safety
///
/// `scenario` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ris_dpolsk_scenario_area(
    scenario: *const RisDpolskScenario,
    out: *mut f64,
) -> RisDpolskStatus {
    guarded(|| {
        if scenario.is_null() {
            return fail(RisDpolskStatus::NullArgument, "scenario must not be null");
        }
        if out.is_null() {
            return fail(RisDpolskStatus::NullArgument, "out must not be null");
        }
        *out = (*scenario).inner.ris_area();
        RisDpolskStatus::Ok
    })
}

/// Computes the scenario's average received SNR (linear) from its link
/// budget and writes it to `out`. The value is infinite for a noiseless
/// scenario with nonzero signal.
///
/// # Safety
///
/// `scenario` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ris_dpolsk_scenario_snr(
    scenario: *const RisDpolskScenario,
    out: *mut f64,
) -> RisDpolskStatus {
    guarded(|| {
        if scenario.is_null() {
            return fail(RisDpolskStatus::NullArgument, "scenario must not be null");
        }
        if out.is_null() {
            return fail(RisDpolskStatus::NullArgument, "out must not be null");
        }
        match link_budget(&(*scenario).inner) {
            Ok(budget) => {
                *out = budget.gamma;
                RisDpolskStatus::Ok
            }
            Err(e) => fail_with(&e),
        }
    })
}

/// Rescales the scenario's transmit power in place so its average received
/// SNR (linear) equals `gamma` exactly.
///
/// # Safety
///
/// `scenario` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn ris_dpolsk_scenario_set_target_snr(
    scenario: *mut RisDpolskScenario,
    gamma: f64,
) -> RisDpolskStatus {
    guarded(|| {
        if scenario.is_null() {
            return fail(RisDpolskStatus::NullArgument, "scenario must not be null");
        }
        match simulation::with_target_snr(&(*scenario).inner, gamma) {
            Ok(rescaled) => {
                (*scenario).inner = rescaled;
                RisDpolskStatus::Ok
            }
            Err(e) => fail_with(&e),
        }
    })
}

/// Writes the theoretical bit error rate of the coherent scheme at linear
/// SNR `gamma` to `out`.
///
/// # Safety
///
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ris_dpolsk_cpolsk_ber(gamma: f64, out: *mut f64) -> RisDpolskStatus {
    guarded(|| {
        if out.is_null() {
            return fail(RisDpolskStatus::NullArgument, "out must not be null");
        }
        if !(gamma >= 0.0) {
            return fail(
                RisDpolskStatus::InvalidArgument,
                format!("SNR must be nonnegative, got {gamma}"),
            );
        }
        *out = theory::cpolsk_ber(gamma);
        RisDpolskStatus::Ok
    })
}

/// Writes the theoretical bit error rate of the differential scheme at
/// linear SNR `gamma` to `out`, evaluating the closed-form double integral
/// with adaptive quadrature. Pass 0 for `rel_tol`, `abs_tol`, or
/// `max_depth` to use the defaults (1e-9, 1e-12, 50).
///
/// # Safety
///
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ris_dpolsk_dpolsk_ber(
    gamma: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_depth: u32,
    out: *mut f64,
) -> RisDpolskStatus {
    guarded(|| {
        if out.is_null() {
            return fail(RisDpolskStatus::NullArgument, "out must not be null");
        }
        if !(gamma >= 0.0) {
            return fail(
                RisDpolskStatus::InvalidArgument,
                format!("SNR must be nonnegative, got {gamma}"),
            );
        }
        let defaults = QuadratureSpec::default();
        let spec = QuadratureSpec {
            rel_tol: if rel_tol == 0.0 { defaults.rel_tol } else { rel_tol },
            abs_tol: if abs_tol == 0.0 { defaults.abs_tol } else { abs_tol },
            max_depth: if max_depth == 0 { defaults.max_depth } else { max_depth },
        };
        match theory::dpolsk_ber(gamma, &spec) {
            Ok(value) => {
                *out = value;
                RisDpolskStatus::Ok
            }
            Err(e) => fail_with(&e),
        }
    })
}

/// Runs a Monte Carlo simulation of `num_bits` data bits over the scenario
/// with the chosen scheme and writes the result row to `out`. `master_seed`
/// fixes every random draw, so equal inputs give bit-identical results
/// regardless of thread count. `sigma_e` is the standard deviation (rad) of
/// the receiver's rotation-estimate error, consumed only by the coherent
/// scheme; `sigma_e_per_burst` draws that error once per run instead of per
/// slot. `d_init` sets the differential reference bit carried by the pilot
/// slot.
///
/// # Safety
///
/// `scenario` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ris_dpolsk_run(
    scenario: *const RisDpolskScenario,
    scheme: RisDpolskScheme,
    num_bits: u64,
    master_seed: u64,
    sigma_e: f64,
    sigma_e_per_burst: bool,
    d_init: bool,
    out: *mut RisDpolskBerResult,
) -> RisDpolskStatus {
    guarded(|| {
        if scenario.is_null() {
            return fail(RisDpolskStatus::NullArgument, "scenario must not be null");
        }
        if out.is_null() {
            return fail(RisDpolskStatus::NullArgument, "out must not be null");
        }
        let spec = RunSpec {
            scheme: Scheme::from(scheme),
            scenario: (*scenario).inner.clone(),
            num_bits,
            master_seed,
            sigma_e,
            sigma_e_per_burst,
            d_init,
        };
        match simulation::run(&spec) {
            Ok(record) => {
                *out = RisDpolskBerResult {
                    area_m2: record.area_m2,
                    num_units: record.num_units,
                    gamma_linear: record.gamma_linear,
                    gamma_db: record.gamma_db,
                    ber_simulated: record.ber_simulated,
                    errors_count: record.errors_count,
                    trials: record.trials,
                    ci_low: record.ci_low,
                    ci_high: record.ci_high,
                    ber_theory: record.ber_theory,
                };
                RisDpolskStatus::Ok
            }
            Err(e) => fail_with(&e),
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The panic guard converts unwinds into a status and records the
    /// payload, without propagating.
    #[test]
    fn guarded_catches_panics() {
        let prev = std::panic::take_hook();
        std::panic::set_hook(Box::new(|_| {})); // keep test output clean
        let status = guarded(|| panic!("boom {}", 42));
        std::panic::set_hook(prev);
        assert_eq!(status, RisDpolskStatus::Panic);
        let mut buf = vec![0u8; 64];
        let n = unsafe { ris_dpolsk_last_error(buf.as_mut_ptr() as *mut c_char, buf.len()) };
        let msg = std::str::from_utf8(&buf[..n]).unwrap();
        assert_eq!(msg, "internal panic: boom 42");
    }

    /// Library errors map onto the coarse C taxonomy by failure kind.
    #[test]
    fn status_mapping_follows_error_kind() {
        let validation = Error::validation("x", "bad");
        assert_eq!(status_for(&validation), RisDpolskStatus::InvalidArgument);
        let domain = Error::Domain { what: "x".into() };
        assert_eq!(status_for(&domain), RisDpolskStatus::NumericalError);
    }
}
