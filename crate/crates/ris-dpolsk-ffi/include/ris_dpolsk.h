#ifndef RIS_DPOLSK_H
#define RIS_DPOLSK_H

/* Generated by cbindgen from the ris-dpolsk-ffi crate. Do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of a C-ABI call.
typedef enum RisDpolskStatus {
  // The call succeeded and all out-pointers were written.
  RIS_DPOLSK_STATUS_OK = 0,
  // A required pointer argument was null.
  RIS_DPOLSK_STATUS_NULL_ARGUMENT = 1,
  // An argument or configuration failed validation; see
  // `ris_dpolsk_last_error` for the field and reason.
  RIS_DPOLSK_STATUS_INVALID_ARGUMENT = 2,
  // A numerical routine failed to converge or was evaluated outside its
  // domain.
  RIS_DPOLSK_STATUS_NUMERICAL_ERROR = 3,
  // An internal invariant was violated; the call was aborted safely.
  RIS_DPOLSK_STATUS_PANIC = 4,
} RisDpolskStatus;

// Modulation scheme selector for `ris_dpolsk_run`.
typedef enum RisDpolskScheme {
  // Differential polarization keying, non-coherent Stokes-space detection.
  RIS_DPOLSK_SCHEME_DPOLSK = 0,
  // Coherent polarization keying; the receiver de-rotates with its
  // (possibly erroneous) rotation estimate.
  RIS_DPOLSK_SCHEME_CPOLSK = 1,
} RisDpolskScheme;

// Opaque handle to a fully validated link scenario.
typedef struct RisDpolskScenario RisDpolskScenario;

// One Monte Carlo result row: the operating point, the simulated bit error
// rate with its 95 % Wilson confidence interval, and the matching
// theoretical value.
typedef struct RisDpolskBerResult {
  // Total reflecting surface area in square meters.
  double area_m2;
  // Number of reflecting units.
  size_t num_units;
  // Average received SNR (linear).
  double gamma_linear;
  // Average received SNR (dB).
  double gamma_db;
  // errors_count / trials.
  double ber_simulated;
  // Number of bit errors observed.
  uint64_t errors_count;
  // Number of data bits simulated.
  uint64_t trials;
  // Lower edge of the 95 % Wilson interval.
  double ci_low;
  // Upper edge of the 95 % Wilson interval.
  double ci_high;
  // Theoretical bit error rate of the chosen scheme at this SNR.
  double ber_theory;
} RisDpolskBerResult;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the message of the calling thread's most recent failure into
// `buf` (NUL-terminated, truncated to fit `len` bytes) and returns the
// full message length in bytes, excluding the terminator. Call with a null
// `buf` or zero `len` to query the required size. The message is empty
// until a call on this thread fails.
//
// # Safety
//
// If `buf` is non-null it must point to at least `len` writable bytes.
size_t ris_dpolsk_last_error(char *buf, size_t len);

// Returns the library version as a static NUL-terminated string.
const char *ris_dpolsk_version(void);

// Creates a scenario with the library's reference configuration (the same
// defaults the CLI uses when no config file is given). Returns null only
// if construction fails internally; free with `ris_dpolsk_scenario_free`.
struct RisDpolskScenario *ris_dpolsk_scenario_default(void);

// Parses a scenario from a NUL-terminated JSON document using the same
// schema as the CLI config file (unknown keys are rejected; omitted fields
// take their defaults) and writes a new handle to `out` on success.
//
// # Safety
//
// `json` must be a valid NUL-terminated string and `out` a valid pointer.
enum RisDpolskStatus ris_dpolsk_scenario_from_json(const char *json,
                                                   struct RisDpolskScenario **out);

// Releases a scenario handle. Passing null is a no-op; passing the same
// handle twice is undefined behavior.
//
// # Safety
//
// `scenario` must be null or a handle obtained from this library that has
// not been freed yet.
void ris_dpolsk_scenario_free(struct RisDpolskScenario *scenario);

// Writes the scenario's number of reflecting units to `out`.
//
// # Safety
//
// `scenario` must be a live handle and `out` a valid pointer.
enum RisDpolskStatus ris_dpolsk_scenario_num_units(const struct RisDpolskScenario *scenario,
                                                   size_t *out);

// Writes the scenario's total reflecting surface area (m²) to `out`.
//
// # Safety
//
// `scenario` must be a live handle and `out` a valid pointer.
enum RisDpolskStatus ris_dpolsk_scenario_area(const struct RisDpolskScenario *scenario,
                                              double *out);

// Computes the scenario's average received SNR (linear) from its link
// budget and writes it to `out`. The value is infinite for a noiseless
// scenario with nonzero signal.
//
// # Safety
//
// `scenario` must be a live handle and `out` a valid pointer.
enum RisDpolskStatus ris_dpolsk_scenario_snr(const struct RisDpolskScenario *scenario, double *out);

// Rescales the scenario's transmit power in place so its average received
// SNR (linear) equals `gamma` exactly.
//
// # Safety
//
// `scenario` must be a live handle.
enum RisDpolskStatus ris_dpolsk_scenario_set_target_snr(struct RisDpolskScenario *scenario,
                                                        double gamma);

// Writes the theoretical bit error rate of the coherent scheme at linear
// SNR `gamma` to `out`.
//
// # Safety
//
// `out` must be a valid pointer.
enum RisDpolskStatus ris_dpolsk_cpolsk_ber(double gamma, double *out);

// Writes the theoretical bit error rate of the differential scheme at
// linear SNR `gamma` to `out`, evaluating the closed-form double integral
// with adaptive quadrature. Pass 0 for `rel_tol`, `abs_tol`, or
// `max_depth` to use the defaults (1e-9, 1e-12, 50).
//
// # Safety
//
// `out` must be a valid pointer.
enum RisDpolskStatus ris_dpolsk_dpolsk_ber(double gamma,
                                           double rel_tol,
                                           double abs_tol,
                                           uint32_t max_depth,
                                           double *out);

// Runs a Monte Carlo simulation of `num_bits` data bits over the scenario
// with the chosen scheme and writes the result row to `out`. `master_seed`
// fixes every random draw, so equal inputs give bit-identical results
// regardless of thread count. `sigma_e` is the standard deviation (rad) of
// the receiver's rotation-estimate error, consumed only by the coherent
// scheme; `sigma_e_per_burst` draws that error once per run instead of per
// slot. `d_init` sets the differential reference bit carried by the pilot
// slot.
//
// # Safety
//
// `scenario` must be a live handle and `out` a valid pointer.
enum RisDpolskStatus ris_dpolsk_run(const struct RisDpolskScenario *scenario,
                                    enum RisDpolskScheme scheme,
                                    uint64_t num_bits,
                                    uint64_t master_seed,
                                    double sigma_e,
                                    bool sigma_e_per_burst,
                                    bool d_init,
                                    struct RisDpolskBerResult *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RIS_DPOLSK_H */
