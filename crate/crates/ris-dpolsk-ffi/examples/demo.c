/* Minimal C consumer of the ris-dpolsk C ABI.
 *
 * Build (from the workspace root, after `cargo build -p ris-dpolsk-ffi`):
 *
 *   gcc -std=c99 -Wall -Wextra -Werror \
 *       -Icrates/ris-dpolsk-ffi/include \
 *       crates/ris-dpolsk-ffi/examples/demo.c \
 *       -Ltarget/debug -lris_dpolsk_ffi -lm \
 *       -o demo
 *   LD_LIBRARY_PATH=target/debug ./demo
 */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>

#include "ris_dpolsk.h"

static void die(const char *what) {
  char msg[256];
  ris_dpolsk_last_error(msg, sizeof msg);
  fprintf(stderr, "%s failed: %s\n", what, msg);
  exit(1);
}

int main(void) {
  printf("library version: %s\n", ris_dpolsk_version());

  RisDpolskScenario *scenario = ris_dpolsk_scenario_default();
  if (scenario == NULL) die("ris_dpolsk_scenario_default");

  size_t units = 0;
  double area = 0.0, snr = 0.0;
  if (ris_dpolsk_scenario_num_units(scenario, &units) != RIS_DPOLSK_STATUS_OK)
    die("ris_dpolsk_scenario_num_units");
  if (ris_dpolsk_scenario_area(scenario, &area) != RIS_DPOLSK_STATUS_OK)
    die("ris_dpolsk_scenario_area");
  if (ris_dpolsk_scenario_snr(scenario, &snr) != RIS_DPOLSK_STATUS_OK)
    die("ris_dpolsk_scenario_snr");
  printf("default scenario: %zu units, %.4f m^2, snr %.3f dB\n", units, area,
         10.0 * log10(snr));

  /* Pin the operating point and simulate both schemes. */
  const double gamma = 10.0; /* linear, i.e. 10 dB */
  if (ris_dpolsk_scenario_set_target_snr(scenario, gamma) != RIS_DPOLSK_STATUS_OK)
    die("ris_dpolsk_scenario_set_target_snr");

  RisDpolskBerResult row;
  if (ris_dpolsk_run(scenario, RIS_DPOLSK_SCHEME_DPOLSK, 2000000, 42, 0.0,
                     false, true, &row) != RIS_DPOLSK_STATUS_OK)
    die("ris_dpolsk_run");
  printf("dpolsk: ber %.4e (theory %.4e), %llu errors in %llu bits\n",
         row.ber_simulated, row.ber_theory,
         (unsigned long long)row.errors_count, (unsigned long long)row.trials);

  if (ris_dpolsk_run(scenario, RIS_DPOLSK_SCHEME_CPOLSK, 2000000, 42, 0.0,
                     false, true, &row) != RIS_DPOLSK_STATUS_OK)
    die("ris_dpolsk_run");
  printf("cpolsk: ber %.4e (theory %.4e), %llu errors in %llu bits\n",
         row.ber_simulated, row.ber_theory,
         (unsigned long long)row.errors_count, (unsigned long long)row.trials);

  /* Theory-only queries. */
  double ber = 0.0;
  if (ris_dpolsk_dpolsk_ber(gamma, 0.0, 0.0, 0, &ber) != RIS_DPOLSK_STATUS_OK)
    die("ris_dpolsk_dpolsk_ber");
  printf("dpolsk theory at 10 dB: %.6e\n", ber);
  if (ris_dpolsk_cpolsk_ber(gamma, &ber) != RIS_DPOLSK_STATUS_OK)
    die("ris_dpolsk_cpolsk_ber");
  printf("cpolsk theory at 10 dB: %.6e\n", ber);

  /* Error-path demonstration: negative SNR is rejected with a message. */
  if (ris_dpolsk_dpolsk_ber(-1.0, 0.0, 0.0, 0, &ber) !=
      RIS_DPOLSK_STATUS_INVALID_ARGUMENT) {
    fprintf(stderr, "negative SNR should be rejected\n");
    return 1;
  }
  char msg[256];
  ris_dpolsk_last_error(msg, sizeof msg);
  printf("expected rejection: %s\n", msg);

  ris_dpolsk_scenario_free(scenario);
  return 0;
}
