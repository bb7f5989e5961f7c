#include "bellcert/bellcert.h"

#include <math.h>
#include <stdio.h>
#include <string.h>

static int failures = 0;

#define CHECK(cond)                                              \
  do {                                                           \
    if (!(cond)) {                                               \
      fprintf(stderr, "%s:%d: check failed: %s\n", __FILE__,     \
              __LINE__, #cond);                                  \
      ++failures;                                                \
    }                                                            \
  } while (0)

int main(void) {
  bc_dataset* ds = NULL;
  uint64_t wins = 0, rounds = 0;
  double s = 0.0, sigma = 0.0;
  bc_pvalue pv;
  char* text = NULL;

  CHECK(strlen(bc_version()) > 0);
  CHECK(strcmp(bc_status_name(BC_OK), "ok") == 0);
  CHECK(strcmp(bc_status_name(BC_ERR_PARSE), "parse error") == 0);

  CHECK(bc_dataset_fixture("apr15", &ds) == BC_OK);
  CHECK(bc_dataset_size(ds) == 10000);
  CHECK(bc_dataset_wins(ds, 0, &wins, &rounds) == BC_OK);
  CHECK(wins == 7775 && rounds == 10000);
  CHECK(bc_dataset_s_event_based(ds, 0, &s, &sigma) == BC_OK);
  CHECK(fabs(s - 2.22) < 1e-12);
  CHECK(bc_dataset_wins(ds, 2, &wins, &rounds) == BC_ERR_INVALID_ARGUMENT);
  bc_dataset_free(ds);

  CHECK(bc_pvalue_game(7775, 10000, 6.3e-4, &pv) == BC_OK);
  CHECK(fabs(pv.p_bound / 1.739e-10 - 1.0) < 5e-3);
  CHECK(bc_pvalue_martingale(2.22, 10000, 6.3e-4, &pv) == BC_OK);
  CHECK(fabs(pv.p_bound / 2.569e-9 - 1.0) < 5e-3);
  CHECK(bc_pvalue_game(1, 10, 0.9, &pv) == BC_ERR_INVALID_ARGUMENT);

  ds = NULL;
  CHECK(bc_dataset_parse("1,1,0,1,2,1\n", "csv", &ds) == BC_ERR_PARSE);
  CHECK(ds == NULL);
  CHECK(strstr(bc_last_error(), "field 'x'") != NULL);

  CHECK(bc_analyze(NULL, NULL, NULL) != BC_OK);

  CHECK(bc_fixture_names(&text) == BC_OK);
  CHECK(strstr(text, "jun14") != NULL);
  bc_string_free(text);

  {
    bc_bitstream* bits = NULL;
    double b = 0.0, bs = 0.0, c = 0.0;
    CHECK(bc_bitstream_from_ascii("01101", &bits) == BC_OK);
    CHECK(bc_qrng_scc(bits, 1, &c) == BC_OK);
    CHECK(fabs(c + 0.4) < 1e-15);
    CHECK(bc_qrng_bias(bits, &b, &bs) == BC_OK);
    CHECK(fabs(b - 0.1) < 1e-15);
    CHECK(bc_qrng_scc(bits, 9, &c) == BC_ERR_INVALID_ARGUMENT);
    bc_bitstream_free(bits);
  }

  {
    const uint64_t counts[4] = {79, 69, 78, 74};
    double z = 0.0, p = 0.0;
    CHECK(bc_ztest(counts, &z, &p) == BC_OK);
    CHECK(fabs(p - 0.72) < 0.01);
  }

  bc_dataset_free(NULL);
  bc_string_free(NULL);

  if (failures) {
    fprintf(stderr, "%d check(s) failed\n", failures);
    return 1;
  }
  puts("capi smoke: ok");
  return 0;
}
