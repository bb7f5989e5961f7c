/* C interface to the bellcert library.
 *
 * Every fallible call returns a bc_status; on failure bc_last_error() holds a
 * message for the calling thread. Strings returned through char** are owned
 * by the caller and released with bc_string_free. Handles are released with
 * their matching _free function; passing NULL to a _free function is a no-op.
 */
#ifndef BELLCERT_BELLCERT_H
#define BELLCERT_BELLCERT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(BELLCERT_BUILDING)
#    define BC_API __declspec(dllexport)
#  else
#    define BC_API __declspec(dllimport)
#  endif
#else
#  define BC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum bc_status {
  BC_OK = 0,
  BC_ERR_INVALID_ARGUMENT = 1,
  BC_ERR_PARSE = 2,
  BC_ERR_VALIDATION = 3,
  BC_ERR_COMPUTATION = 4,
  BC_ERR_IO = 5,
  BC_ERR_INTERNAL = 6
} bc_status;

typedef struct bc_dataset bc_dataset;
typedef struct bc_bitstream bc_bitstream;
typedef struct bc_report bc_report;

BC_API const char* bc_version(void);
BC_API const char* bc_status_name(bc_status status);
/* Message of the last failed call on this thread; "" when none. */
BC_API const char* bc_last_error(void);
BC_API void bc_string_free(char* s);

/* ---- events ------------------------------------------------------------ */

/* herald filters: 0 = all events, +1 = psi+, -1 = psi- */

/* format: "auto", "csv" or "jsonl"; NULL means "auto". */
BC_API bc_status bc_dataset_read(const char* path, const char* format,
                                 bc_dataset** out);
BC_API bc_status bc_dataset_parse(const char* text, const char* format,
                                  bc_dataset** out);
/* Reconstructed published run: "nov27", "apr07", "apr15", "jun14", "all". */
BC_API bc_status bc_dataset_fixture(const char* run_id, bc_dataset** out);
/* Writes to stdout when path is NULL or "-". */
BC_API bc_status bc_dataset_write(const bc_dataset* ds, const char* path,
                                  const char* format);
BC_API void bc_dataset_free(bc_dataset* ds);
BC_API uint64_t bc_dataset_size(const bc_dataset* ds);
BC_API bc_status bc_dataset_wins(const bc_dataset* ds, int herald,
                                 uint64_t* wins, uint64_t* rounds);
BC_API bc_status bc_dataset_s_event_based(const bc_dataset* ds, int herald,
                                          double* value, double* sigma);

/* JSON array of the published run ids. */
BC_API bc_status bc_fixture_names(char** json_out);
/* Writes every published run and its manifest; JSON array of paths. */
BC_API bc_status bc_write_fixtures(const char* fixtures_dir,
                                   const char* manifests_dir,
                                   char** json_out);

/* ---- P-values ---------------------------------------------------------- */

typedef struct bc_pvalue {
  double p_bound;
  double log_p;
  double statistic;
  uint64_t rounds;
  double tau;
} bc_pvalue;

BC_API bc_status bc_lhv_s_bound(double tau, double* out);
BC_API bc_status bc_pvalue_martingale(double s, uint64_t rounds, double tau,
                                      bc_pvalue* out);
BC_API bc_status bc_pvalue_game(uint64_t wins, uint64_t rounds, double tau,
                                bc_pvalue* out);
BC_API bc_status bc_binomial_tail(uint64_t wins, uint64_t rounds, double xi,
                                  double* out);

/* ---- simulation -------------------------------------------------------- */

typedef struct bc_sim_config {
  /* "deterministic", "memory_lhv", "optimal_biased_lhv" or "quantum" */
  const char* model;
  /* memory_lhv: "loss_reactive" or "herald_conditioned" */
  const char* policy;
  uint32_t strategy_index;
  double visibility;
  double tau_a;
  double tau_b;
  /* nonzero: the sign of each bias is redrawn every round */
  int random_sign;
  double psi_plus_fraction;
  uint64_t n_events;
  uint64_t seed;
} bc_sim_config;

typedef struct bc_exceedance {
  uint64_t exceedances;
  double frequency;
  double ci_low;
  double ci_high;
  int sound;
} bc_exceedance;

typedef struct bc_bound_result {
  uint64_t trials;
  uint64_t n_events;
  double kappa;
  double tau_bound;
  double mean_s;
  bc_exceedance martingale;
  bc_exceedance game;
} bc_bound_result;

/* Defaults: deterministic strategy 12, loss_reactive, V = 1, unbiased, 50/50
 * heralds, 1000 events, seed 1. */
BC_API void bc_sim_config_init(bc_sim_config* config);
BC_API bc_status bc_simulate(const bc_sim_config* config, bc_dataset** out);
/* threads = 0 picks the default thread count. */
BC_API bc_status bc_validate_bound(const bc_sim_config* config,
                                   uint64_t trials, double kappa,
                                   double tau_bound, unsigned threads,
                                   bc_bound_result* out);
BC_API bc_status bc_optimal_biased_expected_s(double tau, double* out);
BC_API bc_status bc_expected_event_rate(double p_herald, double attempt_rate,
                                        double* out);

/* ---- QRNG audit -------------------------------------------------------- */

/* format: "ascii", "packed" or "auto" (by extension: .txt ascii, else packed) */
BC_API bc_status bc_bitstream_read(const char* path, const char* format,
                                   bc_bitstream** out);
BC_API bc_status bc_bitstream_from_ascii(const char* text, bc_bitstream** out);
BC_API bc_status bc_bitstream_from_packed(const uint8_t* bytes, size_t n_bytes,
                                          uint64_t n_bits, bc_bitstream** out);
BC_API bc_status bc_bitstream_simulate(uint64_t n_bits, uint64_t seed,
                                       double bias, bc_bitstream** out);
BC_API void bc_bitstream_free(bc_bitstream* bits);
BC_API uint64_t bc_bitstream_size(const bc_bitstream* bits);

BC_API bc_status bc_qrng_bias(const bc_bitstream* bits, double* bias,
                              double* sigma);
BC_API bc_status bc_qrng_scc(const bc_bitstream* bits, uint64_t lag,
                             double* out);
BC_API bc_status bc_qrng_serial_test(const bc_bitstream* bits,
                                     unsigned block_length, double* chi_square,
                                     unsigned* dof, double* p_value);
/* statistic: "bias" or "scc1"; JSON array of {begin, length, value, sigma}. */
BC_API bc_status bc_qrng_windowed(const bc_bitstream* bits,
                                  const char* statistic, uint64_t window,
                                  char** json_out);
/* format: "text" or "json" */
BC_API bc_status bc_qrng_budget(const char* budget_json, const char* format,
                                int precision, char** out);
BC_API bc_status bc_xor_reduction(double tau, unsigned depth, double* out);

/* ---- spacetime --------------------------------------------------------- */

BC_API bc_status bc_spacetime_check(const char* config_json,
                                    const char* format, char** out, int* pass);

/* ---- no-signaling ------------------------------------------------------ */

/* counts in row-major order: n00, n01, n10, n11 */
BC_API bc_status bc_ztest(const uint64_t counts[4], double* z, double* p_value);
BC_API bc_status bc_ttest(const uint64_t counts[4], double* t, double* p_value);
BC_API bc_status bc_nosignal_report(const bc_dataset* ds, const char* format,
                                    int precision, char** out);

/* ---- certification report ---------------------------------------------- */

/* manifest_path may be NULL when overrides_json names the event file.
 * overrides_json (nullable) is a JSON object with any of the manifest keys
 * run_id, label, events, format, tau, precision, formats; its values win. */
BC_API bc_status bc_analyze(const char* manifest_path,
                            const char* overrides_json, bc_report** out);
BC_API bc_status bc_report_from_json(const char* json, bc_report** out);
BC_API void bc_report_free(bc_report* report);
/* format NULL: first format of the manifest. precision < 0: manifest value. */
BC_API bc_status bc_report_render(const bc_report* report, const char* format,
                                  int precision, char** out);
BC_API const char* bc_report_default_format(const bc_report* report);

#ifdef __cplusplus
}
#endif

#endif /* BELLCERT_BELLCERT_H */
