#include "bellcert/bellcert.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>

#include <nlohmann/json.hpp>

#include "bellcert/error.hpp"
#include "bellcert/event_io.hpp"
#include "bellcert/fixtures.hpp"
#include "bellcert/lhv.hpp"
#include "bellcert/nosignaling.hpp"
#include "bellcert/pvalues.hpp"
#include "bellcert/qrng.hpp"
#include "bellcert/report.hpp"
#include "bellcert/spacetime.hpp"

struct bc_dataset {
  bellcert::RunDataset data;
};

struct bc_bitstream {
  bellcert::BitStream bits;
};

struct bc_report {
  bellcert::CertificationReport report;
  bellcert::ReportOptions options;
};

namespace {

using namespace bellcert;
using nlohmann::json;

thread_local std::string g_last_error;

bc_status fail(bc_status status, const char* message) {
  g_last_error = message;
  return status;
}

template <typename F>
bc_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return BC_OK;
  } catch (const ParseError& e) {
    return fail(BC_ERR_PARSE, e.what());
  } catch (const ValidationError& e) {
    return fail(BC_ERR_VALIDATION, e.what());
  } catch (const ComputationError& e) {
    return fail(BC_ERR_COMPUTATION, e.what());
  } catch (const IoError& e) {
    return fail(BC_ERR_IO, e.what());
  } catch (const DomainError& e) {
    return fail(BC_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(BC_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(BC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(BC_ERR_INTERNAL, "unknown error");
  }
}

void require(const void* p, const char* name) {
  if (!p) throw DomainError(std::string(name) + " must not be NULL");
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

EventFormat event_format(const char* name) {
  return name ? parse_event_format(name) : EventFormat::automatic;
}

std::optional<Herald> herald_filter(int h) {
  if (h == 0) return std::nullopt;
  if (h == 1) return Herald::psi_plus;
  if (h == -1) return Herald::psi_minus;
  throw DomainError("herald filter must be 0, +1 or -1");
}

bool want_json(const char* format) {
  if (!format || std::strcmp(format, "text") == 0) return false;
  if (std::strcmp(format, "json") == 0) return true;
  throw DomainError(std::string("unknown output format '") + format + "'");
}

void copy_pvalue(const PValueReport& r, bc_pvalue* out) {
  *out = {r.p_bound, r.log_p, r.statistic, r.rounds, r.tau};
}

SimulationConfig sim_config(const bc_sim_config* c) {
  require(c, "config");
  require(c->model, "config.model");
  SimulationConfig s;
  const std::string model = c->model;
  if (model == "deterministic") s.model.kind = ModelKind::deterministic;
  else if (model == "memory_lhv") s.model.kind = ModelKind::memory_lhv;
  else if (model == "optimal_biased_lhv") s.model.kind = ModelKind::optimal_biased_lhv;
  else if (model == "quantum") s.model.kind = ModelKind::quantum;
  else throw DomainError("unknown model '" + model + "'");
  const std::string policy = c->policy ? c->policy : "loss_reactive";
  if (policy == "loss_reactive") s.model.policy = MemoryPolicy::loss_reactive;
  else if (policy == "herald_conditioned") s.model.policy = MemoryPolicy::herald_conditioned;
  else throw DomainError("unknown memory policy '" + policy + "'");
  s.model.strategy_index = c->strategy_index;
  s.model.visibility = c->visibility;
  s.source.tau_a = c->tau_a;
  s.source.tau_b = c->tau_b;
  s.source.pattern = c->random_sign ? BiasPattern::random_sign : BiasPattern::fixed;
  s.psi_plus_fraction = c->psi_plus_fraction;
  s.n_events = c->n_events;
  s.seed = c->seed;
  return s;
}

void copy_exceedance(const ExceedanceStats& e, bc_exceedance* out) {
  *out = {e.exceedances, e.frequency, e.ci_low, e.ci_high, e.sound ? 1 : 0};
}

std::string slurp(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(std::string("cannot open ") + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ContingencyTable2x2 table_from(const uint64_t counts[4]) {
  require(counts, "counts");
  ContingencyTable2x2 t;
  t.counts = {{{counts[0], counts[1]}, {counts[2], counts[3]}}};
  return t;
}

void apply_overrides(RunManifest& m, const json& o) {
  if (!o.is_object()) throw ValidationError("overrides must be a JSON object");
  for (const auto& [key, v] : o.items()) {
    if (key == "run_id") m.run_id = v.get<std::string>();
    else if (key == "label") m.label = v.get<std::string>();
    else if (key == "events") m.events = v.get<std::string>();
    else if (key == "format") m.format = parse_event_format(v.get<std::string>());
    else if (key == "tau") m.tau = v.get<double>();
    else if (key == "precision") m.report.precision = v.get<int>();
    else if (key == "formats") m.report.formats = v.get<std::vector<std::string>>();
    else throw ValidationError("unknown override '" + key + "'");
  }
}

}  // namespace

extern "C" {

const char* bc_version(void) { return "1.0.0"; }

const char* bc_status_name(bc_status status) {
  switch (status) {
    case BC_OK: return "ok";
    case BC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case BC_ERR_PARSE: return "parse error";
    case BC_ERR_VALIDATION: return "validation error";
    case BC_ERR_COMPUTATION: return "computation error";
    case BC_ERR_IO: return "i/o error";
    case BC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* bc_last_error(void) { return g_last_error.c_str(); }

void bc_string_free(char* s) { std::free(s); }

// ---- events

bc_status bc_dataset_read(const char* path, const char* format, bc_dataset** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new bc_dataset{read_events(path, event_format(format))};
  });
}

bc_status bc_dataset_parse(const char* text, const char* format, bc_dataset** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new bc_dataset{parse_events(text, event_format(format))};
  });
}

bc_status bc_dataset_fixture(const char* run_id, bc_dataset** out) {
  return guarded([&] {
    require(run_id, "run_id");
    require(out, "out");
    *out = new bc_dataset{reconstruct_dataset(published_run(run_id).table, run_id)};
  });
}

bc_status bc_dataset_write(const bc_dataset* ds, const char* path,
                           const char* format) {
  return guarded([&] {
    require(ds, "dataset");
    EventFormat f = event_format(format);
    if (f == EventFormat::automatic) f = EventFormat::delimited;
    if (!path || std::strcmp(path, "-") == 0) {
      write_events(std::cout, ds->data, f);
      std::cout.flush();
    } else {
      write_events(std::filesystem::path(path), ds->data, f);
    }
  });
}

void bc_dataset_free(bc_dataset* ds) { delete ds; }

uint64_t bc_dataset_size(const bc_dataset* ds) { return ds ? ds->data.size() : 0; }

bc_status bc_dataset_wins(const bc_dataset* ds, int herald, uint64_t* w,
                          uint64_t* n) {
  return guarded([&] {
    require(ds, "dataset");
    require(w, "wins");
    require(n, "rounds");
    const WinCount wc = wins(ds->data, herald_filter(herald));
    *w = wc.wins;
    *n = wc.rounds;
  });
}

bc_status bc_dataset_s_event_based(const bc_dataset* ds, int herald,
                                   double* value, double* sigma) {
  return guarded([&] {
    require(ds, "dataset");
    require(value, "value");
    const SEstimate s = s_event_based(ds->data, herald_filter(herald));
    *value = s.value;
    if (sigma) *sigma = s.sigma;
  });
}

bc_status bc_fixture_names(char** json_out) {
  return guarded([&] {
    require(json_out, "out");
    json names = json::array();
    for (const auto& r : published_runs()) names.push_back(r.id);
    *json_out = dup(names.dump());
  });
}

bc_status bc_write_fixtures(const char* fixtures_dir, const char* manifests_dir,
                            char** json_out) {
  return guarded([&] {
    require(fixtures_dir, "fixtures_dir");
    require(manifests_dir, "manifests_dir");
    json paths = json::array();
    for (const auto& p : write_published_fixtures(fixtures_dir, manifests_dir))
      paths.push_back(p.generic_string());
    if (json_out) *json_out = dup(paths.dump());
  });
}

// ---- P-values

bc_status bc_lhv_s_bound(double tau, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = lhv_s_bound(tau);
  });
}

bc_status bc_pvalue_martingale(double s, uint64_t rounds, double tau,
                               bc_pvalue* out) {
  return guarded([&] {
    require(out, "out");
    copy_pvalue(pvalue_martingale(s, rounds, Predictability(tau)), out);
  });
}

bc_status bc_pvalue_game(uint64_t w, uint64_t rounds, double tau, bc_pvalue* out) {
  return guarded([&] {
    require(out, "out");
    copy_pvalue(pvalue_game(w, rounds, Predictability(tau)), out);
  });
}

bc_status bc_binomial_tail(uint64_t w, uint64_t rounds, double xi, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = binomial_tail(w, rounds, xi);
  });
}

// ---- simulation

void bc_sim_config_init(bc_sim_config* c) {
  if (!c) return;
  *c = bc_sim_config{"deterministic", "loss_reactive", 12, 1.0, 0.0, 0.0,
                     0, 0.5, 1000, 1};
}

bc_status bc_simulate(const bc_sim_config* config, bc_dataset** out) {
  return guarded([&] {
    require(out, "out");
    RunDataset ds = simulate_run(sim_config(config));
    ds.run_id = "simulated";
    *out = new bc_dataset{std::move(ds)};
  });
}

bc_status bc_validate_bound(const bc_sim_config* config, uint64_t trials,
                            double kappa, double tau_bound, unsigned threads,
                            bc_bound_result* out) {
  return guarded([&] {
    require(out, "out");
    BoundValidationConfig v;
    v.simulation = sim_config(config);
    v.trials = trials;
    v.kappa = kappa;
    v.tau_bound = tau_bound;
    v.threads = threads;
    const BoundValidation r = validate_bound(v);
    out->trials = r.trials;
    out->n_events = r.n_events;
    out->kappa = r.kappa;
    out->tau_bound = r.tau_bound;
    out->mean_s = r.mean_s;
    copy_exceedance(r.martingale, &out->martingale);
    copy_exceedance(r.game, &out->game);
  });
}

bc_status bc_optimal_biased_expected_s(double tau, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = optimal_biased_expected_s(tau);
  });
}

bc_status bc_expected_event_rate(double p_herald, double attempt_rate, double* out) {
  return guarded([&] {
    require(out, "out");
    HeraldModel h;
    h.p_herald = p_herald;
    h.attempt_rate = attempt_rate;
    *out = expected_event_rate(h);
  });
}

// ---- QRNG

bc_status bc_bitstream_read(const char* path, const char* format,
                            bc_bitstream** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    std::string f = format ? format : "auto";
    if (f == "auto")
      f = std::filesystem::path(path).extension() == ".txt" ? "ascii" : "packed";
    const std::string data = slurp(path);
    if (f == "ascii") {
      *out = new bc_bitstream{BitStream::from_ascii(data)};
    } else if (f == "packed") {
      const auto* p = reinterpret_cast<const std::uint8_t*>(data.data());
      *out = new bc_bitstream{BitStream::from_packed({p, data.size()})};
    } else {
      throw DomainError("unknown bit format '" + f + "'");
    }
  });
}

bc_status bc_bitstream_from_ascii(const char* text, bc_bitstream** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new bc_bitstream{BitStream::from_ascii(text)};
  });
}

bc_status bc_bitstream_from_packed(const uint8_t* bytes, size_t n_bytes,
                                   uint64_t n_bits, bc_bitstream** out) {
  return guarded([&] {
    require(out, "out");
    if (n_bytes) require(bytes, "bytes");
    *out = new bc_bitstream{BitStream::from_packed({bytes, n_bytes}, n_bits)};
  });
}

bc_status bc_bitstream_simulate(uint64_t n_bits, uint64_t seed, double b,
                                bc_bitstream** out) {
  return guarded([&] {
    require(out, "out");
    *out = new bc_bitstream{simulate_stream(n_bits, seed, b)};
  });
}

void bc_bitstream_free(bc_bitstream* bits) { delete bits; }

uint64_t bc_bitstream_size(const bc_bitstream* bits) {
  return bits ? bits->bits.size() : 0;
}

bc_status bc_qrng_bias(const bc_bitstream* bits, double* b, double* sigma) {
  return guarded([&] {
    require(bits, "bits");
    require(b, "bias");
    const BiasResult r = bias(bits->bits);
    *b = r.bias;
    if (sigma) *sigma = r.sigma;
  });
}

bc_status bc_qrng_scc(const bc_bitstream* bits, uint64_t lag, double* out) {
  return guarded([&] {
    require(bits, "bits");
    require(out, "out");
    *out = scc(bits->bits, lag);
  });
}

bc_status bc_qrng_serial_test(const bc_bitstream* bits, unsigned block_length,
                              double* chi_square, unsigned* dof, double* p) {
  return guarded([&] {
    require(bits, "bits");
    require(p, "p_value");
    const SerialTestResult r = serial_test(bits->bits, block_length);
    if (chi_square) *chi_square = r.chi_square;
    if (dof) *dof = r.degrees_of_freedom;
    *p = r.p_value;
  });
}

bc_status bc_qrng_windowed(const bc_bitstream* bits, const char* statistic,
                           uint64_t window, char** json_out) {
  return guarded([&] {
    require(bits, "bits");
    require(json_out, "out");
    const std::string stat = statistic ? statistic : "bias";
    WindowStatistic ws;
    if (stat == "bias") ws = WindowStatistic::bias;
    else if (stat == "scc1") ws = WindowStatistic::scc1;
    else throw DomainError("unknown window statistic '" + stat + "'");
    json arr = json::array();
    for (const auto& p : windowed_evolution(bits->bits, ws, window))
      arr.push_back({{"begin", p.begin}, {"length", p.length},
                     {"value", p.value}, {"sigma", p.sigma}});
    *json_out = dup(arr.dump());
  });
}

bc_status bc_qrng_budget(const char* budget_json, const char* format,
                         int precision, char** out) {
  return guarded([&] {
    require(budget_json, "budget_json");
    require(out, "out");
    const BudgetResult r = predictability_budget(parse_budget_json(budget_json));
    *out = dup(want_json(format) ? render_budget_json(r)
                                 : render_budget_text(r, precision < 0 ? 3 : precision));
  });
}

bc_status bc_xor_reduction(double tau, unsigned depth, double* out) {
  return guarded([&] {
    require(out, "out");
    *out = xor_reduction(tau, depth);
  });
}

// ---- spacetime

bc_status bc_spacetime_check(const char* config_json, const char* format,
                             char** out, int* pass) {
  return guarded([&] {
    require(config_json, "config_json");
    const SpacetimeReport r = check_spacetime(parse_spacetime_config(config_json));
    if (pass) *pass = r.pass ? 1 : 0;
    if (out)
      *out = dup(want_json(format) ? render_spacetime_json(r)
                                   : render_spacetime_text(r));
  });
}

// ---- no-signaling

bc_status bc_ztest(const uint64_t counts[4], double* z, double* p) {
  return guarded([&] {
    require(p, "p_value");
    const ZTestResult r = setting_independence_ztest(table_from(counts));
    if (z) *z = r.z;
    *p = r.p_value;
  });
}

bc_status bc_ttest(const uint64_t counts[4], double* t, double* p) {
  return guarded([&] {
    require(p, "p_value");
    const TTestResult r = nosignal_ttest(table_from(counts));
    if (t) *t = r.t;
    *p = r.p_value;
  });
}

bc_status bc_nosignal_report(const bc_dataset* ds, const char* format,
                             int precision, char** out) {
  return guarded([&] {
    require(ds, "dataset");
    require(out, "out");
    const NoSignalingReport r = analyze_nosignaling(ds->data);
    *out = dup(want_json(format)
                   ? render_nosignaling_json(r)
                   : render_nosignaling_text(r, precision < 0 ? 3 : precision));
  });
}

// ---- report

bc_status bc_analyze(const char* manifest_path, const char* overrides_json,
                     bc_report** out) {
  return guarded([&] {
    require(out, "out");
    RunManifest m;
    if (manifest_path) m = load_manifest(manifest_path);
    if (overrides_json) {
      json o;
      try {
        o = json::parse(overrides_json);
      } catch (const json::parse_error& e) {
        throw ParseError(std::string("overrides: ") + e.what());
      }
      try {
        apply_overrides(m, o);
      } catch (const json::exception& e) {
        throw ValidationError(std::string("overrides: ") + e.what());
      } catch (const DomainError& e) {
        throw ValidationError(std::string("overrides: ") + e.what());
      }
    }
    if (m.run_id.empty()) m.run_id = m.events.stem().string();
    for (const auto& f : m.report.formats)
      if (f != "text" && f != "json")
        throw ValidationError("unknown report format '" + f + "'");
    if (m.report.formats.empty()) m.report.formats = {"text"};
    *out = new bc_report{analyze(m), m.report};
  });
}

bc_status bc_report_from_json(const char* text, bc_report** out) {
  return guarded([&] {
    require(text, "json");
    require(out, "out");
    *out = new bc_report{parse_report_json(text), ReportOptions{}};
  });
}

void bc_report_free(bc_report* report) { delete report; }

bc_status bc_report_render(const bc_report* report, const char* format,
                           int precision, char** out) {
  return guarded([&] {
    require(report, "report");
    require(out, "out");
    const std::string f = format ? format : report->options.formats.front();
    const int p = precision < 0 ? report->options.precision : precision;
    if (p > 17) throw DomainError("precision must lie in [0, 17]");
    *out = dup(want_json(f.c_str()) ? render_json(report->report)
                                    : render_text(report->report, p));
  });
}

const char* bc_report_default_format(const bc_report* report) {
  return report ? report->options.formats.front().c_str() : "text";
}

}  // extern "C"
