// bellcert: command-line front end over the C API.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "bellcert/bellcert.h"

namespace {

using nlohmann::json;

enum ExitCode {
  kOk = 0,
  kCheckFailed = 1,
  kUsage = 2,
  kParse = 3,
  kValidation = 4,
  kComputation = 5,
  kIo = 6,
  kInvalidArgument = 7,
  kInternal = 70,
};

struct Failure {
  bc_status status;
  std::string message;
};

int exit_code(bc_status s) {
  switch (s) {
    case BC_OK: return kOk;
    case BC_ERR_PARSE: return kParse;
    case BC_ERR_VALIDATION: return kValidation;
    case BC_ERR_COMPUTATION: return kComputation;
    case BC_ERR_IO: return kIo;
    case BC_ERR_INVALID_ARGUMENT: return kInvalidArgument;
    case BC_ERR_INTERNAL: return kInternal;
  }
  return kInternal;
}

void check(bc_status s) {
  if (s != BC_OK) throw Failure{s, bc_last_error()};
}

// Owns a string returned by the library.
class LibString {
 public:
  ~LibString() { bc_string_free(p_); }
  char** out() { return &p_; }
  std::string str() const { return p_ ? p_ : ""; }

 private:
  char* p_ = nullptr;
};

template <typename T, void (*Free)(T*)>
class Handle {
 public:
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p_); }
  T** out() { return &p_; }
  T* get() const { return p_; }

 private:
  T* p_ = nullptr;
};

using Dataset = Handle<bc_dataset, bc_dataset_free>;
using Bits = Handle<bc_bitstream, bc_bitstream_free>;
using Report = Handle<bc_report, bc_report_free>;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{BC_ERR_IO, "cannot open " + path};
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty() || output == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    std::cout.flush();
    return;
  }
  std::ofstream out(output, std::ios::binary | std::ios::trunc);
  if (!out) throw Failure{BC_ERR_IO, "cannot write " + output};
  out << text;
}

std::string sci(double v, int precision = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", precision, v);
  return buf;
}

std::string fixed(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

// ---- analyze

struct AnalyzeArgs {
  std::string manifest;
  std::string events;
  std::string input_format;
  std::optional<double> tau;
  std::string run_id;
  std::string label;
  std::optional<int> precision;
  std::string format;
  std::string output;
};

int run_analyze(const AnalyzeArgs& a) {
  json overrides = json::object();
  if (!a.events.empty()) overrides["events"] = a.events;
  if (!a.input_format.empty()) overrides["format"] = a.input_format;
  if (a.tau) overrides["tau"] = *a.tau;
  if (!a.run_id.empty()) overrides["run_id"] = a.run_id;
  if (!a.label.empty()) overrides["label"] = a.label;
  if (a.precision) overrides["precision"] = *a.precision;
  if (a.manifest.empty() && a.events.empty())
    throw Failure{BC_ERR_VALIDATION, "give a manifest or --events"};

  Report report;
  const std::string o = overrides.dump();
  check(bc_analyze(a.manifest.empty() ? nullptr : a.manifest.c_str(), o.c_str(),
                   report.out()));
  LibString text;
  check(bc_report_render(report.get(), a.format.empty() ? nullptr : a.format.c_str(),
                         -1, text.out()));
  emit(text.str(), a.output);
  return kOk;
}

// ---- pvalue

struct PValueArgs {
  std::optional<double> s;
  std::optional<std::uint64_t> wins;
  std::optional<std::uint64_t> n;
  std::string events;
  std::string input_format;
  int herald = 0;
  double tau = 6.3e-4;
  std::string format = "text";
};

json pvalue_json(const char* method, const bc_pvalue& p) {
  return {{"method", method}, {"p_bound", p.p_bound}, {"log_p", p.log_p},
          {"statistic", p.statistic}, {"rounds", p.rounds}, {"tau", p.tau}};
}

int run_pvalue(const PValueArgs& a) {
  std::optional<double> s = a.s;
  std::optional<std::uint64_t> w = a.wins;
  std::optional<std::uint64_t> n = a.n;
  if (!a.events.empty()) {
    Dataset ds;
    check(bc_dataset_read(a.events.c_str(),
                          a.input_format.empty() ? nullptr : a.input_format.c_str(),
                          ds.out()));
    std::uint64_t ww = 0, nn = 0;
    double sv = 0.0;
    check(bc_dataset_wins(ds.get(), a.herald, &ww, &nn));
    check(bc_dataset_s_event_based(ds.get(), a.herald, &sv, nullptr));
    s = sv;
    w = ww;
    n = nn;
  }
  if (!n || (!s && !w))
    throw Failure{BC_ERR_VALIDATION, "give --s and --n, --wins and --n, or --events"};

  json out = json::array();
  if (s) {
    bc_pvalue p{};
    check(bc_pvalue_martingale(*s, *n, a.tau, &p));
    out.push_back(pvalue_json("martingale", p));
  }
  if (w) {
    bc_pvalue p{};
    check(bc_pvalue_game(*w, *n, a.tau, &p));
    out.push_back(pvalue_json("game", p));
  }
  if (a.format == "json") {
    emit(out.dump(2), "");
    return kOk;
  }
  std::string text;
  for (const auto& p : out) {
    const bool m = p["method"] == "martingale";
    text += std::string(m ? "P_m" : "P_g") + " = " + sci(p["p_bound"].get<double>()) +
            "  (ln " + fixed(p["log_p"].get<double>(), 4) + ")  " +
            (m ? "S = " + fixed(p["statistic"].get<double>(), 5)
               : "W = " + std::to_string(static_cast<std::uint64_t>(p["statistic"].get<double>()))) +
            "  N = " + std::to_string(p["rounds"].get<std::uint64_t>()) +
            "  tau = " + sci(p["tau"].get<double>(), 2) + "\n";
  }
  emit(text, "");
  return kOk;
}

// ---- simulate

struct SimulateArgs {
  std::string model = "deterministic";
  std::string policy = "loss_reactive";
  unsigned strategy = 12;
  double visibility = 1.0;
  std::optional<double> tau;
  double tau_a = 0.0;
  double tau_b = 0.0;
  bool random_sign = false;
  double psi_plus_fraction = 0.5;
  std::uint64_t n_events = 1000;
  std::uint64_t seed = 1;
  std::uint64_t trials = 0;
  double kappa = 0.01;
  std::optional<double> tau_bound;
  unsigned threads = 0;
  std::string output;
  std::string output_format = "csv";
  std::string format = "text";
};

json exceedance_json(const bc_exceedance& e) {
  return {{"exceedances", e.exceedances}, {"frequency", e.frequency},
          {"ci_low", e.ci_low}, {"ci_high", e.ci_high}, {"sound", e.sound != 0}};
}

int run_simulate(const SimulateArgs& a) {
  bc_sim_config c;
  bc_sim_config_init(&c);
  c.model = a.model.c_str();
  c.policy = a.policy.c_str();
  c.strategy_index = a.strategy;
  c.visibility = a.visibility;
  c.tau_a = a.tau ? *a.tau : a.tau_a;
  c.tau_b = a.tau ? *a.tau : a.tau_b;
  c.random_sign = a.random_sign ? 1 : 0;
  c.psi_plus_fraction = a.psi_plus_fraction;
  c.n_events = a.n_events;
  c.seed = a.seed;

  if (a.trials == 0) {
    Dataset ds;
    check(bc_simulate(&c, ds.out()));
    const std::string out = a.output.empty() ? "-" : a.output;
    check(bc_dataset_write(ds.get(), out.c_str(), a.output_format.c_str()));
    return kOk;
  }

  const double tau_bound =
      a.tau_bound ? *a.tau_bound : std::max(std::abs(c.tau_a), std::abs(c.tau_b));
  bc_bound_result r{};
  check(bc_validate_bound(&c, a.trials, a.kappa, tau_bound, a.threads, &r));
  if (a.format == "json") {
    json j{{"model", a.model}, {"trials", r.trials}, {"n_events", r.n_events},
           {"kappa", r.kappa}, {"tau_bound", r.tau_bound}, {"mean_s", r.mean_s},
           {"martingale", exceedance_json(r.martingale)},
           {"game", exceedance_json(r.game)}};
    emit(j.dump(2), a.output);
    return kOk;
  }
  std::string text = "model " + a.model + "  trials " + std::to_string(r.trials) +
                     "  N " + std::to_string(r.n_events) + "  kappa " +
                     fixed(r.kappa, 4) + "  tau " + sci(r.tau_bound, 2) + "\n" +
                     "mean S " + fixed(r.mean_s, 5) + "\n";
  for (const auto& [name, e] : {std::pair{"P_m", r.martingale}, std::pair{"P_g", r.game}}) {
    text += std::string(name) + " <= kappa: " + std::to_string(e.exceedances) +
            "  frequency " + fixed(e.frequency, 5) + "  [" + fixed(e.ci_low, 5) +
            ", " + fixed(e.ci_high, 5) + "]  " + (e.sound ? "sound" : "NOT SOUND") +
            "\n";
  }
  emit(text, a.output);
  return kOk;
}

// ---- qrng

struct QrngArgs {
  std::string bits;
  std::string bit_format = "auto";
  std::uint64_t simulate = 0;
  std::uint64_t seed = 1;
  double bias = 0.0;
  std::string statistic = "all";
  std::uint64_t max_lag = 56;
  std::uint64_t window = 0;
  unsigned block_length = 4;
  std::string budget;
  std::optional<double> xor_tau;
  unsigned xor_depth = 2;
  int precision = 3;
  std::string format = "text";
};

int run_qrng(const QrngArgs& a) {
  const bool json_out = a.format == "json";
  if (!a.budget.empty()) {
    const std::string cfg = read_file(a.budget);
    LibString out;
    check(bc_qrng_budget(cfg.c_str(), a.format.c_str(), a.precision, out.out()));
    emit(out.str(), "");
    return kOk;
  }
  if (a.xor_tau) {
    double v = 0.0;
    check(bc_xor_reduction(*a.xor_tau, a.xor_depth, &v));
    if (json_out) {
      emit(json{{"tau", *a.xor_tau}, {"depth", a.xor_depth}, {"tau_out", v}}.dump(2), "");
    } else {
      emit("xor depth " + std::to_string(a.xor_depth) + ": tau " +
               sci(*a.xor_tau, 3) + " -> " + sci(v, 3),
           "");
    }
    return kOk;
  }

  Bits bits;
  if (!a.bits.empty()) {
    check(bc_bitstream_read(a.bits.c_str(), a.bit_format.c_str(), bits.out()));
  } else if (a.simulate > 0) {
    check(bc_bitstream_simulate(a.simulate, a.seed, a.bias, bits.out()));
  } else {
    throw Failure{BC_ERR_VALIDATION, "give --bits, --simulate, --budget or --xor-tau"};
  }

  const bool all = a.statistic == "all";
  const auto want = [&](const char* s) { return all || a.statistic == s; };
  if (!all && !want("bias") && !want("scc") && !want("window") && !want("serial"))
    throw Failure{BC_ERR_INVALID_ARGUMENT, "unknown statistic '" + a.statistic + "'"};

  json j{{"n", bc_bitstream_size(bits.get())}};
  std::string text = "bits " + std::to_string(bc_bitstream_size(bits.get())) + "\n";
  const int p = a.precision;
  if (want("bias")) {
    double b = 0.0, sigma = 0.0;
    check(bc_qrng_bias(bits.get(), &b, &sigma));
    j["bias"] = {{"value", b}, {"sigma", sigma}};
    text += "bias B = " + sci(b, p) + "  sigma " + sci(sigma, p) + "\n";
  }
  if (want("scc")) {
    const std::uint64_t n = bc_bitstream_size(bits.get());
    const std::uint64_t lags = std::min<std::uint64_t>(a.max_lag, n ? n - 1 : 0);
    j["scc"] = json::array();
    text += "lag  SCC\n";
    for (std::uint64_t l = 1; l <= lags; ++l) {
      double v = 0.0;
      check(bc_qrng_scc(bits.get(), l, &v));
      j["scc"].push_back({{"lag", l}, {"value", v}});
      text += (l < 10 ? "  " : " ") + std::to_string(l) + "  " + sci(v, p) + "\n";
    }
  }
  if (want("window") && a.window > 0) {
    for (const char* stat : {"bias", "scc1"}) {
      LibString w;
      check(bc_qrng_windowed(bits.get(), stat, a.window, w.out()));
      const json series = json::parse(w.str());
      j["windows"][stat] = series;
      std::size_t inside = 0;
      for (const auto& pt : series)
        if (std::abs(pt["value"].get<double>()) <= 3.0 * pt["sigma"].get<double>())
          ++inside;
      text += std::string("windows (") + stat + "): " + std::to_string(series.size()) +
              ", inside 3 sigma " + std::to_string(inside) + "\n";
    }
  }
  if (want("serial")) {
    double chi2 = 0.0, pv = 0.0;
    unsigned dof = 0;
    check(bc_qrng_serial_test(bits.get(), a.block_length, &chi2, &dof, &pv));
    j["serial"] = {{"block_length", a.block_length}, {"chi_square", chi2},
                   {"dof", dof}, {"p_value", pv}};
    text += "serial L=" + std::to_string(a.block_length) + ": chi2 " +
            fixed(chi2, p) + " (dof " + std::to_string(dof) + ")  P = " +
            fixed(pv, p) + "\n";
  }
  emit(json_out ? j.dump(2) : text, "");
  return kOk;
}

// ---- spacetime / nosignal / fixtures

int run_spacetime(const std::string& config, const std::string& format) {
  const std::string text = read_file(config);
  LibString out;
  int pass = 0;
  check(bc_spacetime_check(text.c_str(), format.c_str(), out.out(), &pass));
  emit(out.str(), "");
  return pass ? kOk : kCheckFailed;
}

int run_nosignal(const std::string& events, const std::string& input_format,
                 const std::string& format, int precision) {
  Dataset ds;
  check(bc_dataset_read(events.c_str(),
                        input_format.empty() ? nullptr : input_format.c_str(),
                        ds.out()));
  LibString out;
  check(bc_nosignal_report(ds.get(), format.c_str(), precision, out.out()));
  emit(out.str(), "");
  return kOk;
}

int run_fixtures(const std::string& fixtures_dir, const std::string& manifests_dir,
                 bool list) {
  LibString out;
  if (list) {
    check(bc_fixture_names(out.out()));
  } else {
    check(bc_write_fixtures(fixtures_dir.c_str(), manifests_dir.c_str(), out.out()));
  }
  std::string text;
  for (const auto& item : json::parse(out.str()))
    text += item.get<std::string>() + "\n";
  emit(text, "");
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certification toolkit for event-ready CHSH Bell tests"};
  app.set_version_flag("--version", std::string(bc_version()));
  app.require_subcommand(1);

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Full certification report for a run");
  analyze->add_option("manifest", an.manifest, "Run manifest (JSON)");
  analyze->add_option("--events", an.events, "Event file (overrides the manifest)");
  analyze->add_option("--input-format", an.input_format, "auto, csv or jsonl")
      ->check(CLI::IsMember({"auto", "csv", "jsonl"}));
  analyze->add_option("--tau", an.tau, "Setting predictability");
  analyze->add_option("--run-id", an.run_id, "Run identifier");
  analyze->add_option("--label", an.label, "Run label");
  analyze->add_option("--precision", an.precision, "Printed decimals");
  analyze->add_option("--format", an.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  analyze->add_option("-o,--output", an.output, "Output file (default stdout)");

  PValueArgs pv;
  auto* pvalue = app.add_subcommand("pvalue", "P-value bounds from S, W or an event file");
  pvalue->add_option("--s", pv.s, "Event-based S (martingale bound)");
  pvalue->add_option("--wins", pv.wins, "Win count W (game bound)");
  pvalue->add_option("--n", pv.n, "Number of events N");
  pvalue->add_option("--events", pv.events, "Event file");
  pvalue->add_option("--input-format", pv.input_format, "auto, csv or jsonl");
  pvalue->add_option("--herald", pv.herald, "0 all, 1 psi+, -1 psi-")
      ->check(CLI::IsMember({-1, 0, 1}));
  pvalue->add_option("--tau", pv.tau, "Setting predictability")->capture_default_str();
  pvalue->add_option("--format", pv.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  SimulateArgs sm;
  auto* simulate = app.add_subcommand("simulate", "Simulate runs or validate the bounds");
  simulate->add_option("--model", sm.model, "deterministic, memory_lhv, optimal_biased_lhv, quantum")
      ->check(CLI::IsMember({"deterministic", "memory_lhv", "optimal_biased_lhv", "quantum"}));
  simulate->add_option("--policy", sm.policy, "loss_reactive or herald_conditioned")
      ->check(CLI::IsMember({"loss_reactive", "herald_conditioned"}));
  simulate->add_option("--strategy", sm.strategy, "Deterministic strategy index 0-15");
  simulate->add_option("--visibility,-V", sm.visibility, "Quantum visibility");
  simulate->add_option("--tau", sm.tau, "Setting bias on both sides");
  simulate->add_option("--tau-a", sm.tau_a, "Setting bias, side 1");
  simulate->add_option("--tau-b", sm.tau_b, "Setting bias, side 2");
  simulate->add_flag("--random-sign", sm.random_sign, "Redraw the bias sign every round");
  simulate->add_option("--psi-plus-fraction", sm.psi_plus_fraction, "Share of psi+ heralds");
  simulate->add_option("-n,--n-events", sm.n_events, "Events per run");
  simulate->add_option("--seed", sm.seed, "Seed");
  simulate->add_option("--trials", sm.trials, "Validate the bounds over this many runs");
  simulate->add_option("--kappa", sm.kappa, "Significance level for validation");
  simulate->add_option("--tau-bound", sm.tau_bound, "tau assumed by the bounds");
  simulate->add_option("--threads", sm.threads, "Worker threads (0 = default)");
  simulate->add_option("-o,--output", sm.output, "Output file (default stdout)");
  simulate->add_option("--output-format", sm.output_format, "csv or jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));
  simulate->add_option("--format", sm.format, "Validation report: text or json")
      ->check(CLI::IsMember({"text", "json"}));

  QrngArgs qr;
  auto* qrng = app.add_subcommand("qrng", "Audit setting bits, predictability budget, XOR depth");
  qrng->add_option("--bits", qr.bits, "Bit file");
  qrng->add_option("--bit-format", qr.bit_format, "ascii, packed or auto")
      ->check(CLI::IsMember({"ascii", "packed", "auto"}));
  qrng->add_option("--simulate", qr.simulate, "Audit N simulated fair bits instead");
  qrng->add_option("--seed", qr.seed, "Seed for --simulate");
  qrng->add_option("--bias", qr.bias, "Bias for --simulate");
  qrng->add_option("--statistic", qr.statistic, "all, bias, scc, window, serial");
  qrng->add_option("--max-lag", qr.max_lag, "Largest SCC lag");
  qrng->add_option("--window", qr.window, "Window size for the time evolution");
  qrng->add_option("--block-length", qr.block_length, "Serial test block length L");
  qrng->add_option("--budget", qr.budget, "Predictability budget (JSON)");
  qrng->add_option("--xor-tau", qr.xor_tau, "tau before XOR reduction");
  qrng->add_option("--xor-depth", qr.xor_depth, "Number of XORed bits");
  qrng->add_option("--precision", qr.precision, "Printed digits");
  qrng->add_option("--format", qr.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  std::string st_config, st_format = "text";
  auto* spacetime = app.add_subcommand("spacetime", "Spacelike-separation timing");
  spacetime->require_subcommand(1);
  auto* st_check = spacetime->add_subcommand("check", "Margins from a timing config");
  st_check->add_option("config", st_config, "Timing config (JSON)")->required();
  st_check->add_option("--format", st_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  std::string ns_events, ns_input_format, ns_format = "text";
  int ns_precision = 3;
  auto* nosignal = app.add_subcommand("nosignal", "Setting independence and no-signaling tests");
  nosignal->add_option("events", ns_events, "Event file")->required();
  nosignal->add_option("--input-format", ns_input_format, "auto, csv or jsonl");
  nosignal->add_option("--precision", ns_precision, "Printed decimals");
  nosignal->add_option("--format", ns_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  std::string fx_dir = "data/fixtures", fx_manifests = "data/manifests";
  bool fx_list = false;
  auto* fixtures = app.add_subcommand("fixtures", "Write the published runs as event files");
  fixtures->add_option("--fixtures-dir", fx_dir, "Event file directory");
  fixtures->add_option("--manifests-dir", fx_manifests, "Manifest directory");
  fixtures->add_flag("--list", fx_list, "Only list the run ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*analyze) return run_analyze(an);
    if (*pvalue) return run_pvalue(pv);
    if (*simulate) return run_simulate(sm);
    if (*qrng) return run_qrng(qr);
    if (*st_check) return run_spacetime(st_config, st_format);
    if (*nosignal) return run_nosignal(ns_events, ns_input_format, ns_format, ns_precision);
    if (*fixtures) return run_fixtures(fx_dir, fx_manifests, fx_list);
  } catch (const Failure& f) {
    std::cerr << "bellcert: " << bc_status_name(f.status) << ": " << f.message << "\n";
    return exit_code(f.status);
  } catch (const std::exception& e) {
    std::cerr << "bellcert: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}
