// Acceptance checks. Usage: bellcert_acceptance [criterion...]
// Prints one PASS/FAIL line per criterion and exits non-zero on any FAIL.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bellcert/events.hpp"
#include "bellcert/fixtures.hpp"
#include "bellcert/lhv.hpp"
#include "bellcert/nosignaling.hpp"
#include "bellcert/pvalues.hpp"
#include "bellcert/qrng.hpp"
#include "bellcert/report.hpp"
#include "bellcert/spacetime.hpp"
#include "oracles.hpp"

namespace {

using namespace bellcert;
using Clock = std::chrono::steady_clock;

constexpr double kValueTol = 1e-3;        // S, correlators, σ
constexpr double kPValueRelTol = 5e-3;    // published P-values
constexpr double kNoSignalTol = 1e-2;     // no-signaling P-values
constexpr double kBudgetRelTol = 1e-2;    // QRNG budget components
constexpr double kKernelRelTol = 1e-10;   // numerical kernels
constexpr double kClosedFormTol = 1e-12;  // optimal biased LHV ceiling
constexpr double kRuntimeLimitS = 1.0;
constexpr double kKappa = 0.01;
constexpr std::uint64_t kSoundnessTrials = 100000;
constexpr std::uint64_t kSoundnessEvents = 1000;
constexpr std::uint64_t kQuantumEvents = 1000000;
constexpr double kQuantumSigmas = 3.0;

/// Collects individual comparisons; the criterion passes when all hold.
class Checker {
 public:
  void near(const std::string& what, double got, double want, double tol) {
    record(what, std::abs(got - want) <= tol, got, want);
  }
  void relative(const std::string& what, double got, double want, double tol) {
    record(what, std::abs(got - want) <= tol * std::abs(want), got, want);
  }
  void equal(const std::string& what, std::uint64_t got, std::uint64_t want) {
    record(what, got == want, static_cast<double>(got), static_cast<double>(want));
  }
  void truth(const std::string& what, bool ok) {
    ++checks_;
    if (!ok) failures_.push_back(what);
  }

  bool ok() const { return failures_.empty(); }
  std::string summary() const {
    std::ostringstream out;
    out << checks_ - failures_.size() << "/" << checks_ << " checks";
    for (const auto& f : failures_) out << "\n    mismatch: " << f;
    return out.str();
  }

 private:
  void record(const std::string& what, bool ok, double got, double want) {
    ++checks_;
    if (ok) return;
    char buf[160];
    std::snprintf(buf, sizeof buf, " got %.6g, expected %.6g", got, want);
    failures_.push_back(what + buf);
  }

  std::size_t checks_ = 0;
  std::vector<std::string> failures_;
};

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

CertificationReport analyze_published(const std::string& id) {
  RunManifest manifest;
  manifest.run_id = id;
  manifest.tau = kDefaultTau;
  return analyze_dataset(reconstruct_dataset(published_run(id).table, id),
                         manifest);
}

// Printed values of one per-herald table.
struct StateGolden {
  std::array<std::array<double, 2>, 4> correlators;  // value, σ
  double s;
  double s_sigma;
  std::uint64_t wins;
  double p_m;
  double p_g;
};

struct CombinedGolden {
  double weighted;
  double weighted_sigma;
  double event_based;
  double event_based_sigma;
  std::uint64_t wins;
  double p_m;
  double p_g;
};

struct RunGolden {
  std::string id;
  StateGolden plus;
  StateGolden minus;
  CombinedGolden combined;
};

void check_state(Checker& c, const std::string& tag, const StateReport& st,
                 const StateGolden& g) {
  for (std::size_t i = 0; i < 4; ++i) {
    const auto& corr = st.rows[i].correlator;
    c.truth(tag + " E" + std::to_string(i) + " defined", corr.has_value());
    if (!corr) continue;
    c.near(tag + " E" + std::to_string(i), corr->value, g.correlators[i][0], kValueTol);
    c.near(tag + " sigma(E" + std::to_string(i) + ")", corr->sigma,
           g.correlators[i][1], kValueTol);
  }
  c.truth(tag + " S defined", st.s_per_setting.has_value());
  if (st.s_per_setting) {
    c.near(tag + " S", st.s_per_setting->value, g.s, kValueTol);
    c.near(tag + " sigma(S)", st.s_per_setting->sigma, g.s_sigma, kValueTol);
  }
  c.equal(tag + " wins", st.wins.wins, g.wins);
  c.relative(tag + " P_m", st.martingale.p_bound, g.p_m, kPValueRelTol);
  c.relative(tag + " P_g", st.game.p_bound, g.p_g, kPValueRelTol);
}

void check_combined(Checker& c, const std::string& tag, const CombinedReport& cb,
                    const CombinedGolden& g) {
  c.truth(tag + " weighted mean defined", cb.weighted_mean.has_value());
  c.truth(tag + " pooled S defined", cb.pooled.has_value());
  if (cb.weighted_mean) {
    c.near(tag + " weighted mean", cb.weighted_mean->value, g.weighted, kValueTol);
    c.near(tag + " sigma(weighted mean)", cb.weighted_mean->sigma,
           g.weighted_sigma, kValueTol);
  }
  if (cb.pooled) {
    c.near(tag + " event-based S", cb.pooled->value, g.event_based, kValueTol);
    c.near(tag + " sigma(event-based S)", cb.pooled->sigma, g.event_based_sigma,
           kValueTol);
  }
  c.equal(tag + " wins", cb.wins.wins, g.wins);
  c.relative(tag + " P_m", cb.martingale.p_bound, g.p_m, kPValueRelTol);
  c.relative(tag + " P_g", cb.game.p_bound, g.p_g, kPValueRelTol);
}

void check_run(Checker& c, const RunGolden& g) {
  const CertificationReport r = analyze_published(g.id);
  if (r.states.size() != 2) {
    c.truth(g.id + " has both heralds", false);
    return;
  }
  check_state(c, g.id + " psi+", r.states[0], g.plus);
  check_state(c, g.id + " psi-", r.states[1], g.minus);
  check_combined(c, g.id + " combined", r.combined, g.combined);
}

const RunGolden kApr15{
    "apr15",
    {{{{-0.535, 0.024}, {-0.603, 0.023}, {-0.603, 0.022}, {0.463, 0.025}}},
     2.204, 0.047, 3876, 2.611e-4, 2.643e-5},
    {{{{-0.511, 0.024}, {-0.615, 0.022}, {0.608, 0.023}, {-0.507, 0.025}}},
     2.240, 0.047, 3899, 8.4437e-6, 7.397e-7},
    {2.222, 0.0332, 2.221, 0.0332, 7775, 2.569e-9, 1.739e-10}};

const std::vector<RunGolden>& other_runs() {
  static const std::vector<RunGolden> runs{
      {"nov27",
       {{{{-0.644, 0.114}, {-0.515, 0.149}, {-0.750, 0.105}, {0.250, 0.171}}},
        2.160, 0.279, 117, 0.7009, 0.2328},
       {{{{-0.647, 0.131}, {-0.611, 0.132}, {0.684, 0.118}, {-0.666, 0.115}}},
        2.609, 0.252, 124, 0.0814, 0.0170},
       {2.407, 0.184, 2.415, 0.185, 241, 0.0958, 0.0186}},
      {"apr07",
       {{{{-0.528, 0.040}, {-0.592, 0.037}, {-0.628, 0.038}, {0.487, 0.040}}},
        2.234, 0.077, 1428, 0.0194, 2.755e-3},
       {{{{-0.462, 0.040}, {-0.723, 0.033}, {0.660, 0.034}, {-0.439, 0.042}}},
        2.284, 0.075, 1471, 3.490e-3, 4.317e-4},
       {2.260, 0.0537, 2.256, 0.0537, 2899, 7.261e-5, 7.027e-6}},
      {"jun14",
       {{{{-0.580, 0.023}, {-0.478, 0.025}, {-0.444, 0.026}, {0.555, 0.023}}},
        2.057, 0.048, 3788, 0.5205, 0.1306},
       {{{{-0.636, 0.021}, {-0.407, 0.026}, {0.470, 0.025}, {-0.620, 0.022}}},
        2.134, 0.048, 3838, 0.0201, 2.752e-3},
       {2.096, 0.0340, 2.096, 0.0340, 7626, 0.0287, 2.818e-3}},
  };
  return runs;
}

Verdict criterion1() {
  const auto start = Clock::now();
  Checker c;
  const CertificationReport r = analyze_published("apr15");
  if (r.states.size() == 2) {
    for (std::size_t h = 0; h < 2; ++h) {
      const StateGolden& g = h == 0 ? kApr15.plus : kApr15.minus;
      const std::string tag = h == 0 ? "psi+" : "psi-";
      for (std::size_t i = 0; i < 4; ++i) {
        const auto& corr = r.states[h].rows[i].correlator;
        c.truth(tag + " correlator defined", corr.has_value());
        if (!corr) continue;
        c.near(tag + " E" + std::to_string(i), corr->value, g.correlators[i][0], kValueTol);
        c.near(tag + " sigma(E" + std::to_string(i) + ")", corr->sigma,
               g.correlators[i][1], kValueTol);
      }
      if (r.states[h].s_per_setting) {
        c.near(tag + " S", r.states[h].s_per_setting->value, g.s, kValueTol);
        c.near(tag + " sigma(S)", r.states[h].s_per_setting->sigma, g.s_sigma, kValueTol);
      } else {
        c.truth(tag + " S defined", false);
      }
    }
  } else {
    c.truth("both heralds present", false);
  }
  if (r.combined.weighted_mean) {
    c.near("weighted mean", r.combined.weighted_mean->value, 2.222, kValueTol);
    c.near("sigma(weighted mean)", r.combined.weighted_mean->sigma, 0.0332, kValueTol);
  } else {
    c.truth("weighted mean defined", false);
  }
  if (r.combined.pooled) {
    c.near("event-based combined S", r.combined.pooled->value, 2.221, kValueTol);
  } else {
    c.truth("event-based combined S defined", false);
  }
  c.equal("W", r.combined.wins.wins, 7775);
  const double elapsed = seconds_since(start);
  c.truth("runtime < 1 s", elapsed < kRuntimeLimitS);
  char buf[64];
  std::snprintf(buf, sizeof buf, ", %.3f s", elapsed);
  return {c.ok(), c.summary() + buf};
}

Verdict criterion2() {
  const auto start = Clock::now();
  Checker c;
  const CertificationReport r = analyze_published("apr15");
  c.relative("apr15 combined P_m", r.combined.martingale.p_bound, 2.569e-9, kPValueRelTol);
  c.relative("apr15 combined P_g", r.combined.game.p_bound, 1.739e-10, kPValueRelTol);

  const std::uint64_t w = 42580;
  const std::uint64_t n = 55568;
  const Predictability tau(kDefaultTau);
  const double s = 8.0 * static_cast<double>(w) / static_cast<double>(n) - 4.0;
  c.relative("all-runs P_m", pvalue_martingale(s, n, tau).p_bound, 1.017e-16, kPValueRelTol);
  c.relative("all-runs P_g", pvalue_game(w, n, tau).p_bound, 4.891e-18, kPValueRelTol);

  const double elapsed = seconds_since(start);
  c.truth("runtime < 1 s", elapsed < kRuntimeLimitS);
  char buf[64];
  std::snprintf(buf, sizeof buf, ", %.3f s", elapsed);
  return {c.ok(), c.summary() + buf};
}

Verdict criterion3() {
  Checker c;
  for (const auto& g : other_runs()) check_run(c, g);
  return {c.ok(), c.summary()};
}

Verdict criterion4() {
  const auto start = Clock::now();
  Checker c;
  for (Herald h : kHeralds) {
    double best_lib = -10.0;
    double best_oracle = -10.0;
    for (std::size_t i = 0; i < kStrategyCount; ++i) {
      const auto strat = DeterministicStrategy::from_index(i);
      best_lib = std::max(best_lib, expected_s(strat, h, 0.5, 0.5));
      double s = 0.0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          const int x = (i >> a) & 1u ? -1 : 1;
          const int y = (i >> (2 + b)) & 1u ? -1 : 1;
          s += oracle::chsh_sign(value(h), a, b) * x * y;
        }
      best_oracle = std::max(best_oracle, s);
    }
    c.truth(std::string(to_string(h)) + " library max == 2", best_lib == 2.0);
    c.truth(std::string(to_string(h)) + " brute-force max == 2", best_oracle == 2.0);
  }
  std::mt19937_64 gen(20160415);
  std::uniform_real_distribution<double> dist(0.0, 0.5);
  for (int i = 0; i < 100; ++i) {
    const double tau = dist(gen);
    c.near("optimal_biased_expected_s(" + std::to_string(tau) + ")",
           optimal_biased_expected_s(tau), 2.0 + 8.0 * (tau - tau * tau),
           kClosedFormTol);
  }
  const double elapsed = seconds_since(start);
  c.truth("runtime < 1 s", elapsed < kRuntimeLimitS);
  char buf[64];
  std::snprintf(buf, sizeof buf, ", %.3f s", elapsed);
  return {c.ok(), c.summary() + buf};
}

Verdict criterion5() {
  struct Case {
    std::string name;
    ModelSpec model;
    SettingSource source;
    double tau_bound;
  };
  std::vector<Case> cases;
  {
    Case k{"deterministic(12)", {}, {}, 0.0};
    cases.push_back(k);
  }
  {
    Case k{"memory(loss_reactive)", {}, {}, 0.0};
    k.model.kind = ModelKind::memory_lhv;
    k.model.policy = MemoryPolicy::loss_reactive;
    cases.push_back(k);
  }
  {
    Case k{"memory(herald_conditioned)", {}, {}, 0.0};
    k.model.kind = ModelKind::memory_lhv;
    k.model.policy = MemoryPolicy::herald_conditioned;
    cases.push_back(k);
  }
  {
    Case k{"optimal_biased(tau=0.05)", {}, {}, 0.05};
    k.model.kind = ModelKind::optimal_biased_lhv;
    k.source.tau_a = 0.05;
    k.source.tau_b = 0.05;
    k.source.pattern = BiasPattern::random_sign;
    cases.push_back(k);
  }

  Checker c;
  std::ostringstream info;
  const auto start = Clock::now();
  std::uint64_t seed = 1;
  for (const auto& k : cases) {
    BoundValidationConfig cfg;
    cfg.simulation.model = k.model;
    cfg.simulation.source = k.source;
    cfg.simulation.n_events = kSoundnessEvents;
    cfg.simulation.seed = seed++;
    cfg.trials = kSoundnessTrials;
    cfg.kappa = kKappa;
    cfg.tau_bound = k.tau_bound;
    const BoundValidation v = validate_bound(cfg);
    const double limit = kKappa + 3.0 * std::sqrt(kKappa * (1 - kKappa) /
                                                  static_cast<double>(v.trials));
    c.truth(k.name + " P_m frequency within limit", v.martingale.frequency <= limit);
    c.truth(k.name + " P_g frequency within limit", v.game.frequency <= limit);
    char buf[200];
    std::snprintf(buf, sizeof buf, "\n    %-28s mean S %.4f  freq(P_m<=k) %.5f  "
                  "freq(P_g<=k) %.5f  limit %.5f",
                  k.name.c_str(), v.mean_s, v.martingale.frequency,
                  v.game.frequency, limit);
    info << buf;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, ", %.1f s", seconds_since(start));
  return {c.ok(), c.summary() + buf + info.str()};
}

Verdict criterion6() {
  Checker c;
  std::ostringstream info;
  const std::array<std::pair<double, double>, 2> cases{
      {{1.0, 2.0 * std::numbers::sqrt2}, {0.785, 2.221}}};
  std::uint64_t seed = 61;
  for (const auto& [v, target] : cases) {
    SimulationConfig cfg;
    cfg.model.kind = ModelKind::quantum;
    cfg.model.visibility = v;
    cfg.n_events = kQuantumEvents;
    cfg.seed = seed++;
    const SEstimate s = s_event_based(simulate_run(cfg));
    const double z = (s.value - target) / s.sigma;
    c.truth("V=" + std::to_string(v) + " within 3 standard errors",
            std::abs(z) <= kQuantumSigmas);
    char buf[160];
    std::snprintf(buf, sizeof buf, "\n    V=%.3f  S %.5f +- %.5f  target %.5f  z %+.2f",
                  v, s.value, s.sigma, target, z);
    info << buf;
  }
  return {c.ok(), c.summary() + info.str()};
}

Verdict criterion7() {
  Checker c;
  struct Golden {
    std::string id;
    double z;
    double y_by_a;
    double x_by_b;
  };
  const std::vector<Golden> goldens{{"nov27", 0.72, 0.483, 0.387},
                                    {"apr07", 0.24, 0.014, 0.892},
                                    {"apr15", 0.45, 0.509, 0.890},
                                    {"jun14", 0.08, 0.919, 0.255}};
  for (const auto& g : goldens) {
    const auto r = analyze_nosignaling(
        reconstruct_dataset(published_run(g.id).table, g.id));
    c.near(g.id + " z-test (a, b)", r.settings.p_value, g.z, kNoSignalTol);
    c.near(g.id + " t-test y by a", r.y_by_a.p_value, g.y_by_a, kNoSignalTol);
    c.near(g.id + " t-test x by b", r.x_by_b.p_value, g.x_by_b, kNoSignalTol);
  }
  return {c.ok(), c.summary()};
}

Verdict criterion8() {
  Checker c;
  auto seg = [](double d, double u) {
    return TimingSegment{"", Ticks::from_ns(d), Ticks::from_ns(u)};
  };
  TimingChain trap1{"trap1", {seg(80, 0), seg(217, 4), seg(570, 3), seg(80, 0)},
                    Ticks::from_ns(1)};
  TimingChain trap2{"trap2", {seg(80, 0), seg(204, 4), seg(725, 3), seg(84, 0)},
                    Ticks::from_ns(1)};
  const ChainTotal t1 = chain_total(trap1);
  const ChainTotal t2 = chain_total(trap2);
  c.truth("chain total 947 ns", t1.total == Ticks(9470));
  c.truth("chain total 1093 ns", t2.total == Ticks(10930));

  SeparationScenario s1{398.0, 0.5, Ticks::from_ns(28.5), Ticks::from_ns(7)};
  SeparationScenario s2{402.7, 0.5, Ticks::from_ns(-28.5), Ticks::from_ns(7)};
  const SeparationMargin m1 = separation_margin(s1, t1);
  const SeparationMargin m2 = separation_margin(s2, t2);
  c.truth("margin 340.7 ns (got " + to_string(m1.margin) + ")", m1.margin == Ticks(3407));
  c.truth("margin 267.4 ns (got " + to_string(m2.margin) + ")", m2.margin == Ticks(2674));
  const SymmetricMargin sym = symmetric_margin(m1.margin, m2.margin);
  c.truth("symmetric margin 304.0 ns (got " + to_string(sym.margin) + ")",
          sym.margin == Ticks(3040));
  return {c.ok(), c.summary()};
}

Verdict criterion9() {
  Checker c;
  PredictabilityBudget b;
  b.observed_bias = 8.74e-6;
  b.bias_sigma = 8.33e-7;
  b.bias_confidence = 2.0;
  b.threshold.mu1_mv = -9.09;
  b.threshold.sigma1_mv = 0.13;
  b.threshold.mu2_mv = -8.48;
  b.threshold.sigma2_mv = 0.25;
  b.threshold.set_point_mv = -8.785;
  b.threshold.confidence = 5.0;
  const double c2 = 6.12e-4 / (1.555 * 1.555);
  const double sp = b.threshold.set_point_mv;
  b.threshold.curve = {c2 * sp * sp, -2.0 * c2 * sp, c2};
  b.temperature.coefficients_v_per_c = {1e-5, 1e-5};
  b.temperature.excursion_c = 0.15;
  b.temperature.bias_slope_per_v = 2.23;
  const BudgetResult r = predictability_budget(b);
  c.relative("tau1", r.tau1, 1.04e-5, kBudgetRelTol);
  c.relative("threshold component", r.threshold, 6.12e-4, kBudgetRelTol);
  c.relative("temperature component", r.temperature, 6.7e-6, kBudgetRelTol);
  c.truth("xor_reduction(6.3e-4, 2) < 1e-6", xor_reduction(6.3e-4, 2) < 1e-6);

  // Property suite, exact comparisons.
  std::mt19937_64 gen(9);
  for (int rep = 0; rep < 20; ++rep) {
    const std::uint64_t n = 200 + gen() % 5000;
    const BitStream s = simulate_stream(n, gen(), 0.0);
    c.truth("complement negates bias", bias(s.complement()).bias == -bias(s).bias);
    c.truth("reversal keeps bias", bias(s.reversed()).bias == bias(s).bias);
    for (std::uint64_t lag = 1; lag <= kMaxAuditedLag; ++lag) {
      const double v = scc(s, lag);
      c.truth("complement keeps SCC", scc(s.complement(), lag) == v);
      c.truth("reversal keeps SCC", scc(s.reversed(), lag) == v);
    }
  }
  const std::uint64_t n = 1000;
  const BitStream zeros = BitStream::from_ascii(std::string(n, '0'));
  std::string alt;
  for (std::uint64_t k = 0; k < n; ++k) alt += k % 2 ? '1' : '0';
  const BitStream alternating = BitStream::from_ascii(alt);
  c.truth("SCC1 of 01101 == -0.4", scc(BitStream::from_ascii("01101"), 1) == -0.4);
  c.truth("constant stream SCC1 == (n-1)/n", scc(zeros, 1) == (n - 1.0) / n);
  c.truth("constant stream bias == -1/2", bias(zeros).bias == -0.5);
  c.truth("alternating SCC1 == -(n-1)/n", scc(alternating, 1) == -(n - 1.0) / n);
  c.truth("alternating SCC2 == (n-2)/n", scc(alternating, 2) == (n - 2.0) / n);
  c.truth("alternating bias == 0", bias(alternating).bias == 0.0);
  return {c.ok(), c.summary()};
}

Verdict criterion10() {
  Checker c;
  double worst_binomial = 0.0;
  for (unsigned q : {1u, 2u, 3u}) {
    const double xi = q / 4.0;
    for (unsigned nn = 0; nn <= 30; ++nn)
      for (unsigned w = 0; w <= nn; ++w) {
        const double want = static_cast<double>(oracle::binomial_tail(w, nn, q, 4));
        const double got = binomial_tail(w, nn, xi);
        worst_binomial = std::max(worst_binomial, std::abs(got - want) / want);
        c.relative("binomial_tail(" + std::to_string(w) + "," + std::to_string(nn) +
                       "," + std::to_string(xi) + ")",
                   got, want, kKernelRelTol);
      }
  }
  double worst_martingale = 0.0;
  const std::array<double, 10> s_grid{2.02, 2.1, 2.2, 2.3, 2.5, 2.7, 3.0, 3.3, 3.6, 3.9};
  const std::array<std::uint64_t, 5> n_grid{10, 30, 100, 300, 1000};
  for (double s : s_grid)
    for (std::uint64_t nn : n_grid) {
      const double want = static_cast<double>(oracle::martingale_bound(s, nn, kDefaultTau));
      const double got = pvalue_martingale(s, nn, Predictability(kDefaultTau)).p_bound;
      worst_martingale = std::max(worst_martingale, std::abs(got - want) / want);
      c.relative("martingale(" + std::to_string(s) + "," + std::to_string(nn) + ")",
                 got, want, kKernelRelTol);
    }
  char buf[160];
  std::snprintf(buf, sizeof buf, ", worst relative error: binomial %.2e, martingale %.2e",
                worst_binomial, worst_martingale);
  return {c.ok(), c.summary() + buf};
}

const std::array<std::pair<const char*, std::function<Verdict()>>, 10> kCriteria{{
    {"Apr 15 golden run", criterion1},
    {"golden P-values", criterion2},
    {"Nov 27 / Apr 7 / Jun 14 golden runs", criterion3},
    {"LHV ceiling", criterion4},
    {"bound soundness", criterion5},
    {"quantum consistency", criterion6},
    {"no-signaling golden", criterion7},
    {"spacetime golden", criterion8},
    {"QRNG budget and properties", criterion9},
    {"numerical kernels", criterion10},
}};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k < 1 || k > static_cast<int>(kCriteria.size())) {
      std::fprintf(stderr, "unknown criterion '%s'\n", argv[i]);
      return 2;
    }
    selected.push_back(k);
  }
  if (selected.empty())
    for (int k = 1; k <= static_cast<int>(kCriteria.size()); ++k) selected.push_back(k);

  int failed = 0;
  for (int k : selected) {
    const auto& [name, run] = kCriteria[k - 1];
    Verdict o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("criterion %2d %s  %s: %s\n", k, o.pass ? "PASS" : "FAIL", name,
                o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed ? 1 : 0;
}
