#include "bellcert/lhv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>
#include <thread>

#include "bellcert/error.hpp"
#include "bellcert/pvalues.hpp"

namespace bellcert {

namespace {

constexpr double kTieTolerance = 1e-12;

double probability(Choice c, double p_unprimed) noexcept {
  return c == Choice::unprimed ? p_unprimed : 1.0 - p_unprimed;
}

std::size_t herald_slot(Herald h) noexcept {
  return h == Herald::psi_plus ? 0 : 1;
}

// Stream ids inside one simulated run.
enum Stream : std::uint64_t {
  kHeraldStream = 0,
  kSettingA = 1,
  kSettingB = 2,
  kModelStream = 3,
  kBiasSigns = 4,
};

}  // namespace

std::size_t DeterministicStrategy::index() const noexcept {
  std::size_t idx = 0;
  if (x_of[0] == Outcome::down) idx |= 1u;
  if (x_of[1] == Outcome::down) idx |= 2u;
  if (y_of[0] == Outcome::down) idx |= 4u;
  if (y_of[1] == Outcome::down) idx |= 8u;
  return idx;
}

DeterministicStrategy DeterministicStrategy::from_index(std::size_t index) {
  if (index >= kStrategyCount)
    throw DomainError("strategy index must be in [0, 15]");
  auto pick = [index](unsigned bit) {
    return (index >> bit) & 1u ? Outcome::down : Outcome::up;
  };
  return {{pick(0), pick(1)}, {pick(2), pick(3)}};
}

std::array<DeterministicStrategy, kStrategyCount> enumerate_strategies() {
  std::array<DeterministicStrategy, kStrategyCount> all;
  for (std::size_t i = 0; i < kStrategyCount; ++i)
    all[i] = DeterministicStrategy::from_index(i);
  return all;
}

double expected_s(const DeterministicStrategy& s, Herald h, double p_alpha,
                  double p_beta) noexcept {
  double total = 0.0;
  for (Choice a : kChoices) {
    for (Choice b : kChoices) {
      total += 4.0 * g_sign(h, a, b) * value(s.x(a)) * value(s.y(b)) *
               probability(a, p_alpha) * probability(b, p_beta);
    }
  }
  return total;
}

DeterministicStrategy best_strategy(Herald h, double p_alpha,
                                    double p_beta) noexcept {
  DeterministicStrategy best;
  double best_s = -5.0;
  for (const auto& s : enumerate_strategies()) {
    const double e = expected_s(s, h, p_alpha, p_beta);
    if (e > best_s + kTieTolerance) {
      best_s = e;
      best = s;
    }
  }
  return best;
}

std::vector<DeterministicStrategy> optimal_strategies(Herald h) {
  std::vector<DeterministicStrategy> out;
  for (const auto& s : enumerate_strategies()) {
    if (std::abs(expected_s(s, h, 0.5, 0.5) - 2.0) < kTieTolerance)
      out.push_back(s);
  }
  return out;
}

double optimal_biased_expected_s(double tau) {
  if (!(tau >= 0.0 && tau <= 0.5))
    throw DomainError("predictability tau must lie in [0, 1/2]");
  const std::array<double, 2> extremes{0.5 - tau, 0.5 + tau};
  double best = -4.0;
  for (Herald h : kHeralds)
    for (double pa : extremes)
      for (double pb : extremes)
        for (const auto& s : enumerate_strategies())
          best = std::max(best, expected_s(s, h, pa, pb));
  return best;
}

double quantum_correlator(Herald h, double a_deg, double b_deg,
                          double visibility) {
  if (!(visibility >= 0.0 && visibility <= 1.0))
    throw DomainError("visibility must lie in [0, 1]");
  constexpr double kDeg = std::numbers::pi / 180.0;
  const double angle =
      h == Herald::psi_minus ? (a_deg - b_deg) : (a_deg + b_deg);
  return -visibility * std::cos(angle * kDeg);
}

void SettingSource::validate() const {
  if (!(std::abs(tau_a) <= 0.5) || !(std::abs(tau_b) <= 0.5))
    throw DomainError("setting bias must lie in [-1/2, 1/2]");
}

std::pair<Outcome, Outcome> LocalModel::respond(const RoundContext& ctx,
                                                Choice a, Choice b,
                                                CounterRng& rng) {
  const DeterministicStrategy s = commit(ctx, rng);
  return {s.x(a), s.y(b)};
}

DeterministicStrategy OptimalBiasedModel::commit(const RoundContext& ctx,
                                                 CounterRng&) {
  return best_strategy(ctx.herald, ctx.p_alpha, ctx.p_beta);
}

MemoryModel::MemoryModel(MemoryPolicy policy)
    : policy_(policy),
      optimal_{optimal_strategies(Herald::psi_plus),
               optimal_strategies(Herald::psi_minus)} {}

std::string_view MemoryModel::name() const noexcept {
  return to_string(policy_);
}

DeterministicStrategy MemoryModel::commit(const RoundContext& ctx,
                                          CounterRng&) {
  const auto& pool = optimal_[herald_slot(ctx.herald)];
  if (ctx.history.empty()) return pool[cursor_ % pool.size()];

  const TrialRecord& last = ctx.history.back();
  switch (policy_) {
    case MemoryPolicy::loss_reactive:
      if (!is_win(last)) ++cursor_;
      return pool[cursor_ % pool.size()];
    case MemoryPolicy::herald_conditioned: {
      const std::uint64_t key =
          (herald_slot(last.herald) << 5) | (value(last.a) << 4) |
          (value(last.b) << 3) | ((last.x == Outcome::up) << 2) |
          ((last.y == Outcome::up) << 1) | herald_slot(ctx.herald);
      return pool[mix64(key + ctx.history.size()) % pool.size()];
    }
  }
  return pool.front();
}

QuantumModel::QuantumModel(double visibility, SettingAngles angles) {
  for (Herald h : kHeralds) {
    for (Choice a : kChoices) {
      for (Choice b : kChoices) {
        const double e = quantum_correlator(h, angles.angle(Side::one, a),
                                            angles.angle(Side::two, b),
                                            visibility);
        p_same_[herald_slot(h) * 4 + 2 * value(a) + value(b)] =
            0.5 * (1.0 + e);
      }
    }
  }
}

std::pair<Outcome, Outcome> QuantumModel::respond(const RoundContext& ctx,
                                                  Choice a, Choice b,
                                                  CounterRng& rng) {
  const Outcome x = rng.bernoulli(0.5) ? Outcome::up : Outcome::down;
  const double p_same = p_same_[herald_slot(ctx.herald) * 4 + 2 * value(a) +
                                value(b)];
  const Outcome y = rng.bernoulli(p_same) ? x : flip(x);
  return {x, y};
}

std::string_view to_string(ModelKind k) noexcept {
  switch (k) {
    case ModelKind::deterministic: return "deterministic";
    case ModelKind::memory_lhv: return "memory_lhv";
    case ModelKind::optimal_biased_lhv: return "optimal_biased_lhv";
    case ModelKind::quantum: return "quantum";
  }
  return "unknown";
}

std::string_view to_string(MemoryPolicy p) noexcept {
  return p == MemoryPolicy::loss_reactive ? "loss_reactive"
                                          : "herald_conditioned";
}

std::unique_ptr<OutcomeModel> make_model(const ModelSpec& spec) {
  switch (spec.kind) {
    case ModelKind::deterministic:
      return std::make_unique<DeterministicModel>(
          DeterministicStrategy::from_index(spec.strategy_index));
    case ModelKind::memory_lhv:
      return std::make_unique<MemoryModel>(spec.policy);
    case ModelKind::optimal_biased_lhv:
      return std::make_unique<OptimalBiasedModel>();
    case ModelKind::quantum:
      if (!(spec.visibility >= 0.0 && spec.visibility <= 1.0))
        throw DomainError("visibility must lie in [0, 1]");
      return std::make_unique<QuantumModel>(spec.visibility, spec.angles);
  }
  throw DomainError("unknown model kind");
}

RunDataset simulate_run(const SimulationConfig& config) {
  auto model = make_model(config.model);
  return simulate_run(*model, config);
}

RunDataset simulate_run(OutcomeModel& model, const SimulationConfig& config) {
  if (config.n_events < 1) throw DomainError("n_events must be >= 1");
  if (!(config.psi_plus_fraction >= 0.0 && config.psi_plus_fraction <= 1.0))
    throw DomainError("psi_plus_fraction must lie in [0, 1]");
  config.source.validate();

  CounterRng herald_rng = CounterRng::stream(config.seed, kHeraldStream);
  CounterRng a_rng = CounterRng::stream(config.seed, kSettingA);
  CounterRng b_rng = CounterRng::stream(config.seed, kSettingB);
  CounterRng model_rng = CounterRng::stream(config.seed, kModelStream);
  CounterRng sign_rng = CounterRng::stream(config.seed, kBiasSigns);

  RunDataset run;
  run.angles = config.model.angles;
  run.records.reserve(config.n_events);
  model.reset();

  for (std::uint64_t i = 0; i < config.n_events; ++i) {
    RoundContext ctx;
    ctx.index = i + 1;
    ctx.herald = herald_rng.bernoulli(config.psi_plus_fraction)
                     ? Herald::psi_plus
                     : Herald::psi_minus;
    double tau_a = config.source.tau_a;
    double tau_b = config.source.tau_b;
    if (config.source.pattern == BiasPattern::random_sign) {
      if (sign_rng.bernoulli(0.5)) tau_a = -tau_a;
      if (sign_rng.bernoulli(0.5)) tau_b = -tau_b;
    }
    ctx.p_alpha = 0.5 + tau_a;
    ctx.p_beta = 0.5 + tau_b;
    ctx.history = std::span<const TrialRecord>(run.records.data(), i);

    TrialRecord r;
    r.index = ctx.index;
    r.herald = ctx.herald;
    r.a = a_rng.bernoulli(ctx.p_alpha) ? Choice::unprimed : Choice::primed;
    r.b = b_rng.bernoulli(ctx.p_beta) ? Choice::unprimed : Choice::primed;
    std::tie(r.x, r.y) = model.respond(ctx, r.a, r.b, model_rng);
    run.records.push_back(r);
  }
  return run;
}

double expected_event_rate(const HeraldModel& herald) {
  if (!(herald.p_herald >= 0.0 && herald.p_herald <= 1.0))
    throw DomainError("p_herald must lie in [0, 1]");
  if (!(herald.attempt_rate > 0.0))
    throw DomainError("attempt_rate must be positive");
  return herald.p_herald * herald.attempt_rate;
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("BELLCERT_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n > 0) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

ExceedanceStats summarize(std::uint64_t exceed, std::uint64_t trials,
                          double kappa) {
  ExceedanceStats st;
  const double n = static_cast<double>(trials);
  st.exceedances = exceed;
  st.frequency = static_cast<double>(exceed) / n;
  const double spread = 3.0 * std::sqrt(st.frequency * (1.0 - st.frequency) / n);
  st.ci_low = std::max(0.0, st.frequency - spread);
  st.ci_high = std::min(1.0, st.frequency + spread);
  st.sound = st.frequency <= kappa + 3.0 * std::sqrt(kappa * (1.0 - kappa) / n);
  return st;
}

struct Tally {
  std::uint64_t martingale = 0;
  std::uint64_t game = 0;
  double s_sum = 0.0;
};

}  // namespace

BoundValidation validate_bound(const BoundValidationConfig& config) {
  if (config.trials < 1000) throw DomainError("validate_bound needs >= 1000 trials");
  if (!(config.kappa > 0.0 && config.kappa < 1.0))
    throw DomainError("kappa must lie in (0, 1)");
  const Predictability tau(config.tau_bound);
  make_model(config.simulation.model);  // validate before spawning workers
  config.simulation.source.validate();

  const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(
      config.threads ? config.threads : default_thread_count(), config.trials));
  std::vector<Tally> tallies(workers);

  auto work = [&](unsigned w) {
    auto model = make_model(config.simulation.model);
    SimulationConfig sim = config.simulation;
    Tally& t = tallies[w];
    for (std::uint64_t k = w; k < config.trials; k += workers) {
      sim.seed = CounterRng::stream(config.simulation.seed, k).key();
      const RunDataset run = simulate_run(*model, sim);
      const WinCount wc = wins(run);
      const double s = 8.0 * static_cast<double>(wc.wins) /
                           static_cast<double>(wc.rounds) - 4.0;
      t.s_sum += s;
      if (pvalue_martingale(s, wc.rounds, tau).p_bound <= config.kappa)
        ++t.martingale;
      if (pvalue_game(wc.wins, wc.rounds, tau).p_bound <= config.kappa)
        ++t.game;
    }
  };

  {
    std::vector<std::jthread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work, w);
    work(0);
  }

  Tally total;
  for (const auto& t : tallies) {
    total.martingale += t.martingale;
    total.game += t.game;
    total.s_sum += t.s_sum;
  }

  BoundValidation out;
  out.trials = config.trials;
  out.n_events = config.simulation.n_events;
  out.kappa = config.kappa;
  out.tau_bound = config.tau_bound;
  out.mean_s = total.s_sum / static_cast<double>(config.trials);
  out.martingale = summarize(total.martingale, config.trials, config.kappa);
  out.game = summarize(total.game, config.trials, config.kappa);
  return out;
}

}  // namespace bellcert
