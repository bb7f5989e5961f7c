#pragma once

// Local-hidden-variable and quantum sources for simulated event-ready runs.

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bellcert/events.hpp"
#include "bellcert/rng.hpp"

namespace bellcert {

/// Pre-assigned outcomes for both local choices on both sides.
struct DeterministicStrategy {
  std::array<Outcome, 2> x_of{Outcome::up, Outcome::up};
  std::array<Outcome, 2> y_of{Outcome::up, Outcome::up};

  Outcome x(Choice a) const noexcept { return x_of[value(a)]; }
  Outcome y(Choice b) const noexcept { return y_of[value(b)]; }

  /// Bits 0..3 set mean x(α), x(α′), y(β), y(β′) = −1.
  std::size_t index() const noexcept;
  static DeterministicStrategy from_index(std::size_t index);

  bool operator==(const DeterministicStrategy&) const = default;
};

inline constexpr std::size_t kStrategyCount = 16;

/// All 16 strategies in index order.
std::array<DeterministicStrategy, kStrategyCount> enumerate_strategies();

/// Σ_ab 4·g(a,b)·x(a)·y(b)·Pr(a)·Pr(b), with Pr(α) = p_alpha, Pr(β) = p_beta.
double expected_s(const DeterministicStrategy& s, Herald h, double p_alpha,
                  double p_beta) noexcept;

/// Strategy maximising expected_s for the given setting probabilities
/// (lowest index on ties).
DeterministicStrategy best_strategy(Herald h, double p_alpha,
                                    double p_beta) noexcept;

/// Strategies reaching the unbiased-settings maximum (S = 2) for herald h.
std::vector<DeterministicStrategy> optimal_strategies(Herald h);

/// Largest per-round expected S an LHV model achieves when every setting
/// probability may sit anywhere in [1/2 − τ, 1/2 + τ] and the model knows
/// where. Brute force over the 16 strategies, both heralds and the extreme
/// probabilities (expected_s is bilinear in them).
double optimal_biased_expected_s(double tau);

/// Quantum correlator with scalar visibility V, angles in spin-space degrees:
/// Ψ⁻ → −V·cos(a − b), Ψ⁺ → −V·cos(a + b).
double quantum_correlator(Herald h, double a_deg, double b_deg,
                          double visibility);

enum class BiasPattern {
  /// Pr(α) = 1/2 + τ_a and Pr(β) = 1/2 + τ_b every round.
  fixed,
  /// The sign of each side's bias is redrawn every round; the model is told
  /// the signs before the settings are drawn.
  random_sign,
};

/// Setting generator with bounded predictability.
struct SettingSource {
  double tau_a = 0.0;
  double tau_b = 0.0;
  BiasPattern pattern = BiasPattern::fixed;

  /// Throws DomainError unless both biases lie in [−1/2, 1/2].
  void validate() const;
};

/// Everything a model may know when a round starts: the herald, the current
/// setting probabilities and the full transcript of earlier rounds.
struct RoundContext {
  std::uint64_t index = 0;
  Herald herald = Herald::psi_plus;
  double p_alpha = 0.5;
  double p_beta = 0.5;
  std::span<const TrialRecord> history;
};

class OutcomeModel {
 public:
  virtual ~OutcomeModel() = default;

  virtual std::string_view name() const noexcept = 0;
  /// Called before the first round of every run.
  virtual void reset() {}
  virtual std::pair<Outcome, Outcome> respond(const RoundContext& ctx,
                                              Choice a, Choice b,
                                              CounterRng& rng) = 0;
};

/// Base for local models: a strategy is committed before the settings exist,
/// and each side's outcome is read from it using only the local setting.
class LocalModel : public OutcomeModel {
 public:
  std::pair<Outcome, Outcome> respond(const RoundContext& ctx, Choice a,
                                      Choice b, CounterRng& rng) final;

 protected:
  virtual DeterministicStrategy commit(const RoundContext& ctx,
                                       CounterRng& rng) = 0;
};

class DeterministicModel final : public LocalModel {
 public:
  explicit DeterministicModel(DeterministicStrategy strategy)
      : strategy_(strategy) {}
  std::string_view name() const noexcept override { return "deterministic"; }

 protected:
  DeterministicStrategy commit(const RoundContext&, CounterRng&) override {
    return strategy_;
  }

 private:
  DeterministicStrategy strategy_;
};

/// Picks, every round, the strategy that is best for the announced herald and
/// setting probabilities. Saturates 2 + 8(τ − τ²) against a biased source.
class OptimalBiasedModel final : public LocalModel {
 public:
  std::string_view name() const noexcept override { return "optimal_biased"; }

 protected:
  DeterministicStrategy commit(const RoundContext& ctx, CounterRng&) override;
};

enum class MemoryPolicy {
  /// Cycle to the next S-saturating strategy after every lost round.
  loss_reactive,
  /// Strategy chosen by a deterministic hash of the previous round's herald,
  /// settings and outcomes together with the current herald.
  herald_conditioned,
};

class MemoryModel final : public LocalModel {
 public:
  explicit MemoryModel(MemoryPolicy policy);
  std::string_view name() const noexcept override;
  void reset() override { cursor_ = 0; }

 protected:
  DeterministicStrategy commit(const RoundContext& ctx, CounterRng&) override;

 private:
  MemoryPolicy policy_;
  std::array<std::vector<DeterministicStrategy>, 2> optimal_;
  std::size_t cursor_ = 0;
};

/// Draws x uniformly and sets y = x with probability (1 + E)/2, so both
/// marginals are exactly unbiased and E[x·y] = quantum_correlator(...).
class QuantumModel final : public OutcomeModel {
 public:
  QuantumModel(double visibility, SettingAngles angles);
  std::string_view name() const noexcept override { return "quantum"; }
  std::pair<Outcome, Outcome> respond(const RoundContext& ctx, Choice a,
                                      Choice b, CounterRng& rng) override;

 private:
  // (1 + E)/2 per (herald, a, b)
  std::array<double, 8> p_same_{};
};

enum class ModelKind { deterministic, memory_lhv, optimal_biased_lhv, quantum };

std::string_view to_string(ModelKind k) noexcept;
std::string_view to_string(MemoryPolicy p) noexcept;

struct ModelSpec {
  ModelKind kind = ModelKind::deterministic;
  /// Strategy for `deterministic`; the default, 12, is "always anticorrelate"
  /// (x = +1, y = −1).
  std::size_t strategy_index = 12;
  MemoryPolicy policy = MemoryPolicy::loss_reactive;
  double visibility = 1.0;
  SettingAngles angles;
};

/// Throws DomainError on invalid parameters.
std::unique_ptr<OutcomeModel> make_model(const ModelSpec& spec);

struct SimulationConfig {
  ModelSpec model;
  SettingSource source;
  /// Probability that a herald announces Ψ⁺.
  double psi_plus_fraction = 0.5;
  std::uint64_t n_events = 0;
  std::uint64_t seed = 0;
};

/// Reproducible run: identical config gives a bit-identical dataset.
RunDataset simulate_run(const SimulationConfig& config);
RunDataset simulate_run(OutcomeModel& model, const SimulationConfig& config);

struct HeraldModel {
  double p_herald = 0.7e-6;
  double attempt_rate = 5.2e4;  // attempts per second
  double psi_plus_fraction = 0.5;
};

/// Heralded events per second.
double expected_event_rate(const HeraldModel& herald);

struct ExceedanceStats {
  std::uint64_t exceedances = 0;
  double frequency = 0.0;
  /// frequency ± 3 binomial standard deviations, clipped to [0, 1].
  double ci_low = 0.0;
  double ci_high = 0.0;
  /// frequency ≤ κ + 3·sqrt(κ(1 − κ)/trials)
  bool sound = false;
};

struct BoundValidation {
  std::uint64_t trials = 0;
  std::uint64_t n_events = 0;
  double kappa = 0.0;
  double tau_bound = 0.0;
  double mean_s = 0.0;
  ExceedanceStats martingale;
  ExceedanceStats game;
};

struct BoundValidationConfig {
  SimulationConfig simulation;
  std::uint64_t trials = 1000;
  double kappa = 0.01;
  /// τ assumed by the bounds under test.
  double tau_bound = 0.0;
  /// 0 = default_thread_count()
  unsigned threads = 0;
};

/// Runs `trials` independent simulations (trial k seeded from stream k of the
/// base seed), evaluates both bounds on the combined data of each and counts
/// how often each bound falls to κ or below.
BoundValidation validate_bound(const BoundValidationConfig& config);

/// BELLCERT_THREADS if set, otherwise the hardware concurrency.
unsigned default_thread_count();

}  // namespace bellcert
