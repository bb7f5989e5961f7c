#include "bellcert/lhv.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "bellcert/error.hpp"
#include "oracles.hpp"

namespace bellcert {
namespace {

// Expected S of strategy (xa, xa', yb, yb') with the setting probabilities,
// straight from the definition.
double brute_expected_s(const std::array<int, 4>& s, int h, double pa,
                        double pb) {
  double total = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      const double prob = (a == 0 ? pa : 1 - pa) * (b == 0 ? pb : 1 - pb);
      total += 4.0 * oracle::chsh_sign(h, a, b) * s[a] * s[2 + b] * prob;
    }
  return total;
}

std::array<int, 4> signs_of(std::size_t index) {
  std::array<int, 4> s{};
  for (int k = 0; k < 4; ++k) s[k] = (index >> k) & 1u ? -1 : 1;
  return s;
}

TEST(Strategies, SixteenDistinctInIndexOrder) {
  const auto all = enumerate_strategies();
  std::set<std::size_t> seen;
  for (std::size_t i = 0; i < all.size(); ++i) {
    EXPECT_EQ(all[i].index(), i);
    EXPECT_EQ(DeterministicStrategy::from_index(i), all[i]);
    const auto s = signs_of(i);
    EXPECT_EQ(value(all[i].x(Choice::unprimed)), s[0]);
    EXPECT_EQ(value(all[i].x(Choice::primed)), s[1]);
    EXPECT_EQ(value(all[i].y(Choice::unprimed)), s[2]);
    EXPECT_EQ(value(all[i].y(Choice::primed)), s[3]);
    seen.insert(i);
  }
  EXPECT_EQ(seen.size(), 16u);
  EXPECT_THROW(DeterministicStrategy::from_index(16), DomainError);
}

TEST(Strategies, CeilingIsTwoForUnbiasedSettings) {
  for (Herald h : kHeralds) {
    double best = -10.0;
    for (std::size_t i = 0; i < kStrategyCount; ++i) {
      const double mine =
          expected_s(DeterministicStrategy::from_index(i), h, 0.5, 0.5);
      EXPECT_NEAR(mine, brute_expected_s(signs_of(i), value(h), 0.5, 0.5),
                  1e-15);
      best = std::max(best, mine);
    }
    EXPECT_EQ(best, 2.0);
    EXPECT_EQ(optimal_strategies(h).size(), 8u);
    for (const auto& s : optimal_strategies(h))
      EXPECT_EQ(expected_s(s, h, 0.5, 0.5), 2.0);
  }
}

TEST(Strategies, AlwaysAnticorrelateIsOptimalForBothHeralds) {
  const auto s = DeterministicStrategy::from_index(12);
  EXPECT_EQ(s.x(Choice::unprimed), Outcome::up);
  EXPECT_EQ(s.y(Choice::primed), Outcome::down);
  for (Herald h : kHeralds) EXPECT_EQ(expected_s(s, h, 0.5, 0.5), 2.0);
}

TEST(OptimalBiased, MatchesClosedFormForRandomTau) {
  std::mt19937_64 gen(2016);
  std::uniform_real_distribution<double> dist(0.0, 0.5);
  for (int i = 0; i < 100; ++i) {
    const double tau = dist(gen);
    EXPECT_NEAR(optimal_biased_expected_s(tau), 2.0 + 8.0 * (tau - tau * tau),
                1e-12)
        << tau;
  }
  EXPECT_NEAR(optimal_biased_expected_s(0.25), 3.5, 1e-15);
  EXPECT_THROW(optimal_biased_expected_s(0.6), DomainError);
}

TEST(OptimalBiased, BestStrategyBeatsEveryOther) {
  for (double pa : {0.3, 0.5, 0.62})
    for (double pb : {0.41, 0.5, 0.7})
      for (Herald h : kHeralds) {
        const double best = expected_s(best_strategy(h, pa, pb), h, pa, pb);
        for (std::size_t i = 0; i < kStrategyCount; ++i)
          EXPECT_LE(brute_expected_s(signs_of(i), value(h), pa, pb),
                    best + 1e-12);
      }
}

TEST(QuantumCorrelator, Examples) {
  EXPECT_NEAR(quantum_correlator(Herald::psi_minus, 0, -45, 1.0),
              -std::cos(std::numbers::pi / 4), 1e-15);
  EXPECT_NEAR(quantum_correlator(Herald::psi_plus, 90, 45, 1.0),
              -std::cos(135.0 * std::numbers::pi / 180), 1e-15);
  EXPECT_NEAR(quantum_correlator(Herald::psi_minus, 30, 30, 0.5), -0.5, 1e-15);
  SettingAngles ang;
  for (Herald h : kHeralds) {
    double s = 0.0;
    for (Choice a : kChoices)
      for (Choice b : kChoices)
        s += g_sign(h, a, b) * quantum_correlator(h, ang.angle(Side::one, a),
                                                  ang.angle(Side::two, b), 1.0);
    EXPECT_NEAR(s, 2.0 * std::numbers::sqrt2, 1e-12);
  }
}

TEST(Simulate, Reproducible) {
  SimulationConfig cfg;
  cfg.model.kind = ModelKind::memory_lhv;
  cfg.model.policy = MemoryPolicy::herald_conditioned;
  cfg.n_events = 2000;
  cfg.seed = 77;
  const RunDataset a = simulate_run(cfg);
  const RunDataset b = simulate_run(cfg);
  EXPECT_EQ(a.records, b.records);
  cfg.seed = 78;
  EXPECT_NE(simulate_run(cfg).records, a.records);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.records[i].index, i + 1);
}

TEST(Simulate, DeterministicModelWinsThreeQuartersOnAverage) {
  SimulationConfig cfg;
  cfg.n_events = 200000;
  cfg.seed = 5;
  const RunDataset d = simulate_run(cfg);
  const WinCount w = wins(d);
  const double p = static_cast<double>(w.wins) / w.rounds;
  EXPECT_NEAR(p, 0.75, 4.0 * std::sqrt(0.75 * 0.25 / w.rounds));
}

TEST(Simulate, LocalModelsNeverRespondToRemoteSetting) {
  // For a fixed committed strategy, x depends on a only.
  SimulationConfig cfg;
  cfg.model.strategy_index = 6;
  cfg.n_events = 5000;
  cfg.seed = 9;
  const RunDataset d = simulate_run(cfg);
  const auto s = DeterministicStrategy::from_index(6);
  for (const auto& r : d.records) {
    ASSERT_EQ(r.x, s.x(r.a));
    ASSERT_EQ(r.y, s.y(r.b));
  }
}

TEST(Simulate, BiasedSourceShiftsSettingFrequency) {
  SimulationConfig cfg;
  cfg.source.tau_a = 0.1;
  cfg.n_events = 100000;
  cfg.seed = 3;
  const RunDataset d = simulate_run(cfg);
  double alpha = 0.0;
  for (const auto& r : d.records) alpha += r.a == Choice::unprimed;
  EXPECT_NEAR(alpha / d.size(), 0.6, 0.01);
}

TEST(Simulate, InvalidParametersThrow) {
  SimulationConfig cfg;
  cfg.n_events = 10;
  cfg.source.tau_a = 0.7;
  EXPECT_THROW(simulate_run(cfg), DomainError);
  cfg.source.tau_a = 0.0;
  cfg.model.strategy_index = 99;
  EXPECT_THROW(simulate_run(cfg), DomainError);
  cfg.model = ModelSpec{};
  cfg.model.kind = ModelKind::quantum;
  cfg.model.visibility = 1.5;
  EXPECT_THROW(simulate_run(cfg), DomainError);
}

TEST(EventRate, PublishedHeraldModel) {
  EXPECT_NEAR(expected_event_rate(HeraldModel{}), 0.0364, 1e-12);
}

TEST(ValidateBound, RejectsTooFewTrials) {
  BoundValidationConfig cfg;
  cfg.trials = 10;
  EXPECT_THROW(validate_bound(cfg), DomainError);
}

}  // namespace
}  // namespace bellcert
