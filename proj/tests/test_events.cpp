#include "bellcert/events.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bellcert/error.hpp"
#include "bellcert/fixtures.hpp"
#include "oracles.hpp"

namespace bellcert {
namespace {

OutcomeCounts counts(std::uint64_t uu, std::uint64_t ud, std::uint64_t du,
                     std::uint64_t dd) {
  return {uu, ud, du, dd};
}

std::vector<TrialRecord> to_records(const std::vector<oracle::Event>& events) {
  std::vector<TrialRecord> out;
  std::uint64_t i = 1;
  for (const auto& e : events) {
    TrialRecord r;
    r.index = i++;
    r.herald = e.h > 0 ? Herald::psi_plus : Herald::psi_minus;
    r.a = e.a ? Choice::primed : Choice::unprimed;
    r.b = e.b ? Choice::primed : Choice::unprimed;
    r.x = e.x > 0 ? Outcome::up : Outcome::down;
    r.y = e.y > 0 ? Outcome::up : Outcome::down;
    out.push_back(r);
  }
  return out;
}

std::vector<oracle::Event> random_events(std::size_t n, std::uint32_t seed) {
  std::mt19937 gen(seed);
  std::bernoulli_distribution coin(0.5);
  std::vector<oracle::Event> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({coin(gen) ? 1 : -1, coin(gen) ? 1 : 0, coin(gen) ? 1 : 0,
                   coin(gen) ? 1 : -1, coin(gen) ? 1 : -1});
  }
  return out;
}

TEST(GSign, NegativeExceptTheWinningPrimedPair) {
  for (Herald h : kHeralds) {
    int positives = 0;
    for (Choice a : kChoices)
      for (Choice b : kChoices) {
        const int g = g_sign(h, a, b);
        EXPECT_EQ(g, oracle::chsh_sign(value(h), value(a), value(b)));
        if (g > 0) ++positives;
      }
    EXPECT_EQ(positives, 1);
  }
  EXPECT_EQ(g_sign(Herald::psi_plus, Choice::primed, Choice::primed), 1);
  EXPECT_EQ(g_sign(Herald::psi_minus, Choice::primed, Choice::unprimed), 1);
}

TEST(Correlator, PublishedCell) {
  const Correlator c = correlator(counts(154, 483, 471, 135));
  EXPECT_NEAR(c.value, -0.535, 5e-4);
  EXPECT_NEAR(c.sigma, 0.024, 5e-4);
}

TEST(Correlator, PerfectCorrelationHasZeroSigma) {
  const Correlator c = correlator(counts(7, 0, 0, 7));
  EXPECT_DOUBLE_EQ(c.value, 1.0);
  EXPECT_DOUBLE_EQ(c.sigma, 0.0);
}

TEST(Correlator, BalancedCell) {
  const Correlator c = correlator(counts(10, 10, 10, 10));
  EXPECT_DOUBLE_EQ(c.value, 0.0);
  EXPECT_NEAR(c.sigma, 0.158, 5e-4);
  EXPECT_NEAR(correlator(counts(10, 10, 10, 10), SigmaConvention::sample).sigma,
              std::sqrt(1.0 / 39.0), 1e-15);
}

TEST(Correlator, EmptyCellThrows) {
  EXPECT_THROW(correlator(OutcomeCounts{}), ComputationError);
  EXPECT_THROW(correlator(counts(1, 0, 0, 0), SigmaConvention::sample),
               ComputationError);
}

TEST(SPerState, MatchesSumOfCellMeans) {
  const auto events = random_events(4000, 11);
  const auto records = to_records(events);
  const auto table = CorrelationTable::from_records(records);
  for (Herald h : kHeralds) {
    double expected = 0.0;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        expected += oracle::chsh_sign(value(h), a, b) *
                    oracle::cell_mean(events, value(h), a, b);
    EXPECT_NEAR(s_per_state(table, h).value, expected, 1e-12);
  }
}

TEST(SEventBased, EqualsEightWOverNMinusFour) {
  for (std::uint32_t seed = 1; seed <= 20; ++seed) {
    const auto events = random_events(97 + 13 * seed, seed);
    const auto records = to_records(events);
    const WinCount w = wins(records);
    EXPECT_EQ(w.wins, oracle::count_wins(events));
    EXPECT_EQ(w.rounds, events.size());
    const double s = s_event_based(records).value;
    EXPECT_NEAR(s, oracle::event_mean_s(events), 1e-12);
    EXPECT_NEAR(s, 8.0 * static_cast<double>(w.wins) / w.rounds - 4.0, 1e-12);
    const auto table = CorrelationTable::from_records(records);
    EXPECT_NEAR(s_event_based(table).value, s, 1e-12);
    EXPECT_EQ(wins(table), w);
  }
}

TEST(SEventBased, FlippingOneSideNegatesS) {
  const auto events = random_events(1000, 5);
  auto records = to_records(events);
  const double s = s_event_based(records).value;
  const double s_plus = s_per_state(CorrelationTable::from_records(records),
                                    Herald::psi_plus).value;
  for (auto& r : records) r.y = flip(r.y);
  EXPECT_NEAR(s_event_based(records).value, -s, 1e-12);
  EXPECT_NEAR(s_per_state(CorrelationTable::from_records(records),
                          Herald::psi_plus).value,
              -s_plus, 1e-12);
}

TEST(SEventBased, SigmaIsStandardErrorOfF) {
  const auto events = random_events(500, 8);
  const auto records = to_records(events);
  const double mean = oracle::event_mean_s(events);
  double ss = 0.0;
  for (const auto& e : events) {
    const double f = 4.0 * oracle::chsh_sign(e.h, e.a, e.b) * e.x * e.y;
    ss += (f - mean) * (f - mean);
  }
  const double n = static_cast<double>(events.size());
  EXPECT_NEAR(s_event_based(records).sigma, std::sqrt(ss / (n - 1) / n), 1e-12);
}

TEST(CorrelationTable, MergeIsAdditive) {
  const auto records = to_records(random_events(3000, 3));
  const std::span<const TrialRecord> all(records);
  auto left = CorrelationTable::from_records(all.first(1234));
  const auto right = CorrelationTable::from_records(all.subspan(1234));
  left.merge(right);
  EXPECT_EQ(left, CorrelationTable::from_records(all));
  EXPECT_EQ(left.total(), records.size());
}

TEST(CombineStates, InverseVarianceWeights) {
  const SEstimate a{2.0, 0.1, SMethod::per_setting};
  const SEstimate b{2.4, 0.2, SMethod::per_setting};
  const SEstimate c = combine_states(a, b);
  EXPECT_NEAR(c.value, (2.0 / 0.01 + 2.4 / 0.04) / (1 / 0.01 + 1 / 0.04), 1e-12);
  EXPECT_NEAR(c.sigma, 1.0 / std::sqrt(125.0), 1e-12);
  EXPECT_THROW(combine_states(a, SEstimate{2.0, 0.0, SMethod::per_setting}),
               ComputationError);
}

TEST(SCombined, PoolsBothHeraldsPerSettingPair) {
  const auto events = random_events(4000, 21);
  const auto table = CorrelationTable::from_records(to_records(events));
  double expected = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) {
      double sum = 0.0;
      double n = 0.0;
      for (const auto& e : events) {
        if (e.a != a || e.b != b) continue;
        sum += oracle::chsh_sign(e.h, a, b) * e.x * e.y;
        n += 1.0;
      }
      expected += sum / n;
    }
  EXPECT_NEAR(s_combined(table).value, expected, 1e-12);
}

TEST(Fixtures, PublishedCountsReconstructExactly) {
  for (const auto& run : published_runs()) {
    const RunDataset d = reconstruct_dataset(run.table, run.id);
    EXPECT_EQ(CorrelationTable::from_dataset(d), run.table) << run.id;
    for (std::size_t i = 0; i < d.size(); ++i)
      ASSERT_EQ(d.records[i].index, i + 1);
  }
  EXPECT_THROW(published_run("nope"), DomainError);
}

}  // namespace
}  // namespace bellcert
