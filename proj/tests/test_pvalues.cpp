#include "bellcert/pvalues.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "bellcert/error.hpp"
#include "oracles.hpp"

namespace bellcert {
namespace {

double rel_err(double got, double want) {
  if (want == 0.0) return std::abs(got);
  return std::abs(got - want) / std::abs(want);
}

TEST(Predictability, RangeAndCorrection) {
  EXPECT_THROW(Predictability(-1e-9), DomainError);
  EXPECT_THROW(Predictability(0.5000001), DomainError);
  EXPECT_DOUBLE_EQ(Predictability(0.25).correction(), 0.1875);
  EXPECT_DOUBLE_EQ(Predictability().correction(), 0.0);
}

TEST(LhvSBound, Values) {
  EXPECT_DOUBLE_EQ(lhv_s_bound(0.0), 2.0);
  EXPECT_NEAR(lhv_s_bound(6.3e-4), 2.0050368248, 1e-10);
  EXPECT_DOUBLE_EQ(lhv_s_bound(0.5), 4.0);
}

TEST(BinomialTail, ExactSmallValues) {
  EXPECT_LE(rel_err(binomial_tail(8, 10, 0.75), 0.525592803955078125), 1e-13);
  EXPECT_LE(rel_err(binomial_tail(10, 10, 0.75), 0.0563135147094726562), 1e-13);
  EXPECT_DOUBLE_EQ(binomial_tail(0, 10, 0.3), 1.0);
  EXPECT_THROW(binomial_tail(11, 10, 0.3), DomainError);
}

TEST(BinomialTail, MatchesRationalSummation) {
  for (unsigned den_num : {1u, 2u, 3u}) {
    const double xi = den_num / 4.0;
    for (unsigned n = 1; n <= 30; ++n)
      for (unsigned w = 0; w <= n; ++w) {
        const double want =
            static_cast<double>(oracle::binomial_tail(w, n, den_num, 4));
        ASSERT_LE(rel_err(binomial_tail(w, n, xi), want), 1e-10)
            << "w=" << w << " n=" << n << " xi=" << xi;
      }
  }
}

TEST(BinomialTail, MatchesIncompleteBetaAtLargeN) {
  for (std::uint64_t w : {7400u, 7500u, 7600u, 7775u, 7900u}) {
    const double want = oracle::binomial_tail_beta(w, 10000, 0.75);
    EXPECT_LE(rel_err(binomial_tail(w, 10000, 0.75), want), 1e-9) << w;
  }
}

TEST(BinomialTail, LogStaysFiniteBelowDoubleRange) {
  const double lp = log_binomial_tail(100000, 100000, 0.75);
  EXPECT_NEAR(lp, 100000 * std::log(0.75), 1e-6);
  EXPECT_EQ(binomial_tail(100000, 100000, 0.75), 0.0);
}

TEST(BinomialTail, MonotoneInWinsAndXi) {
  double prev = 2.0;
  for (unsigned w = 0; w <= 200; ++w) {
    const double p = binomial_tail(w, 200, 0.75);
    EXPECT_LE(p, prev);
    prev = p;
  }
  EXPECT_LT(binomial_tail(160, 200, 0.70), binomial_tail(160, 200, 0.75));
}

TEST(PValueMartingale, OneWithoutViolation) {
  EXPECT_DOUBLE_EQ(pvalue_martingale(1.9, 1000, Predictability()).p_bound, 1.0);
  EXPECT_DOUBLE_EQ(pvalue_martingale(2.0, 1000, Predictability()).p_bound, 1.0);
  EXPECT_DOUBLE_EQ(
      pvalue_martingale(2.004, 1000, Predictability(6.3e-4)).p_bound, 1.0);
}

TEST(PValueMartingale, MatchesHighPrecisionOnGrid) {
  int checked = 0;
  for (double s : {2.05, 2.1, 2.2, 2.3, 2.5, 2.8, 3.0, 3.3, 3.6, 3.9}) {
    for (std::uint64_t n : {10u, 100u, 1000u, 10000u, 55568u}) {
      const double tau = 6.3e-4;
      const auto got = pvalue_martingale(s, n, Predictability(tau));
      const auto want = oracle::martingale_bound(s, n, tau);
      using boost::multiprecision::log;
      const double want_log = static_cast<double>(log(want));
      EXPECT_LE(rel_err(got.log_p, want_log), 1e-10) << s << " " << n;
      const double want_p = static_cast<double>(want);
      if (want_p > 1e-300) {
        EXPECT_LE(rel_err(got.p_bound, want_p), 1e-10) << s << " " << n;
      }
      ++checked;
    }
  }
  EXPECT_EQ(checked, 50);
}

TEST(PValueMartingale, DecreasesWithSAndN) {
  const Predictability tau(6.3e-4);
  EXPECT_GT(pvalue_martingale(2.2, 1000, tau).p_bound,
            pvalue_martingale(2.3, 1000, tau).p_bound);
  EXPECT_GT(pvalue_martingale(2.2, 1000, tau).p_bound,
            pvalue_martingale(2.2, 2000, tau).p_bound);
  EXPECT_LT(pvalue_martingale(2.2, 1000, Predictability()).p_bound,
            pvalue_martingale(2.2, 1000, tau).p_bound);
}

TEST(PValueGame, UsesShiftedWinProbability) {
  const double tau = 0.01;
  const double xi = 0.75 + tau - tau * tau;
  const auto r = pvalue_game(800, 1000, Predictability(tau));
  EXPECT_LE(rel_err(r.p_bound, oracle::binomial_tail_beta(800, 1000, xi)), 1e-9);
  EXPECT_EQ(r.statistic, 800.0);
  EXPECT_EQ(r.rounds, 1000u);
  EXPECT_EQ(r.method, PValueMethod::game);
}

}  // namespace
}  // namespace bellcert
