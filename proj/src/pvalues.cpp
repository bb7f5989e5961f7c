#include "bellcert/pvalues.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bellcert/error.hpp"

namespace bellcert {

namespace {

constexpr double kNegligible = 1e-18;

// x·ln(1 + y) with the x → 0 limit taken as 0 even when y = −1.
double x_log1p(double x, double y) {
  if (x == 0.0) return 0.0;
  return x * std::log1p(y);
}

// ln C(n, k)
double log_choose(std::uint64_t n, std::uint64_t k) {
  const double nn = static_cast<double>(n);
  const double kk = static_cast<double>(k);
  return std::lgamma(nn + 1.0) - std::lgamma(kk + 1.0) -
         std::lgamma(nn - kk + 1.0);
}

double log_term(std::uint64_t n, std::uint64_t j, double log_xi,
                double log_1mxi) {
  return log_choose(n, j) + static_cast<double>(j) * log_xi +
         static_cast<double>(n - j) * log_1mxi;
}

// ln Σ_{j=from}^{n} P(X=j), assuming the terms decrease from `from` upward.
double log_upper_sum(std::uint64_t from, std::uint64_t n, double xi) {
  const double log_xi = std::log(xi);
  const double log_1mxi = std::log1p(-xi);
  const double odds = xi / (1.0 - xi);
  double term = 1.0;  // relative to the first term
  double sum = 1.0;
  for (std::uint64_t j = from; j < n; ++j) {
    term *= static_cast<double>(n - j) / static_cast<double>(j + 1) * odds;
    sum += term;
    if (term < kNegligible * sum) break;
  }
  return log_term(n, from, log_xi, log_1mxi) + std::log(sum);
}

// ln Σ_{j=0}^{to} P(X=j), assuming the terms decrease from `to` downward.
double log_lower_sum(std::uint64_t to, std::uint64_t n, double xi) {
  const double log_xi = std::log(xi);
  const double log_1mxi = std::log1p(-xi);
  const double inv_odds = (1.0 - xi) / xi;
  double term = 1.0;
  double sum = 1.0;
  for (std::uint64_t j = to; j > 0; --j) {
    term *= static_cast<double>(j) / static_cast<double>(n - j + 1) * inv_odds;
    sum += term;
    if (term < kNegligible * sum) break;
  }
  return log_term(n, to, log_xi, log_1mxi) + std::log(sum);
}

}  // namespace

Predictability::Predictability(double tau) : tau_(tau) {
  if (!(tau >= 0.0 && tau <= 0.5))
    throw DomainError("predictability tau must lie in [0, 1/2]");
}

double lhv_s_bound(Predictability tau) noexcept {
  return 2.0 + 8.0 * tau.correction();
}

double lhv_s_bound(double tau) { return lhv_s_bound(Predictability(tau)); }

std::string_view to_string(PValueMethod m) noexcept {
  return m == PValueMethod::martingale ? "martingale" : "game";
}

PValueReport pvalue_martingale(double s, std::uint64_t rounds,
                               Predictability tau) {
  if (rounds < 1) throw DomainError("martingale bound needs N >= 1");
  if (!(std::abs(s) <= 4.0)) throw DomainError("|S| must not exceed 4");

  PValueReport report;
  report.method = PValueMethod::martingale;
  report.statistic = s;
  report.rounds = rounds;
  report.tau = tau.tau();

  const double eps = tau.correction();
  const double a = 0.75 + eps;
  const double a_bar = 0.25 - eps;
  // t cannot exceed Ā for |S| ≤ 4; min() only absorbs rounding.
  const double t = std::min((s - 2.0) / 8.0 - eps, a_bar);
  if (t <= 0.0) return report;

  // ln[(A/(A+t))^(A+t)] = −(A+t)·ln(1 + t/A), likewise for the Ā factor.
  const double per_round =
      -x_log1p(a + t, t / a) - x_log1p(a_bar - t, -t / a_bar);
  report.log_p = static_cast<double>(rounds) * per_round;
  report.p_bound = std::exp(report.log_p);
  return report;
}

PValueReport pvalue_game(std::uint64_t wins, std::uint64_t rounds,
                         Predictability tau) {
  if (rounds < 1) throw DomainError("game bound needs N >= 1");
  if (wins > rounds) throw DomainError("wins exceed rounds");

  PValueReport report;
  report.method = PValueMethod::game;
  report.statistic = static_cast<double>(wins);
  report.rounds = rounds;
  report.tau = tau.tau();

  const double xi = 0.75 + tau.correction();
  if (xi >= 1.0) return report;  // τ = 1/2: every round can be won
  report.log_p = log_binomial_tail(wins, rounds, xi);
  report.p_bound = std::exp(report.log_p);
  return report;
}

double log_binomial_tail(std::uint64_t w, std::uint64_t n, double xi) {
  if (!(xi > 0.0 && xi < 1.0)) throw DomainError("xi must lie in (0, 1)");
  if (w > n) throw DomainError("W must not exceed N");
  if (w == 0) return 0.0;

  const double mode = std::floor((static_cast<double>(n) + 1.0) * xi);
  if (static_cast<double>(w) > mode) return log_upper_sum(w, n, xi);

  // Upper tail holds most of the mass; take the complement of the lower one.
  const double log_lower = log_lower_sum(w - 1, n, xi);
  const double lower = std::exp(log_lower);
  if (lower >= 1.0) return -std::numeric_limits<double>::infinity();
  return std::log1p(-lower);
}

double binomial_tail(std::uint64_t w, std::uint64_t n, double xi) {
  return std::exp(log_binomial_tail(w, n, xi));
}

}  // namespace bellcert
