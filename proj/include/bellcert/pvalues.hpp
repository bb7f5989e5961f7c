#pragma once

// P-value bounds for excluding local hidden variables, valid without an iid
// assumption and corrected for partially predictable settings.

#include <cstdint>
#include <string_view>

namespace bellcert {

/// Maximal deviation τ of a setting choice from probability 1/2, given the
/// full history. The LHV ceiling and the per-round win probability shift by
/// the correction ε = τ − τ².
class Predictability {
 public:
  constexpr Predictability() = default;
  /// Throws DomainError unless 0 ≤ τ ≤ 1/2.
  explicit Predictability(double tau);

  constexpr double tau() const noexcept { return tau_; }
  constexpr double correction() const noexcept { return tau_ - tau_ * tau_; }

 private:
  double tau_ = 0.0;
};

/// Highest expected S reachable by an LHV model switching strategies round by
/// round: 2 + 8(τ − τ²).
double lhv_s_bound(Predictability tau) noexcept;
double lhv_s_bound(double tau);

enum class PValueMethod { martingale, game };

std::string_view to_string(PValueMethod m) noexcept;

struct PValueReport {
  PValueMethod method = PValueMethod::martingale;
  double p_bound = 1.0;
  /// Natural log of p_bound; stays finite when p_bound underflows.
  double log_p = 0.0;
  /// S for the martingale bound, W for the game bound.
  double statistic = 0.0;
  std::uint64_t rounds = 0;
  double tau = 0.0;

  bool operator==(const PValueReport&) const = default;
};

/// Concentration bound on Pr(S_LHV ≥ S) after N rounds:
/// [(A/(A+t))^(A+t)·(Ā/(Ā−t))^(Ā−t)]^N with t = (S−2)/8 − ε, A = 3/4 + ε,
/// Ā = 1/4 − ε. Returns 1 when t ≤ 0.
PValueReport pvalue_martingale(double s, std::uint64_t rounds,
                               Predictability tau);

/// Probability of at least W wins in N rounds when each round is won with
/// probability at most ξ = 3/4 + ε.
PValueReport pvalue_game(std::uint64_t wins, std::uint64_t rounds,
                         Predictability tau);

/// ln P(X ≥ W) for X ~ Binomial(N, ξ). Summed in log space starting from the
/// largest term, so tails far below the double range stay representable.
double log_binomial_tail(std::uint64_t w, std::uint64_t n, double xi);

/// exp(log_binomial_tail(w, n, xi)).
double binomial_tail(std::uint64_t w, std::uint64_t n, double xi);

}  // namespace bellcert
