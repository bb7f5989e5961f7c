#include "bellcert/events.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bellcert/error.hpp"

namespace bellcert {

std::string_view to_string(Herald h) noexcept {
  return h == Herald::psi_plus ? "psi+" : "psi-";
}

std::string_view to_string(SMethod m) noexcept {
  switch (m) {
    case SMethod::per_setting: return "per_setting";
    case SMethod::event_based: return "event_based";
    case SMethod::weighted_mean: return "weighted_mean";
    case SMethod::combined_event_based: return "combined_event_based";
  }
  return "unknown";
}

Setting SettingAngles::setting(Side side, Choice choice) const noexcept {
  const bool primed = choice == Choice::primed;
  if (side == Side::one) return {side, choice, primed ? alpha_prime : alpha};
  return {side, choice, primed ? beta_prime : beta};
}

void OutcomeCounts::add(Outcome x, Outcome y) noexcept {
  if (x == Outcome::up) {
    (y == Outcome::up ? up_up : up_down) += 1;
  } else {
    (y == Outcome::up ? down_up : down_down) += 1;
  }
}

OutcomeCounts& OutcomeCounts::operator+=(const OutcomeCounts& other) noexcept {
  up_up += other.up_up;
  up_down += other.up_down;
  down_up += other.down_up;
  down_down += other.down_down;
  return *this;
}

CorrelationTable CorrelationTable::from_records(
    std::span<const TrialRecord> records) {
  CorrelationTable table;
  for (const auto& r : records) table.add(r);
  return table;
}

void CorrelationTable::add(const TrialRecord& record) noexcept {
  cell(record.herald, record.a, record.b).add(record.x, record.y);
}

void CorrelationTable::merge(const CorrelationTable& other) noexcept {
  for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i] += other.cells_[i];
}

std::uint64_t CorrelationTable::total() const noexcept {
  std::uint64_t n = 0;
  for (const auto& c : cells_) n += c.total();
  return n;
}

std::uint64_t CorrelationTable::total(Herald h) const noexcept {
  std::uint64_t n = 0;
  for (Choice a : kChoices)
    for (Choice b : kChoices) n += cell(h, a, b).total();
  return n;
}

std::uint64_t CorrelationTable::total(Choice a, Choice b) const noexcept {
  return cell(Herald::psi_plus, a, b).total() +
         cell(Herald::psi_minus, a, b).total();
}

namespace {

double cell_sigma(double e, std::uint64_t n, SigmaConvention convention) {
  const double spread = std::max(0.0, 1.0 - e * e);
  if (convention == SigmaConvention::sample) {
    if (n < 2)
      throw ComputationError("sample sigma needs at least two events per cell");
    return std::sqrt(spread / static_cast<double>(n - 1));
  }
  return std::sqrt(spread / static_cast<double>(n));
}

bool selected(const TrialRecord& r, std::optional<Herald> herald) noexcept {
  return !herald || r.herald == *herald;
}

SEstimate from_wins(const WinCount& w) {
  if (w.rounds == 0) throw ComputationError("no events");
  const double n = static_cast<double>(w.rounds);
  const double win = static_cast<double>(w.wins);
  SEstimate est;
  est.method = SMethod::event_based;
  est.value = 8.0 * win / n - 4.0;
  // f_i = 8·w_i − 4, so the sample variance of f is 64 × that of w.
  est.sigma = w.rounds < 2 ? std::numeric_limits<double>::infinity()
                           : 8.0 * std::sqrt(win * (n - win) / (n * n * (n - 1.0)));
  return est;
}

}  // namespace

Correlator correlator(const OutcomeCounts& cell, SigmaConvention convention) {
  const std::uint64_t n = cell.total();
  if (n == 0) throw ComputationError("no events for setting pair");
  const double e = (static_cast<double>(cell.correlated()) -
                    static_cast<double>(cell.anticorrelated())) /
                   static_cast<double>(n);
  return {e, cell_sigma(e, n, convention)};
}

SEstimate s_per_state(const CorrelationTable& table, Herald h,
                      SigmaConvention convention) {
  SEstimate est;
  est.method = SMethod::per_setting;
  double variance = 0.0;
  for (Choice a : kChoices) {
    for (Choice b : kChoices) {
      const Correlator c = correlator(table.cell(h, a, b), convention);
      est.value += g_sign(h, a, b) * c.value;
      variance += c.sigma * c.sigma;
    }
  }
  est.sigma = std::sqrt(variance);
  return est;
}

WinCount wins(std::span<const TrialRecord> records,
              std::optional<Herald> herald) noexcept {
  WinCount w;
  for (const auto& r : records) {
    if (!selected(r, herald)) continue;
    ++w.rounds;
    if (is_win(r)) ++w.wins;
  }
  return w;
}

WinCount wins(const CorrelationTable& table,
              std::optional<Herald> herald) noexcept {
  WinCount w;
  for (Herald h : kHeralds) {
    if (herald && h != *herald) continue;
    for (Choice a : kChoices) {
      for (Choice b : kChoices) {
        const OutcomeCounts& c = table.cell(h, a, b);
        w.rounds += c.total();
        w.wins += g_sign(h, a, b) > 0 ? c.correlated() : c.anticorrelated();
      }
    }
  }
  return w;
}

SEstimate s_event_based(std::span<const TrialRecord> records,
                        std::optional<Herald> herald) {
  std::int64_t sum = 0;
  std::uint64_t n = 0;
  for (const auto& r : records) {
    if (!selected(r, herald)) continue;
    sum += 4 * g_sign(r.herald, r.a, r.b) * r.product();
    ++n;
  }
  if (n == 0) throw ComputationError("no events");
  SEstimate est;
  est.method = SMethod::event_based;
  const double count = static_cast<double>(n);
  est.value = static_cast<double>(sum) / count;
  if (n < 2) {
    est.sigma = std::numeric_limits<double>::infinity();
  } else {
    // Σ f_i² = 16 n since |f_i| = 4.
    const double ss = 16.0 * count - static_cast<double>(sum) * est.value;
    est.sigma = std::sqrt(std::max(0.0, ss) / (count - 1.0) / count);
  }
  return est;
}

SEstimate s_event_based(const CorrelationTable& table,
                        std::optional<Herald> herald) {
  return from_wins(wins(table, herald));
}

SEstimate combine_states(const SEstimate& s_plus, const SEstimate& s_minus) {
  if (!(s_plus.sigma > 0.0) || !(s_minus.sigma > 0.0) ||
      !std::isfinite(s_plus.sigma) || !std::isfinite(s_minus.sigma)) {
    throw ComputationError("weighted mean needs finite, positive sigmas");
  }
  const double w_plus = 1.0 / (s_plus.sigma * s_plus.sigma);
  const double w_minus = 1.0 / (s_minus.sigma * s_minus.sigma);
  SEstimate est;
  est.method = SMethod::weighted_mean;
  est.value = (w_plus * s_plus.value + w_minus * s_minus.value) /
              (w_plus + w_minus);
  est.sigma = 1.0 / std::sqrt(w_plus + w_minus);
  return est;
}

SEstimate s_combined(const CorrelationTable& table,
                     SigmaConvention convention) {
  SEstimate est;
  est.method = SMethod::combined_event_based;
  double variance = 0.0;
  for (Choice a : kChoices) {
    for (Choice b : kChoices) {
      // Products weighted by g^h(a,b) so both heralds share one sign.
      std::int64_t signed_sum = 0;
      std::uint64_t n = 0;
      for (Herald h : kHeralds) {
        const OutcomeCounts& c = table.cell(h, a, b);
        const std::int64_t diff = static_cast<std::int64_t>(c.correlated()) -
                                  static_cast<std::int64_t>(c.anticorrelated());
        signed_sum += g_sign(h, a, b) * diff;
        n += c.total();
      }
      if (n == 0) throw ComputationError("no events for setting pair");
      const double e = static_cast<double>(signed_sum) / static_cast<double>(n);
      est.value += e;
      const double s = cell_sigma(e, n, convention);
      variance += s * s;
    }
  }
  est.sigma = std::sqrt(variance);
  return est;
}

}  // namespace bellcert
