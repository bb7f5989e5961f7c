#pragma once

// Data model for event-ready CHSH trials and the S-parameter estimators.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bellcert {

/// Bell state announced by the heralding measurement.
enum class Herald : std::int8_t { psi_minus = -1, psi_plus = 1 };

/// Which of the two local measurement directions was selected.
enum class Choice : std::uint8_t { unprimed = 0, primed = 1 };

enum class Outcome : std::int8_t { down = -1, up = 1 };

enum class Side : std::uint8_t { one = 1, two = 2 };

inline constexpr std::array<Herald, 2> kHeralds{Herald::psi_plus,
                                                Herald::psi_minus};
inline constexpr std::array<Choice, 2> kChoices{Choice::unprimed,
                                                Choice::primed};

constexpr int value(Herald h) noexcept { return static_cast<int>(h); }
constexpr int value(Outcome o) noexcept { return static_cast<int>(o); }
constexpr int value(Choice c) noexcept { return static_cast<int>(c); }

constexpr Outcome flip(Outcome o) noexcept {
  return o == Outcome::up ? Outcome::down : Outcome::up;
}

std::string_view to_string(Herald h) noexcept;

struct Setting {
  Side side = Side::one;
  Choice choice = Choice::unprimed;
  double angle_deg = 0.0;
};

/// Measurement angles in spin space, degrees.
struct SettingAngles {
  double alpha = 0.0;
  double alpha_prime = 90.0;
  double beta = -45.0;
  double beta_prime = 45.0;

  Setting setting(Side side, Choice choice) const noexcept;
  double angle(Side side, Choice choice) const noexcept {
    return setting(side, choice).angle_deg;
  }

  bool operator==(const SettingAngles&) const = default;
};

struct TrialRecord {
  std::uint64_t index = 0;
  Herald herald = Herald::psi_plus;
  Choice a = Choice::unprimed;
  Choice b = Choice::unprimed;
  Outcome x = Outcome::up;
  Outcome y = Outcome::up;
  std::optional<std::int64_t> timestamp_ns;

  constexpr int product() const noexcept { return value(x) * value(y); }

  bool operator==(const TrialRecord&) const = default;
};

struct RunDataset {
  std::vector<TrialRecord> records;
  SettingAngles angles;
  std::string run_id;
  /// Predictability assumption carried with the run.
  double tau = 0.0;

  std::size_t size() const noexcept { return records.size(); }
  bool empty() const noexcept { return records.empty(); }
};

/// Outcome counts for one (herald, a, b) cell. Arrows are (x, y).
struct OutcomeCounts {
  std::uint64_t up_up = 0;
  std::uint64_t up_down = 0;
  std::uint64_t down_up = 0;
  std::uint64_t down_down = 0;

  std::uint64_t total() const noexcept {
    return up_up + up_down + down_up + down_down;
  }
  std::uint64_t correlated() const noexcept { return up_up + down_down; }
  std::uint64_t anticorrelated() const noexcept { return up_down + down_up; }

  void add(Outcome x, Outcome y) noexcept;
  OutcomeCounts& operator+=(const OutcomeCounts& other) noexcept;
  bool operator==(const OutcomeCounts&) const = default;
};

/// Per-(herald, a, b) outcome counts. Counts are additive, so tables built
/// from shards of a record stream can be merged.
class CorrelationTable {
 public:
  CorrelationTable() = default;

  static CorrelationTable from_records(std::span<const TrialRecord> records);
  static CorrelationTable from_dataset(const RunDataset& dataset) {
    return from_records(dataset.records);
  }

  void add(const TrialRecord& record) noexcept;
  void merge(const CorrelationTable& other) noexcept;

  const OutcomeCounts& cell(Herald h, Choice a, Choice b) const noexcept {
    return cells_[slot(h, a, b)];
  }
  OutcomeCounts& cell(Herald h, Choice a, Choice b) noexcept {
    return cells_[slot(h, a, b)];
  }

  std::uint64_t total() const noexcept;
  std::uint64_t total(Herald h) const noexcept;
  /// Events with setting pair (a, b), both heralds.
  std::uint64_t total(Choice a, Choice b) const noexcept;

  bool operator==(const CorrelationTable&) const = default;

 private:
  static constexpr std::size_t slot(Herald h, Choice a, Choice b) noexcept {
    return (h == Herald::psi_plus ? 0u : 4u) + 2u * value(a) + value(b);
  }

  std::array<OutcomeCounts, 8> cells_{};
};

/// Sign the CHSH sum assigns to setting pair (a, b) under herald h: +1 only
/// for (α′, β′) under Ψ⁺ and for (α′, β) under Ψ⁻.
constexpr int g_sign(Herald h, Choice a, Choice b) noexcept {
  if (a != Choice::primed) return -1;
  const Choice winning_b =
      h == Herald::psi_plus ? Choice::primed : Choice::unprimed;
  return b == winning_b ? 1 : -1;
}

/// A round is won when the outcome product matches the required sign.
constexpr bool is_win(const TrialRecord& r) noexcept {
  return r.product() == g_sign(r.herald, r.a, r.b);
}

/// Standard-deviation convention for a correlator estimated from N ±1
/// products. `binomial` is sqrt((1-E²)/N); `sample` uses the unbiased
/// sample variance, sqrt((1-E²)/(N-1)).
enum class SigmaConvention { binomial, sample };

struct Correlator {
  double value = 0.0;
  double sigma = 0.0;

  bool operator==(const Correlator&) const = default;
};

/// E = (N↑↑ + N↓↓ − N↑↓ − N↓↑) / N. Throws ComputationError on an empty cell
/// (and on a single-event cell under the sample convention).
Correlator correlator(const OutcomeCounts& cell,
                      SigmaConvention convention = SigmaConvention::binomial);

enum class SMethod {
  per_setting,
  event_based,
  weighted_mean,
  combined_event_based,
};

std::string_view to_string(SMethod m) noexcept;

struct SEstimate {
  double value = 0.0;
  double sigma = 0.0;
  SMethod method = SMethod::per_setting;

  bool operator==(const SEstimate&) const = default;
};

/// S for one herald from the four normalised correlators.
SEstimate s_per_state(const CorrelationTable& table, Herald h,
                      SigmaConvention convention = SigmaConvention::binomial);

struct WinCount {
  std::uint64_t wins = 0;
  std::uint64_t rounds = 0;

  bool operator==(const WinCount&) const = default;
};

WinCount wins(std::span<const TrialRecord> records,
              std::optional<Herald> herald = std::nullopt) noexcept;
WinCount wins(const CorrelationTable& table,
              std::optional<Herald> herald = std::nullopt) noexcept;
inline WinCount wins(const RunDataset& dataset,
                     std::optional<Herald> herald = std::nullopt) noexcept {
  return wins(std::span<const TrialRecord>(dataset.records), herald);
}

/// Mean of f_i = 4·g(a_i, b_i)·x_i·y_i over the records (optionally one
/// herald only). sigma is the sample standard error of the f_i, infinite for a
/// single record.
SEstimate s_event_based(std::span<const TrialRecord> records,
                        std::optional<Herald> herald = std::nullopt);
inline SEstimate s_event_based(const RunDataset& dataset,
                               std::optional<Herald> herald = std::nullopt) {
  return s_event_based(std::span<const TrialRecord>(dataset.records), herald);
}
/// Same estimator from counts, via S = 8W/N − 4.
SEstimate s_event_based(const CorrelationTable& table,
                        std::optional<Herald> herald = std::nullopt);

/// Inverse-variance weighted mean of the two per-herald estimates.
SEstimate combine_states(const SEstimate& s_plus, const SEstimate& s_minus);

/// Both heralds pooled per setting pair: Σ_ab (Σ_i g^{h_i}(a,b)·x_i·y_i)/N_ab.
SEstimate s_combined(const CorrelationTable& table,
                     SigmaConvention convention = SigmaConvention::binomial);

}  // namespace bellcert
