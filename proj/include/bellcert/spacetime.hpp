#pragma once

// Light-cone timing budgets for spacelike separation of the two stations.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace bellcert {

/// Time in integer units of 0.1 ns.
class Ticks {
 public:
  constexpr Ticks() = default;
  constexpr explicit Ticks(std::int64_t tenths) noexcept : tenths_(tenths) {}

  /// Rounds to the nearest 0.1 ns.
  static Ticks from_ns(double ns);
  /// Largest tick count not above `ns`.
  static Ticks floor_ns(double ns);

  constexpr std::int64_t tenths() const noexcept { return tenths_; }
  constexpr double ns() const noexcept {
    return static_cast<double>(tenths_) / 10.0;
  }

  friend constexpr Ticks operator+(Ticks a, Ticks b) noexcept {
    return Ticks(a.tenths_ + b.tenths_);
  }
  friend constexpr Ticks operator-(Ticks a, Ticks b) noexcept {
    return Ticks(a.tenths_ - b.tenths_);
  }
  constexpr Ticks operator-() const noexcept { return Ticks(-tenths_); }
  Ticks& operator+=(Ticks o) noexcept {
    tenths_ += o.tenths_;
    return *this;
  }
  friend constexpr auto operator<=>(Ticks, Ticks) = default;

 private:
  std::int64_t tenths_ = 0;
};

/// "1324.2", "-7.0"
std::string to_string(Ticks t);

struct TimingSegment {
  std::string label;
  Ticks duration;
  Ticks uncertainty;

  bool operator==(const TimingSegment&) const = default;
};

struct TimingChain {
  std::string name;
  std::vector<TimingSegment> segments;
  /// End-to-end measured uncertainty; replaces the linear sum of the segment
  /// uncertainties when present.
  std::optional<Ticks> measured_uncertainty;

  bool operator==(const TimingChain&) const = default;
};

struct ChainTotal {
  Ticks total;
  Ticks uncertainty;

  /// total + uncertainty
  Ticks worst_case() const noexcept { return total + uncertainty; }

  bool operator==(const ChainTotal&) const = default;
};

/// Sum of the durations; uncertainties add linearly unless the chain carries
/// a measured end-to-end value. Throws DomainError on an empty chain or a
/// negative duration/uncertainty.
ChainTotal chain_total(const TimingChain& chain);

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

struct SeparationScenario {
  double distance_m = 0.0;
  /// Position uncertainty at each end.
  double position_uncertainty_m = 0.0;
  /// Positive when the remote station starts earlier.
  Ticks start_offset;
  Ticks offset_uncertainty;

  bool operator==(const SeparationScenario&) const = default;
};

/// (d − 2u)/c rounded down to 0.1 ns. Throws DomainError when d − 2u ≤ 0 or
/// an uncertainty is negative.
Ticks light_travel_floor(const SeparationScenario& scenario);

struct SeparationMargin {
  Ticks light_floor;
  Ticks margin;
  bool violation = false;

  bool operator==(const SeparationMargin&) const = default;
};

/// light floor − start offset − offset uncertainty − (measurement total +
/// its uncertainty). A negative margin is flagged, not thrown.
SeparationMargin separation_margin(const SeparationScenario& scenario,
                                   const ChainTotal& measurement);

struct SymmetricMargin {
  /// Delay applied to the first station's start.
  Ticks shift;
  Ticks margin;

  bool operator==(const SymmetricMargin&) const = default;
};

/// Delaying the first station by (m1 − m2)/2 equalises both margins at
/// (m1 + m2)/2, rounded down to 0.1 ns.
SymmetricMargin symmetric_margin(Ticks first, Ticks second);

struct StationCheck {
  std::string name;
  ChainTotal measurement;
  SeparationMargin margin;

  bool operator==(const StationCheck&) const = default;
};

struct SpacetimeReport {
  std::vector<StationCheck> stations;
  std::optional<SymmetricMargin> symmetric;
  bool pass = true;

  bool operator==(const SpacetimeReport&) const = default;
};

struct StationConfig {
  std::string name;
  TimingChain chain;
  SeparationScenario scenario;

  bool operator==(const StationConfig&) const = default;
};

struct SpacetimeConfig {
  std::vector<StationConfig> stations;

  bool operator==(const SpacetimeConfig&) const = default;
};

/// JSON config: {"stations": [{"name", "distance_m",
/// "position_uncertainty_m", "start_offset_ns", "offset_uncertainty_ns",
/// "chain": {"segments": [{"label", "duration_ns", "uncertainty_ns"}],
/// "measured_uncertainty_ns"}}]}. Throws ParseError or ValidationError.
SpacetimeConfig parse_spacetime_config(std::string_view json_text);

/// Margins for every station; the symmetric margin when there are two.
SpacetimeReport check_spacetime(const SpacetimeConfig& config);

std::string render_spacetime_text(const SpacetimeReport& report);
std::string render_spacetime_json(const SpacetimeReport& report);

}  // namespace bellcert
