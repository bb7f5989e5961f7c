#pragma once

// Setting independence and no-signaling checks.

#include <array>
#include <cstdint>
#include <span>
#include <string>

#include "bellcert/events.hpp"

namespace bellcert {

/// counts[r][c]; rows and columns carry labels for reporting.
struct ContingencyTable2x2 {
  std::array<std::array<std::uint64_t, 2>, 2> counts{};
  std::array<std::string, 2> row_labels{"0", "1"};
  std::array<std::string, 2> column_labels{"0", "1"};

  std::uint64_t row_total(std::size_t r) const noexcept {
    return counts[r][0] + counts[r][1];
  }
  std::uint64_t column_total(std::size_t c) const noexcept {
    return counts[0][c] + counts[1][c];
  }
  std::uint64_t total() const noexcept { return row_total(0) + row_total(1); }

  bool operator==(const ContingencyTable2x2&) const = default;
};

struct ZTestResult {
  double p_row0 = 0.0;
  double p_row1 = 0.0;
  double z = 0.0;
  double p_value = 1.0;

  bool operator==(const ZTestResult&) const = default;
};

/// Two-sided pooled two-proportion z-test of P(column 1 | row 0) against
/// P(column 1 | row 1). Throws ComputationError when a row is empty or the
/// pooled proportion is 0 or 1.
ZTestResult setting_independence_ztest(const ContingencyTable2x2& table);

struct TTestResult {
  double mean0 = 0.0;
  double mean1 = 0.0;
  double t = 0.0;
  double degrees_of_freedom = 0.0;
  double p_value = 1.0;

  bool operator==(const TTestResult&) const = default;
};

/// Two-sided pooled-variance two-sample t-test. Throws ComputationError with
/// fewer than two samples in a group or zero variance in both.
TTestResult two_sample_ttest(std::span<const double> group0,
                             std::span<const double> group1);

/// Same test on ±1 samples given as counts: row r is a group, column 0
/// counts +1 and column 1 counts −1.
TTestResult nosignal_ttest(const ContingencyTable2x2& outcomes);

struct NoSignalingTables {
  /// rows a (α, α′), columns b (β, β′)
  ContingencyTable2x2 settings;
  /// side-2 outcome split by side-1 setting: rows a, columns y (+1, −1)
  ContingencyTable2x2 y_by_a;
  /// side-1 outcome split by side-2 setting: rows b, columns x (+1, −1)
  ContingencyTable2x2 x_by_b;

  bool operator==(const NoSignalingTables&) const = default;
};

NoSignalingTables build_tables(std::span<const TrialRecord> records);
inline NoSignalingTables build_tables(const RunDataset& dataset) {
  return build_tables(std::span<const TrialRecord>(dataset.records));
}

struct NoSignalingReport {
  NoSignalingTables tables;
  ZTestResult settings;
  TTestResult y_by_a;
  TTestResult x_by_b;

  bool operator==(const NoSignalingReport&) const = default;
};

NoSignalingReport analyze_nosignaling(const RunDataset& dataset);

std::string render_nosignaling_text(const NoSignalingReport& report,
                                    int precision = 3);
std::string render_nosignaling_json(const NoSignalingReport& report);

}  // namespace bellcert
