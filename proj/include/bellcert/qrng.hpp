#pragma once

// Auditing of setting-choice bit streams.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bellcert {

/// Packed bit sequence. Bit k is q_k (0-based here).
class BitStream {
 public:
  BitStream() = default;

  /// '0'/'1' characters; whitespace is skipped, anything else is a ParseError.
  static BitStream from_ascii(std::string_view text);
  /// 8 bits per byte, least significant bit first. `bit_count` truncates the
  /// final byte; by default every bit of every byte is used.
  static BitStream from_packed(std::span<const std::uint8_t> bytes);
  static BitStream from_packed(std::span<const std::uint8_t> bytes,
                               std::uint64_t bit_count);
  static BitStream from_bits(std::span<const std::uint8_t> bits);

  void push_back(bool bit);
  bool operator[](std::uint64_t k) const noexcept {
    return (words_[k >> 6] >> (k & 63)) & 1u;
  }
  std::uint64_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  std::uint64_t count_ones() const noexcept;
  /// Up to 64 bits starting at `begin`, bit `begin` in the lowest position.
  std::uint64_t word_at(std::uint64_t begin) const noexcept;

  BitStream complement() const;
  BitStream reversed() const;
  BitStream slice(std::uint64_t begin, std::uint64_t length) const;

  bool operator==(const BitStream&) const = default;

 private:
  std::vector<std::uint64_t> words_;
  std::uint64_t size_ = 0;
};

/// Independent fair bits (or bits equal to 1 with probability 1/2 + bias)
/// from the counter generator.
BitStream simulate_stream(std::uint64_t n, std::uint64_t seed,
                          double bias = 0.0);

struct BiasResult {
  double bias = 0.0;
  double sigma = 0.0;
  std::uint64_t n = 0;

  bool operator==(const BiasResult&) const = default;
};

/// B = n_ones/n − 1/2, σ = 1/(2√n).
BiasResult bias(const BitStream& stream);

/// Lag-l serial correlation coefficient around 1/2, uncorrected for bias.
/// Every product (q_k − 1/2)(q_{k+l} − 1/2) is ±1/4, so the value is
/// (agreements − disagreements)/n and is computed exactly in integers.
double scc(const BitStream& stream, std::uint64_t lag);

/// scc for lags 1..max_lag.
std::vector<double> scc_range(const BitStream& stream, std::uint64_t max_lag);

inline constexpr std::uint64_t kMaxAuditedLag = 56;

enum class WindowStatistic { bias, scc1 };

struct WindowPoint {
  std::uint64_t begin = 0;
  std::uint64_t length = 0;
  double value = 0.0;
  /// 1/(2√n) for bias, 1/√n for SCC₁.
  double sigma = 0.0;

  bool operator==(const WindowPoint&) const = default;
};

/// Statistic per consecutive window. A trailing partial window is included
/// when the statistic is defined on it.
std::vector<WindowPoint> windowed_evolution(const BitStream& stream,
                                            WindowStatistic statistic,
                                            std::uint64_t window);

struct SerialTestResult {
  unsigned block_length = 0;
  std::uint64_t blocks = 0;
  double chi_square = 0.0;
  unsigned degrees_of_freedom = 0;
  double p_value = 1.0;

  bool operator==(const SerialTestResult&) const = default;
};

/// χ² test of non-overlapping L-bit block frequencies against uniform.
/// Needs at least 5·2^L blocks.
SerialTestResult serial_test(const BitStream& stream, unsigned block_length);

/// Bias-vs-threshold calibration: c0 + c1·v + c2·v², v in mV.
struct QuadraticCurve {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;

  double operator()(double v) const noexcept { return c0 + (c1 + c2 * v) * v; }

  bool operator==(const QuadraticCurve&) const = default;
};

/// Comparator threshold drift described by the two erf edges of the count
/// plateau.
struct ThresholdNoise {
  double mu1_mv = 0.0;
  double sigma1_mv = 0.0;
  double mu2_mv = 0.0;
  double sigma2_mv = 0.0;
  double set_point_mv = 0.0;
  /// Sigma multiplier bounding the threshold excursion.
  double confidence = 5.0;
  QuadraticCurve curve;

  bool operator==(const ThresholdNoise&) const = default;
};

struct TemperatureDrift {
  /// Threshold shift per °C of each contributing source, V/°C.
  std::vector<double> coefficients_v_per_c;
  double excursion_c = 0.0;
  /// Bias change per volt of threshold shift near the set point.
  double bias_slope_per_v = 0.0;

  bool operator==(const TemperatureDrift&) const = default;
};

struct PredictabilityBudget {
  double observed_bias = 0.0;
  double bias_sigma = 0.0;
  double bias_confidence = 2.0;
  ThresholdNoise threshold;
  TemperatureDrift temperature;

  bool operator==(const PredictabilityBudget&) const = default;
};

struct BudgetResult {
  double tau1 = 0.0;
  double threshold = 0.0;
  double temperature = 0.0;
  double tau2 = 0.0;
  /// Threshold interval [μ1 − kσ1, μ2 + kσ2] searched for the worst case.
  double interval_low_mv = 0.0;
  double interval_high_mv = 0.0;

  bool operator==(const BudgetResult&) const = default;
};

/// τ₁ = |bias| + k·σ; the threshold term is the largest |curve(v) −
/// curve(set point)| over the confidence interval; the temperature term is
/// |slope|·Σ|coefficient|·excursion; τ₂ sums all three. Negative widths,
/// excursions or multipliers raise DomainError, a τ₂ above 1/2 raises
/// ValidationError.
BudgetResult predictability_budget(const PredictabilityBudget& budget);

/// JSON object with keys observed_bias, bias_sigma, bias_confidence,
/// threshold {mu1_mv, sigma1_mv, mu2_mv, sigma2_mv, set_point_mv, confidence,
/// curve [c0, c1, c2]} and temperature {coefficients_v_per_c, excursion_c,
/// bias_slope_per_v}. Throws ParseError or ValidationError.
PredictabilityBudget parse_budget_json(std::string_view json_text);
std::string budget_to_json(const PredictabilityBudget& budget);

std::string render_budget_text(const BudgetResult& result, int precision = 3);
std::string render_budget_json(const BudgetResult& result);

/// 2^(k−1)·τ^k.
double xor_reduction(double tau, unsigned depth);

}  // namespace bellcert
