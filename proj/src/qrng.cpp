#include "bellcert/qrng.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <bit>
#include <cmath>
#include <string>

#include <boost/math/special_functions/gamma.hpp>
#include <nlohmann/json.hpp>

#include "bellcert/error.hpp"
#include "bellcert/rng.hpp"

namespace bellcert {

namespace {

constexpr std::uint64_t low_mask(std::uint64_t bits) noexcept {
  return bits >= 64 ? ~0ULL : ((1ULL << bits) - 1);
}

// Disagreements between q_k and q_{k+lag} for k in [begin, begin + pairs).
std::uint64_t disagreements(const BitStream& s, std::uint64_t begin,
                            std::uint64_t pairs, std::uint64_t lag) noexcept {
  std::uint64_t d = 0;
  for (std::uint64_t k = 0; k < pairs; k += 64) {
    const std::uint64_t diff =
        s.word_at(begin + k) ^ s.word_at(begin + k + lag);
    d += std::popcount(diff & low_mask(pairs - k));
  }
  return d;
}

std::uint64_t ones_in(const BitStream& s, std::uint64_t begin,
                      std::uint64_t length) noexcept {
  std::uint64_t n = 0;
  for (std::uint64_t k = 0; k < length; k += 64)
    n += std::popcount(s.word_at(begin + k) & low_mask(length - k));
  return n;
}

double scc_window(const BitStream& s, std::uint64_t begin, std::uint64_t length,
                  std::uint64_t lag) noexcept {
  const std::uint64_t pairs = length - lag;
  const std::uint64_t d = disagreements(s, begin, pairs, lag);
  const auto agree = static_cast<std::int64_t>(pairs - d);
  return static_cast<double>(agree - static_cast<std::int64_t>(d)) /
         static_cast<double>(length);
}

void require_non_negative(double v, const char* what) {
  if (!(v >= 0.0)) throw DomainError(std::string(what) + " must be >= 0");
}

}  // namespace

BitStream BitStream::from_ascii(std::string_view text) {
  BitStream s;
  std::size_t line = 1;
  for (char c : text) {
    if (c == '0' || c == '1') {
      s.push_back(c == '1');
    } else if (c == '\n') {
      ++line;
    } else if (c != ' ' && c != '\t' && c != '\r') {
      throw ParseError(line, "bit", "expected '0' or '1'");
    }
  }
  return s;
}

BitStream BitStream::from_packed(std::span<const std::uint8_t> bytes) {
  return from_packed(bytes, 8ULL * bytes.size());
}

BitStream BitStream::from_packed(std::span<const std::uint8_t> bytes,
                                 std::uint64_t bit_count) {
  if (bit_count > 8ULL * bytes.size())
    throw DomainError("bit count exceeds the packed data");
  BitStream s;
  s.size_ = bit_count;
  s.words_.assign((bit_count + 63) / 64, 0);
  for (std::uint64_t i = 0; i < (bit_count + 7) / 8; ++i)
    s.words_[i / 8] |= static_cast<std::uint64_t>(bytes[i]) << (8 * (i % 8));
  if (bit_count % 64) s.words_.back() &= low_mask(bit_count % 64);
  return s;
}

BitStream BitStream::from_bits(std::span<const std::uint8_t> bits) {
  BitStream s;
  for (std::uint8_t b : bits) {
    if (b > 1) throw DomainError("bits must be 0 or 1");
    s.push_back(b == 1);
  }
  return s;
}

void BitStream::push_back(bool bit) {
  if (size_ % 64 == 0) words_.push_back(0);
  if (bit) words_.back() |= 1ULL << (size_ % 64);
  ++size_;
}

std::uint64_t BitStream::count_ones() const noexcept {
  std::uint64_t n = 0;
  for (std::uint64_t w : words_) n += std::popcount(w);
  return n;
}

std::uint64_t BitStream::word_at(std::uint64_t begin) const noexcept {
  if (begin >= size_) return 0;
  const std::uint64_t idx = begin >> 6;
  const unsigned shift = begin & 63;
  std::uint64_t w = words_[idx] >> shift;
  if (shift != 0 && idx + 1 < words_.size()) w |= words_[idx + 1] << (64 - shift);
  return w & low_mask(size_ - begin);
}

BitStream BitStream::complement() const {
  BitStream s = *this;
  for (auto& w : s.words_) w = ~w;
  if (s.size_ % 64) s.words_.back() &= low_mask(s.size_ % 64);
  return s;
}

BitStream BitStream::reversed() const {
  BitStream s;
  s.words_.reserve(words_.size());
  for (std::uint64_t k = size_; k-- > 0;) s.push_back((*this)[k]);
  return s;
}

BitStream BitStream::slice(std::uint64_t begin, std::uint64_t length) const {
  if (begin > size_ || length > size_ - begin)
    throw DomainError("slice outside the stream");
  BitStream s;
  s.size_ = length;
  s.words_.resize((length + 63) / 64);
  for (std::uint64_t k = 0; k < length; k += 64)
    s.words_[k / 64] = word_at(begin + k) & low_mask(length - k);
  return s;
}

BitStream simulate_stream(std::uint64_t n, std::uint64_t seed, double bias) {
  if (!(std::abs(bias) <= 0.5)) throw DomainError("bias must lie in [-1/2, 1/2]");
  CounterRng rng(mix64(seed));
  BitStream s;
  if (bias == 0.0) {
    std::vector<std::uint8_t> bytes((n + 7) / 8);
    for (std::size_t i = 0; i < bytes.size(); i += 8) {
      std::uint64_t w = rng();
      for (std::size_t j = i; j < std::min(bytes.size(), i + 8); ++j, w >>= 8)
        bytes[j] = static_cast<std::uint8_t>(w);
    }
    return BitStream::from_packed(bytes, n);
  }
  for (std::uint64_t k = 0; k < n; ++k) s.push_back(rng.bernoulli(0.5 + bias));
  return s;
}

BiasResult bias(const BitStream& stream) {
  if (stream.empty()) throw ComputationError("bias of an empty stream");
  const double n = static_cast<double>(stream.size());
  // (2·ones − n)/(2n): the numerator is exact, so complementing negates B.
  const double excess = 2.0 * static_cast<double>(stream.count_ones()) - n;
  return {excess / (2.0 * n), 0.5 / std::sqrt(n), stream.size()};
}

double scc(const BitStream& stream, std::uint64_t lag) {
  if (lag < 1) throw DomainError("lag must be >= 1");
  if (lag >= stream.size())
    throw DomainError("lag must be smaller than the stream length");
  return scc_window(stream, 0, stream.size(), lag);
}

std::vector<double> scc_range(const BitStream& stream, std::uint64_t max_lag) {
  std::vector<double> out;
  out.reserve(max_lag);
  for (std::uint64_t l = 1; l <= max_lag; ++l) out.push_back(scc(stream, l));
  return out;
}

std::vector<WindowPoint> windowed_evolution(const BitStream& stream,
                                            WindowStatistic statistic,
                                            std::uint64_t window) {
  if (window < 1) throw DomainError("window must be >= 1");
  std::vector<WindowPoint> out;
  for (std::uint64_t begin = 0; begin < stream.size(); begin += window) {
    WindowPoint p;
    p.begin = begin;
    p.length = std::min(window, stream.size() - begin);
    const double n = static_cast<double>(p.length);
    if (statistic == WindowStatistic::bias) {
      p.value = static_cast<double>(ones_in(stream, begin, p.length)) / n - 0.5;
      p.sigma = 0.5 / std::sqrt(n);
    } else {
      if (p.length < 2) continue;
      p.value = scc_window(stream, begin, p.length, 1);
      p.sigma = 1.0 / std::sqrt(n);
    }
    out.push_back(p);
  }
  return out;
}

SerialTestResult serial_test(const BitStream& stream, unsigned block_length) {
  if (block_length < 1 || block_length > 24)
    throw DomainError("block length must lie in [1, 24]");
  const std::uint64_t cells = 1ULL << block_length;
  SerialTestResult r;
  r.block_length = block_length;
  r.blocks = stream.size() / block_length;
  if (r.blocks < 5 * cells)
    throw DomainError("serial test needs at least 5*2^L blocks, got " +
                      std::to_string(r.blocks));
  std::vector<std::uint64_t> counts(cells, 0);
  for (std::uint64_t i = 0; i < r.blocks; ++i)
    ++counts[stream.word_at(i * block_length) & low_mask(block_length)];

  const double expected =
      static_cast<double>(r.blocks) / static_cast<double>(cells);
  for (std::uint64_t c : counts) {
    const double d = static_cast<double>(c) - expected;
    r.chi_square += d * d / expected;
  }
  r.degrees_of_freedom = static_cast<unsigned>(cells - 1);
  r.p_value = boost::math::gamma_q(0.5 * r.degrees_of_freedom, 0.5 * r.chi_square);
  return r;
}

BudgetResult predictability_budget(const PredictabilityBudget& b) {
  require_non_negative(b.bias_sigma, "bias sigma");
  require_non_negative(b.bias_confidence, "bias confidence");
  const ThresholdNoise& t = b.threshold;
  require_non_negative(t.sigma1_mv, "sigma1");
  require_non_negative(t.sigma2_mv, "sigma2");
  require_non_negative(t.confidence, "threshold confidence");
  require_non_negative(b.temperature.excursion_c, "temperature excursion");
  if (!std::isfinite(b.observed_bias) || !std::isfinite(t.mu1_mv) ||
      !std::isfinite(t.mu2_mv) || !std::isfinite(t.set_point_mv))
    throw DomainError("budget inputs must be finite");

  BudgetResult r;
  r.tau1 = std::abs(b.observed_bias) + b.bias_confidence * b.bias_sigma;

  r.interval_low_mv = t.mu1_mv - t.confidence * t.sigma1_mv;
  r.interval_high_mv = t.mu2_mv + t.confidence * t.sigma2_mv;
  if (r.interval_low_mv > r.interval_high_mv)
    throw DomainError("threshold interval is empty (mu1 above mu2)");
  const double ref = t.curve(t.set_point_mv);
  auto deviation = [&](double v) { return std::abs(t.curve(v) - ref); };
  r.threshold = std::max(deviation(r.interval_low_mv),
                         deviation(r.interval_high_mv));
  if (t.curve.c2 != 0.0) {
    const double vertex = -t.curve.c1 / (2.0 * t.curve.c2);
    if (vertex > r.interval_low_mv && vertex < r.interval_high_mv)
      r.threshold = std::max(r.threshold, deviation(vertex));
  }

  double shift_v = 0.0;
  for (double c : b.temperature.coefficients_v_per_c) shift_v += std::abs(c);
  r.temperature =
      std::abs(b.temperature.bias_slope_per_v) * shift_v * b.temperature.excursion_c;

  r.tau2 = r.tau1 + r.threshold + r.temperature;
  if (r.tau2 > 0.5)
    throw ValidationError("total predictability exceeds 1/2");
  return r;
}

namespace {

using nlohmann::json;

double number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ValidationError(where + ": missing '" + key + "'");
  if (!j.at(key).is_number())
    throw ValidationError(where + ": '" + key + "' must be a number");
  return j.at(key).get<double>();
}

double number_or(const json& j, const char* key, double fallback,
                 const std::string& where) {
  return j.contains(key) ? number(j, key, where) : fallback;
}

}  // namespace

PredictabilityBudget parse_budget_json(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!root.is_object()) throw ValidationError("budget must be a JSON object");
  PredictabilityBudget b;
  b.observed_bias = number(root, "observed_bias", "budget");
  b.bias_sigma = number(root, "bias_sigma", "budget");
  b.bias_confidence = number_or(root, "bias_confidence", 2.0, "budget");

  if (root.contains("threshold")) {
    const json& t = root["threshold"];
    auto& th = b.threshold;
    th.mu1_mv = number(t, "mu1_mv", "threshold");
    th.sigma1_mv = number(t, "sigma1_mv", "threshold");
    th.mu2_mv = number(t, "mu2_mv", "threshold");
    th.sigma2_mv = number(t, "sigma2_mv", "threshold");
    th.set_point_mv =
        number_or(t, "set_point_mv", 0.5 * (th.mu1_mv + th.mu2_mv), "threshold");
    th.confidence = number_or(t, "confidence", 5.0, "threshold");
    if (t.contains("curve")) {
      const json& c = t["curve"];
      if (!c.is_array() || c.size() != 3)
        throw ValidationError("threshold: 'curve' must be [c0, c1, c2]");
      th.curve = {c[0].get<double>(), c[1].get<double>(), c[2].get<double>()};
    }
  } else {
    b.threshold.confidence = 0.0;
  }

  if (root.contains("temperature")) {
    const json& t = root["temperature"];
    if (t.contains("coefficients_v_per_c"))
      b.temperature.coefficients_v_per_c =
          t["coefficients_v_per_c"].get<std::vector<double>>();
    b.temperature.excursion_c = number_or(t, "excursion_c", 0.0, "temperature");
    b.temperature.bias_slope_per_v =
        number_or(t, "bias_slope_per_v", 0.0, "temperature");
  }
  return b;
}

std::string budget_to_json(const PredictabilityBudget& b) {
  const auto& t = b.threshold;
  json j{{"observed_bias", b.observed_bias},
         {"bias_sigma", b.bias_sigma},
         {"bias_confidence", b.bias_confidence},
         {"threshold",
          {{"mu1_mv", t.mu1_mv},
           {"sigma1_mv", t.sigma1_mv},
           {"mu2_mv", t.mu2_mv},
           {"sigma2_mv", t.sigma2_mv},
           {"set_point_mv", t.set_point_mv},
           {"confidence", t.confidence},
           {"curve", {t.curve.c0, t.curve.c1, t.curve.c2}}}},
         {"temperature",
          {{"coefficients_v_per_c", b.temperature.coefficients_v_per_c},
           {"excursion_c", b.temperature.excursion_c},
           {"bias_slope_per_v", b.temperature.bias_slope_per_v}}}};
  return j.dump(2);
}

std::string render_budget_text(const BudgetResult& r, int precision) {
  std::ostringstream out;
  char line[128];
  auto row = [&](const char* name, double v) {
    std::snprintf(line, sizeof line, "  %-22s %.*e\n", name, precision, v);
    out << line;
  };
  out << "predictability budget\n";
  row("tau1 (count bias)", r.tau1);
  row("threshold noise", r.threshold);
  row("temperature drift", r.temperature);
  row("tau2 (sum)", r.tau2);
  std::snprintf(line, sizeof line, "  threshold interval     [%.3f, %.3f] mV\n",
                r.interval_low_mv, r.interval_high_mv);
  out << line;
  return out.str();
}

std::string render_budget_json(const BudgetResult& r) {
  json j{{"tau1", r.tau1},
         {"threshold", r.threshold},
         {"temperature", r.temperature},
         {"tau2", r.tau2},
         {"interval_low_mv", r.interval_low_mv},
         {"interval_high_mv", r.interval_high_mv}};
  return j.dump(2) + "\n";
}

double xor_reduction(double tau, unsigned depth) {
  if (depth < 1) throw DomainError("xor depth must be >= 1");
  if (!(tau >= 0.0 && tau <= 0.5))
    throw DomainError("predictability tau must lie in [0, 1/2]");
  return 0.5 * std::pow(2.0 * tau, static_cast<double>(depth));
}

}  // namespace bellcert
