#include "bellcert/nosignaling.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/students_t.hpp>
#include <nlohmann/json.hpp>

#include "bellcert/error.hpp"

namespace bellcert {

namespace {

double two_sided_t(double t, double dof) {
  if (!std::isfinite(t)) return 0.0;
  const boost::math::students_t dist(dof);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

TTestResult pooled_ttest(double n0, double mean0, double ss0, double n1,
                         double mean1, double ss1) {
  if (n0 < 2 || n1 < 2)
    throw ComputationError("t-test needs at least two samples per group");
  if (ss0 <= 0.0 && ss1 <= 0.0)
    throw ComputationError("t-test undefined: zero variance in both groups");
  TTestResult r;
  r.mean0 = mean0;
  r.mean1 = mean1;
  r.degrees_of_freedom = n0 + n1 - 2.0;
  const double pooled = (ss0 + ss1) / r.degrees_of_freedom;
  r.t = (mean0 - mean1) / std::sqrt(pooled * (1.0 / n0 + 1.0 / n1));
  r.p_value = two_sided_t(r.t, r.degrees_of_freedom);
  return r;
}

ContingencyTable2x2 labeled(std::array<std::string, 2> rows,
                            std::array<std::string, 2> cols) {
  ContingencyTable2x2 t;
  t.row_labels = std::move(rows);
  t.column_labels = std::move(cols);
  return t;
}

std::string fmt(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

void render_table(std::ostringstream& out, const std::string& title,
                  const ContingencyTable2x2& t, const std::string& stat,
                  double p, int precision) {
  char line[160];
  out << title << "\n";
  std::snprintf(line, sizeof line, "  %-8s %10s %10s\n", "",
                t.column_labels[0].c_str(), t.column_labels[1].c_str());
  out << line;
  for (std::size_t r = 0; r < 2; ++r) {
    std::snprintf(line, sizeof line, "  %-8s %10llu %10llu\n",
                  t.row_labels[r].c_str(),
                  static_cast<unsigned long long>(t.counts[r][0]),
                  static_cast<unsigned long long>(t.counts[r][1]));
    out << line;
  }
  out << "  " << stat << "  P = " << fmt(p, precision) << "\n";
}

nlohmann::json table_json(const ContingencyTable2x2& t) {
  return {{"rows", t.row_labels},
          {"columns", t.column_labels},
          {"counts", {{t.counts[0][0], t.counts[0][1]},
                      {t.counts[1][0], t.counts[1][1]}}}};
}

}  // namespace

ZTestResult setting_independence_ztest(const ContingencyTable2x2& table) {
  const double r0 = static_cast<double>(table.row_total(0));
  const double r1 = static_cast<double>(table.row_total(1));
  if (r0 < 1 || r1 < 1) throw ComputationError("z-test needs two non-empty rows");
  ZTestResult z;
  z.p_row0 = static_cast<double>(table.counts[0][1]) / r0;
  z.p_row1 = static_cast<double>(table.counts[1][1]) / r1;
  const double pooled = static_cast<double>(table.column_total(1)) / (r0 + r1);
  if (pooled <= 0.0 || pooled >= 1.0)
    throw ComputationError("z-test undefined: pooled proportion is 0 or 1");
  const double se = std::sqrt(pooled * (1.0 - pooled) * (1.0 / r0 + 1.0 / r1));
  z.z = (z.p_row0 - z.p_row1) / se;
  z.p_value = std::erfc(std::abs(z.z) / std::sqrt(2.0));
  return z;
}

TTestResult two_sample_ttest(std::span<const double> g0,
                             std::span<const double> g1) {
  auto moments = [](std::span<const double> g) {
    const double n = static_cast<double>(g.size());
    const double mean = n > 0 ? std::accumulate(g.begin(), g.end(), 0.0) / n : 0.0;
    double ss = 0.0;
    for (double v : g) ss += (v - mean) * (v - mean);
    return std::array<double, 3>{n, mean, ss};
  };
  const auto [n0, m0, s0] = moments(g0);
  const auto [n1, m1, s1] = moments(g1);
  return pooled_ttest(n0, m0, s0, n1, m1, s1);
}

TTestResult nosignal_ttest(const ContingencyTable2x2& t) {
  // For ±1 samples with p ones and m minus-ones: mean (p−m)/n and
  // Σ(v − mean)² = n − n·mean² = 4pm/n.
  auto group = [&](std::size_t r) {
    const double p = static_cast<double>(t.counts[r][0]);
    const double m = static_cast<double>(t.counts[r][1]);
    const double n = p + m;
    return std::array<double, 3>{n, n > 0 ? (p - m) / n : 0.0,
                                 n > 0 ? 4.0 * p * m / n : 0.0};
  };
  const auto [n0, m0, s0] = group(0);
  const auto [n1, m1, s1] = group(1);
  return pooled_ttest(n0, m0, s0, n1, m1, s1);
}

NoSignalingTables build_tables(std::span<const TrialRecord> records) {
  NoSignalingTables t{labeled({"alpha", "alpha'"}, {"beta", "beta'"}),
                      labeled({"alpha", "alpha'"}, {"y=+1", "y=-1"}),
                      labeled({"beta", "beta'"}, {"x=+1", "x=-1"})};
  for (const auto& r : records) {
    const std::size_t a = value(r.a);
    const std::size_t b = value(r.b);
    ++t.settings.counts[a][b];
    ++t.y_by_a.counts[a][r.y == Outcome::up ? 0 : 1];
    ++t.x_by_b.counts[b][r.x == Outcome::up ? 0 : 1];
  }
  return t;
}

NoSignalingReport analyze_nosignaling(const RunDataset& dataset) {
  if (dataset.empty()) throw ComputationError("no events");
  NoSignalingReport r;
  r.tables = build_tables(dataset);
  r.settings = setting_independence_ztest(r.tables.settings);
  r.y_by_a = nosignal_ttest(r.tables.y_by_a);
  r.x_by_b = nosignal_ttest(r.tables.x_by_b);
  return r;
}

std::string render_nosignaling_text(const NoSignalingReport& r, int precision) {
  std::ostringstream out;
  render_table(out, "setting bits (rows a, columns b)", r.tables.settings,
               "z = " + fmt(r.settings.z, precision), r.settings.p_value,
               precision);
  render_table(out, "side-2 outcome by side-1 setting", r.tables.y_by_a,
               "t = " + fmt(r.y_by_a.t, precision), r.y_by_a.p_value, precision);
  render_table(out, "side-1 outcome by side-2 setting", r.tables.x_by_b,
               "t = " + fmt(r.x_by_b.t, precision), r.x_by_b.p_value, precision);
  return out.str();
}

std::string render_nosignaling_json(const NoSignalingReport& r) {
  nlohmann::json j;
  j["settings"] = table_json(r.tables.settings);
  j["settings"]["z"] = r.settings.z;
  j["settings"]["p_value"] = r.settings.p_value;
  j["y_by_a"] = table_json(r.tables.y_by_a);
  j["y_by_a"]["t"] = r.y_by_a.t;
  j["y_by_a"]["p_value"] = r.y_by_a.p_value;
  j["x_by_b"] = table_json(r.tables.x_by_b);
  j["x_by_b"]["t"] = r.x_by_b.t;
  j["x_by_b"]["p_value"] = r.x_by_b.p_value;
  return j.dump(2) + "\n";
}

}  // namespace bellcert
