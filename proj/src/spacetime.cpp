#include "bellcert/spacetime.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bellcert/error.hpp"

namespace bellcert {

namespace {

using nlohmann::json;

Ticks floor_div2(Ticks t) noexcept {
  const std::int64_t v = t.tenths();
  return Ticks(v >= 0 ? v / 2 : -((-v + 1) / 2));
}

template <typename T>
T field(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) throw ValidationError(where + ": missing '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(where + ": '" + key + "' has the wrong type");
  }
}

template <typename T>
T field_or(const json& j, const char* key, T fallback, const std::string& where) {
  return j.contains(key) ? field<T>(j, key, where) : fallback;
}

json ticks_json(Ticks t) { return std::round(t.ns() * 10.0) / 10.0; }

}  // namespace

Ticks Ticks::from_ns(double ns) {
  if (!std::isfinite(ns)) throw DomainError("time must be finite");
  return Ticks(std::llround(ns * 10.0));
}

Ticks Ticks::floor_ns(double ns) {
  if (!std::isfinite(ns)) throw DomainError("time must be finite");
  // Absorb representation error so that e.g. 0.3 ns is not floored to 0.2.
  const double scaled = ns * 10.0;
  const double nearest = std::round(scaled);
  if (std::abs(scaled - nearest) < 1e-9) return Ticks(std::llround(nearest));
  return Ticks(static_cast<std::int64_t>(std::floor(scaled)));
}

std::string to_string(Ticks t) {
  const std::int64_t v = t.tenths();
  const std::int64_t a = v < 0 ? -v : v;
  return (v < 0 ? "-" : "") + std::to_string(a / 10) + "." +
         std::to_string(a % 10);
}

ChainTotal chain_total(const TimingChain& chain) {
  if (chain.segments.empty()) throw DomainError("timing chain is empty");
  ChainTotal out;
  for (const auto& s : chain.segments) {
    if (s.duration < Ticks(0) || s.uncertainty < Ticks(0))
      throw DomainError("segment '" + s.label +
                        "' has a negative duration or uncertainty");
    out.total += s.duration;
    out.uncertainty += s.uncertainty;
  }
  if (chain.measured_uncertainty) {
    if (*chain.measured_uncertainty < Ticks(0))
      throw DomainError("measured uncertainty must be >= 0");
    out.uncertainty = *chain.measured_uncertainty;
  }
  return out;
}

Ticks light_travel_floor(const SeparationScenario& s) {
  if (!(s.position_uncertainty_m >= 0.0))
    throw DomainError("position uncertainty must be >= 0");
  const double effective = s.distance_m - 2.0 * s.position_uncertainty_m;
  if (!(effective > 0.0))
    throw DomainError("effective distance must be positive");
  return Ticks::floor_ns(effective / kSpeedOfLight * 1e9);
}

SeparationMargin separation_margin(const SeparationScenario& s,
                                   const ChainTotal& measurement) {
  if (s.offset_uncertainty < Ticks(0))
    throw DomainError("offset uncertainty must be >= 0");
  SeparationMargin m;
  m.light_floor = light_travel_floor(s);
  m.margin = m.light_floor - s.start_offset - s.offset_uncertainty -
             measurement.worst_case();
  m.violation = m.margin < Ticks(0);
  return m;
}

SymmetricMargin symmetric_margin(Ticks first, Ticks second) {
  return {floor_div2(first - second), floor_div2(first + second)};
}

SpacetimeConfig parse_spacetime_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!root.is_object() || !root.contains("stations") ||
      !root["stations"].is_array() || root["stations"].empty())
    throw ValidationError("spacetime config needs a non-empty 'stations' array");

  SpacetimeConfig cfg;
  std::size_t i = 0;
  for (const json& st : root["stations"]) {
    const std::string where = "station " + std::to_string(i++);
    StationConfig sc;
    sc.name = field_or<std::string>(st, "name", where, where);
    auto& sn = sc.scenario;
    sn.distance_m = field<double>(st, "distance_m", where);
    sn.position_uncertainty_m =
        field_or<double>(st, "position_uncertainty_m", 0.0, where);
    sn.start_offset = Ticks::from_ns(field_or<double>(st, "start_offset_ns", 0.0, where));
    sn.offset_uncertainty =
        Ticks::from_ns(field_or<double>(st, "offset_uncertainty_ns", 0.0, where));
    if (!(sn.distance_m > 0.0)) throw ValidationError(where + ": distance must be > 0");

    const json chain = field<json>(st, "chain", where);
    sc.chain.name = sc.name;
    for (const json& seg : field<json>(chain, "segments", where)) {
      TimingSegment ts;
      ts.label = field_or<std::string>(seg, "label", "", where);
      ts.duration = Ticks::from_ns(field<double>(seg, "duration_ns", where));
      ts.uncertainty =
          Ticks::from_ns(field_or<double>(seg, "uncertainty_ns", 0.0, where));
      sc.chain.segments.push_back(std::move(ts));
    }
    if (chain.contains("measured_uncertainty_ns"))
      sc.chain.measured_uncertainty =
          Ticks::from_ns(field<double>(chain, "measured_uncertainty_ns", where));
    cfg.stations.push_back(std::move(sc));
  }
  return cfg;
}

SpacetimeReport check_spacetime(const SpacetimeConfig& config) {
  SpacetimeReport r;
  for (const auto& st : config.stations) {
    StationCheck c;
    c.name = st.name;
    c.measurement = chain_total(st.chain);
    c.margin = separation_margin(st.scenario, c.measurement);
    r.pass = r.pass && !c.margin.violation;
    r.stations.push_back(std::move(c));
  }
  if (r.stations.size() == 2)
    r.symmetric = symmetric_margin(r.stations[0].margin.margin,
                                   r.stations[1].margin.margin);
  return r;
}

std::string render_spacetime_text(const SpacetimeReport& r) {
  std::ostringstream out;
  out << "station      measurement        light floor   margin    status\n";
  for (const auto& s : r.stations) {
    char line[160];
    std::snprintf(line, sizeof line, "%-12s %8s +- %-6s %11s %8s    %s\n",
                  s.name.c_str(), to_string(s.measurement.total).c_str(),
                  to_string(s.measurement.uncertainty).c_str(),
                  to_string(s.margin.light_floor).c_str(),
                  to_string(s.margin.margin).c_str(),
                  s.margin.violation ? "VIOLATION" : "ok");
    out << line;
  }
  if (r.symmetric) {
    out << "symmetric margin " << to_string(r.symmetric->margin)
        << " ns after delaying " << r.stations[0].name << " by "
        << to_string(r.symmetric->shift) << " ns\n";
  }
  out << (r.pass ? "PASS" : "FAIL") << ": spacelike separation "
      << (r.pass ? "holds" : "violated") << "\n";
  return out.str();
}

std::string render_spacetime_json(const SpacetimeReport& r) {
  json j;
  j["pass"] = r.pass;
  j["stations"] = json::array();
  for (const auto& s : r.stations) {
    j["stations"].push_back({{"name", s.name},
                             {"measurement_ns", ticks_json(s.measurement.total)},
                             {"measurement_uncertainty_ns",
                              ticks_json(s.measurement.uncertainty)},
                             {"light_floor_ns", ticks_json(s.margin.light_floor)},
                             {"margin_ns", ticks_json(s.margin.margin)},
                             {"violation", s.margin.violation}});
  }
  if (r.symmetric)
    j["symmetric"] = {{"shift_ns", ticks_json(r.symmetric->shift)},
                      {"margin_ns", ticks_json(r.symmetric->margin)}};
  return j.dump(2) + "\n";
}

}  // namespace bellcert
