#include "bellcert/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bellcert/error.hpp"
#include "bellcert/fixtures.hpp"

namespace bellcert {

namespace {

using nlohmann::json;

constexpr double kInf = std::numeric_limits<double>::infinity();

// ---- manifest ------------------------------------------------------------

const std::set<std::string> kManifestKeys{
    "run_id", "label",  "events", "format",      "tau",
    "angles", "report", "note",   "qrng_budget", "spacetime"};

template <typename T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError("manifest: '" + key + "' has the wrong type");
  }
}

json angles_json(const SettingAngles& a) {
  return {{"alpha", a.alpha},
          {"alpha_prime", a.alpha_prime},
          {"beta", a.beta},
          {"beta_prime", a.beta_prime}};
}

SettingAngles angles_from(const json& j) {
  SettingAngles a;
  if (!j.is_object()) throw ValidationError("manifest: 'angles' must be an object");
  if (j.contains("alpha")) a.alpha = get_as<double>(j, "alpha");
  if (j.contains("alpha_prime")) a.alpha_prime = get_as<double>(j, "alpha_prime");
  if (j.contains("beta")) a.beta = get_as<double>(j, "beta");
  if (j.contains("beta_prime")) a.beta_prime = get_as<double>(j, "beta_prime");
  return a;
}

json spacetime_config_json(const SpacetimeConfig& cfg) {
  json stations = json::array();
  for (const auto& st : cfg.stations) {
    json segs = json::array();
    for (const auto& s : st.chain.segments)
      segs.push_back({{"label", s.label},
                      {"duration_ns", s.duration.ns()},
                      {"uncertainty_ns", s.uncertainty.ns()}});
    json chain{{"segments", segs}};
    if (st.chain.measured_uncertainty)
      chain["measured_uncertainty_ns"] = st.chain.measured_uncertainty->ns();
    stations.push_back({{"name", st.name},
                        {"distance_m", st.scenario.distance_m},
                        {"position_uncertainty_m", st.scenario.position_uncertainty_m},
                        {"start_offset_ns", st.scenario.start_offset.ns()},
                        {"offset_uncertainty_ns", st.scenario.offset_uncertainty.ns()},
                        {"chain", chain}});
  }
  return {{"stations", stations}};
}

// ---- report serialisation -------------------------------------------------

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double num_from(const json& j) { return j.is_null() ? kInf : j.get<double>(); }

json estimate_json(const SEstimate& s) {
  return {{"value", num(s.value)},
          {"sigma", num(s.sigma)},
          {"method", to_string(s.method)}};
}

SMethod method_from(const std::string& name) {
  for (SMethod m : {SMethod::per_setting, SMethod::event_based,
                    SMethod::weighted_mean, SMethod::combined_event_based})
    if (to_string(m) == name) return m;
  throw ParseError("unknown S method '" + name + "'");
}

SEstimate estimate_from(const json& j) {
  return {num_from(j.at("value")), num_from(j.at("sigma")),
          method_from(j.at("method").get<std::string>())};
}

json opt_estimate_json(const std::optional<SEstimate>& s) {
  return s ? estimate_json(*s) : json(nullptr);
}

std::optional<SEstimate> opt_estimate_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return estimate_from(j);
}

json wins_json(const WinCount& w) {
  return {{"wins", w.wins}, {"rounds", w.rounds}};
}

WinCount wins_from(const json& j) {
  return {j.at("wins").get<std::uint64_t>(), j.at("rounds").get<std::uint64_t>()};
}

json pvalue_json(const PValueReport& p) {
  return {{"method", to_string(p.method)}, {"p_bound", p.p_bound},
          {"log_p", p.log_p},              {"statistic", p.statistic},
          {"rounds", p.rounds},            {"tau", p.tau}};
}

PValueReport pvalue_from(const json& j) {
  PValueReport p;
  const auto m = j.at("method").get<std::string>();
  if (m == "martingale") p.method = PValueMethod::martingale;
  else if (m == "game") p.method = PValueMethod::game;
  else throw ParseError("unknown P-value method '" + m + "'");
  p.p_bound = j.at("p_bound").get<double>();
  p.log_p = j.at("log_p").get<double>();
  p.statistic = j.at("statistic").get<double>();
  p.rounds = j.at("rounds").get<std::uint64_t>();
  p.tau = j.at("tau").get<double>();
  return p;
}

json counts_json(const OutcomeCounts& c) {
  return {c.up_up, c.up_down, c.down_up, c.down_down};
}

OutcomeCounts counts_from(const json& j) {
  return {j.at(0).get<std::uint64_t>(), j.at(1).get<std::uint64_t>(),
          j.at(2).get<std::uint64_t>(), j.at(3).get<std::uint64_t>()};
}

json state_json(const StateReport& s) {
  json rows = json::array();
  for (const auto& r : s.rows) {
    json row{{"a", value(r.a)},       {"b", value(r.b)},
             {"a_deg", r.a_deg},      {"b_deg", r.b_deg},
             {"counts", counts_json(r.counts)}, {"g", r.g}};
    row["E"] = r.correlator ? num(r.correlator->value) : json(nullptr);
    row["sigma"] = r.correlator ? num(r.correlator->sigma) : json(nullptr);
    rows.push_back(row);
  }
  return {{"herald", to_string(s.herald)},
          {"rows", rows},
          {"s_per_setting", opt_estimate_json(s.s_per_setting)},
          {"s_per_setting_binomial", opt_estimate_json(s.s_per_setting_binomial)},
          {"s_event_based", estimate_json(s.s_event_based)},
          {"wins", wins_json(s.wins)},
          {"p_martingale", pvalue_json(s.martingale)},
          {"p_game", pvalue_json(s.game)}};
}

StateReport state_from(const json& j) {
  StateReport s;
  const auto h = j.at("herald").get<std::string>();
  if (h != "psi+" && h != "psi-") throw ParseError("unknown herald '" + h + "'");
  s.herald = h == "psi+" ? Herald::psi_plus : Herald::psi_minus;
  const json& rows = j.at("rows");
  if (!rows.is_array() || rows.size() != 4) throw ParseError("state needs 4 rows");
  for (std::size_t i = 0; i < 4; ++i) {
    const json& r = rows[i];
    CorrelatorRow& row = s.rows[i];
    row.a = r.at("a").get<int>() ? Choice::primed : Choice::unprimed;
    row.b = r.at("b").get<int>() ? Choice::primed : Choice::unprimed;
    row.a_deg = r.at("a_deg").get<double>();
    row.b_deg = r.at("b_deg").get<double>();
    row.counts = counts_from(r.at("counts"));
    row.g = r.at("g").get<int>();
    if (!r.at("E").is_null())
      row.correlator = Correlator{r["E"].get<double>(), num_from(r.at("sigma"))};
  }
  s.s_per_setting = opt_estimate_from(j.at("s_per_setting"));
  s.s_per_setting_binomial = opt_estimate_from(j.at("s_per_setting_binomial"));
  s.s_event_based = estimate_from(j.at("s_event_based"));
  s.wins = wins_from(j.at("wins"));
  s.martingale = pvalue_from(j.at("p_martingale"));
  s.game = pvalue_from(j.at("p_game"));
  return s;
}

json table2_json(const ContingencyTable2x2& t) {
  return {{"rows", t.row_labels},
          {"columns", t.column_labels},
          {"counts", {{t.counts[0][0], t.counts[0][1]},
                      {t.counts[1][0], t.counts[1][1]}}}};
}

ContingencyTable2x2 table2_from(const json& j) {
  ContingencyTable2x2 t;
  t.row_labels = j.at("rows").get<std::array<std::string, 2>>();
  t.column_labels = j.at("columns").get<std::array<std::string, 2>>();
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c)
      t.counts[r][c] = j.at("counts").at(r).at(c).get<std::uint64_t>();
  return t;
}

json ttest_json(const TTestResult& t) {
  return {{"mean0", t.mean0}, {"mean1", t.mean1}, {"t", num(t.t)},
          {"dof", t.degrees_of_freedom}, {"p_value", t.p_value}};
}

TTestResult ttest_from(const json& j) {
  return {j.at("mean0").get<double>(), j.at("mean1").get<double>(),
          num_from(j.at("t")), j.at("dof").get<double>(),
          j.at("p_value").get<double>()};
}

json nosignal_json(const NoSignalingReport& r) {
  return {{"settings", table2_json(r.tables.settings)},
          {"y_by_a", table2_json(r.tables.y_by_a)},
          {"x_by_b", table2_json(r.tables.x_by_b)},
          {"ztest",
           {{"p_row0", r.settings.p_row0}, {"p_row1", r.settings.p_row1},
            {"z", r.settings.z}, {"p_value", r.settings.p_value}}},
          {"ttest_y_by_a", ttest_json(r.y_by_a)},
          {"ttest_x_by_b", ttest_json(r.x_by_b)}};
}

NoSignalingReport nosignal_from(const json& j) {
  NoSignalingReport r;
  r.tables.settings = table2_from(j.at("settings"));
  r.tables.y_by_a = table2_from(j.at("y_by_a"));
  r.tables.x_by_b = table2_from(j.at("x_by_b"));
  const json& z = j.at("ztest");
  r.settings = {z.at("p_row0").get<double>(), z.at("p_row1").get<double>(),
                z.at("z").get<double>(), z.at("p_value").get<double>()};
  r.y_by_a = ttest_from(j.at("ttest_y_by_a"));
  r.x_by_b = ttest_from(j.at("ttest_x_by_b"));
  return r;
}

json budget_result_json(const BudgetResult& b) {
  return {{"tau1", b.tau1},
          {"threshold", b.threshold},
          {"temperature", b.temperature},
          {"tau2", b.tau2},
          {"interval_low_mv", b.interval_low_mv},
          {"interval_high_mv", b.interval_high_mv}};
}

BudgetResult budget_result_from(const json& j) {
  return {j.at("tau1").get<double>(),        j.at("threshold").get<double>(),
          j.at("temperature").get<double>(), j.at("tau2").get<double>(),
          j.at("interval_low_mv").get<double>(),
          j.at("interval_high_mv").get<double>()};
}

json ticks_json(Ticks t) { return t.tenths(); }
Ticks ticks_from(const json& j) { return Ticks(j.get<std::int64_t>()); }

json spacetime_report_json(const SpacetimeReport& r) {
  json stations = json::array();
  for (const auto& s : r.stations)
    stations.push_back({{"name", s.name},
                        {"total_tenths_ns", ticks_json(s.measurement.total)},
                        {"uncertainty_tenths_ns", ticks_json(s.measurement.uncertainty)},
                        {"light_floor_tenths_ns", ticks_json(s.margin.light_floor)},
                        {"margin_tenths_ns", ticks_json(s.margin.margin)},
                        {"violation", s.margin.violation}});
  json j{{"stations", stations}, {"pass", r.pass}};
  j["symmetric"] = r.symmetric
                       ? json{{"shift_tenths_ns", ticks_json(r.symmetric->shift)},
                              {"margin_tenths_ns", ticks_json(r.symmetric->margin)}}
                       : json(nullptr);
  return j;
}

SpacetimeReport spacetime_report_from(const json& j) {
  SpacetimeReport r;
  for (const json& s : j.at("stations")) {
    StationCheck c;
    c.name = s.at("name").get<std::string>();
    c.measurement = {ticks_from(s.at("total_tenths_ns")),
                     ticks_from(s.at("uncertainty_tenths_ns"))};
    c.margin = {ticks_from(s.at("light_floor_tenths_ns")),
                ticks_from(s.at("margin_tenths_ns")),
                s.at("violation").get<bool>()};
    r.stations.push_back(std::move(c));
  }
  r.pass = j.at("pass").get<bool>();
  if (!j.at("symmetric").is_null())
    r.symmetric = SymmetricMargin{ticks_from(j["symmetric"].at("shift_tenths_ns")),
                                  ticks_from(j["symmetric"].at("margin_tenths_ns"))};
  return r;
}

// ---- text rendering -------------------------------------------------------

std::string fixed(double v, int precision) {
  if (!std::isfinite(v)) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::string sci(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", precision, v);
  return buf;
}

std::string pm(const SEstimate& s, int precision) {
  return fixed(s.value, precision) + " +- " + fixed(s.sigma, precision);
}

std::string angle(double deg) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", deg);
  return buf;
}

std::string herald_title(Herald h) {
  return h == Herald::psi_plus ? "Psi+" : "Psi-";
}

}  // namespace

// ---- manifest API ----------------------------------------------------------

RunManifest parse_manifest(std::string_view text,
                           const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  }
  if (!root.is_object()) throw ValidationError("manifest must be a JSON object");
  for (const auto& [key, _] : root.items())
    if (!kManifestKeys.count(key))
      throw ValidationError("manifest: unknown key '" + key + "'");
  if (!root.contains("events"))
    throw ValidationError("manifest: missing 'events'");

  RunManifest m;
  m.run_id = root.contains("run_id") ? get_as<std::string>(root, "run_id") : "";
  m.label = root.contains("label") ? get_as<std::string>(root, "label") : "";
  m.note = root.contains("note") ? get_as<std::string>(root, "note") : "";
  std::filesystem::path events = get_as<std::string>(root, "events");
  m.events = events.is_relative() && !base_dir.empty() ? base_dir / events : events;
  if (root.contains("format")) {
    try {
      m.format = parse_event_format(get_as<std::string>(root, "format"));
    } catch (const DomainError& e) {
      throw ValidationError(std::string("manifest: ") + e.what());
    }
  }
  if (root.contains("tau")) m.tau = get_as<double>(root, "tau");
  if (root.contains("angles")) m.angles = angles_from(root["angles"]);
  if (root.contains("report")) {
    const json& r = root["report"];
    if (r.contains("precision")) m.report.precision = get_as<int>(r, "precision");
    if (r.contains("formats"))
      m.report.formats = get_as<std::vector<std::string>>(r, "formats");
  }
  if (root.contains("qrng_budget"))
    m.qrng_budget = parse_budget_json(root["qrng_budget"].dump());
  if (root.contains("spacetime"))
    m.spacetime = parse_spacetime_config(root["spacetime"].dump());

  if (!(m.tau >= 0.0 && m.tau <= 0.5))
    throw ValidationError("manifest: tau must lie in [0, 1/2]");
  if (m.report.precision < 0 || m.report.precision > 17)
    throw ValidationError("manifest: precision must lie in [0, 17]");
  for (const auto& f : m.report.formats)
    if (f != "text" && f != "json")
      throw ValidationError("manifest: unknown report format '" + f + "'");
  return m;
}

RunManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open manifest " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  RunManifest m = parse_manifest(buf.str(), path.parent_path());
  if (m.run_id.empty()) m.run_id = path.stem().string();
  return m;
}

std::string manifest_to_json(const RunManifest& m) {
  json j{{"run_id", m.run_id},
         {"label", m.label},
         {"events", m.events.generic_string()},
         {"format", to_string(m.format)},
         {"tau", m.tau},
         {"angles", angles_json(m.angles)},
         {"report", {{"precision", m.report.precision},
                     {"formats", m.report.formats}}}};
  if (!m.note.empty()) j["note"] = m.note;
  if (m.qrng_budget) j["qrng_budget"] = json::parse(budget_to_json(*m.qrng_budget));
  if (m.spacetime) j["spacetime"] = spacetime_config_json(*m.spacetime);
  return j.dump(2) + "\n";
}

void validate_manifest(const RunManifest& m) {
  if (!(m.tau >= 0.0 && m.tau <= 0.5))
    throw ValidationError("manifest: tau must lie in [0, 1/2]");
  if (m.report.precision < 0 || m.report.precision > 17)
    throw ValidationError("manifest: precision must lie in [0, 17]");
  if (m.events.empty()) throw ValidationError("manifest: no event file given");
  std::error_code ec;
  if (!std::filesystem::is_regular_file(m.events, ec))
    throw ValidationError("manifest: event file not found: " + m.events.string());
}

// ---- analysis ---------------------------------------------------------------

CertificationReport analyze(const RunManifest& manifest) {
  validate_manifest(manifest);
  RunDataset ds = read_events(manifest.events, manifest.format);
  return analyze_dataset(ds, manifest);
}

CertificationReport analyze_dataset(const RunDataset& dataset,
                                    const RunManifest& manifest) {
  if (dataset.empty()) throw ComputationError("no events");
  const Predictability tau(manifest.tau);
  const CorrelationTable table = CorrelationTable::from_dataset(dataset);

  CertificationReport r;
  r.run_id = manifest.run_id.empty() ? dataset.run_id : manifest.run_id;
  r.label = manifest.label;
  r.note = manifest.note;
  r.tau = manifest.tau;
  r.angles = manifest.angles;
  r.n_events = dataset.size();

  for (Herald h : kHeralds) {
    if (table.total(h) == 0) continue;
    StateReport s;
    s.herald = h;
    std::size_t i = 0;
    for (Choice a : kChoices) {
      for (Choice b : kChoices) {
        CorrelatorRow& row = s.rows[i++];
        row.a = a;
        row.b = b;
        row.a_deg = manifest.angles.angle(Side::one, a);
        row.b_deg = manifest.angles.angle(Side::two, b);
        row.counts = table.cell(h, a, b);
        row.g = g_sign(h, a, b);
        if (row.counts.total() > 0) row.correlator = correlator(row.counts);
      }
    }
    try {
      s.s_per_setting = s_per_state(table, h, SigmaConvention::sample);
    } catch (const ComputationError&) {
    }
    try {
      s.s_per_setting_binomial = s_per_state(table, h, SigmaConvention::binomial);
    } catch (const ComputationError&) {
    }
    s.s_event_based = s_event_based(dataset, h);
    s.wins = wins(dataset, h);
    s.martingale = pvalue_martingale(s.s_event_based.value, s.wins.rounds, tau);
    s.game = pvalue_game(s.wins.wins, s.wins.rounds, tau);
    r.states.push_back(s);
  }

  CombinedReport& c = r.combined;
  if (r.states.size() == 2 && r.states[0].s_per_setting_binomial &&
      r.states[1].s_per_setting_binomial) {
    try {
      c.weighted_mean = combine_states(*r.states[0].s_per_setting_binomial,
                                       *r.states[1].s_per_setting_binomial);
    } catch (const ComputationError&) {
    }
  }
  try {
    c.pooled = s_combined(table, SigmaConvention::sample);
  } catch (const ComputationError&) {
  }
  c.event_based = s_event_based(dataset);
  c.wins = wins(dataset);
  c.martingale = pvalue_martingale(c.event_based.value, c.wins.rounds, tau);
  c.game = pvalue_game(c.wins.wins, c.wins.rounds, tau);

  try {
    r.nosignaling = analyze_nosignaling(dataset);
  } catch (const ComputationError&) {
  }
  if (manifest.qrng_budget) r.qrng = predictability_budget(*manifest.qrng_budget);
  if (manifest.spacetime) r.spacetime = check_spacetime(*manifest.spacetime);
  return r;
}

// ---- rendering ---------------------------------------------------------------

std::string render_text(const CertificationReport& r, int precision) {
  const int p = precision;
  std::ostringstream out;
  out << "run " << r.run_id;
  if (!r.label.empty()) out << " (" << r.label << ")";
  out << "\n";
  out << "events " << r.n_events << "   tau " << sci(r.tau, 2) << "\n";
  if (!r.note.empty()) out << "note: " << r.note << "\n";

  for (const auto& s : r.states) {
    out << "\n" << herald_title(s.herald) << "\n";
    char line[200];
    std::snprintf(line, sizeof line, "  %7s %7s %7s %7s %7s %7s  %-18s %3s\n", "a",
                  "b", "N++", "N+-", "N-+", "N--", "E", "g");
    out << line;
    for (const auto& row : s.rows) {
      const std::string e =
          row.correlator ? pm(SEstimate{row.correlator->value,
                                        row.correlator->sigma},
                              p)
                         : "n/a";
      std::snprintf(line, sizeof line,
                    "  %7s %7s %7llu %7llu %7llu %7llu  %-18s %+3d\n",
                    angle(row.a_deg).c_str(), angle(row.b_deg).c_str(),
                    static_cast<unsigned long long>(row.counts.up_up),
                    static_cast<unsigned long long>(row.counts.up_down),
                    static_cast<unsigned long long>(row.counts.down_up),
                    static_cast<unsigned long long>(row.counts.down_down),
                    e.c_str(), row.g);
      out << line;
    }
    out << "  S (per setting)   "
        << (s.s_per_setting ? pm(*s.s_per_setting, p) : std::string("n/a")) << "\n";
    out << "  S (event based)   " << pm(s.s_event_based, p) << "\n";
    out << "  wins              " << s.wins.wins << " of " << s.wins.rounds << "\n";
    out << "  P_m               " << sci(s.martingale.p_bound, p) << "\n";
    out << "  P_g               " << sci(s.game.p_bound, p) << "\n";
  }

  const CombinedReport& c = r.combined;
  out << "\ncombined\n";
  out << "  S (weighted mean) "
      << (c.weighted_mean ? pm(*c.weighted_mean, p + 1) : std::string("n/a")) << "\n";
  out << "  S (event based)   "
      << (c.pooled ? pm(*c.pooled, p + 1) : std::string("n/a")) << "\n";
  out << "  S (8W/N - 4)      " << pm(c.event_based, p + 1) << "\n";
  out << "  wins              " << c.wins.wins << " of " << c.wins.rounds << "\n";
  out << "  P_m               " << sci(c.martingale.p_bound, p) << "\n";
  out << "  P_g               " << sci(c.game.p_bound, p) << "\n";

  if (r.nosignaling) {
    out << "\nno-signaling\n" << render_nosignaling_text(*r.nosignaling, p);
  }
  if (r.qrng) out << "\n" << render_budget_text(*r.qrng, p);
  if (r.spacetime) out << "\nspacetime\n" << render_spacetime_text(*r.spacetime);
  return out.str();
}

std::string render_json(const CertificationReport& r) {
  json states = json::array();
  for (const auto& s : r.states) states.push_back(state_json(s));
  const CombinedReport& c = r.combined;
  json j{{"run_id", r.run_id},
         {"label", r.label},
         {"note", r.note},
         {"tau", r.tau},
         {"angles", angles_json(r.angles)},
         {"n_events", r.n_events},
         {"states", states},
         {"combined",
          {{"weighted_mean", opt_estimate_json(c.weighted_mean)},
           {"pooled", opt_estimate_json(c.pooled)},
           {"event_based", estimate_json(c.event_based)},
           {"wins", wins_json(c.wins)},
           {"p_martingale", pvalue_json(c.martingale)},
           {"p_game", pvalue_json(c.game)}}}};
  j["nosignaling"] = r.nosignaling ? nosignal_json(*r.nosignaling) : json(nullptr);
  j["qrng"] = r.qrng ? budget_result_json(*r.qrng) : json(nullptr);
  j["spacetime"] = r.spacetime ? spacetime_report_json(*r.spacetime) : json(nullptr);
  return j.dump(2) + "\n";
}

CertificationReport parse_report_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    CertificationReport r;
    r.run_id = j.at("run_id").get<std::string>();
    r.label = j.at("label").get<std::string>();
    r.note = j.at("note").get<std::string>();
    r.tau = j.at("tau").get<double>();
    r.angles = angles_from(j.at("angles"));
    r.n_events = j.at("n_events").get<std::uint64_t>();
    for (const json& s : j.at("states")) r.states.push_back(state_from(s));
    const json& c = j.at("combined");
    r.combined.weighted_mean = opt_estimate_from(c.at("weighted_mean"));
    r.combined.pooled = opt_estimate_from(c.at("pooled"));
    r.combined.event_based = estimate_from(c.at("event_based"));
    r.combined.wins = wins_from(c.at("wins"));
    r.combined.martingale = pvalue_from(c.at("p_martingale"));
    r.combined.game = pvalue_from(c.at("p_game"));
    if (!j.at("nosignaling").is_null()) r.nosignaling = nosignal_from(j["nosignaling"]);
    if (!j.at("qrng").is_null()) r.qrng = budget_result_from(j["qrng"]);
    if (!j.at("spacetime").is_null())
      r.spacetime = spacetime_report_from(j["spacetime"]);
    return r;
  } catch (const json::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  } catch (const ValidationError& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
}

std::vector<std::filesystem::path> write_published_fixtures(
    const std::filesystem::path& fixtures_dir,
    const std::filesystem::path& manifests_dir) {
  std::error_code ec;
  std::filesystem::create_directories(fixtures_dir, ec);
  std::filesystem::create_directories(manifests_dir, ec);
  const auto events_base =
      std::filesystem::absolute(fixtures_dir).lexically_normal();
  const auto manifest_base =
      std::filesystem::absolute(manifests_dir).lexically_normal();

  std::vector<std::filesystem::path> written;
  for (const auto& run : published_runs()) {
    const auto csv = fixtures_dir / (run.id + ".csv");
    write_events(csv, reconstruct_dataset(run.table, run.id));
    written.push_back(csv);

    RunManifest m;
    m.run_id = run.id;
    m.label = run.label;
    m.events = (events_base / (run.id + ".csv")).lexically_relative(manifest_base);
    m.format = EventFormat::delimited;
    m.report.formats = {"text", "json"};
    m.note =
        "Reconstructed from published counts; the event order within each cell "
        "is synthetic and heralds alternate round-robin.";
    const auto path = manifests_dir / (run.id + ".json");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << manifest_to_json(m);
    written.push_back(path);
  }
  return written;
}

}  // namespace bellcert
