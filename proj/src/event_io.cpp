#include "bellcert/event_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bellcert/error.hpp"

namespace bellcert {

namespace {

enum Column : std::size_t { kIndex, kHerald, kA, kB, kX, kY, kTimestamp, kColumns };

constexpr std::array<std::string_view, kColumns> kNames{
    "index", "herald", "a", "b", "x", "y", "timestamp_ns"};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<std::int64_t> to_int(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    return std::nullopt;
  return v;
}

std::vector<std::string_view> split(std::string_view line) {
  char delim = 0;
  for (char c : {',', ';', '\t'}) {
    if (line.find(c) != std::string_view::npos) {
      delim = c;
      break;
    }
  }
  std::vector<std::string_view> out;
  if (delim) {
    std::size_t start = 0;
    while (true) {
      const auto pos = line.find(delim, start);
      out.push_back(trim(line.substr(start, pos - start)));
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
  } else {
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && (line[i] == ' ' || line[i] == '\r')) ++i;
      const std::size_t j = std::min(line.find(' ', i), line.size());
      if (j > i) out.push_back(trim(line.substr(i, j - i)));
      i = j;
    }
  }
  return out;
}

struct FieldParser {
  std::size_t line;

  std::int64_t integer(std::string_view text, std::string_view name) const {
    const auto v = to_int(text);
    if (!v) throw ParseError(line, std::string(name), "expected an integer, got '" + std::string(trim(text)) + "'");
    return *v;
  }

  void fill(TrialRecord& r, Column c, std::int64_t v) const {
    const std::string name(kNames[c]);
    switch (c) {
      case kIndex:
        if (v < 1) throw ParseError(line, name, "index must be >= 1");
        r.index = static_cast<std::uint64_t>(v);
        break;
      case kHerald:
        if (v != 1 && v != -1) throw ParseError(line, name, "herald must be ±1");
        r.herald = v == 1 ? Herald::psi_plus : Herald::psi_minus;
        break;
      case kA:
      case kB:
        if (v != 0 && v != 1) throw ParseError(line, name, "setting must be 0 or 1");
        (c == kA ? r.a : r.b) = v == 0 ? Choice::unprimed : Choice::primed;
        break;
      case kX:
      case kY:
        if (v != 1 && v != -1) throw ParseError(line, name, "outcome must be ±1");
        (c == kX ? r.x : r.y) = v == 1 ? Outcome::up : Outcome::down;
        break;
      case kTimestamp:
        r.timestamp_ns = v;
        break;
      case kColumns:
        break;
    }
  }
};

bool is_header(const std::vector<std::string_view>& fields) {
  return !fields.empty() && !to_int(fields.front());
}

std::vector<Column> header_columns(const std::vector<std::string_view>& fields,
                                   std::size_t line) {
  std::vector<Column> cols;
  std::array<bool, kColumns> seen{};
  for (std::string_view f : fields) {
    std::string name(f);
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char ch) { return std::tolower(ch); });
    if (name == "timestamp") name = "timestamp_ns";
    const auto it = std::find(kNames.begin(), kNames.end(), name);
    if (it == kNames.end())
      throw ParseError(line, name, "unknown column");
    const auto c = static_cast<Column>(it - kNames.begin());
    if (seen[c]) throw ParseError(line, name, "duplicate column");
    seen[c] = true;
    cols.push_back(c);
  }
  for (std::size_t c = 0; c < kTimestamp; ++c)
    if (!seen[c]) throw ParseError(line, std::string(kNames[c]), "missing column");
  return cols;
}

void parse_delimited_line(std::string_view text, std::size_t line,
                          std::optional<std::vector<Column>>& header,
                          bool first, RunDataset& out) {
  const auto fields = split(text);
  if (first && is_header(fields)) {
    header = header_columns(fields, line);
    return;
  }
  std::vector<Column> positional{kIndex, kHerald, kA, kB, kX, kY, kTimestamp};
  const std::vector<Column>& cols = header ? *header : positional;
  const std::size_t expected = header ? cols.size() : 0;
  if (header ? fields.size() != expected
             : (fields.size() < 6 || fields.size() > 7)) {
    throw ParseError(line, "",
                     "expected " + (header ? std::to_string(expected)
                                           : std::string("6 or 7")) +
                         " fields, got " + std::to_string(fields.size()));
  }
  const FieldParser p{line};
  TrialRecord r;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (cols[i] == kTimestamp && fields[i].empty()) continue;
    p.fill(r, cols[i], p.integer(fields[i], kNames[cols[i]]));
  }
  out.records.push_back(r);
}

void parse_json_line(std::string_view text, std::size_t line, RunDataset& out) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    throw ParseError(line, "", "malformed JSON object");
  }
  if (!j.is_object()) throw ParseError(line, "", "expected a JSON object");
  const FieldParser p{line};
  TrialRecord r;
  for (std::size_t c = 0; c < kColumns; ++c) {
    const std::string name(kNames[c]);
    if (!j.contains(name) || j[name].is_null()) {
      if (c == kTimestamp) continue;
      throw ParseError(line, name, "missing field");
    }
    const auto& v = j[name];
    if (!v.is_number_integer()) throw ParseError(line, name, "expected an integer");
    p.fill(r, static_cast<Column>(c), v.get<std::int64_t>());
  }
  out.records.push_back(r);
}

}  // namespace

EventFormat parse_event_format(std::string_view name) {
  if (name == "auto") return EventFormat::automatic;
  if (name == "csv" || name == "delimited" || name == "tsv" || name == "txt")
    return EventFormat::delimited;
  if (name == "jsonl" || name == "json") return EventFormat::jsonl;
  throw DomainError("unknown event format '" + std::string(name) + "'");
}

std::string_view to_string(EventFormat f) noexcept {
  switch (f) {
    case EventFormat::automatic: return "auto";
    case EventFormat::delimited: return "csv";
    case EventFormat::jsonl: return "jsonl";
  }
  return "unknown";
}

RunDataset parse_events(std::string_view text, EventFormat format) {
  RunDataset out;
  std::optional<std::vector<Column>> header;
  bool first = true;
  std::size_t line = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    const std::string_view raw = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++line;
    if (raw.empty() || raw.front() == '#') continue;
    if (format == EventFormat::automatic)
      format = raw.front() == '{' ? EventFormat::jsonl : EventFormat::delimited;
    if (format == EventFormat::jsonl) {
      parse_json_line(raw, line, out);
    } else {
      parse_delimited_line(raw, line, header, first, out);
    }
    first = false;
  }
  if (out.records.empty()) throw ParseError("event input contains no records");
  return out;
}

RunDataset read_events(const std::filesystem::path& path, EventFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open event file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  RunDataset ds = parse_events(buf.str(), format);
  ds.run_id = path.stem().string();
  return ds;
}

void write_events(std::ostream& out, const RunDataset& dataset,
                  EventFormat format) {
  const bool stamps = std::any_of(dataset.records.begin(), dataset.records.end(),
                                  [](const auto& r) { return r.timestamp_ns.has_value(); });
  if (format == EventFormat::jsonl) {
    for (const auto& r : dataset.records) {
      nlohmann::json j{{"index", r.index}, {"herald", value(r.herald)},
                       {"a", value(r.a)},   {"b", value(r.b)},
                       {"x", value(r.x)},   {"y", value(r.y)}};
      if (r.timestamp_ns) j["timestamp_ns"] = *r.timestamp_ns;
      out << j.dump() << '\n';
    }
    return;
  }
  out << "index,herald,a,b,x,y" << (stamps ? ",timestamp_ns" : "") << '\n';
  for (const auto& r : dataset.records) {
    out << r.index << ',' << value(r.herald) << ',' << value(r.a) << ','
        << value(r.b) << ',' << value(r.x) << ',' << value(r.y);
    if (stamps) {
      out << ',';
      if (r.timestamp_ns) out << *r.timestamp_ns;
    }
    out << '\n';
  }
}

void write_events(const std::filesystem::path& path, const RunDataset& dataset,
                  EventFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  write_events(out, dataset, format);
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace bellcert
