#pragma once

// Reading and writing event files.
//
// Delimited text: one record per line, `index, herald, a, b, x, y[,
// timestamp_ns]`, separated by commas, semicolons, tabs or whitespace. An
// optional header line names the columns (any order). Lines starting with
// '#' and blank lines are ignored.
//
// JSON lines: one object per line with the same keys.

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "bellcert/events.hpp"

namespace bellcert {

enum class EventFormat { automatic, delimited, jsonl };

/// "auto", "csv" / "delimited", "jsonl"; anything else is a DomainError.
EventFormat parse_event_format(std::string_view name);
std::string_view to_string(EventFormat f) noexcept;

/// Throws ParseError naming the line and field of the first bad record, and
/// on input without records.
RunDataset parse_events(std::string_view text,
                        EventFormat format = EventFormat::automatic);
/// Throws IoError when the file cannot be read.
RunDataset read_events(const std::filesystem::path& path,
                       EventFormat format = EventFormat::automatic);

/// Delimited output is comma-separated with a header line.
void write_events(std::ostream& out, const RunDataset& dataset,
                  EventFormat format = EventFormat::delimited);
void write_events(const std::filesystem::path& path, const RunDataset& dataset,
                  EventFormat format = EventFormat::delimited);

}  // namespace bellcert
