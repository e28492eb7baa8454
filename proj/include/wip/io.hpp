#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wip/core.hpp"

namespace wip {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);
/// Strict full-string parse; nullopt on any trailing garbage.
std::optional<double> parse_double(std::string_view text);

/// Line-oriented foot trace:
///
///   # wip-trace 1
///   # sample_rate: 90
///   # user_height: 1.72
///   # <key>: <value>          (any further metadata)
///   <time> <L|R> <height>
///
/// Blank lines are ignored; '#' lines after the rows begin are comments.
struct TraceFile {
  static constexpr int kFormatVersion = 1;

  int version = kFormatVersion;
  std::optional<double> sample_rate;
  std::optional<double> user_height;
  std::map<std::string, std::string> metadata;
  std::vector<FootSample> samples;
};

void write_trace(std::ostream& out, const TraceFile& trace);

/// Parses and validates a trace. Errors carry the 1-based line number.
TraceFile read_trace(std::istream& in);

struct KeyValue {
  std::string key;
  std::string value;
  std::size_t line = 0;
};

/// `key = value` lines with '#' comments; malformed lines raise ParseError
/// naming the line.
std::vector<KeyValue> read_key_values(std::istream& in);

/// Comma or whitespace separated numbers; nullopt if any token fails.
std::optional<std::vector<double>> parse_number_list(std::string_view text);

}  // namespace wip
