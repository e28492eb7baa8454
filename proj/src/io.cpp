#include "wip/io.hpp"

#include <array>
#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

namespace wip {

namespace {

std::string_view trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return text.substr(first, last - first + 1);
}

[[noreturn]] void fail_at(std::size_t line, const std::string& what,
                          ErrorCode code = ErrorCode::ParseError) {
  throw Error(code, "line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::string format_double(double value) {
  std::array<char, 64> buffer{};
  const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return {buffer.data(), result.ptr};
}

std::optional<double> parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

void write_trace(std::ostream& out, const TraceFile& trace) {
  out << "# wip-trace " << trace.version << '\n';
  if (trace.sample_rate) out << "# sample_rate: " << format_double(*trace.sample_rate) << '\n';
  if (trace.user_height) out << "# user_height: " << format_double(*trace.user_height) << '\n';
  for (const auto& [key, value] : trace.metadata) out << "# " << key << ": " << value << '\n';
  for (const FootSample& s : trace.samples) {
    out << format_double(s.time) << ' ' << to_char(s.foot) << ' ' << format_double(s.height)
        << '\n';
  }
}

TraceFile read_trace(std::istream& in) {
  TraceFile trace;
  std::array<std::optional<double>, kFootCount> previous{};
  double last_time = 0.0;
  bool seen_magic = false;
  bool in_rows = false;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view text = trim(raw);
    if (text.empty()) continue;
    if (text.front() == '#') {
      if (in_rows) continue;
      const std::string_view body = trim(text.substr(1));
      if (!seen_magic) {
        if (body.rfind("wip-trace", 0) != 0) fail_at(line, "missing '# wip-trace <version>' header");
        const auto version = parse_double(body.substr(9));
        if (!version || *version != TraceFile::kFormatVersion) {
          fail_at(line, "unsupported trace format version");
        }
        seen_magic = true;
        continue;
      }
      const auto colon = body.find(':');
      if (colon == std::string_view::npos) continue;  // free-form comment
      const std::string key(trim(body.substr(0, colon)));
      const std::string value(trim(body.substr(colon + 1)));
      if (key == "sample_rate" || key == "user_height") {
        const auto number = parse_double(value);
        if (!number) fail_at(line, "header field '" + key + "' is not a number");
        (key == "sample_rate" ? trace.sample_rate : trace.user_height) = number;
      } else {
        trace.metadata[key] = value;
      }
      continue;
    }
    if (!seen_magic) fail_at(line, "missing '# wip-trace <version>' header");
    in_rows = true;

    std::istringstream fields{std::string(text)};
    std::string time_text, foot_text, height_text, extra;
    if (!(fields >> time_text >> foot_text >> height_text) || (fields >> extra)) {
      fail_at(line, "expected '<time> <L|R> <height>'");
    }
    const auto time = parse_double(time_text);
    const auto height = parse_double(height_text);
    if (!time) fail_at(line, "invalid time '" + time_text + "'");
    if (!height) fail_at(line, "invalid height '" + height_text + "'");
    if (foot_text != "L" && foot_text != "R") fail_at(line, "foot must be L or R");
    const FootSample sample{*time, foot_text == "L" ? Foot::Left : Foot::Right, *height};

    if (!trace.samples.empty() && sample.time < last_time) {
      fail_at(line, "rows are not sorted by time", ErrorCode::NonMonotonicTime);
    }
    try {
      validate_sample(sample, previous[index(sample.foot)]);
    } catch (const Error& e) {
      fail_at(line, e.what(), e.code());
    }
    previous[index(sample.foot)] = sample.time;
    last_time = sample.time;
    trace.samples.push_back(sample);
  }
  if (!seen_magic) throw Error(ErrorCode::ParseError, "empty input: missing trace header");
  return trace;
}

std::vector<KeyValue> read_key_values(std::istream& in) {
  std::vector<KeyValue> out;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view text = raw;
    if (const auto hash = text.find('#'); hash != std::string_view::npos) {
      text = text.substr(0, hash);
    }
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) fail_at(line, "expected 'key = value'");
    const std::string_view key = trim(text.substr(0, eq));
    const std::string_view value = trim(text.substr(eq + 1));
    if (key.empty()) fail_at(line, "missing key before '='");
    if (value.empty()) fail_at(line, "missing value for '" + std::string(key) + "'");
    out.push_back({std::string(key), std::string(value), line});
  }
  return out;
}

std::optional<std::vector<double>> parse_number_list(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto next = text.find_first_of(", \t", pos);
    const std::string_view token =
        text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos);
    if (!trim(token).empty()) {
      const auto value = parse_double(token);
      if (!value) return std::nullopt;
      out.push_back(*value);
    }
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  if (out.empty()) return std::nullopt;
  return out;
}

}  // namespace wip
