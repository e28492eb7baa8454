#include <doctest.h>

#include <cmath>
#include <sstream>

#include "wip/io.hpp"
#include "wip/synth.hpp"

using namespace wip;

namespace {

ErrorCode read_error(const std::string& text, std::string* message = nullptr) {
  std::istringstream in(text);
  try {
    read_trace(in);
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  FAIL("expected wip::Error");
  return ErrorCode::ParseError;
}

}  // namespace

TEST_CASE("format_double round-trips") {
  for (double v : {0.0, 1.0 / 3.0, 0.011111111111111112, 1e-300, 12345.678, -0.005}) {
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK(format_double(2.0) == "2");
}

TEST_CASE("parse_double is strict") {
  CHECK(parse_double(" 1.5 ") == 1.5);
  CHECK(parse_double("+2") == 2.0);
  CHECK_FALSE(parse_double(""));
  CHECK_FALSE(parse_double("1.5x"));
  CHECK_FALSE(parse_double("abc"));
}

TEST_CASE("trace round-trip is lossless") {
  GaitProgram p;
  p.step_frequency = 1.9;
  p.apex_height = 0.17;
  p.noise_sd = 0.003;
  p.seed = 12;
  TraceFile trace;
  trace.sample_rate = 90.0;
  trace.user_height = 1.65;
  trace.metadata["variant"] = "shef";
  trace.samples = synth_trace(p, 3.0, 90.0);

  std::stringstream text;
  write_trace(text, trace);
  const TraceFile back = read_trace(text);
  CHECK(back.version == 1);
  CHECK(back.sample_rate == 90.0);
  CHECK(back.user_height == 1.65);
  CHECK(back.metadata.at("variant") == "shef");
  REQUIRE(back.samples.size() == trace.samples.size());
  for (std::size_t i = 0; i < trace.samples.size(); ++i) {
    CHECK(back.samples[i].time == trace.samples[i].time);
    CHECK(back.samples[i].foot == trace.samples[i].foot);
    CHECK(back.samples[i].height == trace.samples[i].height);
  }
}

TEST_CASE("trace reader diagnostics name the line") {
  std::string message;
  CHECK(read_error("0 L 0\n") == ErrorCode::ParseError);
  CHECK(read_error("") == ErrorCode::ParseError);
  CHECK(read_error("# wip-trace 2\n") == ErrorCode::ParseError);
  CHECK(read_error("# wip-trace 1\n0 L 0\n0.1 X 0\n", &message) == ErrorCode::ParseError);
  CHECK(message.find("line 3") != std::string::npos);
  CHECK(read_error("# wip-trace 1\n0 L 0\n0.1 L abc\n") == ErrorCode::ParseError);
  CHECK(read_error("# wip-trace 1\n0 L 0 7\n") == ErrorCode::ParseError);
  CHECK(read_error("# wip-trace 1\n0 L 0\n0 L 0\n", &message) == ErrorCode::NonMonotonicTime);
  CHECK(message.find("line 3") != std::string::npos);
  CHECK(read_error("# wip-trace 1\n0.2 L 0\n0.1 R 0\n") == ErrorCode::NonMonotonicTime);
  CHECK(read_error("# wip-trace 1\n\n0 L 3.5\n", &message) == ErrorCode::OutOfRangeHeight);
  CHECK(message.find("line 3") != std::string::npos);
  CHECK(read_error("# wip-trace 1\n# sample_rate: fast\n") == ErrorCode::ParseError);
}

TEST_CASE("empty trace body is allowed") {
  std::istringstream in("# wip-trace 1\n# note without a colon\n");
  CHECK(read_trace(in).samples.empty());
}

TEST_CASE("key value files") {
  std::istringstream in("# comment\nexperiment = chase  # trailing\n\n targets = 1, 2.5 \n");
  const auto kv = read_key_values(in);
  REQUIRE(kv.size() == 2);
  CHECK(kv[0].key == "experiment");
  CHECK(kv[0].value == "chase");
  CHECK(kv[1].line == 4);
  CHECK(kv[1].value == "1, 2.5");

  std::istringstream bad("a = 1\njust words\n");
  try {
    read_key_values(bad);
    FAIL("expected ParseError");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("number lists") {
  CHECK(parse_number_list("1, 2 3") == std::vector<double>{1.0, 2.0, 3.0});
  CHECK_FALSE(parse_number_list(""));
  CHECK_FALSE(parse_number_list("1, x"));
}
