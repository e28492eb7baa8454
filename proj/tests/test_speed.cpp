#include <doctest.h>

#include <cmath>
#include <random>

#include "wip/speed.hpp"

using namespace wip;

TEST_CASE("gud_speed anchors") {
  CHECK(gud_speed(1.57, 1.72) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gud_speed(0.0, 1.72) == 0.0);
  // ((2.0 / 1.57) * (1.80 / 1.72))^2
  const double expected = std::pow(2.0 / 1.57 * (1.80 / 1.72), 2);
  CHECK(gud_speed(2.0, 1.80) == doctest::Approx(expected).epsilon(1e-12));
  CHECK(gud_speed(2.0, 1.80) == doctest::Approx(1.777).epsilon(1e-3 / 1.777));
}

TEST_CASE("gud_speed rejects bad input") {
  CHECK_THROWS_AS(gud_speed(1.0, 0.0), Error);
  try {
    gud_speed(1.0, -1.0);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonPositiveHeight);
  }
}

TEST_CASE("shef_speed scales with step height") {
  for (double f : {0.5, 1.57, 2.2}) {
    CHECK(shef_speed(f, 1.72, 0.1) == gud_speed(f, 1.72));
    CHECK(shef_speed(f, 1.72, 0.2) == 2.0 * gud_speed(f, 1.72));
    CHECK(shef_speed(f, 1.72, 0.0) == 0.0);
  }
}

TEST_CASE("apply_gain") {
  CHECK(apply_gain(1.0, 1.0, 1.0) == 1.0);
  CHECK(apply_gain(2.0, 0.71, 1.0) == doctest::Approx(1.42).epsilon(1e-12));
  CHECK(apply_gain(1.0, 1.0, 2.02) == doctest::Approx(2.02).epsilon(1e-12));
  CHECK_THROWS_AS(apply_gain(1.0, 0.0, 1.0), Error);
  CHECK_THROWS_AS(apply_gain(1.0, 1.0, -2.0), Error);
}

TEST_CASE("output_speed dispatch") {
  WipParams shef(Variant::Shef);
  GaitEstimate e{1.57, 0.1, 1.0, false};
  CHECK(output_speed(shef, e).output_speed == doctest::Approx(1.0).epsilon(1e-12));

  e.stale = true;
  CHECK(output_speed(shef, e).output_speed == 0.0);
  CHECK(output_speed(shef, e).raw_speed == 0.0);

  e = {1.57, 0.15, 1.0, false};
  shef.set_speed_gain(0.71);
  CHECK(output_speed(shef, e).output_speed == doctest::Approx(1.0 * 1.5 * 0.71).epsilon(1e-12));

  // Gud ignores step height.
  const WipParams gud(Variant::Gud);
  CHECK(output_speed(gud, e).raw_speed == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("speed law properties on random inputs") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> f(0.01, 3.5), h(1.0, 2.5), sh(0.0, 0.4), k(0.1, 3.0);
  for (int i = 0; i < 500; ++i) {
    const double fi = f(rng), hi = h(rng), si = sh(rng), ki = k(rng);
    const double base = gud_speed(fi, hi);
    CHECK(shef_speed(fi, hi, 0.1) == doctest::Approx(base).epsilon(1e-12));
    CHECK(gud_speed(fi * 1.01, hi) > base);
    CHECK(gud_speed(fi, hi * 1.01) > base);
    CHECK(shef_speed(fi, hi, si + 0.01) > shef_speed(fi, hi, si));
    CHECK(gud_speed(ki * fi, hi) == doctest::Approx(ki * ki * base).epsilon(1e-12));
    const double out = apply_gain(shef_speed(fi, hi, si), ki, 2.02);
    CHECK(std::isfinite(out));
    CHECK(out >= 0.0);
  }
}

TEST_CASE("gud_frequency_for inverts the cadence law") {
  for (double v : {0.25, 1.0, 2.5}) {
    CHECK(gud_speed(gud_frequency_for(v, 1.72), 1.72) == doctest::Approx(v).epsilon(1e-12));
  }
  CHECK(gud_frequency_for(1.0, 1.72) == doctest::Approx(1.57).epsilon(1e-12));
}

TEST_CASE("batch kernel matches scalar evaluation") {
  const std::vector<double> f{0.0, 1.57, 2.0}, h{1.72, 1.72, 1.8}, sh{0.1, 0.2, 0.15};
  std::vector<double> out(3), serial(3);
  shef_speed_batch(f, h, sh, out);
  shef_speed_batch_serial(f, h, sh, serial);
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(out[i] == shef_speed(f[i], h[i], sh[i]));
    CHECK(serial[i] == out[i]);
  }
}
