#include <doctest.h>

#include <cmath>

#include "wip/speed.hpp"
#include "wip/synth.hpp"

using namespace wip;

namespace {

// Count rising edges (grounded sample followed by an airborne one) per foot.
int rising_edges(const std::vector<FootSample>& trace, Foot foot) {
  int edges = 0;
  double previous = 0.0;
  for (const FootSample& s : trace) {
    if (s.foot != foot) continue;
    if (previous <= 0.0 && s.height > 0.0) ++edges;
    previous = s.height;
  }
  return edges;
}

}  // namespace

TEST_CASE("synth trace swing count at 2 Hz") {
  GaitProgram p;
  p.step_frequency = 2.0;
  p.apex_height = 0.15;
  const auto trace = synth_trace(p, 5.0, 90.0);
  CHECK(trace.size() == 2 * 450);
  // Footfall every 0.5 s over 5 s: ten swings between the two feet.
  CHECK(rising_edges(trace, Foot::Left) + rising_edges(trace, Foot::Right) == 10);
}

TEST_CASE("synth trace shape") {
  GaitProgram p;
  p.step_frequency = 1.0;
  p.apex_height = 0.2;
  // Left foot cycle is 2 s; stance 0.8 s then a 1.2 s half sine.
  CHECK(program_height(p, Foot::Left, 0.5) == 0.0);
  CHECK(program_height(p, Foot::Left, 1.4) == doctest::Approx(0.2));
  CHECK(program_height(p, Foot::Right, 0.5) == 0.0);  // before its first cycle
  CHECK(program_height(p, Foot::Right, 2.4) == doctest::Approx(0.2));
  for (const FootSample& s : synth_trace(p, 6.0, 90.0)) {
    CHECK(s.height >= 0.0);
    CHECK(s.height <= 0.2 + 1e-12);
  }
}

TEST_CASE("synth trace edge cases") {
  GaitProgram idle;
  for (const FootSample& s : synth_trace(idle, 2.0, 60.0)) CHECK(s.height == 0.0);
  CHECK_THROWS_AS(synth_trace(idle, 1.0, 29.0), Error);

  GaitProgram noisy;
  noisy.step_frequency = 1.8;
  noisy.apex_height = 0.1;
  noisy.noise_sd = 0.01;
  noisy.seed = 5;
  const auto a = synth_trace(noisy, 3.0, 90.0);
  const auto b = synth_trace(noisy, 3.0, 90.0);
  REQUIRE(a.size() == b.size());
  bool identical = true;
  for (std::size_t i = 0; i < a.size(); ++i) identical = identical && a[i].height == b[i].height;
  CHECK(identical);
  for (const FootSample& s : a) CHECK(s.height >= 0.0);
}

TEST_CASE("plan_gait for the cadence-only variant") {
  const AgentCaps caps;
  const auto anchor = plan_gait(1.0, WipParams(Variant::Gud), caps);
  CHECK(anchor.step_frequency == doctest::Approx(1.57).epsilon(1e-12));
  CHECK(anchor.apex_height == 0.1);

  const auto capped = plan_gait(4.5, WipParams(Variant::Gud), caps);
  CHECK(capped.step_frequency == 2.2);
  CHECK(gud_speed(capped.step_frequency, 1.72) == doctest::Approx(1.963).epsilon(1e-3));
}

TEST_CASE("plan_gait for the step-height variant") {
  AgentCaps wide;
  wide.comfort_high = 2.2;
  const auto p = plan_gait(2.0, WipParams(Variant::Shef), wide);
  CHECK(p.step_frequency >= wide.comfort_low);
  CHECK(p.step_frequency <= wide.comfort_high);
  CHECK(shef_speed(p.step_frequency, 1.72, p.apex_height) == doctest::Approx(2.0).epsilon(1e-6));

  // Default band gives roughly a 15 cm step at 1.5 m/s.
  const auto walk = plan_gait(1.5, WipParams(Variant::Shef), AgentCaps{});
  CHECK(walk.apex_height == doctest::Approx(0.15).epsilon(0.05));

  CHECK(plan_gait(0.0, WipParams(Variant::Shef), AgentCaps{}).step_frequency == 0.0);
}

TEST_CASE("plan_gait forward and inverse agree when feasible") {
  const AgentCaps caps;
  for (Variant variant : {Variant::Gud, Variant::Shef}) {
    for (double h : {1.5, 1.72, 1.9}) {
      const WipParams params(variant, h);
      for (double v = 0.1; v <= 6.0; v += 0.1) {
        const auto p = plan_gait(v, params, caps);
        const bool clamped = p.step_frequency >= caps.max_frequency - 1e-12;
        if (clamped) continue;
        const double achieved = variant == Variant::Gud
                                    ? gud_speed(p.step_frequency, h)
                                    : shef_speed(p.step_frequency, h, p.apex_height);
        CHECK(achieved == doctest::Approx(v).epsilon(1e-6));
        CHECK(p.apex_height <= caps.max_step_height + 1e-12);
      }
    }
  }
}

TEST_CASE("ceiling ordering of the two strategies") {
  const AgentCaps caps;
  const auto gud = plan_gait(100.0, WipParams(Variant::Gud), caps);
  const auto shef = plan_gait(100.0, WipParams(Variant::Shef), caps);
  const double gud_max = gud_speed(gud.step_frequency, 1.72);
  const double shef_max = shef_speed(shef.step_frequency, 1.72, shef.apex_height);
  CHECK(shef_max >= 1.8 * gud_max);
}

TEST_CASE("chase_policy") {
  CHECK(chase_policy(0.0, 1.5) == 1.5);
  CHECK(chase_policy(2.0, 1.5) == 2.5);
  CHECK(chase_policy(-4.0, 1.5) == 0.0);
}

TEST_CASE("walker output is deterministic and non-negative") {
  AgentConfig config;
  config.noise_sd = 0.005;
  config.cadence_jitter = 0.05;
  config.seed = 3;
  SyntheticWalker a(config, WipParams(), ElasticRig::none());
  SyntheticWalker b(config, WipParams(), ElasticRig::none());
  a.command(1.5);
  b.command(1.5);
  for (int k = 0; k < 900; ++k) {
    const auto ha = a.step(1.0 / 90.0);
    const auto hb = b.step(1.0 / 90.0);
    CHECK(ha[0] == hb[0]);
    CHECK(ha[1] == hb[1]);
    CHECK(ha[0] >= 0.0);
    CHECK(ha[1] >= 0.0);
  }
}

TEST_CASE("elastic coupling lowers the apex under a downward pull") {
  AgentConfig config;
  auto peak = [&](const ElasticRig& rig) {
    SyntheticWalker walker(config, WipParams(), rig);
    walker.command(1.5);
    double best = 0.0;
    for (int k = 0; k < 900; ++k) best = std::max(best, walker.step(1.0 / 90.0)[0]);
    return best;
  };
  const double free = peak(ElasticRig::none());
  CHECK(peak(ElasticRig(BandDirection::Downward, 8)) < free);
  CHECK(peak(ElasticRig(BandDirection::Upward, 6)) > free);
}

TEST_CASE("caps validation") {
  AgentCaps bad;
  bad.comfort_high = 3.0;
  CHECK_THROWS_AS(validate(bad), Error);
}
