#include <doctest.h>

#include <cmath>

#include "wip/harness.hpp"

using namespace wip;

namespace {

ChaseScenario at(double target) {
  ChaseScenario s;
  s.target_speed = target;
  return s;
}

Frame chase_frame(double time, double speed) {
  Frame f;
  f.time = time;
  f.stage = Stage::Chase;
  f.output_speed = speed;
  return f;
}

}  // namespace

TEST_CASE("perfect agent tracks the sphere exactly") {
  AgentConfig agent;
  agent.kind = AgentKind::Perfect;
  const auto run = run_chase(at(1.5), agent, WipParams(), ElasticRig::none());
  CHECK(run.metrics.avg_target_distance < 1e-6);
  CHECK(run.metrics.speed_sd < 1e-6);
  CHECK(run.metrics.avg_speed == doctest::Approx(1.5).epsilon(1e-9));
}

TEST_CASE("walker reaches the requested speed") {
  const auto shef = run_chase(at(1.5), AgentConfig{}, WipParams(Variant::Shef), ElasticRig::none());
  CHECK(shef.metrics.avg_speed == doctest::Approx(1.5).epsilon(0.10));
  CHECK(shef.metrics.avg_step_height > 0.1);

  const auto gud = run_chase(at(4.5), AgentConfig{}, WipParams(Variant::Gud), ElasticRig::none());
  CHECK(gud.metrics.avg_speed <= 2.1);
}

TEST_CASE("stages run in order and the chase lasts its duration") {
  const ChaseScenario s = at(1.0);
  const auto run = run_chase(s, AgentConfig{}, WipParams(), ElasticRig::none());
  Stage last = Stage::Prep;
  std::size_t chase_frames = 0;
  for (const Frame& f : run.log.frames) {
    CHECK(static_cast<int>(f.stage) >= static_cast<int>(last));
    last = f.stage;
    if (f.stage == Stage::Chase) ++chase_frames;
    CHECK(f.circle_center == doctest::Approx(f.participant + s.circle_lead));
  }
  CHECK(chase_frames == static_cast<std::size_t>(std::llround(s.chase_duration / s.timestep)));
}

TEST_CASE("sphere moves at the target speed during the chase") {
  const ChaseScenario s = at(2.0);
  const auto run = run_chase(s, AgentConfig{}, WipParams(), ElasticRig::none());
  const Frame* previous = nullptr;
  for (const Frame& f : run.log.frames) {
    if (f.stage == Stage::Chase && previous && previous->stage == Stage::Chase) {
      CHECK(f.sphere - previous->sphere == doctest::Approx(2.0 * s.timestep).epsilon(1e-9));
    }
    previous = &f;
  }
}

TEST_CASE("runs are deterministic") {
  AgentConfig agent;
  agent.noise_sd = 0.004;
  agent.cadence_jitter = 0.08;
  agent.seed = 42;
  const auto a = run_chase(at(2.5), agent, WipParams(Variant::Gud), ElasticRig::parse("up:6"));
  const auto b = run_chase(at(2.5), agent, WipParams(Variant::Gud), ElasticRig::parse("up:6"));
  CHECK(a.metrics == b.metrics);
  agent.seed = 43;
  const auto c = run_chase(at(2.5), agent, WipParams(Variant::Gud), ElasticRig::parse("up:6"));
  CHECK_FALSE(a.metrics == c.metrics);
}

TEST_CASE("compute_metrics statistics") {
  FrameLog log;
  log.frames = {chase_frame(0.0, 1.0), chase_frame(0.1, 2.0), chase_frame(0.2, 3.0)};
  const auto m = compute_metrics(log);
  CHECK(m.avg_speed == doctest::Approx(2.0));
  CHECK(m.speed_sd == doctest::Approx(std::sqrt(2.0 / 3.0)));

  FrameLog flat;
  for (int k = 0; k < 10; ++k) flat.frames.push_back(chase_frame(k * 0.1, 1.25));
  CHECK(compute_metrics(flat).speed_sd == 0.0);
}

TEST_CASE("compute_metrics ignores everything outside the window") {
  FrameLog log;
  for (int k = 0; k < 10; ++k) {
    Frame prep = chase_frame(k * 0.1, 50.0 + k);
    prep.stage = k < 5 ? Stage::Prep : Stage::Countdown;
    prep.sphere = 100.0;
    log.frames.push_back(prep);
  }
  for (int k = 10; k < 20; ++k) log.frames.push_back(chase_frame(k * 0.1, 1.0));
  log.steps = {{Foot::Left, 0.1, 0.2, 0.3, 0.9},     // before the window
               {Foot::Left, 1.0, 1.1, 1.2, 0.2},
               {Foot::Right, 1.2, 1.3, 1.5, 0.2},
               {Foot::Left, 1.6, 1.7, 1.8, 0.2}};
  const auto m = compute_metrics(log);
  CHECK(m.avg_speed == 1.0);
  CHECK(m.avg_target_distance == 0.0);
  CHECK(m.avg_step_height == doctest::Approx(0.2));
  CHECK(m.avg_step_frequency == doctest::Approx(2.0 / 0.6));
}

TEST_CASE("compute_metrics on an empty window") {
  FrameLog log;
  Frame f;
  f.stage = Stage::Prep;
  log.frames.push_back(f);
  try {
    compute_metrics(log);
    FAIL("expected EmptyWindow");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyWindow);
  }
}

TEST_CASE("synthetic steps of known apex give that average height") {
  AgentConfig agent;
  const auto run = run_chase(at(1.0), agent, WipParams(Variant::Gud), ElasticRig::none());
  CHECK(run.metrics.avg_step_height == doctest::Approx(0.1).epsilon(0.1));
}

TEST_CASE("replay of a recorded trace reproduces the run") {
  AgentConfig agent;
  agent.noise_sd = 0.002;
  agent.seed = 8;
  const auto original = run_chase(at(1.5), agent, WipParams(), ElasticRig::none());
  const auto replayed = replay_chase(at(1.5), WipParams(), original.trace);
  CHECK(replayed.metrics == original.metrics);

  auto shifted = original.trace;
  shifted[4].time += 1e-6;
  CHECK_THROWS_AS(replay_chase(at(1.5), WipParams(), shifted), Error);
}

TEST_CASE("free replay uses every frame") {
  const auto run = run_chase(at(1.5), AgentConfig{}, WipParams(), ElasticRig::none());
  const auto free = replay_free(WipParams(), run.trace);
  CHECK(free.log.frames.size() == run.trace.size() / 2);
  for (const Frame& f : free.log.frames) CHECK(f.stage == Stage::Free);
  CHECK(free.metrics.avg_speed > 0.0);
  CHECK_THROWS_AS(replay_free(WipParams(), {}), Error);
}

TEST_CASE("scenario validation") {
  ChaseScenario s;
  s.timestep = 0.0;
  CHECK_THROWS_AS(validate(s), Error);
  s = ChaseScenario{};
  s.target_speed = -1.0;
  CHECK_THROWS_AS(validate(s), Error);
  CHECK_NOTHROW(validate(at(0.0)));
}

TEST_CASE("staircase examples") {
  const WipParams params(Variant::Shef, 1.72, 1.0, WipParams::kNaturalVisualGain);
  auto up = AdjustmentProtocol::standard(Slope::Uphill, Series::Ascending,
                                         [](double g) { return g >= 0.71; });
  CHECK(up.interval == 0.07);
  CHECK(up.initial_gain == 0.3);
  const auto r = run_adjustment(up, params, ElasticRig::none());
  CHECK(r.gain == doctest::Approx(0.72).epsilon(1e-12));
  CHECK(r.bouts.size() == 7);

  auto down = AdjustmentProtocol::standard(Slope::Downhill, Series::Descending,
                                           threshold_judge(Series::Descending, 1.43));
  CHECK(down.initial_gain == 2.5);
  const auto rd = run_adjustment(down, params, ElasticRig::none());
  CHECK(rd.gain == doctest::Approx(1.30).epsilon(1e-12));
  CHECK(r.bouts.front().elevation_change > 0.0);
  CHECK(rd.bouts.front().elevation_change < 0.0);

  auto always = AdjustmentProtocol::standard(Slope::Downhill, Series::Ascending,
                                             [](double) { return true; });
  CHECK(run_adjustment(always, params, ElasticRig::none()).gain == 1.0);
}

TEST_CASE("staircase gains stay on the grid") {
  const WipParams params(Variant::Gud);
  for (Slope slope : {Slope::Uphill, Slope::Downhill}) {
    for (Series series : {Series::Ascending, Series::Descending}) {
      const double ref = reference_gain(slope).mean;
      auto p = AdjustmentProtocol::standard(slope, series, band_judge(ref, 0.07));
      p.bout_duration = 1.0;
      const auto r = run_adjustment(p, params, ElasticRig::none());
      const double k = (r.gain - p.initial_gain) / p.interval;
      CHECK(std::abs(k - std::round(k)) < 1e-9);
      CHECK(std::abs(r.gain - ref) <= 0.07 + 1e-12);
    }
  }
}

TEST_CASE("staircase gives up") {
  auto never = AdjustmentProtocol::standard(Slope::Uphill, Series::Ascending,
                                            [](double) { return false; });
  never.max_bouts = 5;
  never.bout_duration = 0.5;
  try {
    run_adjustment(never, WipParams(), ElasticRig::none());
    FAIL("expected NonTermination");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonTermination);
  }
}

TEST_CASE("aggregate_adjustments") {
  const std::vector<double> four{0.72, 0.72, 0.65, 0.79};
  CHECK(aggregate_adjustments(four) == doctest::Approx(0.72));
  const std::vector<double> same(4, 1.3);
  CHECK(aggregate_adjustments(same) == doctest::Approx(1.3));
  const std::vector<double> three{1.0, 1.0, 1.0};
  try {
    aggregate_adjustments(three);
    FAIL("expected WrongArity");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WrongArity);
  }
}

TEST_CASE("slope profile gates the gain on the lead-in") {
  const SlopeProfile up = SlopeProfile::preset(Slope::Uphill);
  CHECK(up.gain_on_slope == 0.71);
  CHECK(SlopeProfile::preset(Slope::Downhill).gain_on_slope == 1.43);
  CHECK(up.gain_at(0.0) == 1.0);
  CHECK(up.gain_at(9.99) == 1.0);
  CHECK(up.gain_at(10.0) == 0.71);
  CHECK(up.gradient_deg == 5.71);
  CHECK(up.slope_length == 75.0);
}

TEST_CASE("bout speed scales with gain and natural gain") {
  AgentConfig agent;
  const WipParams plain(Variant::Shef);
  const WipParams natural(Variant::Shef, 1.72, 1.0, WipParams::kNaturalVisualGain);
  SlopeProfile profile;
  profile.gain_on_slope = 0.5;
  const auto slow = run_bout(profile, 5.0, agent, natural, ElasticRig::none());
  profile.gain_on_slope = 1.0;
  const auto full = run_bout(profile, 5.0, agent, natural, ElasticRig::none());
  const auto base = run_bout(profile, 5.0, agent, plain, ElasticRig::none());
  CHECK(slow.avg_slope_speed == doctest::Approx(0.5 * full.avg_slope_speed).epsilon(0.02));
  CHECK(full.avg_slope_speed == doctest::Approx(2.02 * base.avg_slope_speed).epsilon(0.02));
  CHECK(full.elevation_change > 0.0);
  CHECK(full.distance > profile.flat_leadin);
}

TEST_CASE("reference gains") {
  CHECK(reference_gain(Slope::Uphill).mean == 0.71);
  CHECK(reference_gain(Slope::Downhill).sd == 0.25);
  CHECK(reference_gain(Slope::Uphill, BandDirection::Downward).mean == 0.75);
  CHECK(reference_gain(Slope::Downhill, BandDirection::Upward).mean == 1.49);
}
