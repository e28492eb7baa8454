#include "wip/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "wip/elastic.hpp"
#include "wip/harness.hpp"
#include "wip/io.hpp"
#include "wip/speed.hpp"
#include "wip/synth.hpp"

namespace wip {

namespace oracle {

std::vector<OfflineStep> offline_steps(std::span<const FootSample> trace, Foot foot,
                                       double ground_epsilon, double min_step_height) {
  std::vector<OfflineStep> steps;
  bool airborne = false;
  double apex = 0.0;
  for (const FootSample& s : trace) {
    if (s.foot != foot) continue;
    if (s.height > ground_epsilon) {
      apex = airborne ? std::max(apex, s.height) : s.height;
      airborne = true;
    } else if (airborne) {
      if (apex >= min_step_height) steps.push_back({apex, s.time});
      airborne = false;
    }
  }
  return steps;
}

int band_count_direct(double target_kgf, double extension_cm) {
  const double per_band = 0.011 * extension_cm + 0.085;
  int n = 1;
  while (n * per_band < target_kgf) ++n;
  return n;
}

}  // namespace oracle

namespace {

std::string fmt(double value, int digits = 4) {
  std::ostringstream out;
  out.precision(digits);
  out << std::fixed << value;
  return out.str();
}

CriterionResult cadence_anchor(const AcceptanceOptions& options) {
  const double value = gud_speed(1.57, 1.72) + options.anchor_perturbation;
  const double error = std::abs(value - 1.0);
  return {"CADENCE-ANCHOR", error <= 1e-9,
          "gud_speed(1.57, 1.72) = " + format_double(value) + " (|err| " +
              format_double(error) + ", tolerance 1e-9)"};
}

CriterionResult height_identity(const AcceptanceOptions& options) {
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> freq(0.0, 3.5);
  std::uniform_real_distribution<double> height(1.0, 2.5);
  constexpr std::size_t n = 1000;
  std::vector<double> f(n), h(n), ref_sh(n, 0.1), double_sh(n, 0.2);
  for (std::size_t i = 0; i < n; ++i) {
    f[i] = freq(rng);
    h[i] = height(rng);
  }
  std::vector<double> at_ref(n), at_double(n), at_ref_serial(n);
  shef_speed_batch(f, h, ref_sh, at_ref);
  shef_speed_batch(f, h, double_sh, at_double);
  shef_speed_batch_serial(f, h, ref_sh, at_ref_serial);

  double worst_identity = 0.0;
  double worst_double = 0.0;
  bool kernels_agree = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double gud = gud_speed(f[i], h[i]);
    worst_identity = std::max(worst_identity, std::abs(shef_speed(f[i], h[i], 0.1) - gud));
    worst_identity = std::max(worst_identity, std::abs(at_ref[i] - gud));
    worst_double = std::max(worst_double, std::abs(at_double[i] - 2.0 * gud));
    kernels_agree = kernels_agree && at_ref[i] == at_ref_serial[i];
  }
  const bool ok = worst_identity <= 1e-12 && worst_double == 0.0 && kernels_agree;
  return {"HEIGHT-IDENTITY", ok,
          "max |shef(sh=0.1) - gud| = " + format_double(worst_identity) +
              ", max |shef(sh=0.2) - 2 gud| = " + format_double(worst_double) +
              (kernels_agree ? ", parallel == serial" : ", parallel != serial")};
}

CriterionResult round_trip(const AcceptanceOptions&) {
  bool ok = true;
  std::string detail;
  for (double v : {0.5, 1.0, 1.5, 2.5, 3.0}) {
    ChaseScenario scenario;
    scenario.target_speed = v;
    const auto m = run_chase(scenario, AgentConfig{}, WipParams(Variant::Shef),
                             ElasticRig::none())
                       .metrics;
    const double rel = std::abs(m.avg_speed - v) / v;
    ok = ok && rel <= 0.10;
    detail += "v=" + fmt(v, 1) + "->" + fmt(m.avg_speed, 3) + " ";
  }
  return {"ROUND-TRIP", ok, detail + "(each within 10%)"};
}

CriterionResult ceiling(const AcceptanceOptions&) {
  AgentConfig agent;
  agent.caps.max_frequency = 2.2;
  agent.caps.max_step_height = 0.3;
  auto achieved = [&](Variant variant, double target) {
    ChaseScenario scenario;
    scenario.target_speed = target;
    return run_chase(scenario, agent, WipParams(variant, 1.72), ElasticRig::none())
        .metrics.avg_speed;
  };
  const double gud = achieved(Variant::Gud, 3.5);
  const double shef = achieved(Variant::Shef, 3.5);
  // Ceilings: ask for more than either walker can produce.
  const double gud_max = achieved(Variant::Gud, 8.0);
  const double shef_max = achieved(Variant::Shef, 8.0);
  const double ratio = shef_max / gud_max;
  const bool ok = gud <= 2.1 && shef >= 3.0 && ratio >= 1.8;
  return {"CEILING", ok,
          "at 3.5 m/s: gud " + fmt(gud, 3) + " (<= 2.1), shef " + fmt(shef, 3) +
              " (>= 3.0); ceilings shef " + fmt(shef_max, 3) + " / gud " + fmt(gud_max, 3) +
              " = " + fmt(ratio, 2) + " (>= 1.8); achieved ratio at 3.5 = " +
              fmt(shef / gud, 3)};
}

CriterionResult stability(const AcceptanceOptions& options) {
  std::vector<ChaseJob> jobs;
  for (int run = 0; run < options.stability_runs; ++run) {
    for (Variant variant : {Variant::Gud, Variant::Shef}) {
      ChaseJob job{ChaseScenario{}, AgentConfig{}, WipParams(variant), ElasticRig::none()};
      job.scenario.target_speed = 2.5;
      job.agent.noise_sd = 0.003;
      job.agent.cadence_jitter = 0.06;
      job.agent.seed = options.seed + static_cast<std::uint64_t>(run);
      jobs.push_back(job);
    }
  }
  const auto reports = run_chase_suite(jobs);
  double gud = 0.0;
  double shef = 0.0;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    (jobs[i].params.variant() == Variant::Gud ? gud : shef) += reports[i].speed_sd;
  }
  gud /= options.stability_runs;
  shef /= options.stability_runs;
  return {"STABILITY", shef <= gud,
          "mean speed SD over " + std::to_string(options.stability_runs) + " runs: shef " +
              fmt(shef) + " <= gud " + fmt(gud)};
}

CriterionResult elastic_anchors(const AcceptanceOptions&) {
  const double at0 = band_force_kgf(0.0);
  const double at25 = band_force_kgf(25.0);
  bool ok = std::abs(at0 - 0.085) <= 1e-9 && std::abs(at25 - 0.360) <= 1e-9;
  const ElasticRig up(BandDirection::Upward, 6);
  const ElasticRig down(BandDirection::Downward, 4);
  bool monotone = true;
  for (int cm = 1; cm <= 35; ++cm) {
    const double lo = (cm - 1) / 100.0;
    const double hi = cm / 100.0;
    monotone = monotone && rig_force(up, hi).magnitude < rig_force(up, lo).magnitude;
    monotone = monotone && rig_force(down, hi).magnitude > rig_force(down, lo).magnitude;
  }
  ok = ok && monotone;
  return {"ELASTIC-ANCHORS", ok,
          "f(0) = " + format_double(at0) + ", f(25) = " + format_double(at25) +
              (monotone ? ", monotone over 0..35 cm" : ", monotonicity violated")};
}

CriterionResult band_calibration(const AcceptanceOptions&) {
  bool ok = true;
  std::string detail;
  const struct {
    BandDirection direction;
    std::vector<double> targets;
    std::vector<int> expected;
  } cases[] = {
      {BandDirection::Downward, {1.0, 2.0, 3.0}, {4, 8, 12}},
      {BandDirection::Upward, {1.0, 3.0, 5.0}, {2, 6, 10}},
  };
  for (const auto& c : cases) {
    const auto table = calibrate_bands(c.direction, c.targets);
    const double extension = c.direction == BandDirection::Downward ? 15.6 : 39.0;
    detail += std::string(to_string(c.direction)) + ":";
    for (std::size_t i = 0; i < table.size(); ++i) {
      const int direct = oracle::band_count_direct(c.targets[i], extension);
      ok = ok && table[i].bands == direct && direct == c.expected[i];
      detail += " " + std::to_string(table[i].bands);
    }
    detail += " ";
  }
  return {"BAND-CALIBRATION", ok, detail + "(down 4/8/12, up 2/6/10)"};
}

CriterionResult staircase(const AcceptanceOptions& options) {
  bool ok = true;
  std::string detail;
  AgentConfig agent;
  agent.seed = options.seed;
  WipParams params(Variant::Shef, 1.72, 1.0, WipParams::kNaturalVisualGain);
  for (Slope slope : {Slope::Uphill, Slope::Downhill}) {
    const GainStat reference = reference_gain(slope);
    std::vector<double> gains;
    for (Series series : {Series::Ascending, Series::Descending}) {
      for (int rep = 0; rep < 2; ++rep) {
        auto protocol = AdjustmentProtocol::standard(slope, series,
                                                     threshold_judge(series, reference.mean));
        const double gain = run_adjustment(protocol, params, ElasticRig::none(), agent).gain;
        const double steps = (gain - protocol.initial_gain) / protocol.interval;
        const bool on_grid = std::abs(steps - std::round(steps)) <= 1e-9;
        const bool near = std::abs(gain - reference.mean) <= protocol.interval + 1e-9;
        ok = ok && on_grid && near;
        gains.push_back(gain);
      }
    }
    const double mean = aggregate_adjustments(gains);
    ok = ok && std::abs(mean - reference.mean) <= reference.sd;
    detail += std::string(to_string(slope)) + " mean " + fmt(mean, 3) + " (" +
              fmt(reference.mean, 2) + " +/- " + fmt(reference.sd, 2) + ") ";
  }
  return {"STAIRCASE", ok, detail};
}

CriterionResult gait_oracle(const AcceptanceOptions& options) {
  std::mt19937_64 rng(options.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> freq(0.8, 3.0);
  std::uniform_real_distribution<double> apex(0.05, 0.35);
  std::uniform_real_distribution<double> noise(0.0, 0.004);
  bool ok = true;
  std::size_t total_steps = 0;
  double worst_apex = 0.0;
  int mismatched = 0;
  for (int i = 0; i < options.oracle_traces; ++i) {
    GaitProgram program;
    program.step_frequency = freq(rng);
    program.apex_height = apex(rng);
    program.noise_sd = noise(rng);
    program.seed = options.seed + static_cast<std::uint64_t>(i);
    const auto trace = synth_trace(program, 8.0, 90.0);

    GaitTracker tracker;
    std::vector<StepEvent> streamed;
    for (const FootSample& s : trace) {
      if (auto step = tracker.advance(s)) streamed.push_back(*step);
    }
    bool trace_ok = true;
    for (Foot foot : {Foot::Left, Foot::Right}) {
      const auto offline = oracle::offline_steps(trace, foot);
      std::vector<StepEvent> mine;
      std::copy_if(streamed.begin(), streamed.end(), std::back_inserter(mine),
                   [foot](const StepEvent& e) { return e.foot == foot; });
      if (mine.size() != offline.size()) {
        trace_ok = false;
        continue;
      }
      for (std::size_t k = 0; k < mine.size(); ++k) {
        const double diff = std::abs(mine[k].apex_height - offline[k].apex_height);
        worst_apex = std::max(worst_apex, diff);
        trace_ok = trace_ok && diff <= 0.005;
      }
      total_steps += mine.size();
    }
    if (!trace_ok) ++mismatched;
    ok = ok && trace_ok;
  }
  return {"GAIT-ORACLE", ok,
          std::to_string(options.oracle_traces) + " traces, " + std::to_string(total_steps) +
              " steps, " + std::to_string(mismatched) + " mismatched, max apex diff " +
              format_double(worst_apex)};
}

CriterionResult replay(const AcceptanceOptions& options) {
  ChaseScenario scenario;
  scenario.target_speed = 2.0;
  AgentConfig agent;
  agent.noise_sd = 0.003;
  agent.cadence_jitter = 0.05;
  agent.seed = options.seed;
  const WipParams params(Variant::Shef);
  const ChaseRun original = run_chase(scenario, agent, params, ElasticRig::none());

  TraceFile file;
  file.sample_rate = 1.0 / scenario.timestep;
  file.user_height = params.user_height();
  file.samples = original.trace;
  std::stringstream text;
  write_trace(text, file);
  const TraceFile parsed = read_trace(text);
  const ChaseRun replayed = replay_chase(scenario, params, parsed.samples);

  const bool ok = replayed.metrics == original.metrics &&
                  replayed.log.frames.size() == original.log.frames.size();
  return {"REPLAY", ok,
          std::to_string(parsed.samples.size()) + " samples; avg_speed " +
              format_double(original.metrics.avg_speed) +
              (ok ? " reproduced bit-exactly" : " differs after replay")};
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options) {
  using Check = std::function<CriterionResult(const AcceptanceOptions&)>;
  const Check checks[] = {cadence_anchor,      height_identity,     round_trip, ceiling,
                          stability,       elastic_anchors,  band_calibration,
                          staircase,       gait_oracle,      replay};
  std::vector<CriterionResult> results;
  for (const Check& check : checks) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult result;
    try {
      result = check(options);
    } catch (const std::exception& e) {
      result.passed = false;
      result.detail = std::string("threw: ") + e.what();
    }
    result.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    results.push_back(std::move(result));
  }
  return results;
}

}  // namespace wip
