#include "wip/harness.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <optional>
#include <string>

#include "wip/speed.hpp"

namespace wip {

void validate(const ChaseScenario& s) {
  const double fields[] = {s.target_speed + 1.0, s.prep_distance, s.prep_duration,
                           s.countdown + 1.0,   s.chase_duration, s.circle_lead,
                           s.sphere_radius,     s.timestep,       s.prep_timeout};
  for (double v : fields) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::InvalidParams, "chase scenario fields must be positive and finite");
    }
  }
  if (s.target_speed < 0.0) {
    throw Error(ErrorCode::InvalidParams, "target speed must be non-negative");
  }
}

namespace {

using FrameSamples = std::array<std::optional<double>, kFootCount>;

/// Where foot heights come from during a simulated task.
class FootSource {
 public:
  virtual ~FootSource() = default;
  /// Raw (pre-gain) speed the participant is aiming for.
  virtual void command(double raw_speed) = 0;
  /// Heights for frame `frame` at time `time`; nullopt when exhausted.
  virtual std::optional<FrameSamples> next(long frame, double time, double dt) = 0;
};

class WalkerSource final : public FootSource {
 public:
  WalkerSource(const AgentConfig& agent, const WipParams& params, const ElasticRig& rig)
      : walker_(agent, params, rig) {}

  void command(double raw_speed) override { walker_.command(raw_speed); }

  std::optional<FrameSamples> next(long frame, double, double dt) override {
    const auto heights = walker_.step(frame == 0 ? 0.0 : dt);
    return FrameSamples{heights[0], heights[1]};
  }

 private:
  SyntheticWalker walker_;
};

/// Speed is pinned to the command; no foot samples at all.
class PerfectSource final : public FootSource {
 public:
  void command(double) override {}
  std::optional<FrameSamples> next(long, double, double) override { return FrameSamples{}; }
};

class TraceSource final : public FootSource {
 public:
  explicit TraceSource(std::span<const FootSample> trace) : trace_(trace) {}

  void command(double) override {}

  std::optional<FrameSamples> next(long frame, double time, double) override {
    if (cursor_ >= trace_.size()) return std::nullopt;
    if (trace_[cursor_].time != time) {
      throw Error(ErrorCode::InvalidParams,
                  "trace sample at t=" + std::to_string(trace_[cursor_].time) +
                      " s is not on the frame grid (frame " + std::to_string(frame) +
                      " expects t=" + std::to_string(time) + " s)");
    }
    FrameSamples out;
    while (cursor_ < trace_.size() && trace_[cursor_].time == time) {
      out[index(trace_[cursor_].foot)] = trace_[cursor_].height;
      ++cursor_;
    }
    return out;
  }

 private:
  std::span<const FootSample> trace_;
  std::size_t cursor_ = 0;
};

long frames_for(double duration, double dt) { return std::lround(duration / dt); }

void feed(GaitTracker& tracker, const FrameSamples& samples, double time, ChaseRun& run) {
  for (Foot foot : {Foot::Left, Foot::Right}) {
    const auto& height = samples[index(foot)];
    if (!height) continue;
    const FootSample sample{time, foot, *height};
    if (auto step = tracker.advance(sample)) run.log.steps.push_back(*step);
    run.trace.push_back(sample);
  }
}

struct ChaseControl {
  bool perfect = false;
  double kp = kDefaultChaseGain;
  double replan_interval = 0.5;
  double free_walk_speed = 1.0;
};

ChaseRun simulate_chase(const ChaseScenario& scenario, const WipParams& params,
                        FootSource& source, const ChaseControl& control) {
  validate(scenario);
  const double dt = scenario.timestep;
  const double gain = params.speed_gain() * params.natural_visual_gain();
  const long prep_frames = frames_for(scenario.prep_duration, dt);
  const long countdown_frames = frames_for(scenario.countdown, dt);
  const long chase_frames = frames_for(scenario.chase_duration, dt);
  const long replan_frames = std::max(1L, frames_for(control.replan_interval, dt));

  ChaseRun run;
  run.log.frames.reserve(static_cast<std::size_t>(prep_frames + countdown_frames +
                                                  chase_frames + 8 * 90));
  GaitTracker tracker;
  Stage stage = Stage::Prep;
  std::optional<long> prep_end;
  long countdown_end = 0;
  long chase_end = 0;
  double position = 0.0;
  double sphere = scenario.circle_lead;
  double commanded = 0.0;

  for (long k = 0;; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (stage == Stage::Prep) {
      if (!prep_end && (position >= scenario.prep_distance || t >= scenario.prep_timeout)) {
        prep_end = k + prep_frames;
      }
      if (prep_end && k >= *prep_end) {
        stage = Stage::Countdown;
        countdown_end = k + countdown_frames;
      }
    }
    if (stage == Stage::Countdown && k >= countdown_end) {
      stage = Stage::Chase;
      chase_end = k + chase_frames;
    }
    if (stage == Stage::Chase && k >= chase_end) break;

    const double circle = position + scenario.circle_lead;

    if (k % replan_frames == 0) {
      if (stage == Stage::Chase) {
        commanded = chase_policy(sphere - circle, scenario.target_speed, control.kp);
      } else if (position < scenario.prep_distance) {
        commanded = std::max(scenario.target_speed, control.free_walk_speed);
      } else {
        commanded = scenario.target_speed;
      }
      source.command(commanded / gain);
    }

    const auto samples = source.next(k, t, dt);
    if (!samples) break;
    feed(tracker, *samples, t, run);

    const GaitEstimate estimate = tracker.estimate(t);
    SpeedSample speed = output_speed(params, estimate);
    if (control.perfect) {
      speed.output_speed = stage == Stage::Chase ? scenario.target_speed : commanded;
      speed.raw_speed = speed.output_speed / gain;
    }

    run.log.frames.push_back({t, stage, position, sphere, circle, speed.raw_speed,
                              speed.output_speed, estimate.step_frequency,
                              estimate.step_height, estimate.stale});

    position += speed.output_speed * dt;
    if (stage == Stage::Chase) {
      sphere += scenario.target_speed * dt;
    } else {
      sphere = position + scenario.circle_lead;
    }
    if (!std::isfinite(position) || !std::isfinite(sphere)) {
      throw Error(ErrorCode::DivergedSimulation,
                  "position became non-finite at t=" + std::to_string(t) + " s");
    }
  }
  run.metrics = compute_metrics(run.log);
  return run;
}

}  // namespace

MetricsReport compute_metrics(const FrameLog& log) {
  std::size_t count = 0;
  double first = 0.0;
  double last = 0.0;
  double speed_sum = 0.0;
  double distance_sum = 0.0;
  for (const Frame& frame : log.frames) {
    if (!frame.in_window()) continue;
    if (count == 0) first = frame.time;
    last = frame.time;
    ++count;
    speed_sum += frame.output_speed;
    distance_sum += std::abs(frame.sphere - frame.circle_center);
  }
  if (count == 0) {
    throw Error(ErrorCode::EmptyWindow, "no frames inside the metrics window");
  }

  MetricsReport report;
  const auto n = static_cast<double>(count);
  report.avg_speed = speed_sum / n;
  report.avg_target_distance = distance_sum / n;

  double squares = 0.0;
  for (const Frame& frame : log.frames) {
    if (!frame.in_window()) continue;
    const double d = frame.output_speed - report.avg_speed;
    squares += d * d;
  }
  report.speed_sd = std::sqrt(squares / n);

  std::size_t steps = 0;
  double apex_sum = 0.0;
  double first_end = 0.0;
  double last_end = 0.0;
  for (const StepEvent& step : log.steps) {
    if (step.end < first || step.end > last) continue;
    if (steps == 0) first_end = step.end;
    last_end = step.end;
    apex_sum += step.apex_height;
    ++steps;
  }
  if (steps > 0) report.avg_step_height = apex_sum / static_cast<double>(steps);
  if (steps > 1 && last_end > first_end) {
    report.avg_step_frequency = static_cast<double>(steps - 1) / (last_end - first_end);
  }
  return report;
}

ChaseRun run_chase(const ChaseScenario& scenario, const AgentConfig& agent,
                   const WipParams& params, const ElasticRig& rig) {
  const ChaseControl control{agent.kind == AgentKind::Perfect, agent.kp, agent.replan_interval,
                             agent.free_walk_speed};
  if (control.perfect) {
    PerfectSource source;
    return simulate_chase(scenario, params, source, control);
  }
  WalkerSource source(agent, params, rig);
  return simulate_chase(scenario, params, source, control);
}

ChaseRun replay_chase(const ChaseScenario& scenario, const WipParams& params,
                      std::span<const FootSample> trace) {
  TraceSource source(trace);
  return simulate_chase(scenario, params, source, ChaseControl{});
}

ChaseRun replay_free(const WipParams& params, std::span<const FootSample> trace) {
  ChaseRun run;
  GaitTracker tracker;
  double position = 0.0;
  std::size_t cursor = 0;
  while (cursor < trace.size()) {
    const double t = trace[cursor].time;
    FrameSamples samples;
    while (cursor < trace.size() && trace[cursor].time == t) {
      const FootSample& sample = trace[cursor];
      if (samples[index(sample.foot)]) {
        throw Error(ErrorCode::NonMonotonicTime,
                    "two samples for foot " + std::string(1, to_char(sample.foot)) +
                        " at t=" + std::to_string(t) + " s");
      }
      samples[index(sample.foot)] = sample.height;
      ++cursor;
    }
    feed(tracker, samples, t, run);
    const GaitEstimate estimate = tracker.estimate(t);
    const SpeedSample speed = output_speed(params, estimate);
    if (!run.log.frames.empty()) {
      position += run.log.frames.back().output_speed * (t - run.log.frames.back().time);
    }
    run.log.frames.push_back({t, Stage::Free, position, position, position, speed.raw_speed,
                              speed.output_speed, estimate.step_frequency,
                              estimate.step_height, estimate.stale});
  }
  run.metrics = compute_metrics(run.log);
  return run;
}

std::vector<MetricsReport> run_chase_suite(std::span<const ChaseJob> jobs) {
  std::vector<MetricsReport> out(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  const auto n = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      const ChaseJob& job = jobs[static_cast<std::size_t>(i)];
      out[static_cast<std::size_t>(i)] =
          run_chase(job.scenario, job.agent, job.params, job.rig).metrics;
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
  return out;
}

std::vector<MetricsReport> run_chase_suite_serial(std::span<const ChaseJob> jobs) {
  std::vector<MetricsReport> out;
  out.reserve(jobs.size());
  for (const ChaseJob& job : jobs) {
    out.push_back(run_chase(job.scenario, job.agent, job.params, job.rig).metrics);
  }
  return out;
}

std::string_view to_string(Slope slope) {
  return slope == Slope::Uphill ? "uphill" : "downhill";
}

std::string_view to_string(Series series) {
  return series == Series::Ascending ? "ascending" : "descending";
}

Slope parse_slope(std::string_view text) {
  if (text == "uphill" || text == "up") return Slope::Uphill;
  if (text == "downhill" || text == "down") return Slope::Downhill;
  throw Error(ErrorCode::ParseError, "unknown slope '" + std::string(text) + "'");
}

SlopeProfile SlopeProfile::preset(Slope slope) {
  SlopeProfile profile;
  profile.gain_on_slope = reference_gain(slope).mean;
  return profile;
}

GainStat reference_gain(Slope slope, BandDirection rig) {
  if (slope == Slope::Uphill) {
    switch (rig) {
      case BandDirection::None: return {0.71, 0.07};
      case BandDirection::Downward: return {0.75, 0.07};
      case BandDirection::Upward: return {0.74, 0.10};
    }
  }
  switch (rig) {
    case BandDirection::None: return {1.43, 0.25};
    case BandDirection::Downward: return {1.54, 0.18};
    case BandDirection::Upward: return {1.49, 0.23};
  }
  return {};
}

Judge threshold_judge(Series series, double reference) {
  constexpr double slack = 1e-9;
  if (series == Series::Ascending) {
    return [reference](double gain) { return gain >= reference - slack; };
  }
  return [reference](double gain) { return gain <= reference + slack; };
}

Judge band_judge(double reference, double tolerance) {
  return [reference, tolerance](double gain) {
    return std::abs(gain - reference) <= tolerance + 1e-9;
  };
}

AdjustmentProtocol AdjustmentProtocol::standard(Slope slope, Series series, Judge judge) {
  AdjustmentProtocol protocol;
  protocol.slope = slope;
  protocol.series = series;
  protocol.judge = std::move(judge);
  if (slope == Slope::Uphill) {
    protocol.interval = 0.07;
    protocol.initial_gain = series == Series::Ascending ? 0.3 : 1.0;
  } else {
    protocol.interval = 0.15;
    protocol.initial_gain = series == Series::Ascending ? 1.0 : 2.5;
  }
  return protocol;
}

BoutSummary run_bout(const SlopeProfile& profile, double bout_duration,
                     const AgentConfig& agent, const WipParams& params, const ElasticRig& rig,
                     double walk_speed, double timestep) {
  const double dt = timestep;
  constexpr double leadin_timeout = 60.0;
  const long slope_frames = frames_for(bout_duration, dt);

  SyntheticWalker walker(agent, params, rig);
  walker.command(walk_speed);
  GaitTracker tracker;
  WipParams frame_params = params;

  BoutSummary summary;
  summary.gain = profile.gain_on_slope;
  double position = 0.0;
  double slope_speed_sum = 0.0;
  long on_slope = 0;
  for (long k = 0; on_slope < slope_frames; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (t > leadin_timeout && position < profile.flat_leadin) {
      throw Error(ErrorCode::DivergedSimulation, "walker never reached the slope");
    }
    const auto heights = walker.step(k == 0 ? 0.0 : dt);
    tracker.advance({t, Foot::Left, heights[0]});
    tracker.advance({t, Foot::Right, heights[1]});
    frame_params.set_speed_gain(profile.gain_at(position));
    const double speed = output_speed(frame_params, tracker.estimate(t)).output_speed;
    if (position >= profile.flat_leadin) {
      slope_speed_sum += speed;
      ++on_slope;
    }
    position += speed * dt;
    summary.duration = t + dt;
  }
  summary.distance = position;
  summary.avg_slope_speed = slope_speed_sum / static_cast<double>(slope_frames);
  const double climb = std::max(0.0, std::min(position, profile.flat_leadin +
                                                            profile.slope_length) -
                                         profile.flat_leadin) *
                       std::sin(profile.gradient_deg * std::numbers::pi / 180.0);
  summary.elevation_change = climb;
  return summary;
}

AdjustmentResult run_adjustment(const AdjustmentProtocol& protocol, const WipParams& params,
                                const ElasticRig& rig, const AgentConfig& agent,
                                double walk_speed, double timestep) {
  if (!(protocol.interval > 0.0) || !(protocol.initial_gain > 0.0) || !protocol.judge) {
    throw Error(ErrorCode::InvalidParams, "adjustment needs a positive start, step and a judge");
  }
  const double direction = protocol.series == Series::Ascending ? 1.0 : -1.0;
  SlopeProfile profile = SlopeProfile::preset(protocol.slope);

  AdjustmentResult result;
  for (int bout = 0; bout < protocol.max_bouts; ++bout) {
    // Computed from the start so every gain lies exactly on the grid.
    const double gain = protocol.initial_gain + direction * bout * protocol.interval;
    if (!(gain > 0.0)) break;
    profile.gain_on_slope = gain;
    AgentConfig bout_agent = agent;
    bout_agent.seed = agent.seed + static_cast<std::uint64_t>(bout);
    BoutSummary summary =
        run_bout(profile, protocol.bout_duration, bout_agent, params, rig, walk_speed,
                 timestep);
    if (protocol.slope == Slope::Downhill) summary.elevation_change = -summary.elevation_change;
    result.bouts.push_back(summary);
    if (protocol.judge(gain)) {
      result.gain = gain;
      return result;
    }
  }
  throw Error(ErrorCode::NonTermination,
              "judge not satisfied after " + std::to_string(result.bouts.size()) + " bouts");
}

double aggregate_adjustments(std::span<const double> gains) {
  if (gains.size() != 4) {
    throw Error(ErrorCode::WrongArity,
                "expected 4 adjusted gains, got " + std::to_string(gains.size()));
  }
  double sum = 0.0;
  for (double g : gains) sum += g;
  return sum / 4.0;
}

}  // namespace wip
