#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "wip/core.hpp"
#include "wip/elastic.hpp"
#include "wip/gait.hpp"
#include "wip/synth.hpp"

namespace wip {

// ---------------------------------------------------------------------------
// Chasing task

struct ChaseScenario {
  double target_speed = 1.5;     // m/s
  double prep_distance = 5.0;    // m walked freely before the timed preparation
  double prep_duration = 10.0;   // s
  double countdown = 3.0;        // s
  double chase_duration = 20.0;  // s
  double circle_lead = 1.0;      // m between the participant and the circle center
  double sphere_radius = 0.25;   // m
  double timestep = 1.0 / 90.0;  // s
  double prep_timeout = 60.0;    // s; ends the free walk if the distance is never covered
};

void validate(const ChaseScenario& scenario);

enum class Stage : std::uint8_t { Prep, Countdown, Chase, Free };

struct Frame {
  double time = 0.0;
  Stage stage = Stage::Prep;
  double participant = 0.0;  // m along the path
  double sphere = 0.0;
  double circle_center = 0.0;
  double raw_speed = 0.0;
  double output_speed = 0.0;
  double step_frequency = 0.0;
  double step_height = 0.0;
  bool stale = true;

  bool in_window() const { return stage == Stage::Chase || stage == Stage::Free; }
};

struct FrameLog {
  std::vector<Frame> frames;
  std::vector<StepEvent> steps;
};

struct MetricsReport {
  double avg_step_height = 0.0;      // m
  double avg_step_frequency = 0.0;   // Hz
  double avg_target_distance = 0.0;  // m
  double avg_speed = 0.0;            // m/s
  double speed_sd = 0.0;             // m/s, population SD within the run

  bool operator==(const MetricsReport&) const = default;
};

/// Metrics over the window frames only (chase, or every frame of a free replay).
MetricsReport compute_metrics(const FrameLog& log);

struct ChaseRun {
  MetricsReport metrics;
  FrameLog log;
  std::vector<FootSample> trace;  // what the engine consumed, in order
};

/// Preparation (sphere mirrors the participant), countdown (sphere keeps its
/// place relative to the circle), then the sphere moves at the target speed
/// for the chase window.
ChaseRun run_chase(const ChaseScenario& scenario, const AgentConfig& agent,
                   const WipParams& params, const ElasticRig& rig);

/// Re-runs the chasing task with recorded foot samples in place of the agent.
/// Sample times must sit on the scenario's frame grid.
ChaseRun replay_chase(const ChaseScenario& scenario, const WipParams& params,
                      std::span<const FootSample> trace);

/// Open-loop replay of an arbitrary trace: one frame per distinct sample
/// time, every frame in the metrics window, no target.
ChaseRun replay_free(const WipParams& params, std::span<const FootSample> trace);

// ---------------------------------------------------------------------------
// Batch execution of independent runs

struct ChaseJob {
  ChaseScenario scenario;
  AgentConfig agent;
  WipParams params;
  ElasticRig rig;
};

/// Runs every job and returns metrics in job order. The OpenMP version and
/// the serial reference give identical results.
std::vector<MetricsReport> run_chase_suite(std::span<const ChaseJob> jobs);
std::vector<MetricsReport> run_chase_suite_serial(std::span<const ChaseJob> jobs);

// ---------------------------------------------------------------------------
// Slope gain adjustment

enum class Slope : std::uint8_t { Uphill, Downhill };
enum class Series : std::uint8_t { Ascending, Descending };

std::string_view to_string(Slope slope);
std::string_view to_string(Series series);
Slope parse_slope(std::string_view text);

struct SlopeProfile {
  double gradient_deg = 5.71;
  double slope_length = 75.0;  // m
  double flat_leadin = 10.0;   // m walked at gain 1.0 before the slope
  double gain_on_slope = 1.0;

  double gain_at(double position) const {
    return position < flat_leadin ? 1.0 : gain_on_slope;
  }

  /// Shipped gains from the control condition of the adjustment study.
  static SlopeProfile preset(Slope slope);
};

struct GainStat {
  double mean = 0.0;
  double sd = 0.0;
};

/// Adjusted gains per slope and rig direction (None = control).
GainStat reference_gain(Slope slope, BandDirection rig = BandDirection::None);

using Judge = std::function<bool(double gain)>;

/// Satisfied once the gain has crossed the reference in the series direction.
Judge threshold_judge(Series series, double reference);
/// Satisfied when |gain - reference| <= tolerance.
Judge band_judge(double reference, double tolerance);

struct AdjustmentProtocol {
  Slope slope = Slope::Uphill;
  Series series = Series::Ascending;
  double initial_gain = 0.3;
  double interval = 0.07;
  double bout_duration = 5.0;  // s on the slope
  Judge judge;
  int max_bouts = 100;

  /// Default start and step for the slope/series pair.
  static AdjustmentProtocol standard(Slope slope, Series series, Judge judge);
};

struct BoutSummary {
  double gain = 1.0;
  double duration = 0.0;           // s simulated, lead-in included
  double distance = 0.0;           // m along the path
  double avg_slope_speed = 0.0;    // m/s output speed while on the slope
  double elevation_change = 0.0;   // m climbed on the slope; run_adjustment signs it (down negative)
};

struct AdjustmentResult {
  double gain = 0.0;
  std::vector<BoutSummary> bouts;
};

/// Walks the flat lead-in at gain 1.0, then `bout_duration` on the slope
/// with the trial gain; natural visual gain comes from `params`.
BoutSummary run_bout(const SlopeProfile& profile, double bout_duration, const AgentConfig& agent,
                     const WipParams& params, const ElasticRig& rig, double walk_speed = 1.0,
                     double timestep = 1.0 / 90.0);

/// Staircase: gain_k = initial +/- k * interval until the judge is satisfied.
AdjustmentResult run_adjustment(const AdjustmentProtocol& protocol, const WipParams& params,
                                const ElasticRig& rig, const AgentConfig& agent = {},
                                double walk_speed = 1.0, double timestep = 1.0 / 90.0);

/// Mean of the four gains from two ascending and two descending series.
double aggregate_adjustments(std::span<const double> gains);

}  // namespace wip
