#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <optional>
#include <string_view>

#include "wip/core.hpp"

namespace wip {

enum class Phase : std::uint8_t { Grounded, Ascending, Descending };

std::string_view to_string(Phase phase);
bool is_legal_transition(Phase from, Phase to);

struct GaitPhase {
  Phase phase = Phase::Grounded;
  double entered_at = 0.0;
  double height_at_entry = 0.0;
};

struct StepEvent {
  Foot foot = Foot::Left;
  double start = 0.0;      // last grounded sample before lift-off
  double apex_time = 0.0;
  double end = 0.0;        // first grounded sample after the swing
  double apex_height = 0.0;
};

struct GaitConfig {
  double ground_epsilon = 0.01;     // m
  double velocity_deadband = 0.05;  // m/s
  double min_step_height = 0.03;    // m

  // Share of one foot's stepping cycle spent in each phase. Used until the
  // tracker has observed a complete cycle of that foot.
  double grounded_fraction = 0.4;
  double ascending_fraction = 0.3;
  double descending_fraction = 0.3;

  double smoothing_time_constant = 0.5;  // s
  double stop_window = 0.8;              // s
  // An airborne foot counts as moving while its height changes by more than
  // this within the stop window.
  double motion_tolerance = 0.002;       // m
  std::size_t history = 16;              // step events kept
};

/// Streaming gait recognizer for both feet of one user.
///
/// Each foot runs a three-state machine. Leaving the ground is a pure height
/// threshold so that step segmentation matches an offline threshold pass;
/// the velocity sign (with a deadband) only separates Ascending from
/// Descending inside a swing.
///
/// Step frequency is footfall cadence over both feet. The completed-step
/// value is an exponential average of footfall intervals; while a phase is
/// in progress and has already lasted longer than its share of the step
/// period, the cadence is capped at fraction / elapsed so a slowing or
/// stopping user is seen before the step completes.
class GaitTracker {
 public:
  explicit GaitTracker(GaitConfig config = {});

  /// Validates and consumes one sample. Returns a StepEvent when the foot
  /// lands after a swing whose apex reached min_step_height.
  std::optional<StepEvent> advance(const FootSample& sample);

  double estimate_frequency(double now) const;
  double estimate_step_height(double now) const;
  GaitEstimate estimate(double now) const;

  /// True when no phase change happened within the stop window and no
  /// airborne foot of a real step has moved within it.
  bool is_stale(double now) const;

  const GaitPhase& phase(Foot foot) const { return feet_[index(foot)].phase; }
  const std::deque<StepEvent>& recent_steps() const { return recent_; }
  std::size_t step_count() const { return step_count_; }
  const GaitConfig& config() const { return config_; }

  /// Completed-step cadence, ignoring the partial-phase cap.
  double completed_frequency() const;
  std::optional<double> smoothed_step_height() const { return height_ema_; }

 private:
  struct FootTrack {
    GaitPhase phase;
    std::optional<double> last_time;
    double last_height = 0.0;
    double velocity = 0.0;

    // Current swing, valid while phase != Grounded.
    double swing_start = 0.0;
    double running_apex = 0.0;
    double apex_time = 0.0;
    double motion_height = 0.0;  // height when the foot last moved
    double motion_time = 0.0;

    std::optional<double> last_landing;  // end of this foot's last real step
    // Durations observed on this foot's last complete cycle.
    std::optional<double> ground_duration;
    std::optional<double> rise_duration;
    std::optional<double> fall_duration;
  };

  void enter(FootTrack& foot, Phase phase, double time, double height);
  void reset_estimators();
  StepEvent finish_step(Foot foot, FootTrack& track, double time);
  bool live_swing(const FootTrack& track, double now) const;
  bool foot_active(Foot foot) const;
  std::size_t active_feet() const;
  double expected_duration(const FootTrack& track, Phase segment) const;

  GaitConfig config_;
  std::array<FootTrack, kFootCount> feet_{};
  std::deque<StepEvent> recent_;
  std::size_t step_count_ = 0;

  std::optional<double> last_change_;
  std::optional<double> last_footfall_;
  std::optional<double> period_ema_;
  std::optional<double> height_ema_;
};

}  // namespace wip
