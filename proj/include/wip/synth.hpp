#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "wip/core.hpp"
#include "wip/elastic.hpp"

namespace wip {

/// Parameters of a periodic in-place stepping pattern.
struct GaitProgram {
  double step_frequency = 0.0;  // Hz, footfalls of both feet
  double apex_height = 0.0;     // m
  double stance_fraction = 0.4; // share of each foot's cycle on the ground
  double phase_offset_between_feet = 0.5;
  double noise_sd = 0.0;        // m, additive per-sample noise
  std::uint64_t seed = 0;
  bool single_foot = false;     // only the left foot steps
};

struct AgentCaps {
  double max_frequency = 2.2;    // Hz
  double max_step_height = 0.3;  // m
  double comfort_low = 1.2;      // Hz
  double comfort_high = 1.6;     // Hz
};

void validate(const AgentCaps& caps);

/// Half-sine swing profile: apex * sin(pi * u) for u in [0, 1], 0 elsewhere.
double swing_height(double apex, double u);

/// Height of one foot under `program` at time t, without noise.
double program_height(const GaitProgram& program, Foot foot, double t);

/// Samples both feet at `sample_rate` for t in [0, duration). Rows are
/// time-ordered, left before right within a frame.
std::vector<FootSample> synth_trace(const GaitProgram& program, double duration,
                                    double sample_rate);

/// Stepping strategy that hits `target_speed` under the variant's speed law.
///
/// Gud keeps the reference step height and sets cadence from the inverse of
/// the cadence law, capped at max_frequency. Shef stays inside the comfort
/// cadence band and scales step height; when the needed height exceeds
/// max_step_height it holds that height and raises cadence instead.
GaitProgram plan_gait(double target_speed, const WipParams& params, const AgentCaps& caps);

constexpr double kDefaultChaseGain = 0.5;  // 1/s

/// target + kp * error, clamped to >= 0. Positive error means the walker is behind.
double chase_policy(double distance_error, double target_speed, double kp = kDefaultChaseGain);

enum class AgentKind : std::uint8_t { Walker, Perfect };

struct AgentConfig {
  AgentKind kind = AgentKind::Walker;
  AgentCaps caps;
  double noise_sd = 0.0;
  // Relative SD of each footfall interval when stepping at max_frequency;
  // scales with (cadence / max_frequency)^2.
  double cadence_jitter = 0.0;
  double replan_interval = 0.5;  // s
  double kp = kDefaultChaseGain;
  double elastic_coupling = 0.002;  // m of apex per N of net downward pull
  double stance_fraction = 0.4;
  double free_walk_speed = 1.0;  // m/s, used before the walker has covered the lead-in
  std::uint64_t seed = 1;
};

/// Closed-loop stand-in for a user: integrates a stepping phase at the
/// planned cadence and emits foot heights frame by frame. Program changes
/// take effect without discontinuities; each swing latches its apex when it
/// starts.
class SyntheticWalker {
 public:
  SyntheticWalker(const AgentConfig& config, const WipParams& params, const ElasticRig& rig);

  /// Re-plans toward a commanded virtual speed.
  void command(double speed);
  void set_program(const GaitProgram& program);
  const GaitProgram& program() const { return program_; }

  /// Advances by dt and returns {left, right} heights.
  std::array<double, 2> step(double dt);

 private:
  double realized_apex(double planned) const;
  double foot_height(std::size_t foot, double cycle_position);

  AgentConfig config_;
  WipParams params_;
  ElasticRig rig_;
  GaitProgram program_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> unit_normal_{0.0, 1.0};

  double phase_ = 0.0;  // completed cycles of the left foot
  long half_cycle_ = 0;
  double rate_scale_ = 1.0;
  std::array<long, 2> latched_cycle_{-1, -1};
  std::array<double, 2> latched_apex_{0.0, 0.0};
};

}  // namespace wip
