#include "wip/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "wip/speed.hpp"

namespace wip {

void validate(const AgentCaps& caps) {
  if (!(caps.max_frequency > 0.0) || !(caps.max_step_height > 0.0) ||
      !(caps.comfort_low >= 0.0) || !(caps.comfort_low <= caps.comfort_high) ||
      !(caps.comfort_high <= caps.max_frequency)) {
    throw Error(ErrorCode::InvalidParams,
                "agent caps need 0 <= comfort_low <= comfort_high <= max_frequency");
  }
}

double swing_height(double apex, double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return apex * std::sin(std::numbers::pi * u);
}

namespace {

double cycle_rate(const GaitProgram& program) {
  return program.single_foot ? program.step_frequency : 0.5 * program.step_frequency;
}

double height_in_cycle(double cycle_position, double stance, double apex) {
  const double within = cycle_position - std::floor(cycle_position);
  if (within < stance) return 0.0;
  return swing_height(apex, (within - stance) / (1.0 - stance));
}

}  // namespace

double program_height(const GaitProgram& program, Foot foot, double t) {
  if (program.step_frequency <= 0.0) return 0.0;
  double position = t * cycle_rate(program);
  if (foot == Foot::Right) {
    if (program.single_foot) return 0.0;
    position -= program.phase_offset_between_feet;
    if (position < 0.0) return 0.0;
  }
  return height_in_cycle(position, program.stance_fraction, program.apex_height);
}

std::vector<FootSample> synth_trace(const GaitProgram& program, double duration,
                                    double sample_rate) {
  if (!(sample_rate >= 30.0) || !std::isfinite(sample_rate)) {
    throw Error(ErrorCode::InvalidRate, "sample rate must be at least 30 Hz");
  }
  if (!(program.stance_fraction > 0.0 && program.stance_fraction < 1.0) ||
      !(program.step_frequency >= 0.0) || !(program.apex_height >= 0.0) ||
      !(program.noise_sd >= 0.0)) {
    throw Error(ErrorCode::InvalidParams, "invalid gait program");
  }
  std::mt19937_64 rng(program.seed);
  std::normal_distribution<double> noise(0.0, 1.0);

  std::vector<FootSample> out;
  const auto frames = static_cast<long>(std::ceil(duration * sample_rate));
  out.reserve(static_cast<std::size_t>(std::max(0L, frames)) * 2);
  for (long k = 0;; ++k) {
    const double t = static_cast<double>(k) / sample_rate;
    if (t >= duration) break;
    for (Foot foot : {Foot::Left, Foot::Right}) {
      double h = program_height(program, foot, t);
      if (program.noise_sd > 0.0) h = std::max(0.0, h + program.noise_sd * noise(rng));
      out.push_back({t, foot, std::min(h, kMaxHeight)});
    }
  }
  return out;
}

GaitProgram plan_gait(double target_speed, const WipParams& params, const AgentCaps& caps) {
  validate(caps);
  GaitProgram program;
  const double height = params.user_height();
  const double ref_step = WipParams::kRefStepHeight;
  if (!(target_speed > 0.0)) {
    program.apex_height = params.variant() == Variant::Gud ? ref_step : 0.0;
    return program;
  }
  const double ideal = gud_frequency_for(target_speed, height);

  if (params.variant() == Variant::Gud) {
    program.step_frequency = std::min(ideal, caps.max_frequency);
    program.apex_height = ref_step;
    return program;
  }

  double frequency = std::clamp(ideal, caps.comfort_low, caps.comfort_high);
  double step_height = ref_step * target_speed / gud_speed(frequency, height);
  if (step_height > caps.max_step_height) {
    step_height = caps.max_step_height;
    frequency = std::min(
        caps.max_frequency,
        gud_frequency_for(target_speed * ref_step / caps.max_step_height, height));
  }
  program.step_frequency = frequency;
  program.apex_height = std::max(0.0, step_height);
  return program;
}

double chase_policy(double distance_error, double target_speed, double kp) {
  return std::max(0.0, target_speed + kp * distance_error);
}

SyntheticWalker::SyntheticWalker(const AgentConfig& config, const WipParams& params,
                                 const ElasticRig& rig)
    : config_(config), params_(params), rig_(rig), rng_(config.seed) {
  validate(config_.caps);
  if (!(config_.stance_fraction > 0.0 && config_.stance_fraction < 1.0) ||
      !(config_.noise_sd >= 0.0) || !(config_.cadence_jitter >= 0.0) ||
      !(config_.replan_interval > 0.0)) {
    throw Error(ErrorCode::InvalidParams, "invalid agent configuration");
  }
  program_.stance_fraction = config_.stance_fraction;
}

void SyntheticWalker::command(double speed) {
  GaitProgram next = plan_gait(speed, params_, config_.caps);
  next.stance_fraction = config_.stance_fraction;
  set_program(next);
}

void SyntheticWalker::set_program(const GaitProgram& program) { program_ = program; }

double SyntheticWalker::realized_apex(double planned) const {
  if (rig_.direction() == BandDirection::None || config_.elastic_coupling == 0.0) {
    return planned;
  }
  const double pull = rig_force(rig_, planned).net_downward();
  return std::clamp(planned - config_.elastic_coupling * pull, 0.0, kMaxHeight);
}

double SyntheticWalker::foot_height(std::size_t foot, double cycle_position) {
  if (cycle_position < 0.0) return 0.0;
  const double stance = program_.stance_fraction;
  const double within = cycle_position - std::floor(cycle_position);
  if (within < stance) return 0.0;
  const auto cycle = static_cast<long>(std::floor(cycle_position));
  if (latched_cycle_[foot] != cycle) {
    latched_cycle_[foot] = cycle;
    latched_apex_[foot] = realized_apex(program_.apex_height);
  }
  return swing_height(latched_apex_[foot], (within - stance) / (1.0 - stance));
}

std::array<double, 2> SyntheticWalker::step(double dt) {
  const double rate = cycle_rate(program_);
  phase_ += dt * rate * rate_scale_;

  // One footfall interval per half cycle (alternating) or per cycle (single foot).
  const double intervals_per_cycle = program_.single_foot ? 1.0 : 2.0;
  const auto interval = static_cast<long>(std::floor(phase_ * intervals_per_cycle));
  if (interval != half_cycle_) {
    half_cycle_ = interval;
    const double load = program_.step_frequency / config_.caps.max_frequency;
    const double sd = config_.cadence_jitter * load * load;
    rate_scale_ = sd > 0.0 ? std::clamp(1.0 + sd * unit_normal_(rng_), 0.5, 1.5) : 1.0;
  }

  std::array<double, 2> heights{
      foot_height(0, phase_),
      program_.single_foot ? 0.0
                           : foot_height(1, phase_ - program_.phase_offset_between_feet)};
  if (config_.noise_sd > 0.0) {
    for (double& h : heights) h = std::max(0.0, h + config_.noise_sd * unit_normal_(rng_));
  }
  for (double& h : heights) h = std::min(h, kMaxHeight);
  return heights;
}

}  // namespace wip
