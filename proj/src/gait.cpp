#include "wip/gait.hpp"

#include <algorithm>
#include <cmath>

namespace wip {

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::Grounded: return "grounded";
    case Phase::Ascending: return "ascending";
    case Phase::Descending: return "descending";
  }
  return "grounded";
}

bool is_legal_transition(Phase from, Phase to) {
  switch (from) {
    case Phase::Grounded: return to == Phase::Ascending;
    case Phase::Ascending: return to == Phase::Descending || to == Phase::Grounded;
    case Phase::Descending: return to == Phase::Grounded || to == Phase::Ascending;
  }
  return false;
}

GaitTracker::GaitTracker(GaitConfig config) : config_(config) {
  if (!(config_.ground_epsilon >= 0.0) || !(config_.min_step_height > config_.ground_epsilon) ||
      !(config_.smoothing_time_constant > 0.0) || !(config_.stop_window > 0.0) ||
      config_.history < 4) {
    throw Error(ErrorCode::InvalidParams, "inconsistent gait tracker configuration");
  }
  const double fractions =
      config_.grounded_fraction + config_.ascending_fraction + config_.descending_fraction;
  if (!(config_.grounded_fraction > 0.0) || !(config_.ascending_fraction > 0.0) ||
      !(config_.descending_fraction > 0.0) || std::abs(fractions - 1.0) > 1e-9) {
    throw Error(ErrorCode::InvalidParams, "phase fractions must be positive and sum to 1");
  }
}

void GaitTracker::enter(FootTrack& foot, Phase phase, double time, double height) {
  if (foot.phase.phase == phase) return;
  foot.phase = {phase, time, height};
  last_change_ = time;
}

void GaitTracker::reset_estimators() {
  recent_.clear();
  last_footfall_.reset();
  period_ema_.reset();
  height_ema_.reset();
  for (auto& foot : feet_) {
    foot.last_landing.reset();
    foot.ground_duration.reset();
    foot.rise_duration.reset();
    foot.fall_duration.reset();
  }
}

std::optional<StepEvent> GaitTracker::advance(const FootSample& raw) {
  FootTrack& track = feet_[index(raw.foot)];
  const FootSample sample = validate_sample(raw, track.last_time);
  const double t = sample.time;
  const double h = sample.height;

  if (is_stale(t)) reset_estimators();

  const double velocity =
      track.last_time ? (h - track.last_height) / (t - *track.last_time) : 0.0;

  std::optional<StepEvent> event;
  if (track.phase.phase == Phase::Grounded) {
    if (h > config_.ground_epsilon) {
      track.swing_start = track.last_time.value_or(t);
      track.running_apex = h;
      track.apex_time = t;
      track.motion_height = h;
      track.motion_time = t;
      enter(track, Phase::Ascending, t, h);
    }
  } else if (h <= config_.ground_epsilon) {
    if (track.running_apex >= config_.min_step_height) {
      event = finish_step(raw.foot, track, t);
    }
    enter(track, Phase::Grounded, t, h);
  } else {
    if (h > track.running_apex) {
      track.running_apex = h;
      track.apex_time = t;
    }
    if (std::abs(h - track.motion_height) > config_.motion_tolerance) {
      track.motion_height = h;
      track.motion_time = t;
    }
    if (track.phase.phase == Phase::Ascending && velocity < -config_.velocity_deadband) {
      enter(track, Phase::Descending, t, h);
    } else if (track.phase.phase == Phase::Descending &&
               velocity > config_.velocity_deadband) {
      enter(track, Phase::Ascending, t, h);
    }
  }

  track.last_time = t;
  track.last_height = h;
  track.velocity = velocity;
  return event;
}

StepEvent GaitTracker::finish_step(Foot foot, FootTrack& track, double time) {
  const StepEvent step{foot, track.swing_start, track.apex_time, time, track.running_apex};

  track.rise_duration = step.apex_time - step.start;
  track.fall_duration = step.end - step.apex_time;
  if (track.last_landing) track.ground_duration = step.start - *track.last_landing;
  track.last_landing = step.end;

  if (!last_footfall_) {
    height_ema_ = step.apex_height;
  } else {
    const double interval = step.end - *last_footfall_;
    if (interval > 0.0) {
      const double alpha = 1.0 - std::exp(-interval / config_.smoothing_time_constant);
      period_ema_ = period_ema_ ? *period_ema_ + alpha * (interval - *period_ema_) : interval;
      height_ema_ = *height_ema_ + alpha * (step.apex_height - *height_ema_);
    }
  }
  last_footfall_ = step.end;

  recent_.push_back(step);
  if (recent_.size() > config_.history) recent_.pop_front();
  ++step_count_;
  return step;
}

double GaitTracker::completed_frequency() const {
  return period_ema_ && *period_ema_ > 0.0 ? 1.0 / *period_ema_ : 0.0;
}

bool GaitTracker::foot_active(Foot foot) const {
  const std::size_t lookback = std::min<std::size_t>(4, recent_.size());
  return std::any_of(recent_.end() - static_cast<std::ptrdiff_t>(lookback), recent_.end(),
                     [foot](const StepEvent& e) { return e.foot == foot; });
}

std::size_t GaitTracker::active_feet() const {
  return std::max<std::size_t>(
      1, static_cast<std::size_t>(foot_active(Foot::Left)) + foot_active(Foot::Right));
}

double GaitTracker::expected_duration(const FootTrack& track, Phase segment) const {
  const std::optional<double>* learned = nullptr;
  double fraction = 0.0;
  switch (segment) {
    case Phase::Grounded:
      learned = &track.ground_duration;
      fraction = config_.grounded_fraction;
      break;
    case Phase::Ascending:
      learned = &track.rise_duration;
      fraction = config_.ascending_fraction;
      break;
    case Phase::Descending:
      learned = &track.fall_duration;
      fraction = config_.descending_fraction;
      break;
  }
  if (*learned) return **learned;
  const double cadence = completed_frequency();
  if (cadence <= 0.0) return 0.0;
  // One foot's cycle spans as many footfalls as there are stepping feet.
  return fraction * static_cast<double>(active_feet()) / cadence;
}

bool GaitTracker::live_swing(const FootTrack& track, double now) const {
  return track.phase.phase != Phase::Grounded &&
         track.running_apex >= config_.min_step_height &&
         now - track.motion_time <= config_.stop_window;
}

bool GaitTracker::is_stale(double now) const {
  if (!last_change_) return true;
  if (now - *last_change_ <= config_.stop_window) return false;
  return std::none_of(feet_.begin(), feet_.end(),
                      [&](const FootTrack& track) { return live_swing(track, now); });
}

double GaitTracker::estimate_frequency(double now) const {
  if (is_stale(now)) return 0.0;
  const double completed = completed_frequency();
  if (completed <= 0.0) return 0.0;

  double frequency = completed;
  for (Foot foot : {Foot::Left, Foot::Right}) {
    if (!foot_active(foot)) continue;
    const FootTrack& track = feet_[index(foot)];
    Phase segment = Phase::Grounded;
    double elapsed = 0.0;
    if (track.phase.phase == Phase::Grounded) {
      if (!track.last_landing) continue;
      elapsed = now - *track.last_landing;
    } else if (track.last_time && track.apex_time >= *track.last_time) {
      // Sub-phase timing follows the running apex; the velocity label lags
      // near the top of slow swings.
      segment = Phase::Ascending;
      elapsed = now - track.swing_start;
    } else {
      segment = Phase::Descending;
      elapsed = now - track.apex_time;
    }
    const double expected = expected_duration(track, segment);
    if (expected > 0.0 && elapsed > expected) {
      frequency = std::min(frequency, completed * expected / elapsed);
    }
  }
  return frequency;
}

double GaitTracker::estimate_step_height(double now) const {
  if (is_stale(now)) return 0.0;
  double height = height_ema_.value_or(0.0);
  for (const FootTrack& track : feet_) {
    if (track.phase.phase != Phase::Grounded &&
        track.running_apex >= config_.min_step_height) {
      height = std::max(height, track.running_apex);
    }
  }
  return height;
}

GaitEstimate GaitTracker::estimate(double now) const {
  GaitEstimate out;
  out.as_of = now;
  out.stale = is_stale(now);
  if (!out.stale) {
    out.step_frequency = estimate_frequency(now);
    out.step_height = estimate_step_height(now);
  }
  return out;
}

}  // namespace wip
