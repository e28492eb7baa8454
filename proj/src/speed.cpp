#include "wip/speed.hpp"

#include <cmath>
#include <cstddef>
#include <string>

namespace wip {

namespace {

void check_height(double user_height) {
  if (!(user_height > 0.0)) {
    throw Error(ErrorCode::NonPositiveHeight,
                "user height must be positive, got " + std::to_string(user_height));
  }
}

void check_batch(std::size_t a, std::size_t b, std::size_t c, std::size_t out) {
  if (a != b || a != c || a != out) {
    throw Error(ErrorCode::InvalidParams, "batch spans differ in length");
  }
}

// No validation; callers check preconditions once per batch or call.
inline double gud_unchecked(double frequency, double user_height) {
  const double ratio = (frequency / WipParams::kRefFrequency) *
                       (user_height / WipParams::kRefUserHeight);
  return ratio * ratio;
}

inline double shef_unchecked(double frequency, double user_height, double step_height) {
  return gud_unchecked(frequency, user_height) * (step_height / WipParams::kRefStepHeight);
}

}  // namespace

double gud_speed(double frequency, double user_height) {
  check_height(user_height);
  if (!(frequency >= 0.0)) {
    throw Error(ErrorCode::InvalidParams, "step frequency must be non-negative");
  }
  return gud_unchecked(frequency, user_height);
}

double shef_speed(double frequency, double user_height, double step_height) {
  const double base = gud_speed(frequency, user_height);
  if (!(step_height >= 0.0)) {
    throw Error(ErrorCode::InvalidParams, "step height must be non-negative");
  }
  return base * (step_height / WipParams::kRefStepHeight);
}

double apply_gain(double speed, double gain, double natural_gain) {
  if (!(gain > 0.0) || !(natural_gain > 0.0)) {
    throw Error(ErrorCode::NonPositiveGain, "gains must be positive");
  }
  return speed * gain * natural_gain;
}

SpeedSample output_speed(const WipParams& params, const GaitEstimate& estimate) {
  SpeedSample sample;
  sample.time = estimate.as_of;
  if (estimate.stale) return sample;
  sample.raw_speed = params.variant() == Variant::Gud
                         ? gud_speed(estimate.step_frequency, params.user_height())
                         : shef_speed(estimate.step_frequency, params.user_height(),
                                      estimate.step_height);
  sample.output_speed =
      apply_gain(sample.raw_speed, params.speed_gain(), params.natural_visual_gain());
  return sample;
}

double gud_frequency_for(double speed, double user_height) {
  check_height(user_height);
  if (!(speed >= 0.0)) return 0.0;
  return WipParams::kRefFrequency * std::sqrt(speed) *
         (WipParams::kRefUserHeight / user_height);
}

void shef_speed_batch(std::span<const double> frequency, std::span<const double> user_height,
                      std::span<const double> step_height, std::span<double> out) {
  check_batch(frequency.size(), user_height.size(), step_height.size(), out.size());
  const auto n = static_cast<std::ptrdiff_t>(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    out[i] = shef_unchecked(frequency[i], user_height[i], step_height[i]);
  }
}

void shef_speed_batch_serial(std::span<const double> frequency,
                             std::span<const double> user_height,
                             std::span<const double> step_height, std::span<double> out) {
  check_batch(frequency.size(), user_height.size(), step_height.size(), out.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = shef_unchecked(frequency[i], user_height[i], step_height[i]);
  }
}

}  // namespace wip
