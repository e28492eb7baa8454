#pragma once

#include <span>

#include "wip/core.hpp"

namespace wip {

struct SpeedSample {
  double time = 0.0;
  double raw_speed = 0.0;     // m/s before gains
  double output_speed = 0.0;  // m/s after gains
};

/// Cadence-and-height law: ((f / 1.57) * (H / 1.72))^2 in m/s.
double gud_speed(double frequency, double user_height);

/// gud_speed scaled by step height relative to the 0.1 m reference.
double shef_speed(double frequency, double user_height, double step_height);

/// v * g * natural_gain.
double apply_gain(double speed, double gain, double natural_gain);

/// Dispatches on the variant and applies both gains. Stale estimates give 0.
SpeedSample output_speed(const WipParams& params, const GaitEstimate& estimate);

/// Step frequency that yields `speed` under gud_speed (inverse of the law).
double gud_frequency_for(double speed, double user_height);

// Batch kernels over parallel arrays. The OpenMP versions and the serial
// references must produce bit-identical results; out.size() must equal the
// input sizes.
void shef_speed_batch(std::span<const double> frequency, std::span<const double> user_height,
                      std::span<const double> step_height, std::span<double> out);
void shef_speed_batch_serial(std::span<const double> frequency,
                             std::span<const double> user_height,
                             std::span<const double> step_height, std::span<double> out);

}  // namespace wip
