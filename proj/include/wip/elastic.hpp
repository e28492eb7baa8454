#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "wip/core.hpp"

namespace wip {

enum class BandDirection : std::uint8_t { None, Upward, Downward };

std::string_view to_string(BandDirection direction);
BandDirection parse_direction(std::string_view text);

constexpr double kKgfToNewton = 9.81;

/// Passive rubber-band rig attached to the shoe strap.
///
/// Downward bands run from a floor hook and are taut with the foot on the
/// ground, so extension equals foot height. Upward bands hang from a rod hook
/// `anchor_distance` above the strap; extension shrinks as the foot rises and
/// the band goes slack once the strap reaches the hook.
class ElasticRig {
 public:
  static constexpr double kCoeffSlope = 0.011;       // kgf per cm
  static constexpr double kCoeffIntercept = 0.085;   // kgf
  static constexpr double kValidExtensionMax = 25.0; // cm
  static constexpr double kAnchorDistance = 39.0;    // cm
  static constexpr double kFoldedBandLength = 6.0;   // cm

  ElasticRig() = default;
  ElasticRig(BandDirection direction, int band_count);

  static ElasticRig none() { return {}; }

  BandDirection direction() const { return direction_; }
  int band_count() const { return band_count_; }
  double coeff_slope() const { return coeff_slope_; }
  double coeff_intercept() const { return coeff_intercept_; }
  double valid_extension_max() const { return valid_extension_max_; }
  double anchor_distance() const { return anchor_distance_; }
  double folded_band_length() const { return folded_band_length_; }

  /// "none", "up:6", "down:4".
  std::string describe() const;
  static ElasticRig parse(std::string_view text);

 private:
  BandDirection direction_ = BandDirection::None;
  int band_count_ = 0;
  double coeff_slope_ = kCoeffSlope;
  double coeff_intercept_ = kCoeffIntercept;
  double valid_extension_max_ = kValidExtensionMax;
  double anchor_distance_ = kAnchorDistance;
  double folded_band_length_ = kFoldedBandLength;
};

struct ForceReading {
  double magnitude = 0.0;  // N
  int direction_sign = 0;  // +1 up, -1 down, 0 none
  bool extrapolated = false;
  double extension_cm = 0.0;

  /// Positive when the rig pulls the foot toward the ground.
  double net_downward() const { return -direction_sign * magnitude; }
};

/// Single-band force in kgf for an extension in cm (linear law).
double band_force_kgf(double extension_cm);

/// Band extension in cm for a given foot height; 0 for a slack or absent rig.
double band_extension_cm(BandDirection direction, double foot_height);

ForceReading rig_force(const ElasticRig& rig, double foot_height);

/// Smallest band count whose total force reaches `target_kgf` at the foot height.
int bands_for_target(BandDirection direction, double target_kgf, double at_foot_height);

/// Foot height used to define the force levels of each mounting direction.
double calibration_height(BandDirection direction);

struct BandCalibration {
  double target_kgf = 0.0;
  double foot_height = 0.0;  // m
  int bands = 0;
  double achieved_kgf = 0.0;
};

/// bands_for_target for each force at the direction's calibration height.
std::vector<BandCalibration> calibrate_bands(BandDirection direction,
                                             const std::vector<double>& targets_kgf);

struct ForceCondition {
  std::string name;  // e.g. "down-weak"
  ElasticRig rig;
  double nominal_kgf = 0.0;
};

/// The seven elastic conditions: control plus weak/middle/strong per direction.
std::vector<ForceCondition> force_conditions();

}  // namespace wip
