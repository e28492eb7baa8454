#include "wip/elastic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace wip {

std::string_view to_string(BandDirection direction) {
  switch (direction) {
    case BandDirection::None: return "none";
    case BandDirection::Upward: return "up";
    case BandDirection::Downward: return "down";
  }
  return "none";
}

BandDirection parse_direction(std::string_view text) {
  if (text == "none") return BandDirection::None;
  if (text == "up" || text == "upward") return BandDirection::Upward;
  if (text == "down" || text == "downward") return BandDirection::Downward;
  throw Error(ErrorCode::InvalidDirection,
              "unknown band direction '" + std::string(text) + "' (expected none|up|down)");
}

ElasticRig::ElasticRig(BandDirection direction, int band_count)
    : direction_(direction), band_count_(band_count) {
  if (band_count < 0) {
    throw Error(ErrorCode::InvalidParams, "band count must be non-negative");
  }
  if ((band_count == 0) != (direction == BandDirection::None)) {
    throw Error(ErrorCode::InvalidParams,
                "band count must be zero exactly when the rig has no direction");
  }
}

std::string ElasticRig::describe() const {
  if (direction_ == BandDirection::None) return "none";
  return std::string(to_string(direction_)) + ":" + std::to_string(band_count_);
}

ElasticRig ElasticRig::parse(std::string_view text) {
  const auto colon = text.find(':');
  const BandDirection direction = parse_direction(text.substr(0, colon));
  if (direction == BandDirection::None) {
    if (colon != std::string_view::npos && text.substr(colon + 1) != "0") {
      throw Error(ErrorCode::InvalidParams, "rig 'none' takes no bands");
    }
    return {};
  }
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::ParseError,
                "rig '" + std::string(text) + "' needs a band count, e.g. down:4");
  }
  const auto count_text = text.substr(colon + 1);
  int count = 0;
  const auto [ptr, ec] =
      std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
  if (ec != std::errc{} || ptr != count_text.data() + count_text.size() || count <= 0) {
    throw Error(ErrorCode::ParseError, "invalid band count in '" + std::string(text) + "'");
  }
  return {direction, count};
}

double band_force_kgf(double extension_cm) {
  if (!(extension_cm >= 0.0)) {
    throw Error(ErrorCode::NegativeExtension,
                "band extension must be non-negative, got " + std::to_string(extension_cm));
  }
  return ElasticRig::kCoeffSlope * extension_cm + ElasticRig::kCoeffIntercept;
}

double band_extension_cm(BandDirection direction, double foot_height) {
  if (foot_height < kMinHeight) {
    throw Error(ErrorCode::OutOfRangeHeight, "foot height below ground tolerance");
  }
  const double height_cm = std::max(0.0, foot_height) * 100.0;
  switch (direction) {
    case BandDirection::None: return 0.0;
    case BandDirection::Downward: return height_cm;
    case BandDirection::Upward: return std::max(0.0, ElasticRig::kAnchorDistance - height_cm);
  }
  return 0.0;
}

ForceReading rig_force(const ElasticRig& rig, double foot_height) {
  ForceReading reading;
  if (rig.direction() == BandDirection::None) return reading;

  reading.extension_cm = band_extension_cm(rig.direction(), foot_height);
  reading.direction_sign = rig.direction() == BandDirection::Upward ? +1 : -1;
  // A slack upward band pulls nothing; downward bands stay taut at e = 0.
  if (rig.direction() == BandDirection::Upward && reading.extension_cm <= 0.0) {
    return reading;
  }
  reading.extrapolated = reading.extension_cm > rig.valid_extension_max();
  reading.magnitude =
      rig.band_count() * band_force_kgf(reading.extension_cm) * kKgfToNewton;
  return reading;
}

int bands_for_target(BandDirection direction, double target_kgf, double at_foot_height) {
  if (direction == BandDirection::None) {
    throw Error(ErrorCode::InvalidDirection, "a rig without bands cannot reach a force");
  }
  if (!(target_kgf > 0.0) || !std::isfinite(target_kgf)) {
    throw Error(ErrorCode::InvalidParams, "target force must be positive");
  }
  const double extension = band_extension_cm(direction, at_foot_height);
  if (direction == BandDirection::Upward && extension <= 0.0) {
    throw Error(ErrorCode::ZeroExtension,
                "upward bands are slack at this foot height; no force attainable");
  }
  const double per_band = band_force_kgf(extension);
  int count = static_cast<int>(std::ceil(target_kgf / per_band));
  // Guard the ceil against division rounding at exact multiples.
  while (count > 1 && (count - 1) * per_band >= target_kgf) --count;
  while (count * per_band < target_kgf) ++count;
  return count;
}

double calibration_height(BandDirection direction) {
  return direction == BandDirection::Downward ? 0.156 : 0.0;
}

std::vector<BandCalibration> calibrate_bands(BandDirection direction,
                                             const std::vector<double>& targets_kgf) {
  const double height = calibration_height(direction);
  std::vector<BandCalibration> out;
  out.reserve(targets_kgf.size());
  for (double target : targets_kgf) {
    const int bands = bands_for_target(direction, target, height);
    out.push_back({target, height, bands,
                   bands * band_force_kgf(band_extension_cm(direction, height))});
  }
  return out;
}

std::vector<ForceCondition> force_conditions() {
  std::vector<ForceCondition> out;
  out.push_back({"control", ElasticRig::none(), 0.0});
  const struct {
    BandDirection direction;
    const char* prefix;
    double levels[3];
  } table[] = {
      {BandDirection::Downward, "down", {1.0, 2.0, 3.0}},
      {BandDirection::Upward, "up", {1.0, 3.0, 5.0}},
  };
  const char* names[] = {"weak", "middle", "strong"};
  for (const auto& row : table) {
    for (int i = 0; i < 3; ++i) {
      const int bands =
          bands_for_target(row.direction, row.levels[i], calibration_height(row.direction));
      out.push_back({std::string(row.prefix) + "-" + names[i],
                     ElasticRig(row.direction, bands), row.levels[i]});
    }
  }
  return out;
}

}  // namespace wip
