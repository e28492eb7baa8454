#include "wip/core.hpp"

#include <cmath>
#include <sstream>

namespace wip {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonMonotonicTime: return "NonMonotonicTime";
    case ErrorCode::OutOfRangeHeight: return "OutOfRangeHeight";
    case ErrorCode::InvalidParams: return "InvalidParams";
    case ErrorCode::NonPositiveHeight: return "NonPositiveHeight";
    case ErrorCode::NonPositiveGain: return "NonPositiveGain";
    case ErrorCode::NegativeExtension: return "NegativeExtension";
    case ErrorCode::ZeroExtension: return "ZeroExtension";
    case ErrorCode::InvalidDirection: return "InvalidDirection";
    case ErrorCode::InvalidRate: return "InvalidRate";
    case ErrorCode::DivergedSimulation: return "DivergedSimulation";
    case ErrorCode::NonTermination: return "NonTermination";
    case ErrorCode::WrongArity: return "WrongArity";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

char to_char(Foot foot) { return foot == Foot::Left ? 'L' : 'R'; }

Foot other(Foot foot) { return foot == Foot::Left ? Foot::Right : Foot::Left; }

FootSample validate_sample(const FootSample& sample,
                           std::optional<double> previous_time) {
  if (!std::isfinite(sample.time) || sample.time < 0.0) {
    std::ostringstream msg;
    msg << "sample time " << sample.time << " s is not a finite non-negative value";
    throw Error(ErrorCode::NonMonotonicTime, msg.str());
  }
  if (previous_time && sample.time <= *previous_time) {
    std::ostringstream msg;
    msg << "foot " << to_char(sample.foot) << " sample at t=" << sample.time
        << " s does not follow previous t=" << *previous_time << " s";
    throw Error(ErrorCode::NonMonotonicTime, msg.str());
  }
  if (!std::isfinite(sample.height) || sample.height < kMinHeight ||
      sample.height > kMaxHeight) {
    std::ostringstream msg;
    msg << "foot " << to_char(sample.foot) << " height " << sample.height
        << " m outside [" << kMinHeight << ", " << kMaxHeight << "]";
    throw Error(ErrorCode::OutOfRangeHeight, msg.str());
  }
  return sample;
}

std::string_view to_string(Variant variant) {
  return variant == Variant::Gud ? "gud" : "shef";
}

Variant parse_variant(std::string_view text) {
  if (text == "gud" || text == "GUD" || text == "Gud") return Variant::Gud;
  if (text == "shef" || text == "SHEF" || text == "Shef") return Variant::Shef;
  throw Error(ErrorCode::ParseError, "unknown variant '" + std::string(text) + "'");
}

WipParams::WipParams(Variant variant, double user_height, double speed_gain,
                     double natural_visual_gain)
    : variant_(variant),
      user_height_(user_height),
      speed_gain_(speed_gain),
      natural_visual_gain_(natural_visual_gain) {
  set_user_height(user_height);
  set_speed_gain(speed_gain);
  set_natural_visual_gain(natural_visual_gain);
}

void WipParams::set_user_height(double meters) {
  if (!(meters >= 1.0 && meters <= 2.5)) {
    throw Error(ErrorCode::InvalidParams,
                "user height " + std::to_string(meters) + " m outside [1.0, 2.5]");
  }
  user_height_ = meters;
}

void WipParams::set_speed_gain(double gain) {
  if (!(gain > 0.0) || !std::isfinite(gain)) {
    throw Error(ErrorCode::NonPositiveGain, "speed gain must be positive");
  }
  speed_gain_ = gain;
}

void WipParams::set_natural_visual_gain(double gain) {
  if (!(gain > 0.0) || !std::isfinite(gain)) {
    throw Error(ErrorCode::NonPositiveGain, "natural visual gain must be positive");
  }
  natural_visual_gain_ = gain;
}

}  // namespace wip
