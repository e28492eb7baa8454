#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wip {

enum class ErrorCode {
  NonMonotonicTime,
  OutOfRangeHeight,
  InvalidParams,
  NonPositiveHeight,
  NonPositiveGain,
  NegativeExtension,
  ZeroExtension,
  InvalidDirection,
  InvalidRate,
  DivergedSimulation,
  NonTermination,
  WrongArity,
  EmptyWindow,
  ParseError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the engine; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

enum class Foot : std::uint8_t { Left = 0, Right = 1 };

constexpr std::size_t kFootCount = 2;

constexpr std::size_t index(Foot foot) { return static_cast<std::size_t>(foot); }
char to_char(Foot foot);
Foot other(Foot foot);

struct FootSample {
  double time = 0.0;    // s
  Foot foot = Foot::Left;
  double height = 0.0;  // m above the ground plane
};

constexpr double kMinHeight = -0.005;
constexpr double kMaxHeight = 2.0;

/// Returns the sample unchanged or throws NonMonotonicTime / OutOfRangeHeight.
/// `previous_time` is the last accepted time for the same foot, if any.
FootSample validate_sample(const FootSample& sample,
                           std::optional<double> previous_time);

enum class Variant : std::uint8_t { Gud, Shef };

std::string_view to_string(Variant variant);
Variant parse_variant(std::string_view text);

/// Constants and runtime knobs of the speed laws.
///
/// The three reference values are fixed when the object is built; only the
/// user height, variant and gains can change afterwards, and every setter
/// re-validates.
class WipParams {
 public:
  static constexpr double kRefFrequency = 1.57;    // Hz
  static constexpr double kRefUserHeight = 1.72;   // m
  static constexpr double kRefStepHeight = 0.1;    // m
  static constexpr double kNaturalVisualGain = 2.02;

  explicit WipParams(Variant variant = Variant::Shef, double user_height = kRefUserHeight,
                     double speed_gain = 1.0, double natural_visual_gain = 1.0);

  double ref_frequency() const { return ref_frequency_; }
  double ref_user_height() const { return ref_user_height_; }
  double ref_step_height() const { return ref_step_height_; }

  Variant variant() const { return variant_; }
  double user_height() const { return user_height_; }
  double speed_gain() const { return speed_gain_; }
  double natural_visual_gain() const { return natural_visual_gain_; }

  void set_variant(Variant variant) { variant_ = variant; }
  void set_user_height(double meters);
  void set_speed_gain(double gain);
  void set_natural_visual_gain(double gain);

 private:
  double ref_frequency_ = kRefFrequency;
  double ref_user_height_ = kRefUserHeight;
  double ref_step_height_ = kRefStepHeight;
  Variant variant_;
  double user_height_;
  double speed_gain_;
  double natural_visual_gain_;
};

struct GaitEstimate {
  double step_frequency = 0.0;  // Hz, footfalls of both feet
  double step_height = 0.0;     // m
  double as_of = 0.0;           // s
  bool stale = true;
};

}  // namespace wip
