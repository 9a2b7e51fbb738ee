#pragma once

#include <array>
#include <filesystem>
#include <string_view>

#include "guitune/notes.hpp"

namespace guitune {

/// Hz of pitch change per degree of peg rotation, one rate per string.
/// Rates must be positive and non-decreasing from string 6 to string 1.
class TurnCalibration {
public:
  /// Measured defaults: 4, 4.5, 5, 12, 13.5, 15 Hz per 180 degrees, strings 6..1.
  TurnCalibration();
  explicit TurnCalibration(const std::array<double, 6>& rates_by_string_6_to_1);

  double rate(GuitarString string) const { return rates_[static_cast<std::size_t>(string)]; }

  /// Parses the key-value override format (see README): one `N = rate` per
  /// line, N a string number 1-6, `#` starts a comment. Strings not listed
  /// keep their default rate.
  static TurnCalibration parse(std::string_view text);
  static TurnCalibration from_file(const std::filesystem::path& path);

private:
  void validate() const;

  std::array<double, 6> rates_;  // indexed by GuitarString (E2 .. E4)
};

enum class Direction { tighten, loosen, in_tune };

std::string_view to_string(Direction direction);

inline constexpr double kInTuneThresholdHz = 0.5;
inline constexpr double kMaxTurnDegrees = 720.0;

struct TuningAdvice {
  GuitarString string = GuitarString::E2;
  double detected = 0.0;
  double target = 0.0;
  double cents = 0.0;
  double degrees = 0.0;  // positive = clockwise = tighten
  Direction direction = Direction::in_tune;
  bool clamped = false;

  bool operator==(const TuningAdvice&) const = default;
};

double turn_rate(GuitarString string, const TurnCalibration& calibration = {});

/// degrees = (target - detected) / rate, clamped to +-720. Within 0.5 Hz of
/// the target the string is in tune and degrees is 0.
TuningAdvice advise(GuitarString string, double detected, const TurnCalibration& calibration = {});

}  // namespace guitune
