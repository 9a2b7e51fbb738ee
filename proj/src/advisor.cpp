#include "guitune/advisor.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "guitune/error.hpp"

namespace guitune {

namespace {

std::string_view trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

TurnCalibration::TurnCalibration() : TurnCalibration({0.022, 0.025, 0.028, 0.067, 0.075, 0.083}) {}

TurnCalibration::TurnCalibration(const std::array<double, 6>& rates_by_string_6_to_1)
    : rates_(rates_by_string_6_to_1) {
  validate();
}

void TurnCalibration::validate() const {
  for (std::size_t i = 0; i < rates_.size(); ++i) {
    if (!(rates_[i] > 0.0) || !std::isfinite(rates_[i]))
      throw InvalidArgument("turn rates must be positive and finite");
    if (i > 0 && rates_[i] < rates_[i - 1])
      throw InvalidArgument("turn rates must not decrease from string 6 to string 1");
  }
}

TurnCalibration TurnCalibration::parse(std::string_view text) {
  std::array<double, 6> rates = TurnCalibration().rates_;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto newline = text.find('\n');
    std::string_view line = text.substr(0, newline);
    text = newline == std::string_view::npos ? std::string_view{} : text.substr(newline + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    const auto where = " on calibration line " + std::to_string(line_no);
    if (eq == std::string_view::npos) throw ParseError("expected 'string = rate'" + where);
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));

    int number = 0;
    if (auto [p, ec] = std::from_chars(key.data(), key.data() + key.size(), number);
        ec != std::errc{} || p != key.data() + key.size() || number < 1 || number > 6)
      throw ParseError("string number must be 1-6" + where);
    double rate = 0.0;
    if (auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), rate);
        ec != std::errc{} || p != value.data() + value.size())
      throw ParseError("rate is not a number" + where);

    rates[static_cast<std::size_t>(6 - number)] = rate;
  }
  return TurnCalibration(rates);
}

TurnCalibration TurnCalibration::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open calibration file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse(text.str());
}

std::string_view to_string(Direction direction) {
  switch (direction) {
    case Direction::tighten: return "tighten";
    case Direction::loosen: return "loosen";
    case Direction::in_tune: return "in_tune";
  }
  return "?";
}

double turn_rate(GuitarString string, const TurnCalibration& calibration) { return calibration.rate(string); }

TuningAdvice advise(GuitarString string, double detected, const TurnCalibration& calibration) {
  if (!(detected > 0.0)) throw InvalidArgument("detected frequency must be positive");

  TuningAdvice advice;
  advice.string = string;
  advice.detected = detected;
  advice.target = string_target(string);
  advice.cents = cents_offset(detected, advice.target);

  const double delta = advice.target - detected;
  if (std::abs(delta) <= kInTuneThresholdHz) return advice;

  advice.direction = delta > 0.0 ? Direction::tighten : Direction::loosen;
  advice.degrees = delta / calibration.rate(string);
  if (std::abs(advice.degrees) > kMaxTurnDegrees) {
    advice.degrees = std::copysign(kMaxTurnDegrees, advice.degrees);
    advice.clamped = true;
  }
  return advice;
}

}  // namespace guitune
