#include "guitune/tuner.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "guitune/error.hpp"

namespace guitune {

namespace {

nlohmann::json preview_json(const SpectrumPreview& p) {
  return {{"frequency", p.frequency}, {"magnitude", p.magnitude}};
}

void write_block(std::ostream& out, const char* title, const Spectrum<double>& s) {
  out << "# " << title << " (frequency_hz magnitude)\n";
  char line[64];
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    std::snprintf(line, sizeof line, "%.4f %.9g\n", s.frequency(k), s.magnitudes(k));
    out << line;
  }
}

}  // namespace

TuningResult analyze(const SampleBuffer<double>& buffer, GuitarString string, const TurnCalibration& calibration,
                     const AnalysisConfig& analysis, const HarmonicConfig& harmonic) {
  TuningResult result;
  result.pitch = detect_fundamental(buffer, analysis, harmonic);
  result.advice = advise(string, result.pitch.fundamental, calibration);
  return result;
}

CliReport CliReport::from(const TuningAdvice& advice) {
  CliReport r;
  r.string = std::string(name(advice.string));
  r.detected = advice.detected;
  r.target = advice.target;
  r.cents = advice.cents;
  r.degrees = advice.degrees;
  r.direction = std::string(to_string(advice.direction));
  r.clamped = advice.clamped;
  return r;
}

nlohmann::json to_json(const CliReport& report) {
  return {{"v", kProtocolVersion},   {"string", report.string}, {"detected", report.detected},
          {"target", report.target}, {"cents", report.cents},   {"degrees", report.degrees},
          {"direction", report.direction}, {"clamped", report.clamped}};
}

CliReport cli_report_from_json(const nlohmann::json& record) {
  if (record.at("v").get<int>() != kProtocolVersion) throw ParseError("unsupported report version");
  CliReport r;
  r.string = record.at("string").get<std::string>();
  r.detected = record.at("detected").get<double>();
  r.target = record.at("target").get<double>();
  r.cents = record.at("cents").get<double>();
  r.degrees = record.at("degrees").get<double>();
  r.direction = record.at("direction").get<std::string>();
  r.clamped = record.at("clamped").get<bool>();
  return r;
}

std::string to_text(const CliReport& report) {
  char buffer[256];
  std::snprintf(buffer, sizeof buffer, "string    %s (target %.1f Hz)\ndetected  %.2f Hz (%+.1f cents)\n",
                report.string.c_str(), report.target, report.detected, report.cents);
  std::string text = buffer;
  if (report.direction == "in_tune") {
    text += "advice    in tune\n";
  } else {
    std::snprintf(buffer, sizeof buffer, "advice    %s: turn %s %.0f degrees%s\n", report.direction.c_str(),
                  report.degrees > 0 ? "clockwise" : "anticlockwise", std::abs(report.degrees),
                  report.clamped ? " (large correction, retest after turning)" : "");
    text += buffer;
  }
  return text;
}

SpectrumPreview preview(const Spectrum<double>& spectrum, std::size_t max_points) {
  if (max_points == 0) throw InvalidArgument("preview needs at least one point");
  SpectrumPreview out;
  const auto n = static_cast<std::size_t>(spectrum.size());
  if (n == 0) return out;

  const std::size_t group = (n + max_points - 1) / max_points;
  const double peak = spectrum.magnitudes.maxCoeff();
  const double scale = peak > 0.0 ? 1.0 / peak : 1.0;
  for (std::size_t start = 0; start < n; start += group) {
    const auto first = static_cast<Eigen::Index>(start);
    const auto last = static_cast<Eigen::Index>(std::min(start + group, n) - 1);
    const Eigen::Index best = argmax(spectrum.magnitudes, first, last);
    out.frequency.push_back(spectrum.frequency(best));
    out.magnitude.push_back(spectrum.magnitudes(best) * scale);
  }
  return out;
}

nlohmann::json result_message(const TuningResult& result) {
  nlohmann::json message = to_json(CliReport::from(result.advice));
  message["type"] = "result";
  message["raw_spectrum"] = preview_json(preview(result.pitch.raw_spectrum));
  message["harmonic_sum_spectrum"] = preview_json(preview(result.pitch.harmonic_sum_spectrum));
  return message;
}

void save_spectra(const std::filesystem::path& path, const PitchEstimate<double>& pitch) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  write_block(out, "raw", pitch.raw_spectrum);
  out << "\n\n";
  write_block(out, "harmonic_sum", pitch.harmonic_sum_spectrum);
}

}  // namespace guitune
