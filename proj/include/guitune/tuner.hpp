#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "guitune/advisor.hpp"
#include "guitune/pitch.hpp"

namespace guitune {

/// Version tag carried by every structured record ("v").
inline constexpr int kProtocolVersion = 1;

/// Everything one analysis of one pluck produces.
struct TuningResult {
  PitchEstimate<double> pitch;
  TuningAdvice advice;
};

/// detect_fundamental followed by advise.
TuningResult analyze(const SampleBuffer<double>& buffer, GuitarString string,
                     const TurnCalibration& calibration = {}, const AnalysisConfig& analysis = {},
                     const HarmonicConfig& harmonic = {});

/// Flat record the CLI prints.
struct CliReport {
  std::string string;
  double detected = 0.0;
  double target = 0.0;
  double cents = 0.0;
  double degrees = 0.0;
  std::string direction;
  bool clamped = false;

  static CliReport from(const TuningAdvice& advice);
};

nlohmann::json to_json(const CliReport& report);
CliReport cli_report_from_json(const nlohmann::json& record);
std::string to_text(const CliReport& report);

struct SpectrumPreview {
  std::vector<double> frequency;
  std::vector<double> magnitude;
};

inline constexpr std::size_t kMaxPreviewPoints = 2048;

/// Max-pools equal groups of bins down to at most `max_points`; each point
/// carries the frequency of its group's peak bin. Magnitudes are scaled to
/// peak 1 (all-zero spectra stay zero).
SpectrumPreview preview(const Spectrum<double>& spectrum, std::size_t max_points = kMaxPreviewPoints);

/// Server -> client "result" message.
nlohmann::json result_message(const TuningResult& result);

/// Two-column "frequency magnitude" text: raw spectrum block, blank lines,
/// harmonic-sum block. Each block starts with a `# name` comment.
void save_spectra(const std::filesystem::path& path, const PitchEstimate<double>& pitch);

}  // namespace guitune
