#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "guitune/dsp.hpp"

namespace guitune {

/// A source of mono audio. Implementations block for the length of the recording.
class CaptureDevice {
public:
  virtual ~CaptureDevice() = default;

  virtual bool available() const = 0;
  /// Rates the device can deliver without conversion.
  virtual std::vector<int> native_rates() const = 0;
  /// Exactly `frames` samples at `sample_rate`, or throws DeviceUnavailable.
  virtual SampleBuffer<double> record(int sample_rate, Eigen::Index frames) = 0;
  virtual std::string description() const = 0;
};

/// The host's default input device, driven through ALSA's `arecord`.
class SystemCaptureDevice final : public CaptureDevice {
public:
  bool available() const override;
  std::vector<int> native_rates() const override { return {8000, 48000}; }
  SampleBuffer<double> record(int sample_rate, Eigen::Index frames) override;
  std::string description() const override { return "default input (arecord)"; }
};

/// Plays back a WAV file in place of a microphone. Used to run the tuning
/// flow headless; short files are padded with silence.
class WavFileDevice final : public CaptureDevice {
public:
  explicit WavFileDevice(std::filesystem::path path) : path_(std::move(path)) {}

  bool available() const override;
  std::vector<int> native_rates() const override { return {8000}; }
  SampleBuffer<double> record(int sample_rate, Eigen::Index frames) override;
  std::string description() const override { return "fixture " + path_.string(); }

private:
  std::filesystem::path path_;
};

class NoCaptureDevice final : public CaptureDevice {
public:
  bool available() const override { return false; }
  std::vector<int> native_rates() const override { return {}; }
  SampleBuffer<double> record(int, Eigen::Index) override;
  std::string description() const override { return "none"; }
};

/// Records `duration` seconds (0.5-4 s) at analysis.sample_rate. Devices
/// without that rate are recorded at 48 kHz and decimated. Only one capture
/// may run per process; a second concurrent call throws Busy.
SampleBuffer<double> capture(double duration, const AnalysisConfig& analysis, CaptureDevice& device);

}  // namespace guitune
