#include "guitune/capture.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <string>

#include "guitune/audio.hpp"
#include "guitune/error.hpp"
#include "guitune/pitch.hpp"
#include "guitune/wav.hpp"

namespace guitune {

namespace {

std::mutex& capture_lock() {
  static std::mutex lock;
  return lock;
}

bool supports(const CaptureDevice& device, int rate) {
  const auto rates = device.native_rates();
  return std::find(rates.begin(), rates.end(), rate) != rates.end();
}

}  // namespace

bool SystemCaptureDevice::available() const {
  // `arecord -l` exits non-zero when ALSA is missing; an empty card list prints nothing useful.
  FILE* pipe = ::popen("arecord -l 2>/dev/null", "r");
  if (pipe == nullptr) return false;
  std::string listing;
  char chunk[256];
  while (std::fgets(chunk, sizeof chunk, pipe) != nullptr) listing += chunk;
  const int status = ::pclose(pipe);
  return status == 0 && listing.find("card ") != std::string::npos;
}

SampleBuffer<double> SystemCaptureDevice::record(int sample_rate, Eigen::Index frames) {
  if (!available()) throw DeviceUnavailable("no audio input device found (is ALSA's arecord installed?)");
  const std::string command = "arecord -q -t raw -f S16_LE -c 1 -r " + std::to_string(sample_rate) + " -s " +
                              std::to_string(frames) + " - 2>/dev/null";
  FILE* pipe = ::popen(command.c_str(), "r");
  if (pipe == nullptr) throw DeviceUnavailable("could not start arecord");

  std::vector<std::int16_t> pcm(static_cast<std::size_t>(frames));
  const std::size_t got = std::fread(pcm.data(), sizeof(std::int16_t), pcm.size(), pipe);
  ::pclose(pipe);
  if (got != pcm.size()) throw DeviceUnavailable("recording ended early");

  Eigen::ArrayXd samples(frames);
  for (Eigen::Index i = 0; i < frames; ++i) samples(i) = pcm[static_cast<std::size_t>(i)] / 32768.0;
  return SampleBuffer<double>(std::move(samples), sample_rate);
}

bool WavFileDevice::available() const { return std::filesystem::is_regular_file(path_); }

SampleBuffer<double> WavFileDevice::record(int sample_rate, Eigen::Index frames) {
  if (!available()) throw DeviceUnavailable("fixture file " + path_.string() + " not found");
  const auto clip = read_wav_file(path_);
  if (clip.sample_rate != sample_rate)
    throw UnsupportedRate("fixture delivers " + std::to_string(clip.sample_rate) + " Hz, asked for " +
                          std::to_string(sample_rate) + " Hz");
  Eigen::ArrayXd samples = Eigen::ArrayXd::Zero(frames);
  const Eigen::Index kept = std::min(frames, clip.size());
  samples.head(kept) = clip.samples.head(kept);
  return SampleBuffer<double>(std::move(samples), sample_rate);
}

SampleBuffer<double> NoCaptureDevice::record(int, Eigen::Index) {
  throw DeviceUnavailable("no capture device configured");
}

SampleBuffer<double> capture(double duration, const AnalysisConfig& analysis, CaptureDevice& device) {
  if (!(duration >= kMinAnalysisSeconds && duration <= kMaxAnalysisSeconds))
    throw InvalidArgument("capture duration must lie in [0.5 s, 4 s]");
  AnalysisConfig request = analysis;
  request.capture_duration = duration;
  request.validate();
  const Eigen::Index frames = request.sample_count();

  std::unique_lock lock(capture_lock(), std::try_to_lock);
  if (!lock.owns_lock()) throw Busy("a capture is already in progress");
  if (!device.available()) throw DeviceUnavailable("capture device unavailable: " + device.description());

  SampleBuffer<double> buffer;
  if (supports(device, analysis.sample_rate)) {
    buffer = device.record(analysis.sample_rate, frames);
  } else if (constexpr int fallback = 48000; supports(device, fallback) && fallback % analysis.sample_rate == 0) {
    buffer = decimate(device.record(fallback, frames * (fallback / analysis.sample_rate)),
                      fallback / analysis.sample_rate);
  } else {
    throw UnsupportedRate("device cannot deliver " + std::to_string(analysis.sample_rate) + " Hz or 48000 Hz");
  }

  if (buffer.sample_rate != analysis.sample_rate)
    throw UnsupportedRate("device delivered " + std::to_string(buffer.sample_rate) + " Hz");
  if (buffer.size() != frames) throw DeviceUnavailable("device delivered a partial buffer");
  return buffer;
}

}  // namespace guitune
