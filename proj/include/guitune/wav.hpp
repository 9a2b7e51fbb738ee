#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "guitune/dsp.hpp"

namespace guitune {

struct WavDescriptor {
  int sample_rate = 0;
  int channels = 0;
  int bits_per_sample = 0;
  std::size_t num_frames = 0;
};

/// Rates a WAV file (or capture device) may deliver; all converge to 8000 Hz.
inline constexpr std::array<int, 3> kSupportedRates{8000, 16000, 48000};
inline constexpr int kCanonicalRate = 8000;

/// Header fields of a RIFF/WAVE file; throws ParseError on a malformed container.
WavDescriptor inspect_wav(std::span<const std::byte> bytes);

/// Decodes mono 16-bit PCM, samples / 32768. 16 kHz and 48 kHz input is
/// decimated to 8 kHz. Throws ParseError, UnsupportedFormat or UnsupportedRate.
SampleBuffer<double> read_wav(std::span<const std::byte> bytes);
SampleBuffer<double> read_wav_file(const std::filesystem::path& path);

/// Mono 16-bit PCM at the buffer's rate; samples are rounded and clipped to int16.
std::vector<std::byte> write_wav(const SampleBuffer<double>& buffer);
void write_wav_file(const std::filesystem::path& path, const SampleBuffer<double>& buffer);

/// Brings a buffer at a supported rate down to 8000 Hz (identity at 8000).
SampleBuffer<double> to_canonical_rate(const SampleBuffer<double>& buffer);

}  // namespace guitune
