#pragma once

#include <cmath>
#include <complex>
#include <utility>

#include <Eigen/Core>
#include <unsupported/Eigen/FFT>

#include "guitune/error.hpp"

namespace guitune {

template <typename Scalar>
using Signal = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

/// Time-domain audio: real amplitudes (nominally in [-1, 1]) at an integer rate.
template <typename Scalar = double>
struct SampleBuffer {
  Signal<Scalar> samples;
  int sample_rate = 0;

  SampleBuffer() = default;
  SampleBuffer(Signal<Scalar> s, int rate) : samples(std::move(s)), sample_rate(rate) {
    if (rate <= 0) throw InvalidArgument("sample rate must be positive");
  }

  Eigen::Index size() const { return samples.size(); }
  bool empty() const { return samples.size() == 0; }
  double duration() const { return static_cast<double>(samples.size()) / sample_rate; }
};

enum class SpectrumKind { raw, normalized, harmonic_sum };

inline const char* to_string(SpectrumKind kind) {
  switch (kind) {
    case SpectrumKind::raw: return "raw";
    case SpectrumKind::normalized: return "normalized";
    case SpectrumKind::harmonic_sum: return "harmonic_sum";
  }
  return "?";
}

/// One-sided magnitude spectrum. Bin k sits at k * bin_resolution Hz.
template <typename Scalar = double>
struct Spectrum {
  Signal<Scalar> magnitudes;
  double bin_resolution = 0.0;
  SpectrumKind kind = SpectrumKind::raw;

  Eigen::Index size() const { return magnitudes.size(); }
  double frequency(Eigen::Index bin) const { return static_cast<double>(bin) * bin_resolution; }
};

struct FrequencyBand {
  double low = 75.0;
  double high = 500.0;
};

struct AnalysisConfig {
  int sample_rate = 8000;
  double capture_duration = 2.0;
  FrequencyBand search_band{};

  /// sample_rate * capture_duration; throws if that is not an integer >= 2.
  Eigen::Index sample_count() const {
    const double n = sample_rate * capture_duration;
    const double rounded = std::round(n);
    if (std::abs(n - rounded) > 1e-9 * std::max(1.0, n) || rounded < 2.0)
      throw InvalidArgument("sample_rate * capture_duration must be an integer >= 2");
    return static_cast<Eigen::Index>(rounded);
  }

  void validate() const {
    if (sample_rate <= 0) throw InvalidArgument("sample rate must be positive");
    (void)sample_count();
    const double nyquist = sample_rate / 2.0;
    if (!(search_band.low < search_band.high) || search_band.low < 0.0 || search_band.high > nyquist)
      throw InvalidArgument("search band must satisfy 0 <= low < high <= sample_rate/2");
  }
};

/// Spacing of the transform bins: sample_rate / num_samples.
inline double bin_resolution(double sample_rate, Eigen::Index num_samples) {
  if (num_samples <= 0) throw InvalidArgument("bin_resolution: sample count must be positive");
  if (!(sample_rate > 0.0)) throw InvalidArgument("bin_resolution: sample rate must be positive");
  return sample_rate / static_cast<double>(num_samples);
}

/// |DFT| over bins 0..N/2 of the whole buffer, rectangular frame, no padding.
/// Magnitudes are the unscaled DFT sums, so the result is linear in amplitude.
template <typename Scalar>
Spectrum<Scalar> magnitude_spectrum(const SampleBuffer<Scalar>& buffer) {
  if (buffer.empty()) throw InvalidArgument("magnitude_spectrum: empty buffer");
  const Eigen::Index n = buffer.size();

  Spectrum<Scalar> out;
  out.bin_resolution = bin_resolution(buffer.sample_rate, n);
  out.kind = SpectrumKind::raw;
  if (n == 1) {
    out.magnitudes = buffer.samples.abs();
    return out;
  }

  Eigen::FFT<Scalar> fft;
  fft.SetFlag(Eigen::FFT<Scalar>::HalfSpectrum);
  Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1> bins;
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> frame = buffer.samples.matrix();
  fft.fwd(bins, frame);
  out.magnitudes = bins.array().abs().head(n / 2 + 1);
  return out;
}

/// Scales so the largest magnitude is 1. All-zero spectra come back unchanged.
template <typename Scalar>
Spectrum<Scalar> normalize(const Spectrum<Scalar>& spectrum) {
  Spectrum<Scalar> out = spectrum;
  out.kind = SpectrumKind::normalized;
  if (out.size() == 0) return out;
  const Scalar peak = out.magnitudes.maxCoeff();
  if (peak > Scalar(0)) out.magnitudes /= peak;
  return out;
}

/// Index of the largest entry in [first, last]; ties go to the lowest index.
template <typename Derived>
Eigen::Index argmax(const Eigen::DenseBase<Derived>& values, Eigen::Index first, Eigen::Index last) {
  Eigen::Index best = first;
  for (Eigen::Index k = first + 1; k <= last; ++k)
    if (values(k) > values(best)) best = k;
  return best;
}

template <typename Derived>
Eigen::Index argmax(const Eigen::DenseBase<Derived>& values) {
  return argmax(values, 0, values.size() - 1);
}

}  // namespace guitune
