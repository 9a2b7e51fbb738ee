#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "guitune/dsp.hpp"
#include "guitune/fir.hpp"

namespace guitune {

struct HarmonicConfig {
  std::vector<int> downsample_factors{2, 3};
  bool use_filter = true;

  void validate() const {
    int previous = 1;
    for (int factor : downsample_factors) {
      if (factor < 2 || factor <= previous)
        throw InvalidArgument("downsample factors must be >= 2 and strictly increasing");
      previous = factor;
    }
  }
};

template <typename Scalar = double>
struct PitchEstimate {
  double fundamental = 0.0;
  Eigen::Index peak_bin = 0;
  double bin_resolution = 0.0;
  Spectrum<Scalar> raw_spectrum;
  Spectrum<Scalar> harmonic_sum_spectrum;
};

/// Bin decimation of the magnitude spectrum: out[k] = in[k * factor], zero
/// padded at the end to the input length. Harmonic `factor` of a partial lands
/// on that partial's bin.
template <typename Scalar>
Spectrum<Scalar> downsample_spectrum(const Spectrum<Scalar>& spectrum, int factor) {
  if (factor < 2) throw InvalidArgument("downsample factor must be >= 2");
  const Eigen::Index n = spectrum.size();
  Spectrum<Scalar> out = spectrum;
  out.magnitudes.setZero();
  const Eigen::Index kept = (n + factor - 1) / factor;
  out.magnitudes.head(kept) =
      Eigen::Map<const Signal<Scalar>, 0, Eigen::InnerStride<>>(spectrum.magnitudes.data(), kept,
                                                                Eigen::InnerStride<>(factor));
  return out;
}

/// spectrum + sum of its bin-decimated copies, element-wise.
template <typename Scalar>
Spectrum<Scalar> harmonic_sum(const Spectrum<Scalar>& spectrum, const HarmonicConfig& config = {}) {
  config.validate();
  if (spectrum.size() == 0) throw InvalidArgument("harmonic_sum: empty spectrum");
  Spectrum<Scalar> out = spectrum;
  out.kind = SpectrumKind::harmonic_sum;
  for (int factor : config.downsample_factors) out.magnitudes += downsample_spectrum(spectrum, factor).magnitudes;
  return out;
}

inline constexpr double kMinAnalysisSeconds = 0.5;
inline constexpr double kMaxAnalysisSeconds = 4.0;

/// Bins [first, last] whose frequencies fall inside the band, clipped to the spectrum.
inline std::optional<std::pair<Eigen::Index, Eigen::Index>> band_bins(const FrequencyBand& band, double resolution,
                                                                      Eigen::Index bins) {
  const auto first = static_cast<Eigen::Index>(std::ceil(band.low / resolution - 1e-9));
  const auto last = std::min<Eigen::Index>(static_cast<Eigen::Index>(std::floor(band.high / resolution + 1e-9)),
                                           bins - 1);
  if (first > last) return std::nullopt;
  return std::make_pair(first, last);
}

/// Fundamental-frequency detection: optional bandpass, magnitude spectrum,
/// normalisation, harmonic sum, then the peak within the search band (lowest
/// bin on ties). `filter` is used when harmonic.use_filter is set; it must
/// match the buffer's rate.
template <typename Scalar>
PitchEstimate<Scalar> detect_fundamental(const SampleBuffer<Scalar>& buffer, const AnalysisConfig& analysis,
                                         const HarmonicConfig& harmonic, const FirFilter<Scalar>& filter) {
  analysis.validate();
  harmonic.validate();
  if (buffer.sample_rate != analysis.sample_rate)
    throw InvalidArgument("buffer sample rate does not match the analysis configuration");
  const double seconds = buffer.duration();
  if (seconds < kMinAnalysisSeconds - 1e-12 || seconds > kMaxAnalysisSeconds + 1e-12)
    throw InvalidArgument("buffer duration must lie in [0.5 s, 4 s]");

  const SampleBuffer<Scalar> input = harmonic.use_filter ? apply(filter, buffer) : buffer;

  PitchEstimate<Scalar> estimate;
  estimate.raw_spectrum = magnitude_spectrum(input);
  estimate.harmonic_sum_spectrum = harmonic_sum(normalize(estimate.raw_spectrum), harmonic);
  estimate.bin_resolution = estimate.raw_spectrum.bin_resolution;

  const auto& summed = estimate.harmonic_sum_spectrum.magnitudes;
  const auto bins = band_bins(analysis.search_band, estimate.bin_resolution, summed.size());
  if (!bins) throw InvalidArgument("search band contains no spectrum bins");
  const auto [first, last] = *bins;
  if (!(summed.segment(first, last - first + 1).maxCoeff() > Scalar(0))) throw NoSignal();

  estimate.peak_bin = argmax(summed, first, last);
  estimate.fundamental = static_cast<double>(estimate.peak_bin) * estimate.bin_resolution;
  return estimate;
}

/// As above with the default bandpass designed at the analysis rate.
template <typename Scalar>
PitchEstimate<Scalar> detect_fundamental(const SampleBuffer<Scalar>& buffer, const AnalysisConfig& analysis = {},
                                         const HarmonicConfig& harmonic = {}) {
  if (!harmonic.use_filter) {
    const FirFilter<Scalar> identity(FirFilter<Scalar>::Coefficients::Ones(1), buffer.sample_rate > 0 ? buffer.sample_rate : 1);
    return detect_fundamental(buffer, analysis, harmonic, identity);
  }
  FilterSpec spec;
  spec.sample_rate = analysis.sample_rate;
  return detect_fundamental(buffer, analysis, harmonic, design_bandpass<Scalar>(spec));
}

}  // namespace guitune
