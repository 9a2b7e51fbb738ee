#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>

#include <Eigen/Core>

#include "guitune/dsp.hpp"

namespace guitune {

/// Bandpass requirements. Defaults pass the open-string range of a guitar plus
/// three harmonics of the highest string (3 x 440 Hz).
struct FilterSpec {
  double low_cutoff = 75.0;
  double high_cutoff = 1320.0;
  double transition_bandwidth = 25.0;
  double min_stopband_attenuation = 50.0;
  int sample_rate = 8000;
};

/// Peak sidelobe level of the Hamming window, in dB below the passband.
inline constexpr double kHammingSidelobeDb = 53.0;

template <typename Scalar = double>
class FirFilter {
public:
  using Coefficients = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  FirFilter(Coefficients coefficients, int sample_rate)
      : coefficients_(std::move(coefficients)), sample_rate_(sample_rate) {
    if (coefficients_.size() == 0) throw InvalidArgument("FIR filter needs at least one tap");
    if (sample_rate_ <= 0) throw InvalidArgument("sample rate must be positive");
  }

  const Coefficients& coefficients() const { return coefficients_; }
  int sample_rate() const { return sample_rate_; }
  Eigen::Index length() const { return coefficients_.size(); }

  /// Odd length and c[i] == c[L-1-i] (to the given tolerance): Type I linear phase.
  bool is_linear_phase(double tolerance = 1e-12) const {
    if (length() % 2 == 0) return false;
    return (coefficients_ - coefficients_.reverse()).abs().maxCoeff() <= tolerance;
  }

private:
  Coefficients coefficients_;
  int sample_rate_;
};

namespace detail {

inline double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

inline Eigen::ArrayXd hamming(Eigen::Index length) {
  Eigen::ArrayXd w(length);
  if (length == 1) {
    w(0) = 1.0;
    return w;
  }
  for (Eigen::Index i = 0; i < length; ++i)
    w(i) = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(length - 1));
  return w;
}

/// Ideal lowpass impulse response, cutoff in Hz, centred on (L-1)/2.
inline Eigen::ArrayXd ideal_lowpass(Eigen::Index length, double cutoff, double sample_rate) {
  Eigen::ArrayXd h(length);
  const double fc = 2.0 * cutoff / sample_rate;  // fraction of Nyquist
  const double centre = static_cast<double>(length - 1) / 2.0;
  for (Eigen::Index i = 0; i < length; ++i) h(i) = fc * sinc(fc * (static_cast<double>(i) - centre));
  return h;
}

inline std::complex<double> response(const Eigen::ArrayXd& taps, double frequency, double sample_rate) {
  const double omega = 2.0 * std::numbers::pi * frequency / sample_rate;
  std::complex<double> acc{0.0, 0.0};
  for (Eigen::Index n = 0; n < taps.size(); ++n)
    acc += taps(n) * std::polar(1.0, -omega * static_cast<double>(n));
  return acc;
}

template <typename Scalar>
FirFilter<Scalar> make_filter(const Eigen::ArrayXd& taps, int sample_rate) {
  return FirFilter<Scalar>(taps.cast<Scalar>(), sample_rate);
}

}  // namespace detail

/// Smallest odd L >= 3.3 * fs / transition (Hamming transition width is ~3.3/L).
inline Eigen::Index hamming_tap_count(double sample_rate, double transition_bandwidth) {
  if (!(transition_bandwidth > 0.0)) throw InvalidArgument("transition bandwidth must be positive");
  // The epsilon keeps exact products like 3.3 * 8000 / 25 from rounding up a whole tap.
  auto taps = static_cast<Eigen::Index>(std::ceil(3.3 * sample_rate / transition_bandwidth - 1e-9));
  if (taps % 2 == 0) ++taps;
  return std::max<Eigen::Index>(taps, 1);
}

/// Hamming-windowed sinc bandpass, scaled to unit gain at the band centre.
/// Cutoffs are the -6 dB points.
template <typename Scalar = double>
FirFilter<Scalar> design_bandpass(const FilterSpec& spec) {
  const double nyquist = spec.sample_rate / 2.0;
  if (spec.sample_rate <= 0) throw InvalidArgument("sample rate must be positive");
  if (!(spec.low_cutoff > 0.0 && spec.low_cutoff < spec.high_cutoff && spec.high_cutoff < nyquist))
    throw InvalidArgument("bandpass cutoffs must satisfy 0 < low < high < sample_rate/2");
  if (spec.min_stopband_attenuation > kHammingSidelobeDb)
    throw InvalidArgument("a Hamming-window design cannot reach more than 53 dB stopband attenuation");

  const Eigen::Index length = hamming_tap_count(spec.sample_rate, spec.transition_bandwidth);
  Eigen::ArrayXd taps = detail::ideal_lowpass(length, spec.high_cutoff, spec.sample_rate) -
                        detail::ideal_lowpass(length, spec.low_cutoff, spec.sample_rate);
  taps *= detail::hamming(length);

  const double centre = 0.5 * (spec.low_cutoff + spec.high_cutoff);
  taps /= std::abs(detail::response(taps, centre, spec.sample_rate));
  return detail::make_filter<Scalar>(taps, spec.sample_rate);
}

/// Hamming-windowed sinc lowpass with unit DC gain.
template <typename Scalar = double>
FirFilter<Scalar> design_lowpass(double cutoff, double transition_bandwidth, int sample_rate) {
  if (sample_rate <= 0) throw InvalidArgument("sample rate must be positive");
  if (!(cutoff > 0.0 && cutoff < sample_rate / 2.0))
    throw InvalidArgument("lowpass cutoff must satisfy 0 < cutoff < sample_rate/2");

  const Eigen::Index length = hamming_tap_count(sample_rate, transition_bandwidth);
  Eigen::ArrayXd taps = detail::ideal_lowpass(length, cutoff, sample_rate) * detail::hamming(length);
  taps /= taps.sum();
  return detail::make_filter<Scalar>(taps, sample_rate);
}

/// Magnitude response at `frequency` in dB, floored at -300 dB.
template <typename Scalar>
double frequency_response(const FirFilter<Scalar>& filter, double frequency) {
  if (!(frequency >= 0.0 && frequency <= filter.sample_rate() / 2.0))
    throw InvalidArgument("frequency must lie in [0, sample_rate/2]");
  const double magnitude =
      std::abs(detail::response(filter.coefficients().template cast<double>(), frequency, filter.sample_rate()));
  return std::max(20.0 * std::log10(magnitude), -300.0);
}

/// Filters `buffer` and returns the same number of samples, aligned with the
/// input (the (L-1)/2 group delay is removed). Both ends are extended by point
/// reflection (2*x[edge] - x[edge -+ k]) so the signal continues smoothly past
/// the frame instead of stepping to zero.
template <typename Scalar>
SampleBuffer<Scalar> apply(const FirFilter<Scalar>& filter, const SampleBuffer<Scalar>& buffer) {
  if (filter.sample_rate() != buffer.sample_rate)
    throw InvalidArgument("filter and buffer sample rates differ");
  if (filter.length() % 2 == 0) throw InvalidArgument("apply needs an odd-length filter");
  if (buffer.size() < filter.length()) throw InvalidArgument("buffer is shorter than the filter");

  const Eigen::Index n = buffer.size();
  const Eigen::Index taps = filter.length();
  const Eigen::Index half = (taps - 1) / 2;
  const auto& x = buffer.samples;

  Signal<Scalar> extended(n + 2 * half);
  for (Eigen::Index k = 1; k <= half; ++k) {
    extended(half - k) = Scalar(2) * x(0) - x(k);
    extended(half + n - 1 + k) = Scalar(2) * x(n - 1) - x(n - 1 - k);
  }
  extended.segment(half, n) = x;

  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> kernel = filter.coefficients().reverse().matrix();
  Signal<Scalar> y(n);
  for (Eigen::Index i = 0; i < n; ++i) y(i) = extended.matrix().segment(i, taps).dot(kernel);
  return SampleBuffer<Scalar>(std::move(y), buffer.sample_rate);
}

}  // namespace guitune
