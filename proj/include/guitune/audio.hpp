#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include <Eigen/Core>

#include "guitune/dsp.hpp"
#include "guitune/fir.hpp"

namespace guitune {

/// Anti-aliased rate reduction: Hamming lowpass at 0.45 x the new Nyquist
/// (transition 0.2 x new Nyquist), then every factor-th sample.
template <typename Scalar>
SampleBuffer<Scalar> decimate(const SampleBuffer<Scalar>& buffer, int factor) {
  if (factor < 2) throw InvalidArgument("decimation factor must be >= 2");
  if (buffer.sample_rate % factor != 0) throw InvalidArgument("decimation factor must divide the sample rate");
  const int output_rate = buffer.sample_rate / factor;
  const double new_nyquist = output_rate / 2.0;

  const auto lowpass = design_lowpass<Scalar>(0.45 * new_nyquist, 0.2 * new_nyquist, buffer.sample_rate);
  const auto smoothed = apply(lowpass, buffer);

  const Eigen::Index kept = (smoothed.size() + factor - 1) / factor;
  Signal<Scalar> out =
      Eigen::Map<const Signal<Scalar>, 0, Eigen::InnerStride<>>(smoothed.samples.data(), kept,
                                                                Eigen::InnerStride<>(factor));
  return SampleBuffer<Scalar>(std::move(out), output_rate);
}

/// Synthetic plucked string: decaying harmonic partials.
struct PluckSpec {
  double fundamental = 110.0;
  std::vector<double> harmonic_amplitudes{1.0};  // entry k: amplitude of partial k+1
  double decay_time_constant = std::numeric_limits<double>::infinity();  // seconds
  double duration = 2.0;
  int sample_rate = 8000;
};

/// sum_k a_k e^(-t/tau) sin(2 pi (k+1) f0 t), scaled to peak |x| = 1.
template <typename Scalar = double>
SampleBuffer<Scalar> synth_pluck(const PluckSpec& spec) {
  if (spec.sample_rate <= 0) throw InvalidArgument("sample rate must be positive");
  if (!(spec.fundamental > 0.0)) throw InvalidArgument("fundamental must be positive");
  if (spec.harmonic_amplitudes.empty()) throw InvalidArgument("pluck needs at least one partial");
  if (!(spec.fundamental * static_cast<double>(spec.harmonic_amplitudes.size()) < spec.sample_rate / 2.0))
    throw InvalidArgument("highest partial would alias: f0 * partials must stay below sample_rate/2");
  bool audible = false;
  for (double a : spec.harmonic_amplitudes) {
    if (a < 0.0) throw InvalidArgument("harmonic amplitudes must be non-negative");
    audible = audible || a > 0.0;
  }
  if (!audible) throw InvalidArgument("at least one harmonic amplitude must be positive");
  if (!(spec.decay_time_constant > 0.0)) throw InvalidArgument("decay time constant must be positive");
  if (!(spec.duration > 0.0)) throw InvalidArgument("duration must be positive");

  const auto n = static_cast<Eigen::Index>(std::llround(spec.duration * spec.sample_rate));
  const Eigen::ArrayXd t = Eigen::ArrayXd::LinSpaced(n, 0.0, static_cast<double>(n - 1)) / spec.sample_rate;
  const Eigen::ArrayXd envelope = (-t / spec.decay_time_constant).exp();

  Eigen::ArrayXd x = Eigen::ArrayXd::Zero(n);
  for (std::size_t k = 0; k < spec.harmonic_amplitudes.size(); ++k) {
    const double omega = 2.0 * std::numbers::pi * static_cast<double>(k + 1) * spec.fundamental;
    x += spec.harmonic_amplitudes[k] * (omega * t).sin();
  }
  x *= envelope;
  const double peak = x.abs().maxCoeff();
  if (peak > 0.0) x /= peak;
  return SampleBuffer<Scalar>(x.cast<Scalar>(), spec.sample_rate);
}

}  // namespace guitune
