#pragma once

#include <vector>

#include "guitune/dsp.hpp"

namespace test {

inline std::vector<double> to_vector(const guitune::Signal<double>& s) { return {s.data(), s.data() + s.size()}; }

inline guitune::SampleBuffer<double> buffer(const std::vector<double>& v, int rate) {
  return {Eigen::Map<const Eigen::ArrayXd>(v.data(), static_cast<Eigen::Index>(v.size())), rate};
}

template <typename Scalar = double>
guitune::Spectrum<Scalar> spectrum(std::vector<Scalar> v, double resolution = 1.0) {
  guitune::Spectrum<Scalar> s;
  s.magnitudes = Eigen::Map<const guitune::Signal<Scalar>>(v.data(), static_cast<Eigen::Index>(v.size()));
  s.bin_resolution = resolution;
  return s;
}

}  // namespace test
