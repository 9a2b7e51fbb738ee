#include <doctest.h>

#include <random>

#include "guitune/fir.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace guitune;

namespace {

std::vector<double> taps_of(const FirFilter<double>& f) { return test::to_vector(f.coefficients()); }

double oracle_db(const FirFilter<double>& f, double hz) {
  return 20.0 * std::log10(static_cast<double>(oracle::response_magnitude(taps_of(f), hz, f.sample_rate())));
}

}  // namespace

TEST_CASE("default bandpass has 1057 symmetric taps") {
  const auto filter = design_bandpass(FilterSpec{});
  CHECK(filter.length() == 1057);
  CHECK(filter.sample_rate() == 8000);
  CHECK(filter.is_linear_phase(1e-12));
  const auto& c = filter.coefficients();
  for (Eigen::Index i = 0; i < c.size(); ++i) CHECK(c(i) == doctest::Approx(c(c.size() - 1 - i)).epsilon(1e-12));
}

TEST_CASE("tap count is the smallest odd integer >= 3.3 fs / transition") {
  CHECK(hamming_tap_count(8000, 25) == 1057);
  CHECK(hamming_tap_count(8000, 50) == 529);   // 528 -> 529
  CHECK(hamming_tap_count(8000, 100) == 265);  // 264 -> 265
  CHECK(hamming_tap_count(44100, 100) == 1457);  // 1455.3 -> 1456 -> 1457
  CHECK(hamming_tap_count(48000, 800) == 199);   // 198 -> 199
  CHECK_THROWS_AS(hamming_tap_count(8000, 0), InvalidArgument);
}

TEST_CASE("designed filters are symmetric for random valid specs") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> lo(20, 400), width(50, 2000), tw(20, 200);
  for (int trial = 0; trial < 20; ++trial) {
    FilterSpec spec;
    spec.low_cutoff = lo(rng);
    spec.high_cutoff = std::min(spec.low_cutoff + width(rng), 3900.0);
    spec.transition_bandwidth = tw(rng);
    const auto f = design_bandpass(spec);
    CHECK(f.length() % 2 == 1);
    CHECK((f.coefficients() - f.coefficients().reverse()).abs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("default bandpass meets its stopband and passband targets") {
  const auto filter = design_bandpass(FilterSpec{});
  CHECK(frequency_response(filter, 40.0) <= -50.0);
  CHECK(frequency_response(filter, 1500.0) <= -50.0);
  CHECK(std::abs(frequency_response(filter, 700.0)) <= 0.1);
  CHECK(frequency_response(filter, 40.0) == doctest::Approx(oracle_db(filter, 40.0)).epsilon(1e-6));
  CHECK(frequency_response(filter, 700.0) == doctest::Approx(oracle_db(filter, 700.0)).epsilon(1e-6));

  // Every 1 Hz outside [low - transition, high + transition].
  double worst = -1000.0;
  for (int hz = 0; hz <= 4000; ++hz)
    if (hz < 50 || hz > 1345) worst = std::max(worst, frequency_response(filter, hz));
  CHECK(worst <= -50.0);
}

TEST_CASE("design_bandpass rejects invalid specs") {
  FilterSpec spec;
  spec.low_cutoff = 0;
  CHECK_THROWS_AS(design_bandpass(spec), InvalidArgument);
  spec = {};
  spec.high_cutoff = 50;
  CHECK_THROWS_AS(design_bandpass(spec), InvalidArgument);
  spec = {};
  spec.high_cutoff = 4000;
  CHECK_THROWS_AS(design_bandpass(spec), InvalidArgument);
  spec = {};
  spec.transition_bandwidth = -1;
  CHECK_THROWS_AS(design_bandpass(spec), InvalidArgument);
  spec = {};
  spec.min_stopband_attenuation = 80;
  CHECK_THROWS_AS(design_bandpass(spec), InvalidArgument);
}

TEST_CASE("frequency_response of trivial filters") {
  const FirFilter<double> impulse(Eigen::ArrayXd::Ones(1), 8000);
  for (double hz : {0.0, 123.4, 4000.0}) CHECK(frequency_response(impulse, hz) == doctest::Approx(0.0).epsilon(1e-12));

  Eigen::ArrayXd avg(2);
  avg << 0.5, 0.5;
  const FirFilter<double> averager(avg, 8000);
  CHECK(frequency_response(averager, 4000.0) <= -300.0);
  CHECK(frequency_response(averager, 0.0) == doctest::Approx(0.0));

  CHECK_THROWS_AS(frequency_response(impulse, -1.0), InvalidArgument);
  CHECK_THROWS_AS(frequency_response(impulse, 4000.5), InvalidArgument);
}

TEST_CASE("design_lowpass has unit DC gain and a 50 dB stopband") {
  const auto lp = design_lowpass(1800.0, 800.0, 48000);
  CHECK(lp.length() == 199);
  CHECK(lp.is_linear_phase());
  CHECK(frequency_response(lp, 0.0) == doctest::Approx(0.0).epsilon(1e-9));
  for (int hz = 2200; hz <= 24000; hz += 10) CHECK(frequency_response(lp, hz) <= -50.0);
}

TEST_CASE("apply with a unit impulse is the identity") {
  std::vector<double> x{0.1, -0.2, 0.3, 0.9, -1.0};
  const FirFilter<double> impulse(Eigen::ArrayXd::Ones(1), 8000);
  const auto y = apply(impulse, test::buffer(x, 8000));
  CHECK(test::to_vector(y.samples) == x);
}

TEST_CASE("apply keeps length and passes a mid-band tone") {
  const auto filter = design_bandpass(FilterSpec{});
  const auto x = oracle::sine(440.0, 1.0, 8000, 16000);
  const auto y = apply(filter, test::buffer(x, 8000));
  CHECK(y.size() == 16000);
  CHECK(y.sample_rate == 8000);
  const double ratio = oracle::rms(test::to_vector(y.samples)) / oracle::rms(x);
  CHECK(ratio == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("apply suppresses a 30 Hz tone by 50 dB") {
  const auto filter = design_bandpass(FilterSpec{});
  const auto x = oracle::sine(30.0, 1.0, 8000, 16000);
  const auto y = apply(filter, test::buffer(x, 8000));
  CHECK(oracle::rms(test::to_vector(y.samples)) / oracle::rms(x) <= 0.004);
}

TEST_CASE("apply is linear") {
  const auto filter = design_bandpass(FilterSpec{});
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> a(4000), b(4000), mix(4000);
  const double ca = 0.7, cb = -1.9;
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = u(rng);
    b[i] = u(rng);
    mix[i] = ca * a[i] + cb * b[i];
  }
  const auto ya = apply(filter, test::buffer(a, 8000)).samples;
  const auto yb = apply(filter, test::buffer(b, 8000)).samples;
  const auto ym = apply(filter, test::buffer(mix, 8000)).samples;
  const Eigen::ArrayXd expected = ca * ya + cb * yb;
  CHECK(((ym - expected).abs().maxCoeff() / expected.abs().maxCoeff()) < 1e-9);
}

TEST_CASE("filtering does not move a mid-band spectral peak") {
  const auto filter = design_bandpass(FilterSpec{});
  for (double hz : {110.0, 246.5, 440.0, 987.5}) {
    const auto x = test::buffer(oracle::sine(hz, 1.0, 8000, 16000, 1.1), 8000);
    const auto before = argmax(magnitude_spectrum(x).magnitudes);
    const auto after = argmax(magnitude_spectrum(apply(filter, x)).magnitudes);
    CHECK(before == after);
  }
}

TEST_CASE("apply preconditions") {
  const auto filter = design_bandpass(FilterSpec{});
  CHECK_THROWS_AS(apply(filter, test::buffer(std::vector<double>(16000), 16000)), InvalidArgument);
  CHECK_THROWS_AS(apply(filter, test::buffer(std::vector<double>(1000), 8000)), InvalidArgument);
  Eigen::ArrayXd even(2);
  even << 0.5, 0.5;
  CHECK_THROWS_AS(apply(FirFilter<double>(even, 8000), test::buffer(std::vector<double>(10), 8000)), InvalidArgument);
}
