#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "guitune/audio.hpp"
#include "guitune/error.hpp"
#include "guitune/tuner.hpp"
#include "helpers.hpp"

using namespace guitune;

namespace {

SampleBuffer<double> pluck(double f0, std::vector<double> amplitudes) {
  PluckSpec spec;
  spec.fundamental = f0;
  spec.harmonic_amplitudes = std::move(amplitudes);
  spec.decay_time_constant = 0.8;
  return synth_pluck(spec);
}

}  // namespace

TEST_CASE("analyze chains detection and advice") {
  const auto result = analyze(pluck(78.4, {1.0, 0.6, 0.3, 0.15}), GuitarString::E2);
  CHECK(result.advice.string == GuitarString::E2);
  CHECK(result.advice.detected == result.pitch.fundamental);
  CHECK(result.advice.direction == Direction::tighten);
  CHECK(result.advice.degrees > 0.0);
  CHECK(result.advice == advise(GuitarString::E2, result.pitch.fundamental));
}

TEST_CASE("CLI report survives a JSON round trip") {
  std::mt19937 rng(31);
  std::uniform_real_distribution<double> hz(60, 500);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = kAllStrings[static_cast<std::size_t>(trial) % kAllStrings.size()];
    const auto report = CliReport::from(advise(s, hz(rng)));
    const auto json = to_json(report);
    CHECK(json.at("v") == 1);
    const auto back = cli_report_from_json(nlohmann::json::parse(json.dump()));
    CHECK(back.string == report.string);
    CHECK(back.detected == report.detected);
    CHECK(back.target == report.target);
    CHECK(back.cents == report.cents);
    CHECK(back.degrees == report.degrees);
    CHECK(back.direction == report.direction);
    CHECK(back.clamped == report.clamped);
  }
  auto wrong = to_json(CliReport::from(advise(GuitarString::A2, 100.0)));
  wrong["v"] = 2;
  CHECK_THROWS_AS(cli_report_from_json(wrong), ParseError);
}

TEST_CASE("text report") {
  SUBCASE("in tune") {
    const auto text = to_text(CliReport::from(advise(GuitarString::B3, 247.0)));
    CHECK(text == "string    B3 (target 246.9 Hz)\ndetected  247.00 Hz (+0.7 cents)\nadvice    in tune\n");
  }
  SUBCASE("flat low E") {
    const auto text = to_text(CliReport::from(advise(GuitarString::E2, 78.4)));
    CHECK(text.find("advice    tighten: turn clockwise 182 degrees\n") != std::string::npos);
  }
  SUBCASE("sharp and clamped") {
    const auto text = to_text(CliReport::from(advise(GuitarString::E2, 120.0)));
    CHECK(text.find("loosen: turn anticlockwise 720 degrees (large correction") != std::string::npos);
  }
}

TEST_CASE("spectrum preview") {
  SUBCASE("short spectra pass through, scaled to peak 1") {
    const auto p = preview(test::spectrum<double>({1, 4, 2}, 0.5));
    CHECK(p.frequency == std::vector<double>{0.0, 0.5, 1.0});
    CHECK(p.magnitude == std::vector<double>{0.25, 1.0, 0.5});
  }
  SUBCASE("max pooling keeps the peak of each group") {
    const auto p = preview(test::spectrum<double>({1, 5, 2, 8, 0, 3, 3}, 1.0), 3);
    CHECK(p.frequency == std::vector<double>{1.0, 3.0, 6.0});  // groups [0,2] [3,5] [6]
    CHECK(p.magnitude == std::vector<double>{5.0 / 8, 1.0, 3.0 / 8});
  }
  SUBCASE("all zero stays zero") {
    const auto p = preview(test::spectrum<double>(std::vector<double>(10, 0.0)));
    CHECK(p.magnitude == std::vector<double>(10, 0.0));
  }
  SUBCASE("detector spectra") {
    const auto result = analyze(pluck(110.0, {0.3, 1.0, 0.6}), GuitarString::A2);
    for (const auto* s : {&result.pitch.raw_spectrum, &result.pitch.harmonic_sum_spectrum}) {
      const auto p = preview(*s);
      REQUIRE_FALSE(p.frequency.empty());
      CHECK(p.frequency.size() <= kMaxPreviewPoints);
      CHECK(p.frequency.size() == p.magnitude.size());
      CHECK(std::is_sorted(p.frequency.begin(), p.frequency.end()));
      CHECK(*std::max_element(p.magnitude.begin(), p.magnitude.end()) == 1.0);
      CHECK(p.frequency.back() <= 4000.0);
    }
    // The global peak is never lost to pooling.
    const auto p = preview(result.pitch.harmonic_sum_spectrum);
    const auto at = std::max_element(p.magnitude.begin(), p.magnitude.end()) - p.magnitude.begin();
    CHECK(p.frequency[static_cast<std::size_t>(at)] ==
          result.pitch.harmonic_sum_spectrum.frequency(argmax(result.pitch.harmonic_sum_spectrum.magnitudes)));
  }
  CHECK_THROWS_AS(preview(test::spectrum<double>({1}), 0), InvalidArgument);
}

TEST_CASE("result message") {
  const auto result = analyze(pluck(246.9, {1.0, 0.6, 0.3, 0.15}), GuitarString::B3);
  const auto m = result_message(result);
  CHECK(m.at("type") == "result");
  CHECK(m.at("v") == 1);
  CHECK(m.at("string") == "B3");
  CHECK(m.at("target") == 246.9);
  CHECK(m.at("detected") == result.advice.detected);
  CHECK(m.at("direction") == "in_tune");
  CHECK(m.at("degrees") == 0.0);
  CHECK(m.at("clamped") == false);
  for (const char* key : {"raw_spectrum", "harmonic_sum_spectrum"}) {
    const auto& s = m.at(key);
    CHECK(s.at("frequency").size() == s.at("magnitude").size());
    CHECK(s.at("frequency").size() <= kMaxPreviewPoints);
  }
}

TEST_CASE("save_spectra writes two labelled blocks") {
  const auto result = analyze(pluck(196.0, {1.0, 0.5, 0.25}), GuitarString::G3);
  const auto path = std::filesystem::temp_directory_path() / "guitune_spectra.txt";
  save_spectra(path, result.pitch);

  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  CHECK(line == "# raw (frequency_hz magnitude)");
  std::vector<std::pair<double, double>> raw, hs;
  auto* block = &raw;
  int blank = 0;
  while (std::getline(in, line)) {
    if (line.empty()) {
      ++blank;
      continue;
    }
    if (line[0] == '#') {
      CHECK(line == "# harmonic_sum (frequency_hz magnitude)");
      CHECK(blank == 2);
      block = &hs;
      continue;
    }
    std::istringstream row(line);
    double f = 0, m = 0;
    row >> f >> m;
    CHECK_FALSE(row.fail());
    block->emplace_back(f, m);
  }
  REQUIRE(raw.size() == 8001);
  REQUIRE(hs.size() == 8001);
  CHECK(raw[392].first == 196.0);
  CHECK(raw[392].second == doctest::Approx(result.pitch.raw_spectrum.magnitudes(392)).epsilon(1e-8));
  CHECK(hs[392].second == doctest::Approx(result.pitch.harmonic_sum_spectrum.magnitudes(392)).epsilon(1e-8));
  CHECK(hs.back().first == 4000.0);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(save_spectra("/nonexistent-dir/x.txt", result.pitch), InvalidArgument);
}
