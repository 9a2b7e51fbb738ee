#include <doctest.h>

#include "guitune/error.hpp"
#include "guitune/notes.hpp"

using namespace guitune;

TEST_CASE("note_frequency follows equal temperament from A4 = 440") {
  CHECK(note_frequency(0) == 440.0);
  CHECK(note_frequency(12) == 880.0);
  CHECK(note_frequency(-12) == 220.0);
  CHECK(note_frequency(-29) == doctest::Approx(82.41).epsilon(0.0002));
  CHECK(std::abs(note_frequency(-29) - 82.4) <= 0.05);
}

TEST_CASE("octave doubling holds across the range") {
  for (int n = -60; n <= 48; ++n)
    CHECK(note_frequency(n + 12) == doctest::Approx(2.0 * note_frequency(n)).epsilon(1e-9));
}

TEST_CASE("string targets are the tabulated standard-tuning values") {
  CHECK(string_target(GuitarString::E2) == 82.4);
  CHECK(string_target(GuitarString::A2) == 110.0);
  CHECK(string_target(GuitarString::D3) == 146.8);
  CHECK(string_target(GuitarString::G3) == 196.0);
  CHECK(string_target(GuitarString::B3) == 246.9);
  CHECK(string_target(GuitarString::E4) == 329.6);
  CHECK(string_target("B3") == 246.9);
  CHECK(string_target("1") == 329.6);
  CHECK_THROWS_AS(string_target("Z9"), InvalidArgument);
}

TEST_CASE("tabulated targets agree with the semitone formula within rounding") {
  for (GuitarString s : kAllStrings)
    CHECK(std::abs(string_target(s) - note_frequency(semitones_from_a4(s))) <= 0.05);
}

TEST_CASE("parse_string accepts names and string numbers") {
  CHECK(parse_string("E2") == GuitarString::E2);
  CHECK(parse_string("e4") == GuitarString::E4);
  CHECK(parse_string("6") == GuitarString::E2);
  CHECK(parse_string("2") == GuitarString::B3);
  for (GuitarString s : kAllStrings) {
    CHECK(parse_string(name(s)) == s);
    CHECK(parse_string(std::to_string(string_number(s))) == s);
  }
  for (const char* bad : {"", "7", "0", "E", "A4", "B3 ", "Z9"}) CHECK_THROWS_AS(parse_string(bad), InvalidArgument);
}

TEST_CASE("cents_offset") {
  CHECK(cents_offset(440, 440) == 0.0);
  CHECK(cents_offset(880, 440) == 1200.0);
  CHECK(cents_offset(note_frequency(1), 440) == doctest::Approx(100.0).epsilon(1e-12));
  CHECK(cents_offset(466.16, 440) == doctest::Approx(99.986).epsilon(1e-4));
  CHECK_THROWS_AS(cents_offset(0, 440), InvalidArgument);
  CHECK_THROWS_AS(cents_offset(440, -1), InvalidArgument);
}

TEST_CASE("cents between tempered notes is 100 per semitone") {
  for (int n = -36; n <= 24; n += 5)
    for (int m = -36; m <= 24; m += 7)
      CHECK(std::abs(cents_offset(note_frequency(n), note_frequency(m)) - 100.0 * (n - m)) <= 1e-6);
  for (double f : {0.001, 1.0, 82.4, 1e5}) CHECK(cents_offset(f, f) == 0.0);
}
