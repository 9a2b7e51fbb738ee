#include "guitune/notes.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "guitune/error.hpp"

namespace guitune {

namespace {

struct StringRow {
  GuitarString string;
  std::string_view name;
  int number;
  int semitones;
  double target;
};

constexpr std::array<StringRow, 6> kTable{{
    {GuitarString::E2, "E2", 6, -29, 82.4},
    {GuitarString::A2, "A2", 5, -24, 110.0},
    {GuitarString::D3, "D3", 4, -19, 146.8},
    {GuitarString::G3, "G3", 3, -14, 196.0},
    {GuitarString::B3, "B3", 2, -10, 246.9},
    {GuitarString::E4, "E4", 1, -5, 329.6},
}};

const StringRow& row(GuitarString string) {
  const auto index = static_cast<std::size_t>(string);
  if (index >= kTable.size()) throw InvalidArgument("unknown guitar string");
  return kTable[index];
}

}  // namespace

double note_frequency(int semitones_from_a4) {
  return kA4 * std::exp2(static_cast<double>(semitones_from_a4) / 12.0);
}

double string_target(GuitarString string) { return row(string).target; }

double string_target(std::string_view identifier) { return string_target(parse_string(identifier)); }

int semitones_from_a4(GuitarString string) { return row(string).semitones; }

int string_number(GuitarString string) { return row(string).number; }

std::string_view name(GuitarString string) { return row(string).name; }

GuitarString parse_string(std::string_view identifier) {
  std::string key(identifier);
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) { return std::toupper(c); });
  for (const auto& r : kTable) {
    if (key == r.name || key == std::to_string(r.number)) return r.string;
  }
  throw InvalidArgument("unknown string '" + std::string(identifier) +
                        "' (expected E2, A2, D3, G3, B3, E4 or 1-6)");
}

double cents_offset(double measured, double reference) {
  if (!(measured > 0.0) || !(reference > 0.0)) throw InvalidArgument("cents_offset needs positive frequencies");
  return 1200.0 * std::log2(measured / reference);
}

}  // namespace guitune
