#pragma once

#include <array>
#include <string>
#include <string_view>

namespace guitune {

/// The six open strings in standard tuning, low to high (string numbers 6..1).
enum class GuitarString { E2, A2, D3, G3, B3, E4 };

inline constexpr std::array<GuitarString, 6> kAllStrings{GuitarString::E2, GuitarString::A2, GuitarString::D3,
                                                         GuitarString::G3, GuitarString::B3, GuitarString::E4};

inline constexpr double kA4 = 440.0;

/// 440 * 2^(n/12), n semitones above A4 (negative below).
double note_frequency(int semitones_from_a4);

/// Standard-tuning target as tabulated to 0.1 Hz (82.4 ... 329.6).
double string_target(GuitarString string);
double string_target(std::string_view identifier);

/// Semitone distance from A4 of the open string (E2 = -29 ... E4 = -5).
int semitones_from_a4(GuitarString string);

/// 6 for low E through 1 for high E.
int string_number(GuitarString string);

std::string_view name(GuitarString string);

/// Accepts a canonical name ("B3", case-insensitive) or a string number ("2").
/// Throws InvalidArgument for anything else.
GuitarString parse_string(std::string_view identifier);

/// 1200 * log2(measured / reference).
double cents_offset(double measured, double reference);

}  // namespace guitune
