#pragma once

#include <stdexcept>
#include <string>

namespace guitune {

/// Precondition violated by the caller (bad size, rate, cutoff, identifier...).
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed RIFF/WAVE container or configuration text.
class ParseError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Well-formed input in an encoding we do not read (stereo, 24-bit, float...).
class UnsupportedFormat : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class UnsupportedRate : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// The search band of the harmonic-sum spectrum is all zero: the string was not heard.
class NoSignal : public std::runtime_error {
public:
  NoSignal() : std::runtime_error("no signal detected") {}
};

class DeviceUnavailable : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Another capture is already in flight.
class Busy : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Operation not legal in the current session phase.
class StateError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

}  // namespace guitune
