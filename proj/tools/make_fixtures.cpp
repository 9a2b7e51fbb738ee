// Writes the synthetic WAV fixtures used by the tests and the README examples.
//
//   make_fixtures OUTPUT_DIR

#include <filesystem>
#include <iostream>

#include "guitune/audio.hpp"
#include "guitune/wav.hpp"

int main(int argc, char** argv) {
  using namespace guitune;
  if (argc != 2) {
    std::cerr << "usage: make_fixtures OUTPUT_DIR\n";
    return 1;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);

  PluckSpec b3;
  b3.fundamental = 246.9;
  b3.harmonic_amplitudes = {1.0, 0.6, 0.3, 0.15};
  b3.decay_time_constant = 0.8;
  write_wav_file(dir / "b3_pluck.wav", synth_pluck(b3));

  // Low E tuned 4 Hz flat.
  PluckSpec e2_flat = b3;
  e2_flat.fundamental = 78.4;
  write_wav_file(dir / "e2_flat4.wav", synth_pluck(e2_flat));

  // Octave trap: the second partial dominates the raw spectrum.
  PluckSpec a2_trap = b3;
  a2_trap.fundamental = 110.0;
  a2_trap.harmonic_amplitudes = {0.3, 1.0, 0.6};
  write_wav_file(dir / "a2_octave_trap.wav", synth_pluck(a2_trap));

  write_wav_file(dir / "silence.wav", SampleBuffer<double>(Eigen::ArrayXd::Zero(16000), 8000));

  PluckSpec a4_48k;
  a4_48k.fundamental = 440.0;
  a4_48k.sample_rate = 48000;
  write_wav_file(dir / "a4_sine_48k.wav", synth_pluck(a4_48k));
  return 0;
}
