// guitune: guitar tuning from the command line.
//
//   guitune analyze --input pluck.wav --string B3 [--format text|structured]
//   guitune live --string 6
//   guitune serve --port 8765 --bind 127.0.0.1

#include <atomic>
#include <csignal>
#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <pthread.h>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "guitune/capture.hpp"
#include "guitune/error.hpp"
#include "guitune/server.hpp"
#include "guitune/tuner.hpp"
#include "guitune/wav.hpp"

namespace {

using namespace guitune;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNoSignal = 2;

std::atomic<bool> g_interrupted{false};

extern "C" void on_interrupt(int) { g_interrupted.store(true); }

struct CommonOptions {
  std::string string_id;
  std::string calibration_path;
  std::string fixture_path;
};

TurnCalibration load_calibration(const std::string& path) {
  return path.empty() ? TurnCalibration{} : TurnCalibration::from_file(path);
}

std::shared_ptr<CaptureDevice> make_device(const std::string& fixture) {
  if (!fixture.empty()) return std::make_shared<WavFileDevice>(fixture);
  return std::make_shared<SystemCaptureDevice>();
}

void print_report(const CliReport& report, const std::string& format) {
  if (format == "structured")
    std::cout << to_json(report).dump() << '\n';
  else
    std::cout << to_text(report);
  std::cout.flush();
}

int cmd_analyze(const CommonOptions& common, const std::string& input, const std::string& format,
                const std::string& spectra_path) {
  try {
    const GuitarString string = parse_string(common.string_id);
    const auto calibration = load_calibration(common.calibration_path);
    const auto buffer = read_wav_file(input);
    const auto result = analyze(buffer, string, calibration);
    if (!spectra_path.empty()) save_spectra(spectra_path, result.pitch);
    print_report(CliReport::from(result.advice), format);
    return kExitOk;
  } catch (const NoSignal& e) {
    std::cerr << "guitune: " << e.what() << '\n';
    return kExitNoSignal;
  } catch (const std::exception& e) {
    std::cerr << "guitune: " << e.what() << '\n';
    return kExitUsage;
  }
}

int cmd_live(const CommonOptions& common, const std::string& format, int cycles) {
  GuitarString string;
  TurnCalibration calibration;
  try {
    string = parse_string(common.string_id);
    calibration = load_calibration(common.calibration_path);
  } catch (const std::exception& e) {
    std::cerr << "guitune: " << e.what() << '\n';
    return kExitUsage;
  }
  auto device = make_device(common.fixture_path);
  if (!device->available()) {
    std::cerr << "guitune: no capture device available (" << device->description()
              << "); use 'analyze' with a WAV file instead\n";
    return kExitUsage;
  }

  std::signal(SIGINT, on_interrupt);
  const AnalysisConfig analysis;
  for (int cycle = 0; cycles <= 0 || cycle < cycles; ++cycle) {
    if (g_interrupted) break;
    std::cout << "PLAY" << std::endl;
    SampleBuffer<double> buffer;
    try {
      buffer = capture(analysis.capture_duration, analysis, *device);
    } catch (const std::exception& e) {
      if (g_interrupted) break;
      std::cerr << "guitune: " << e.what() << '\n';
      return kExitUsage;
    }
    if (g_interrupted) break;
    std::cout << "STOP" << std::endl;
    try {
      print_report(CliReport::from(analyze(buffer, string, calibration, analysis).advice), format);
    } catch (const NoSignal&) {
      std::cout << "string not heard, play again" << std::endl;
    }
  }
  return kExitOk;
}

int cmd_serve(const CommonOptions& common, int port, const std::string& bind, const std::string& static_root) {
  // Block termination signals before any thread exists; a dedicated thread waits for them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  ServiceContext context;
  try {
    context.calibration = load_calibration(common.calibration_path);
  } catch (const std::exception& e) {
    std::cerr << "guitune: " << e.what() << '\n';
    return kExitUsage;
  }
  context.device = make_device(common.fixture_path);

  ServerOptions options;
  options.bind_address = bind;
  options.port = static_cast<std::uint16_t>(port);
  if (!static_root.empty()) options.static_root = static_root;

  Server server(context, options);
  try {
    server.start();
  } catch (const std::exception& e) {
    std::cerr << "guitune: cannot listen on " << bind << ':' << port << ": " << e.what() << '\n';
    return kExitUsage;
  }
  std::cout << "listening on http://" << bind << ':' << server.port() << " (health: /health, socket: /ws)"
            << std::endl;

  std::thread waiter([&] {
    int received = 0;
    sigwait(&signals, &received);
    server.stop();
  });
  server.run();
  // run() only returns after stop(), which only the waiter calls.
  waiter.join();
  std::cout << "stopped" << std::endl;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Guitar tuner: harmonic-sum pitch detection with peg-turn advice"};
  app.require_subcommand(1);

  CommonOptions common;
  std::string input, format = "text", spectra, bind = "127.0.0.1", static_root;
  int port = kDefaultPort;
  int cycles = 0;

  auto add_string = [&](CLI::App* cmd) {
    cmd->add_option("--string", common.string_id, "String to tune: E2 A2 D3 G3 B3 E4 or 6..1")->required();
  };
  auto add_calibration = [&](CLI::App* cmd) {
    cmd->add_option("--calibration", common.calibration_path, "Turn-rate override file (N = Hz per degree)");
  };
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "structured"}));
  };

  auto* analyze_cmd = app.add_subcommand("analyze", "Analyze a recorded pluck (mono 16-bit WAV)");
  analyze_cmd->add_option("--input", input, "WAV file (8, 16 or 48 kHz)")->required();
  add_string(analyze_cmd);
  add_format(analyze_cmd);
  add_calibration(analyze_cmd);
  analyze_cmd->add_option("--save-spectra", spectra, "Write raw and harmonic-sum spectra as text columns");

  auto* live_cmd = app.add_subcommand("live", "Capture plucks from the input device and advise, until Ctrl-C");
  add_string(live_cmd);
  add_format(live_cmd);
  add_calibration(live_cmd);
  live_cmd->add_option("--fixture", common.fixture_path, "Read captures from a WAV file instead of a device");
  live_cmd->add_option("--cycles", cycles, "Stop after N cycles (0 = until interrupted)")->check(CLI::NonNegativeNumber);

  auto* serve_cmd = app.add_subcommand("serve", "Run the tuning service for the browser UI");
  serve_cmd->add_option("--port", port, "TCP port")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--bind", bind, "Bind address");
  add_calibration(serve_cmd);
  serve_cmd->add_option("--fixture", common.fixture_path, "Serve captures from a WAV file instead of a device");
  serve_cmd->add_option("--static", static_root, "Directory with the UI build to serve at /");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the error
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*analyze_cmd) return cmd_analyze(common, input, format, spectra);
  if (*live_cmd) return cmd_live(common, format, cycles);
  return cmd_serve(common, port, bind, static_root);
}
