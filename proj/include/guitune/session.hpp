#pragma once

#include <atomic>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "guitune/advisor.hpp"
#include "guitune/capture.hpp"
#include "guitune/dsp.hpp"
#include "guitune/notes.hpp"
#include "guitune/pitch.hpp"

namespace guitune {

enum class Phase { idle, recording, analyzing };

std::string_view to_string(Phase phase);

/// Per-connection tuning session. Only idle -> recording -> analyzing -> idle
/// is reachable; any other transition throws StateError.
class Session {
public:
  Phase phase() const { return phase_; }
  std::optional<GuitarString> selected_string() const { return selected_; }
  const std::optional<nlohmann::json>& last_result() const { return last_result_; }

  /// Throws StateError outside idle and InvalidArgument for unknown ids.
  GuitarString select_string(std::string_view identifier);

  /// idle -> recording; needs a selected string.
  void begin_recording();
  /// recording -> analyzing.
  void end_recording();
  /// analyzing -> idle, remembering the result record if there is one.
  void finish(std::optional<nlohmann::json> result = std::nullopt);

private:
  void transition(Phase from, Phase to);

  Phase phase_ = Phase::idle;
  std::optional<GuitarString> selected_;
  std::optional<nlohmann::json> last_result_;
};

/// Process-wide guard: at most one capture in flight.
class CaptureGate {
public:
  bool try_acquire() { return !busy_.exchange(true); }
  void release() { busy_.store(false); }
  bool busy() const { return busy_.load(); }

private:
  std::atomic<bool> busy_{false};
};

/// Shared by every connection of one service instance.
struct ServiceContext {
  std::shared_ptr<CaptureDevice> device = std::make_shared<NoCaptureDevice>();
  TurnCalibration calibration{};
  AnalysisConfig analysis{};
  HarmonicConfig harmonic{};
  CaptureGate gate{};
  /// Runs a test off the message-handling path. Defaults to running inline.
  std::function<void(std::function<void()>)> run_async = [](std::function<void()> job) { job(); };
};

/// Protocol handler for one connection: turns client records into session
/// operations and server records. `emit` may be called from the worker that
/// runs a test; calls for one session are never concurrent. Must be owned by
/// a shared_ptr: a running test keeps its controller alive.
class SessionController : public std::enable_shared_from_this<SessionController> {
public:
  using Emit = std::function<void(const nlohmann::json&)>;

  SessionController(ServiceContext& context, Emit emit);

  /// Parses and dispatches one client text frame.
  void handle_text(std::string_view text);
  void handle(const nlohmann::json& message);

  Phase phase() const;
  std::optional<GuitarString> selected_string() const;

private:
  void start_test();
  void run_test(GuitarString string);
  void send(nlohmann::json message);
  void send_error(std::string_view code, std::string_view detail);

  ServiceContext& context_;
  Emit emit_;
  mutable std::mutex mutex_;
  Session session_;
};

}  // namespace guitune
