#include "guitune/session.hpp"

#include <string>
#include <utility>

#include "guitune/error.hpp"
#include "guitune/tuner.hpp"

namespace guitune {

std::string_view to_string(Phase phase) {
  switch (phase) {
    case Phase::idle: return "idle";
    case Phase::recording: return "recording";
    case Phase::analyzing: return "analyzing";
  }
  return "?";
}

void Session::transition(Phase from, Phase to) {
  const bool legal = (from == Phase::idle && to == Phase::recording) ||
                     (from == Phase::recording && to == Phase::analyzing) ||
                     (from == Phase::analyzing && to == Phase::idle);
  if (phase_ != from || !legal)
    throw StateError("illegal session transition " + std::string(to_string(phase_)) + " -> " +
                     std::string(to_string(to)));
  phase_ = to;
}

GuitarString Session::select_string(std::string_view identifier) {
  if (phase_ != Phase::idle) throw StateError("cannot change string while a test is running");
  const GuitarString string = parse_string(identifier);
  selected_ = string;
  return string;
}

void Session::begin_recording() {
  if (!selected_) throw StateError("select a string before starting a test");
  transition(Phase::idle, Phase::recording);
}

void Session::end_recording() { transition(Phase::recording, Phase::analyzing); }

void Session::finish(std::optional<nlohmann::json> result) {
  transition(Phase::analyzing, Phase::idle);
  if (result) last_result_ = std::move(result);
}

SessionController::SessionController(ServiceContext& context, Emit emit)
    : context_(context), emit_(std::move(emit)) {}

Phase SessionController::phase() const {
  std::lock_guard lock(mutex_);
  return session_.phase();
}

std::optional<GuitarString> SessionController::selected_string() const {
  std::lock_guard lock(mutex_);
  return session_.selected_string();
}

void SessionController::send(nlohmann::json message) {
  message["v"] = kProtocolVersion;
  emit_(message);
}

void SessionController::send_error(std::string_view code, std::string_view detail) {
  send({{"type", "error"}, {"code", code}, {"message", detail}});
}

void SessionController::handle_text(std::string_view text) {
  nlohmann::json message;
  try {
    message = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error&) {
    send_error("bad_message", "message is not valid JSON");
    return;
  }
  handle(message);
}

void SessionController::handle(const nlohmann::json& message) {
  if (!message.is_object() || !message.contains("type") || !message["type"].is_string()) {
    send_error("bad_message", "message needs a string \"type\" field");
    return;
  }
  const auto type = message["type"].get<std::string>();

  if (type == "select_string") {
    if (!message.contains("string") || !message["string"].is_string()) {
      send_error("validation", "select_string needs a \"string\" field");
      return;
    }
    try {
      GuitarString string;
      {
        std::lock_guard lock(mutex_);
        string = session_.select_string(message["string"].get<std::string>());
      }
      send({{"type", "ack"}, {"string", name(string)}, {"target", string_target(string)}});
    } catch (const StateError& e) {
      send_error("state", e.what());
    } catch (const InvalidArgument& e) {
      send_error("validation", e.what());
    }
  } else if (type == "start_test") {
    start_test();
  } else {
    send_error("bad_message", "unknown message type \"" + type + "\"");
  }
}

void SessionController::start_test() {
  GuitarString string;
  {
    std::lock_guard lock(mutex_);
    if (session_.phase() != Phase::idle) {
      send({{"type", "busy"}, {"message", "a test is already running on this session"}});
      return;
    }
    if (!session_.selected_string()) {
      send_error("precondition", "select a string before starting a test");
      return;
    }
    if (!context_.device->available()) {
      send_error("device_unavailable", "no capture device: " + context_.device->description());
      return;
    }
    if (!context_.gate.try_acquire()) {
      send({{"type", "busy"}, {"message", "another client is recording"}});
      return;
    }
    session_.begin_recording();
    string = *session_.selected_string();
  }
  send({{"type", "recording_started"}, {"string", name(string)}});
  context_.run_async([self = shared_from_this(), string] { self->run_test(string); });
}

void SessionController::run_test(GuitarString string) {
  std::optional<SampleBuffer<double>> buffer;
  std::string failure;
  try {
    buffer = capture(context_.analysis.capture_duration, context_.analysis, *context_.device);
  } catch (const std::exception& e) {
    failure = e.what();
  }
  context_.gate.release();
  {
    std::lock_guard lock(mutex_);
    session_.end_recording();
  }
  send({{"type", "recording_stopped"}, {"string", name(string)}});

  std::optional<nlohmann::json> result;
  bool no_signal = false;
  if (buffer) {
    try {
      result = result_message(
          analyze(*buffer, string, context_.calibration, context_.analysis, context_.harmonic));
    } catch (const NoSignal&) {
      no_signal = true;
    } catch (const std::exception& e) {
      failure = e.what();
    }
  }

  {
    std::lock_guard lock(mutex_);
    session_.finish(result);
  }
  if (result) {
    send(*result);
  } else if (no_signal) {
    send({{"type", "no_signal"}, {"string", name(string)}, {"message", "string not heard"}});
  } else {
    send_error("capture_failed", failure);
  }
}

}  // namespace guitune
