#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "guitune/session.hpp"

namespace guitune {

inline constexpr const char* kServiceVersion = "0.1.0";
inline constexpr std::uint16_t kDefaultPort = 8765;

struct ServerOptions {
  std::string bind_address = "127.0.0.1";
  std::uint16_t port = kDefaultPort;  // 0 picks a free port
  /// Directory of the browser UI build; served at "/". Optional.
  std::optional<std::filesystem::path> static_root;
  int analysis_threads = 2;
};

/// HTTP + WebSocket endpoint on one port:
///   GET /health  -> {"status":"ok","version":...,"device":bool}
///   GET /ws      -> WebSocket carrying the session protocol (one session per connection)
///   GET /...     -> files under static_root
class Server {
public:
  Server(ServiceContext& context, ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and listens; throws std::system_error if the port is taken.
  void start();
  /// Port actually bound (useful with port 0).
  std::uint16_t port() const;
  /// Serves until stop() is called. Call after start().
  void run();
  /// Thread-safe; closes the listener and every connection, then run() returns.
  void stop();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace guitune
