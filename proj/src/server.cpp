#include "guitune/server.hpp"

#include <deque>
#include <mutex>
#include <string_view>
#include <system_error>
#include <vector>

#include <boost/asio/bind_executor.hpp>
#include <boost/asio/dispatch.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/post.hpp>
#include <boost/asio/strand.hpp>
#include <boost/asio/thread_pool.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

namespace guitune {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace {

/// Something the server can force-close on shutdown.
class Connection {
public:
  virtual ~Connection() = default;
  virtual void close() = 0;
};

class Registry {
public:
  void add(const std::shared_ptr<Connection>& c) {
    std::lock_guard lock(mutex_);
    std::erase_if(live_, [](const auto& w) { return w.expired(); });
    live_.push_back(c);
  }
  void close_all() {
    std::vector<std::weak_ptr<Connection>> live;
    {
      std::lock_guard lock(mutex_);
      live.swap(live_);
    }
    for (auto& w : live)
      if (auto c = w.lock()) c->close();
  }

private:
  std::mutex mutex_;
  std::vector<std::weak_ptr<Connection>> live_;
};

std::string_view mime_type(const std::filesystem::path& path) {
  const auto ext = path.extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html";
  if (ext == ".js" || ext == ".mjs") return "application/javascript";
  if (ext == ".css") return "text/css";
  if (ext == ".json") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".ico") return "image/vnd.microsoft.icon";
  return "application/octet-stream";
}

class WsSession final : public Connection, public std::enable_shared_from_this<WsSession> {
public:
  WsSession(tcp::socket&& socket, ServiceContext& context) : ws_(std::move(socket)), context_(context) {}

  void start(http::request<http::string_body> request) {
    std::weak_ptr<WsSession> weak = shared_from_this();
    controller_ = std::make_shared<SessionController>(context_, [weak](const nlohmann::json& message) {
      if (auto self = weak.lock()) self->send(message.dump());
    });
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(request, beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
  }

  void close() override {
    asio::dispatch(ws_.get_executor(), [self = shared_from_this()] {
      beast::error_code ec;
      beast::get_lowest_layer(self->ws_).socket().shutdown(tcp::socket::shutdown_both, ec);
      beast::get_lowest_layer(self->ws_).close();
    });
  }

private:
  void on_accept(beast::error_code ec) {
    if (ec) return;
    read();
  }

  void read() { ws_.async_read(in_, beast::bind_front_handler(&WsSession::on_read, shared_from_this())); }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) return;  // closed, reset or shut down
    const std::string text = beast::buffers_to_string(in_.data());
    in_.consume(in_.size());
    controller_->handle_text(text);
    read();
  }

  void send(std::string text) {
    asio::post(ws_.get_executor(), [self = shared_from_this(), text = std::move(text)]() mutable {
      self->outbox_.push_back(std::move(text));
      if (self->outbox_.size() == 1) self->write();
    });
  }

  void write() {
    ws_.text(true);
    ws_.async_write(asio::buffer(outbox_.front()), beast::bind_front_handler(&WsSession::on_write, shared_from_this()));
  }

  void on_write(beast::error_code ec, std::size_t) {
    if (ec) return;
    outbox_.pop_front();
    if (!outbox_.empty()) write();
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer in_;
  std::deque<std::string> outbox_;
  ServiceContext& context_;
  std::shared_ptr<SessionController> controller_;
};

class HttpSession final : public Connection, public std::enable_shared_from_this<HttpSession> {
public:
  HttpSession(tcp::socket&& socket, ServiceContext& context, const ServerOptions& options, Registry& registry)
      : stream_(std::move(socket)), context_(context), options_(options), registry_(registry) {}

  void start() {
    asio::dispatch(stream_.get_executor(), beast::bind_front_handler(&HttpSession::read, shared_from_this()));
  }

  void close() override {
    asio::dispatch(stream_.get_executor(), [self = shared_from_this()] {
      beast::error_code ec;
      self->stream_.socket().shutdown(tcp::socket::shutdown_both, ec);
      self->stream_.close();
    });
  }

private:
  void read() {
    request_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, request_, beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
  }

  void on_read(beast::error_code ec, std::size_t) {
    if (ec) return;
    if (websocket::is_upgrade(request_)) {
      if (request_.target() == "/ws") {
        stream_.expires_never();
        auto ws = std::make_shared<WsSession>(stream_.release_socket(), context_);
        registry_.add(ws);
        ws->start(std::move(request_));
        return;
      }
    }
    respond(route());
  }

  http::response<http::string_body> text_response(http::status status, std::string_view type, std::string body) {
    http::response<http::string_body> res{status, request_.version()};
    res.set(http::field::server, std::string("guitune/") + kServiceVersion);
    res.set(http::field::content_type, std::string(type));
    res.keep_alive(request_.keep_alive());
    res.body() = std::move(body);
    res.prepare_payload();
    return res;
  }

  http::response<http::string_body> route() {
    if (request_.method() != http::verb::get && request_.method() != http::verb::head)
      return text_response(http::status::method_not_allowed, "text/plain", "GET only\n");

    std::string target(request_.target());
    if (const auto q = target.find('?'); q != std::string::npos) target.resize(q);

    if (target == "/health") {
      const nlohmann::json body = {
          {"status", "ok"}, {"version", kServiceVersion}, {"device", context_.device->available()}, {"v", 1}};
      return text_response(http::status::ok, "application/json", body.dump());
    }
    if (!options_.static_root || target.find("..") != std::string::npos || target.empty() || target[0] != '/')
      return text_response(http::status::not_found, "text/plain", "not found\n");

    std::filesystem::path file = *options_.static_root / target.substr(1);
    if (target.back() == '/') file /= "index.html";
    beast::error_code ec;
    http::file_body::value_type body;
    body.open(file.string().c_str(), beast::file_mode::scan, ec);
    if (ec) return text_response(http::status::not_found, "text/plain", "not found\n");

    std::string content(body.size(), '\0');
    body.file().read(content.data(), content.size(), ec);
    return text_response(http::status::ok, mime_type(file), std::move(content));
  }

  void respond(http::response<http::string_body> response) {
    auto res = std::make_shared<http::response<http::string_body>>(std::move(response));
    http::async_write(stream_, *res, [self = shared_from_this(), res](beast::error_code ec, std::size_t) {
      if (ec) return;
      if (!res->keep_alive()) {
        beast::error_code ignored;
        self->stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
        return;
      }
      self->read();
    });
  }

  beast::tcp_stream stream_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> request_;
  ServiceContext& context_;
  const ServerOptions& options_;
  Registry& registry_;
};

}  // namespace

struct Server::Impl {
  Impl(ServiceContext& ctx, ServerOptions opts)
      : context(ctx), options(std::move(opts)), pool(static_cast<std::size_t>(std::max(1, options.analysis_threads))),
        acceptor(asio::make_strand(io)) {}

  void accept() {
    acceptor.async_accept(asio::make_strand(io), [this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;  // acceptor closed
      auto session = std::make_shared<HttpSession>(std::move(socket), context, options, registry);
      registry.add(session);
      session->start();
      accept();
    });
  }

  ServiceContext& context;
  ServerOptions options;
  asio::io_context io;
  asio::thread_pool pool;
  tcp::acceptor acceptor;
  Registry registry;
  std::function<void(std::function<void()>)> previous_run_async;
};

Server::Server(ServiceContext& context, ServerOptions options)
    : impl_(std::make_unique<Impl>(context, std::move(options))) {
  impl_->previous_run_async = context.run_async;
  context.run_async = [this](std::function<void()> job) { asio::post(impl_->pool, std::move(job)); };
}

Server::~Server() {
  stop();
  impl_->pool.join();
  impl_->context.run_async = impl_->previous_run_async;
}

void Server::start() {
  const tcp::endpoint endpoint(asio::ip::make_address(impl_->options.bind_address), impl_->options.port);
  auto& acceptor = impl_->acceptor;
  beast::error_code ec;
  const auto check = [&](const char* what) {
    if (ec) throw std::system_error(ec.value(), std::system_category(), what);
  };
  acceptor.open(endpoint.protocol(), ec);
  check("open");
  acceptor.set_option(asio::socket_base::reuse_address(true), ec);
  check("setsockopt");
  acceptor.bind(endpoint, ec);
  check("bind");
  acceptor.listen(asio::socket_base::max_listen_connections, ec);
  check("listen");
  impl_->accept();
}

std::uint16_t Server::port() const { return impl_->acceptor.local_endpoint().port(); }

void Server::run() { impl_->io.run(); }

void Server::stop() {
  asio::post(impl_->acceptor.get_executor(), [impl = impl_.get()] {
    beast::error_code ec;
    impl->acceptor.close(ec);
    impl->registry.close_all();
    // Let the close handlers drain, then end run().
    asio::post(impl->io, [impl] { impl->io.stop(); });
  });
}

}  // namespace guitune
