/* Copyright 2026 The lmfp Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Wire protocol for suspect models:
//   POST /respond  {"prompt": "<string>"}  ->  200 {"response": "<string>"}
// Errors carry a status code and {"error": "<string>"}.

#pragma once

#include <chrono>
#include <memory>
#include <semaphore>
#include <stdexcept>
#include <string>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "lmfp/channel.hpp"

namespace lmfp {

/// JSON text with invalid UTF-8 replaced rather than thrown on.
inline std::string to_wire(const nlohmann::json& j) {
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

struct Endpoint {
  std::string host;
  int port = 0;
};

/// Accepts "http://host:port", "host:port" (path ignored).
inline Endpoint parse_endpoint(std::string_view url) {
  if (url.starts_with("http://")) url.remove_prefix(7);
  if (url.starts_with("https://")) throw std::invalid_argument("https endpoints are not supported");
  url = url.substr(0, url.find('/'));
  const std::size_t colon = url.rfind(':');
  if (colon == std::string_view::npos || colon == 0) {
    throw std::invalid_argument("endpoint needs host:port: " + std::string(url));
  }
  Endpoint ep{std::string(url.substr(0, colon)), 0};
  try {
    std::size_t used = 0;
    ep.port = std::stoi(std::string(url.substr(colon + 1)), &used);
    if (used != url.size() - colon - 1) throw std::invalid_argument("port");
  } catch (const std::exception&) {
    throw std::invalid_argument("bad port in endpoint: " + std::string(url));
  }
  if (ep.port < 1 || ep.port > 65535) throw std::invalid_argument("port out of range");
  return ep;
}

/// Client for a model served over the wire protocol. Each call opens its own
/// connection; at most `max_in_flight` calls proceed at once.
class RemoteChannel final : public SuspectChannel {
 public:
  static constexpr std::ptrdiff_t kMaxInFlight = 64;

  explicit RemoteChannel(std::string_view url,
                         std::chrono::milliseconds timeout = std::chrono::seconds(10),
                         int max_in_flight = 8)
      : endpoint_(parse_endpoint(url)),
        timeout_(timeout),
        slots_(std::make_unique<std::counting_semaphore<kMaxInFlight>>(max_in_flight)) {
    if (max_in_flight < 1 || max_in_flight > kMaxInFlight) {
      throw std::invalid_argument("max_in_flight must be in [1, 64]");
    }
  }

  std::string respond(const std::string& prompt) const override {
    slots_->acquire();
    struct Release {
      std::counting_semaphore<kMaxInFlight>* s;
      ~Release() { s->release(); }
    } release{slots_.get()};

    httplib::Client cli(endpoint_.host, endpoint_.port);
    cli.set_connection_timeout(timeout_);
    cli.set_read_timeout(timeout_);
    cli.set_write_timeout(timeout_);
    const std::string body = to_wire({{"prompt", prompt}});
    const auto res = cli.Post("/respond", body, "application/json");
    if (!res) {
      throw TransportError("request to " + endpoint_.host + ":" + std::to_string(endpoint_.port) +
                           " failed: " + httplib::to_string(res.error()));
    }
    const auto json = nlohmann::json::parse(res->body, nullptr, false);
    if (res->status != 200) {
      std::string msg = "HTTP " + std::to_string(res->status);
      if (json.is_object() && json.contains("error") && json["error"].is_string()) {
        msg += ": " + json["error"].get<std::string>();
      }
      throw TransportError(msg);
    }
    if (!json.is_object() || !json.contains("response") || !json["response"].is_string()) {
      throw TransportError("malformed response body");
    }
    return json["response"].get<std::string>();
  }

  const Endpoint& endpoint() const { return endpoint_; }

 private:
  Endpoint endpoint_;
  std::chrono::milliseconds timeout_;
  std::unique_ptr<std::counting_semaphore<kMaxInFlight>> slots_;
};

inline RemoteChannel oracle_remote(std::string_view url,
                                   std::chrono::milliseconds timeout = std::chrono::seconds(10)) {
  return RemoteChannel(url, timeout);
}

inline void send_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(to_wire(body), "application/json");
}

inline void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, {{"error", message}});
}

/// An httplib server on its own thread. Port 0 picks a free port.
class HttpService {
 public:
  HttpService() = default;
  HttpService(const HttpService&) = delete;
  HttpService& operator=(const HttpService&) = delete;
  ~HttpService() { stop(); }

  httplib::Server& server() { return server_; }

  int start(const std::string& host, int port) {
    if (port == 0) {
      port_ = server_.bind_to_any_port(host);
    } else {
      port_ = server_.bind_to_port(host, port) ? port : -1;
    }
    if (port_ < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
    return port_;
  }

  /// Blocks in the calling thread until stop() is called elsewhere.
  void run(const std::string& host, int port) {
    if (!server_.bind_to_port(host, port)) {
      throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    }
    port_ = port;
    server_.listen_after_bind();
  }

  void stop() {
    server_.stop();
    if (thread_.joinable()) thread_.join();
  }

  int port() const { return port_; }

 private:
  httplib::Server server_;
  std::thread thread_;
  int port_ = -1;
};

/// Adds POST /respond backed by `channel`.
inline void install_respond_route(httplib::Server& server,
                                  std::shared_ptr<const SuspectChannel> channel) {
  server.Post("/respond", [channel](const httplib::Request& req, httplib::Response& res) {
    const auto body = nlohmann::json::parse(req.body, nullptr, false);
    if (!body.is_object() || !body.contains("prompt") || !body["prompt"].is_string()) {
      send_error(res, 400, "expected {\"prompt\": string}");
      return;
    }
    try {
      send_json(res, 200, {{"response", channel->respond(body["prompt"].get<std::string>())}});
    } catch (const TransportError& e) {
      send_error(res, 502, e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    }
  });
}

}  // namespace lmfp
