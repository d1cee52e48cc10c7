// Copyright 2026 The seloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "server/server.hpp"

#include <algorithm>

#include "common/error.hpp"
#include "httplib.h"

namespace seloc::server {

namespace {

service::Request toRequest(const httplib::Request& req) {
  service::Request r;
  r.method = req.method;
  r.target = req.target;
  r.contentType = req.get_header_value("Content-Type");
  r.accept = req.get_header_value("Accept");
  r.body = req.body;
  return r;
}

void send(httplib::Response& res, const service::Response& r) {
  res.status = r.status;
  res.set_content(r.body, r.contentType);
}

}  // namespace

Server::Server(service::Registry& registry, ServerConfig config)
    : registry_(registry), config_(std::move(config)), http_(std::make_unique<httplib::Server>()) {
  // httplib's default also sets SO_REUSEPORT, which would let a second
  // server share an occupied port instead of failing.
  http_->set_socket_options([](socket_t sock) {
    int yes = 1;
    ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
  });
  install();
}

Server::~Server() {
  try {
    stop();
  } catch (...) {
  }
}

void Server::install() {
  auto& http = *http_;

  http.set_post_routing_handler([this](const httplib::Request& req, httplib::Response& res) {
    if (config_.corsOrigins.empty()) return;
    const auto origin = req.get_header_value("Origin");
    const auto& allowed = config_.corsOrigins;
    if (std::find(allowed.begin(), allowed.end(), "*") != allowed.end()) {
      res.set_header("Access-Control-Allow-Origin", "*");
    } else if (!origin.empty() && std::find(allowed.begin(), allowed.end(), origin) != allowed.end()) {
      res.set_header("Access-Control-Allow-Origin", origin);
      res.set_header("Vary", "Origin");
    }
  });

  http.Options(".*", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
    res.set_header("Access-Control-Allow-Methods", "GET, POST, PUT, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type, Accept");
  });

  http.Get(R"(/bindings/([^/]+)/stream)", [this](const httplib::Request& req, httplib::Response& res) {
    std::shared_ptr<recipes::Subscription> sub;
    try {
      sub = registry_.subscribe(req.matches[1].str());
    } catch (const Error& e) {
      send(res, service::errorResponse(e.code(), e.what(), e.details()));
      return;
    }
    res.set_header("Cache-Control", "no-cache");
    const auto heartbeat = config_.heartbeat;
    auto idle = std::make_shared<std::chrono::steady_clock::time_point>(std::chrono::steady_clock::now());
    res.set_chunked_content_provider("text/event-stream", [this, sub, heartbeat, idle](std::size_t,
                                                                                    httplib::DataSink& sink) {
      if (stopping_ || sub->closed() || !sink.is_writable()) {
        sink.done();
        return true;
      }
      const auto slice = std::min<std::chrono::milliseconds>(heartbeat, std::chrono::milliseconds(200));
      if (auto event = sub->next(slice)) {
        std::string frame = "event: telemetry\ndata: " + recipes::toJson(*event).dump() + "\n\n";
        *idle = std::chrono::steady_clock::now();
        return sink.write(frame.data(), frame.size());
      }
      if (std::chrono::steady_clock::now() - *idle >= heartbeat) {
        static const std::string ping = ": heartbeat\n\n";
        *idle = std::chrono::steady_clock::now();
        return sink.write(ping.data(), ping.size());
      }
      return true;
    });
  });

  auto passThrough = [this](const httplib::Request& req, httplib::Response& res) {
    send(res, registry_.handle(toRequest(req)));
  };
  http.Get(".*", passThrough);
  http.Post(".*", passThrough);
  http.Put(".*", passThrough);
  http.Delete(".*", passThrough);
  http.Patch(".*", passThrough);
}

void Server::start() {
  if (config_.port == 0) {
    port_ = http_->bind_to_any_port(config_.host);
  } else {
    port_ = http_->bind_to_port(config_.host, config_.port) ? config_.port : -1;
  }
  if (port_ <= 0) {
    throw Error("BindError", "cannot bind " + config_.host + ":" + std::to_string(config_.port),
                {{"host", config_.host}, {"port", config_.port}});
  }
  thread_ = std::thread([this] { http_->listen_after_bind(); });
  http_->wait_until_ready();
}

void Server::wait() {
  std::unique_lock lock(doneMutex_);
  doneCv_.wait(lock, [&] { return done_; });
}

void Server::stop() {
  if (stopping_.exchange(true)) {
    wait();
    return;
  }
  http_->stop();
  if (thread_.joinable()) thread_.join();
  registry_.flush();
  {
    std::lock_guard lock(doneMutex_);
    done_ = true;
  }
  doneCv_.notify_all();
}

}  // namespace seloc::server
