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

#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "service/registry.hpp"

namespace httplib {
class Server;
}

namespace seloc::server {

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::vector<std::string> corsOrigins;  // "*" allows any origin
  std::chrono::milliseconds heartbeat{15000};
};

/// HTTP front of a Registry. Every route except the telemetry stream is a
/// straight pass-through to Registry::handle.
class Server {
 public:
  Server(service::Registry& registry, ServerConfig config);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds and starts serving on a background thread. Throws
  /// Error("BindError") when the address is unavailable.
  void start();
  /// Bound port (useful with port 0).
  int port() const noexcept { return port_; }
  /// Blocks until stop() has finished on another thread.
  void wait();
  /// Ends open streams, stops accepting and flushes the dataset.
  void stop();

 private:
  void install();

  service::Registry& registry_;
  ServerConfig config_;
  std::unique_ptr<httplib::Server> http_;
  std::thread thread_;
  std::atomic<bool> stopping_{false};
  std::mutex doneMutex_;
  std::condition_variable doneCv_;
  bool done_ = false;
  int port_ = 0;
};

}  // namespace seloc::server
