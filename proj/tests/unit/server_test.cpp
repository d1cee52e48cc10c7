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

#include <gtest/gtest.h>

#include <httplib.h>

#include "common/error.hpp"
#include "server/server.hpp"
#include "test_util.hpp"

using namespace seloc;
using nlohmann::json;

namespace {

struct Running {
  explicit Running(server::ServerConfig cfg = {}) : registry(testutil::fixtureConfig()) {
    cfg.port = 0;
    srv = std::make_unique<server::Server>(registry, cfg);
    srv->start();
  }
  httplib::Client client() const {
    httplib::Client c("127.0.0.1", srv->port());
    c.set_read_timeout(5, 0);
    return c;
  }
  service::Registry registry;
  std::unique_ptr<server::Server> srv;
};

}  // namespace

TEST(Server, ServesRegistryBodiesVerbatim) {
  Running s;
  auto c = s.client();
  auto res = c.Get("/models");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->body, s.registry.handle({"GET", "/models", "", "", ""}).body);
  EXPECT_EQ(json::parse(c.Get("/devices")->body).size(), 9u);

  auto missing = c.Get("/models/nope");
  EXPECT_EQ(missing->status, 404);
  EXPECT_EQ(json::parse(missing->body)["code"], "UnknownModelError");

  auto q = c.Post("/sparql", "SELECT ?s WHERE { ?s a <http://tinyml-schema.org/networkschema/NeuralNetwork> }",
                  "application/sparql-query");
  ASSERT_TRUE(q);
  EXPECT_EQ(q->get_header_value("Content-Type"), "application/sparql-results+json");
  EXPECT_EQ(json::parse(q->body)["results"]["bindings"].size(), 22u);

  auto search = c.Post("/search?ignored=1", R"({"text": "camera"})", "application/json");
  EXPECT_EQ(search->status, 200);
  EXPECT_EQ(c.Get("/search")->status, 405);
  EXPECT_EQ(c.Get("/models?x=%zz")->status, 200);
}

TEST(Server, CorsHeaders) {
  server::ServerConfig cfg;
  cfg.corsOrigins = {"http://localhost:5173"};
  Running s(cfg);
  auto c = s.client();
  auto res = c.Get("/devices", {{"Origin", "http://localhost:5173"}});
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "http://localhost:5173");
  auto other = c.Get("/devices", {{"Origin", "http://evil.example"}});
  EXPECT_FALSE(other->has_header("Access-Control-Allow-Origin"));
  auto preflight = c.Options("/search", {{"Origin", "http://localhost:5173"}});
  EXPECT_EQ(preflight->status, 204);
}

TEST(Server, PortInUseIsABindError) {
  Running s;
  service::Registry other(testutil::fixtureConfig());
  server::ServerConfig cfg;
  cfg.port = s.srv->port();
  server::Server clash(other, cfg);
  try {
    clash.start();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "BindError");
  }
}

TEST(Server, TelemetryStreamOverSse) {
  server::ServerConfig cfg;
  cfg.heartbeat = std::chrono::milliseconds(100);
  service::RegistryConfig rc = testutil::fixtureConfig();
  rc.telemetryRate = 20;
  service::Registry registry(rc);
  cfg.port = 0;
  server::Server srv(registry, cfg);
  srv.start();
  httplib::Client c("127.0.0.1", srv.port());
  c.set_read_timeout(5, 0);

  auto proposed = json::parse(c.Post("/recipes/classification-monitor/bindings",
                                     R"({"deviceIds": ["device_npu_01"]})", "application/json")
                                  ->body);
  const std::string id = proposed["bindingId"];
  auto refused = c.Get("/bindings/" + id + "/stream");
  EXPECT_EQ(refused->status, 409);
  EXPECT_EQ(json::parse(refused->body)["code"], "NotAcknowledgedError");
  EXPECT_EQ(c.Get("/bindings/binding-42/stream")->status, 404);

  c.Post("/bindings/" + id + "/ack", R"({"decision": "accept"})", "application/json");
  std::string received;
  std::string contentType;
  auto res = c.Get(
      "/bindings/" + id + "/stream",
      [&](const httplib::Response& r) {
        contentType = r.get_header_value("Content-Type");
        return r.status == 200;
      },
      [&](const char* data, size_t len) {
        received.append(data, len);
        std::size_t frames = 0;
        for (auto pos = received.find("event: telemetry"); pos != std::string::npos;
             pos = received.find("event: telemetry", pos + 1)) {
          ++frames;
        }
        return frames < 4;
      });
  EXPECT_EQ(contentType, "text/event-stream");
  std::vector<std::string> labels;
  std::istringstream in(received);
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("data: ", 0) == 0) labels.push_back(json::parse(line.substr(6))["classLabel"]);
  }
  ASSERT_GE(labels.size(), 3u);
  const auto& script = recipes::caseStudyScript();
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(labels[i], script[i].classLabel);
  srv.stop();
}
