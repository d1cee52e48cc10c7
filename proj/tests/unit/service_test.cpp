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

#include <fstream>
#include <thread>

#include "common/error.hpp"
#include "service/registry.hpp"
#include "test_util.hpp"

using namespace seloc;
using nlohmann::json;
using service::Registry;
using service::Request;
using service::Response;

namespace {

const std::filesystem::path kSource = SELOC_SOURCE_DIR;
const std::string kWorkpieces = "2c430e9b-04d1-4c87-afb5-655431201ee1";

std::string readFile(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Response get(Registry& r, const std::string& target) { return r.handle({"GET", target, "", "", ""}); }

Response post(Registry& r, const std::string& target, const json& body) {
  return r.handle({"POST", target, "application/json", "", body.dump()});
}

Response sparql(Registry& r, const std::string& query) {
  return r.handle({"POST", "/sparql", "application/sparql-query", "", query});
}

const std::string kDeviceTurtle = R"(
@prefix device: <http://tinyml-schema.org/kg/device/> .
@prefix s3n: <http://w3id.org/s3n/> .
@prefix schema: <https://schema.org/> .
device:extra a s3n:SmartSensor ; schema:identifier "extra" ; schema:name "Extra board" .
)";

}  // namespace

TEST(Status, Mapping) {
  EXPECT_EQ(service::httpStatusFor("SyntaxError"), 400);
  EXPECT_EQ(service::httpStatusFor("ValidationError"), 400);
  EXPECT_EQ(service::httpStatusFor("UnknownModelError"), 404);
  EXPECT_EQ(service::httpStatusFor("NotFound"), 404);
  EXPECT_EQ(service::httpStatusFor("InvalidTransitionError"), 409);
  EXPECT_EQ(service::httpStatusFor("NotAcknowledgedError"), 409);
  EXPECT_EQ(service::httpStatusFor("MethodNotAllowed"), 405);
  EXPECT_EQ(service::httpStatusFor("UnsupportedMediaTypeError"), 415);
  EXPECT_EQ(service::httpStatusFor("IoError"), 500);
  auto r = service::errorResponse("UnknownModelError", "nope", {{"uuid", "x"}});
  EXPECT_EQ(r.status, 404);
  EXPECT_EQ(json::parse(r.body), json({{"code", "UnknownModelError"}, {"message", "nope"}, {"details", {{"uuid", "x"}}}}));
  EXPECT_FALSE(json::parse(service::errorResponse("NotFound", "x").body).contains("details"));
}

TEST(Registry, CatalogCensus) {
  Registry r(testutil::fixtureConfig());
  auto models = get(r, "/models");
  ASSERT_EQ(models.status, 200);
  EXPECT_EQ(json::parse(models.body).size(), 22u);
  EXPECT_EQ(json::parse(get(r, "/devices").body).size(), 9u);
  EXPECT_EQ(json::parse(get(r, "/violations").body), json::array());
}

TEST(Registry, PublishedQueriesThroughTheRoute) {
  Registry r(testutil::fixtureConfig());
  auto q1 = sparql(r, readFile(kSource / "data/queries/query1.rq"));
  ASSERT_EQ(q1.status, 200) << q1.body;
  EXPECT_EQ(q1.contentType, "application/sparql-results+json");
  auto rows = json::parse(q1.body)["results"]["bindings"];
  ASSERT_EQ(rows.size(), 2u);
  std::set<std::pair<std::string, std::string>> got;
  for (const auto& row : rows) got.emplace(row["MACs"]["value"], row["RAM"]["value"]);
  EXPECT_EQ(got, (std::set<std::pair<std::string, std::string>>{{"7158144", "94"}, {"7387976", "116"}}));

  auto q2 = sparql(r, readFile(kSource / "data/queries/query2.rq"));
  ASSERT_EQ(q2.status, 200) << q2.body;
  rows = json::parse(q2.body)["results"]["bindings"];
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_NE(rows[0].dump().find("device_002"), std::string::npos);
  EXPECT_NE(rows[1].dump().find("device_003"), std::string::npos);
}

TEST(Registry, EntityRoutes) {
  Registry r(testutil::fixtureConfig());
  auto m = json::parse(get(r, "/models/" + kWorkpieces).body);
  EXPECT_EQ(m["descriptor"]["name"], "workpieces_conveyorbelt_mobilnet");
  EXPECT_GT(m["triples"].size(), 10u);
  auto d = json::parse(get(r, "/devices/device_npu_01").body);
  EXPECT_EQ(d["descriptor"]["runtimePlatform"], "npu");
  EXPECT_EQ(get(r, "/models/nope").status, 404);
  EXPECT_EQ(get(r, "/devices/nope").status, 404);
  EXPECT_EQ(get(r, "/nowhere").status, 404);
  EXPECT_EQ(r.handle({"DELETE", "/models", "", "", ""}).status, 405);
}

TEST(Registry, MatchRoutes) {
  Registry r(testutil::fixtureConfig());
  auto models = get(r, "/match/models?device=device_npu_01");
  ASSERT_EQ(models.status, 200) << models.body;
  EXPECT_EQ(json::parse(models.body).size(), 2u);
  auto devices = get(r, "/match/devices?model=76cdb950-7216-42b6-a859-6d36d5a39f77");
  ASSERT_EQ(devices.status, 200) << devices.body;
  EXPECT_EQ(get(r, "/match/models").status, 400);
  EXPECT_EQ(get(r, "/match/models?device=nope").status, 404);
}

TEST(Registry, SearchRoute) {
  Registry r(testutil::fixtureConfig());
  auto res = post(r, "/search", {{"text", "conveyor workpieces camera classification"}, {"k", 3}});
  ASSERT_EQ(res.status, 200);
  auto hits = json::parse(res.body);
  EXPECT_EQ(hits.size(), 3u);
  EXPECT_EQ(hits[0]["key"], kWorkpieces);
  EXPECT_EQ(post(r, "/search", {{"text", "x"}, {"filters", {{"kind", "plant"}}}}).status, 400);
  EXPECT_EQ(post(r, "/search", {{"text", "x"}, {"filters", {{"requiredSensor", "Sonar"}}}}).status, 400);
  EXPECT_EQ(post(r, "/search", {{"text", "x"}, {"k", 0}}).status, 400);
  EXPECT_EQ(post(r, "/search", json::object()).status, 400);
  auto bad = r.handle({"POST", "/search", "application/json", "", "{"});
  EXPECT_EQ(bad.status, 400);
  EXPECT_EQ(json::parse(bad.body)["code"], "InvalidJsonError");
}

TEST(Registry, SparqlErrors) {
  Registry r(testutil::fixtureConfig());
  auto syntax = sparql(r, "SELECT ?x WHERE { ?x ");
  EXPECT_EQ(syntax.status, 400);
  EXPECT_EQ(json::parse(syntax.body)["code"], "SyntaxError");
  auto media = r.handle({"POST", "/sparql", "text/plain", "", "SELECT * WHERE { ?s ?p ?o }"});
  EXPECT_EQ(media.status, 415);
  EXPECT_EQ(json::parse(media.body)["details"]["received"], "text/plain");
}

TEST(Registry, ProjectRoutes) {
  Registry r(testutil::fixtureConfig());
  auto config = json::parse(std::ifstream(kSource / "data/configs/npu_workpieces.json"));
  auto fields = get(r, "/projects/config?model=" + kWorkpieces + "&device=device_npu_01&target=npu");
  EXPECT_EQ(json::parse(fields.body).size(), 13u);
  json body = {{"model", kWorkpieces}, {"device", "device_npu_01"}, {"target", "npu"},
               {"config", config}, {"generatedAt", "2024-01-01T00:00:00.000Z"}};
  auto res = post(r, "/projects", body);
  ASSERT_EQ(res.status, 200) << res.body;
  auto bundle = json::parse(res.body);
  for (const auto& [path, content] : bundle["files"].items()) {
    EXPECT_EQ(content.get<std::string>(), readFile(kSource / "tests/golden/npu" / path)) << path;
  }
  EXPECT_EQ(bundle["effortReport"]["userInputCount"], 13);
  EXPECT_EQ(bundle["metadata"]["generatedAt"], "2024-01-01T00:00:00.000Z");

  auto zip = r.handle({"POST", "/projects", "application/json", "application/zip", body.dump()});
  EXPECT_EQ(zip.contentType, "application/zip");
  EXPECT_EQ(zip.body.substr(0, 4), std::string("PK\x03\x04", 4));

  body["config"] = json::object();
  auto missing = post(r, "/projects", body);
  EXPECT_EQ(missing.status, 400);
  EXPECT_EQ(json::parse(missing.body)["details"]["missing"].size(), 13u);
}

TEST(Registry, RecipeFlow) {
  auto cfg = testutil::fixtureConfig();
  cfg.recipesDirectory = kSource / "data/recipes";
  Registry r(cfg);
  EXPECT_EQ(json::parse(get(r, "/recipes").body).size(), 2u);

  auto missing = json::parse(post(r, "/recipes/classification-monitor/bindings", {{"deviceIds", {"device_001"}}}).body);
  EXPECT_EQ(missing["kind"], "missing");

  auto proposed = json::parse(
      post(r, "/recipes/classification-monitor/bindings", {{"deviceIds", {"device_npu_01", "device_001"}}}).body);
  ASSERT_EQ(proposed["kind"], "binding");
  const std::string id = proposed["bindingId"];
  EXPECT_EQ(proposed["status"], "proposed");

  auto stream = get(r, "/bindings/" + id + "/stream");
  EXPECT_EQ(stream.status, 409);
  EXPECT_EQ(json::parse(stream.body)["code"], "NotAcknowledgedError");

  EXPECT_EQ(post(r, "/bindings/" + id + "/ack", {{"decision", "yes"}}).status, 400);
  EXPECT_EQ(json::parse(post(r, "/bindings/" + id + "/ack", {{"decision", "accept"}}).body)["status"], "acknowledged");
  EXPECT_EQ(post(r, "/bindings/" + id + "/ack", {{"decision", "accept"}}).status, 409);
  EXPECT_EQ(json::parse(get(r, "/bindings/" + id).body)["status"], "acknowledged");
  EXPECT_EQ(get(r, "/bindings/binding-99").status, 404);
  EXPECT_EQ(post(r, "/recipes/nope/bindings", {{"deviceIds", json::array()}}).status, 404);
  EXPECT_EQ(post(r, "/recipes/classification-monitor/bindings", {{"deviceIds", {"nope"}}}).status, 404);

  auto sub = r.subscribe(id);
  auto e = sub->next(std::chrono::seconds(3));
  ASSERT_TRUE(e);
  EXPECT_EQ(e->classLabel, "red_workpiece");
}

TEST(Registry, IngestIsIdempotentAndPersists) {
  testutil::TempDir dir;
  auto cfg = testutil::fixtureConfig();
  cfg.dataDirectory = dir.path();
  std::string firstBody;
  {
    Registry r(cfg);
    auto put = [&] { return r.handle({"PUT", "/graphs/extra", "text/turtle", "", kDeviceTurtle}); };
    auto a = put();
    ASSERT_EQ(a.status, 200) << a.body;
    auto body = json::parse(a.body);
    EXPECT_EQ(body["graph"], "urn:seloc:graph:extra");
    EXPECT_EQ(body["tripleCount"], 3);
    EXPECT_FALSE(body["violations"].empty());  // no RAM, Flash or platform
    auto before = get(r, "/devices").body;
    EXPECT_EQ(put().body, a.body);
    EXPECT_EQ(get(r, "/devices").body, before);
    EXPECT_EQ(json::parse(before).size(), 9u);  // invalid devices are reported, not listed
    firstBody = get(r, "/violations").body;
    EXPECT_EQ(r.handle({"PUT", "/graphs/extra", "application/json", "", "{}"}).status, 415);
    auto broken = r.handle({"PUT", "/graphs/extra", "text/turtle", "", "<a> <b> ."});
    EXPECT_EQ(broken.status, 400);
    EXPECT_TRUE(json::parse(broken.body)["details"].contains("line"));
    post(r, "/recipes/classification-monitor/bindings", {{"deviceIds", {"device_npu_01"}}});
  }
  Registry reopened(cfg);
  EXPECT_EQ(get(reopened, "/violations").body, firstBody);
  EXPECT_EQ(json::parse(get(reopened, "/bindings/binding-1").body)["status"], "proposed");
  EXPECT_EQ(json::parse(get(reopened, "/models").body).size(), 22u);
}

TEST(Registry, CorruptStoreIsReported) {
  testutil::TempDir dir;
  std::ofstream(dir.path() / "manifest.json") << "garbage";
  auto cfg = testutil::fixtureConfig();
  cfg.dataDirectory = dir.path();
  try {
    Registry r(cfg);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "CorruptStoreError");
  }
}

TEST(Registry, ReadersNeverSeeHalfAppliedIngest) {
  Registry r(testutil::fixtureConfig());
  std::atomic<bool> done{false};
  std::atomic<int> bad{0};
  std::thread reader([&] {
    while (!done) {
      auto snap = r.snapshot();
      auto triples = snap->dataset.graph("urn:seloc:graph:bulk");
      // Each write holds either 0 or 50 triples; a snapshot never mixes them.
      if (triples && triples->size() != 50) ++bad;
      if (snap->models.models.size() != 22) ++bad;
    }
  });
  for (int round = 0; round < 20; ++round) {
    std::string ttl;
    for (int i = 0; i < 50; ++i) {
      ttl += "<urn:s" + std::to_string(round) + "> <urn:p" + std::to_string(i) + "> " + std::to_string(i) + " .\n";
    }
    r.putGraph("bulk", ttl);
  }
  done = true;
  reader.join();
  EXPECT_EQ(bad, 0);
}
