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
#include <random>

#include "catalog/vocabulary.hpp"
#include "common/error.hpp"
#include "recipes/recipes.hpp"
#include "test_util.hpp"

using namespace seloc;
using nlohmann::json;

namespace {

const std::filesystem::path kSource = SELOC_SOURCE_DIR;
const std::string kClassification = vocab::ns::kIot + "ClassificationResult";
const std::string kConfidence = vocab::ns::kIot + "Confidence";

catalog::DeviceDescriptor deviceWith(const std::string& id, const std::vector<std::string>& types) {
  catalog::DeviceDescriptor d;
  d.id = id;
  d.iri = "http://tinyml-schema.org/kg/device/" + id;
  for (std::size_t i = 0; i < types.size(); ++i) {
    d.datapoints.push_back({"dp" + std::to_string(i), types[i], id + ".addr" + std::to_string(i)});
  }
  return d;
}

recipes::Recipe twoRoleRecipe(recipes::Cardinality confidenceCardinality) {
  recipes::Recipe r;
  r.recipeId = "r";
  r.name = "r";
  r.inputs = {{"classification", kClassification, recipes::Cardinality::ExactlyOne},
              {"confidence", kConfidence, confidenceCardinality}};
  return r;
}

std::string errorCode(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return "";
}

recipes::Binding acknowledged() {
  recipes::Binding b{"binding-1", "r", {}, recipes::BindingStatus::Acknowledged};
  return b;
}

}  // namespace

TEST(Recipe, ParsesAndRejects) {
  auto r = recipes::parseRecipe(json::parse(std::ifstream(kSource / "data/recipes/quality-dashboard.json")));
  EXPECT_EQ(r.recipeId, "quality-dashboard");
  ASSERT_EQ(r.inputs.size(), 2u);
  EXPECT_EQ(r.inputs[0].semanticType, kClassification);
  EXPECT_EQ(r.inputs[1].cardinality, recipes::Cardinality::OneOrMore);

  const std::vector<std::string> bad = {
      R"([])",
      R"({"recipeId": "x", "name": "x", "inputs": []})",
      R"({"recipeId": "x", "name": "x", "inputs": [{"role": "a", "semanticType": "iot:Confidence"}], "extra": 1})",
      R"({"recipeId": "x", "name": "x", "inputs": [{"role": "a", "semanticType": "iot:Confidence", "cardinality": "many"}]})",
      R"({"recipeId": "x", "name": "x", "inputs": [{"role": "a", "semanticType": "iot:Confidence"}, {"role": "a", "semanticType": "iot:Confidence"}]})",
      R"({"recipeId": "x", "name": "x", "inputs": [{"role": "a", "semanticType": "iot:Confidence"}], "widgets": [{"widgetKind": "pie", "boundRole": "a"}]})",
      R"({"recipeId": "x", "name": "x", "inputs": [{"role": "a", "semanticType": "iot:Confidence"}], "widgets": [{"widgetKind": "table", "boundRole": "b"}]})",
  };
  for (const auto& text : bad) {
    EXPECT_EQ(errorCode([&] { recipes::parseRecipe(json::parse(text)); }), "RecipeParseError") << text;
  }
}

TEST(Recipe, DirectoryLoadingKeepsGoodFilesAndReportsBadOnes) {
  testutil::TempDir dir;
  std::filesystem::copy(kSource / "data/recipes/quality-dashboard.json", dir.path() / "quality-dashboard.json");
  std::ofstream(dir.path() / "broken.json") << "{";
  std::ofstream(dir.path() / "notes.txt") << "ignored";
  auto set = recipes::loadRecipes(dir.path());
  ASSERT_EQ(set.recipes.size(), 2u);
  EXPECT_EQ(set.recipes[0].recipeId, "classification-monitor");
  EXPECT_EQ(set.recipes[1].recipeId, "quality-dashboard");
  ASSERT_EQ(set.errors.size(), 1u);
  EXPECT_EQ(set.errors[0].file, "broken.json");
  EXPECT_EQ(recipes::loadRecipes(dir.path() / "absent").recipes.size(), 1u);
}

TEST(Proposal, OutcomeFollowsCandidateCounts) {
  std::mt19937 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    std::uniform_int_distribution<int> count(0, 3);
    int nClass = count(rng);
    int nConf = count(rng);
    bool confMany = rng() % 2 == 0;
    std::vector<catalog::DeviceDescriptor> devices;
    int id = 0;
    auto spread = [&](int n, const std::string& type) {
      for (int i = 0; i < n; ++i) {
        if (!devices.empty() && rng() % 2 == 0) {
          auto& d = devices[rng() % devices.size()];
          d.datapoints.push_back({"extra" + std::to_string(d.datapoints.size()), type, "a"});
        } else {
          devices.push_back(deviceWith("d" + std::to_string(id++), {type}));
        }
      }
    };
    spread(nClass, kClassification);
    spread(nConf, kConfidence);
    // Unrelated datapoints never count.
    devices.push_back(deviceWith("noise", {vocab::ns::kIot + "Temperature"}));

    auto recipe = twoRoleRecipe(confMany ? recipes::Cardinality::OneOrMore : recipes::Cardinality::ExactlyOne);
    auto p = recipes::proposeBinding(recipe, devices);
    SCOPED_TRACE(std::to_string(nClass) + "/" + std::to_string(nConf) + (confMany ? " many" : " one"));
    if (nClass == 0 || nConf == 0) {
      ASSERT_TRUE(std::holds_alternative<recipes::MissingReport>(p));
      const auto& missing = std::get<recipes::MissingReport>(p).missing;
      EXPECT_EQ(missing.size(), std::size_t(nClass == 0) + std::size_t(nConf == 0));
    } else if (nClass > 1 || (!confMany && nConf > 1)) {
      ASSERT_TRUE(std::holds_alternative<recipes::AmbiguityReport>(p));
      const auto& c = std::get<recipes::AmbiguityReport>(p).candidates;
      EXPECT_EQ(c.count("classification"), std::size_t(nClass > 1));
      EXPECT_EQ(c.count("confidence"), std::size_t(!confMany && nConf > 1));
      if (nClass > 1) EXPECT_EQ(c.at("classification").size(), std::size_t(nClass));
    } else {
      ASSERT_TRUE(std::holds_alternative<recipes::Binding>(p));
      const auto& b = std::get<recipes::Binding>(p);
      EXPECT_EQ(b.status, recipes::BindingStatus::Proposed);
      EXPECT_EQ(b.assignments.at("classification").size(), 1u);
      EXPECT_EQ(b.assignments.at("confidence").size(), std::size_t(nConf));
    }
  }
}

TEST(Proposal, SubclassedDatapointsQualifyButNotSuperclasses) {
  const std::string color = vocab::ns::kIot + "ColorClassificationResult";
  recipes::Recipe general = twoRoleRecipe(recipes::Cardinality::OneOrMore);
  general.inputs.pop_back();
  auto p = recipes::proposeBinding(general, {deviceWith("a", {color})});
  ASSERT_TRUE(std::holds_alternative<recipes::Binding>(p));
  EXPECT_EQ(std::get<recipes::Binding>(p).assignments.at("classification")[0].semanticType, color);

  recipes::Recipe specific = general;
  specific.inputs[0].semanticType = color;
  EXPECT_TRUE(std::holds_alternative<recipes::MissingReport>(
      recipes::proposeBinding(specific, {deviceWith("a", {kClassification})})));
}

TEST(BindingStore, LifecycleAndPersistence) {
  testutil::TempDir dir;
  auto file = dir.path() / "bindings.json";
  {
    recipes::BindingStore store(file);
    auto a = store.add({"", "r", {{"classification", {{"d", "dp", "x", kClassification}}}}, {}});
    auto b = store.add({"", "r", {}, {}});
    EXPECT_EQ(a.bindingId, "binding-1");
    EXPECT_EQ(b.bindingId, "binding-2");
    EXPECT_EQ(errorCode([&] { store.acknowledge("binding-1", "maybe"); }), "InvalidDecisionError");
    EXPECT_EQ(store.acknowledge("binding-1", "accept").status, recipes::BindingStatus::Acknowledged);
    EXPECT_EQ(errorCode([&] { store.acknowledge("binding-1", "reject"); }), "InvalidTransitionError");
    EXPECT_EQ(store.acknowledge("binding-2", "reject").status, recipes::BindingStatus::Rejected);
    EXPECT_EQ(errorCode([&] { store.acknowledge("binding-9", "accept"); }), "UnknownBindingError");
    EXPECT_EQ(errorCode([&] { store.get("binding-9"); }), "UnknownBindingError");
  }
  recipes::BindingStore reopened(file);
  auto list = reopened.list();
  ASSERT_EQ(list.size(), 2u);
  EXPECT_EQ(list[0].status, recipes::BindingStatus::Acknowledged);
  EXPECT_EQ(list[0].assignments.at("classification")[0].address, "x");
  EXPECT_EQ(list[1].status, recipes::BindingStatus::Rejected);
  EXPECT_EQ(reopened.add({"", "r", {}, {}}).bindingId, "binding-3");

  std::ofstream(file) << "{not json";
  EXPECT_EQ(errorCode([&] { recipes::BindingStore broken(file); }), "CorruptStoreError");
}

TEST(Telemetry, ScriptFileMatchesBuiltin) {
  auto script = recipes::parseTelemetryScript(json::parse(std::ifstream(kSource / "data/telemetry/workpieces.json")));
  const auto& builtin = recipes::caseStudyScript();
  ASSERT_EQ(script.size(), builtin.size());
  for (std::size_t i = 0; i < script.size(); ++i) {
    EXPECT_EQ(script[i].classLabel, builtin[i].classLabel);
    EXPECT_EQ(script[i].confidence, builtin[i].confidence);
    EXPECT_EQ(script[i].color, builtin[i].color);
  }
}

TEST(Telemetry, ScriptValidation) {
  for (const char* text : {"[]", "{}", R"([{"classLabel": "a", "confidence": 1.5, "color": "r"}])",
                           R"([{"classLabel": "a", "confidence": 0.5}])",
                           R"([{"classLabel": "a", "confidence": 0.5, "color": "r", "x": 1}])"}) {
    EXPECT_EQ(errorCode([&] { recipes::parseTelemetryScript(json::parse(text)); }), "InvalidTelemetryError") << text;
  }
  EXPECT_EQ(errorCode([] { recipes::TelemetryStream s(recipes::caseStudyScript(), 0); }), "InvalidTelemetryError");
}

TEST(Telemetry, Timestamps) {
  using namespace std::chrono;
  EXPECT_EQ(recipes::formatTimestamp(system_clock::time_point(milliseconds(1704067200123))),
            "2024-01-01T00:00:00.123Z");
  EXPECT_EQ(recipes::formatTimestamp(system_clock::time_point(milliseconds(-1))), "1969-12-31T23:59:59.999Z");
}

TEST(Telemetry, RefusedUntilAcknowledged) {
  recipes::Binding b{"binding-1", "r", {}, recipes::BindingStatus::Proposed};
  EXPECT_EQ(errorCode([&] { recipes::openStream(b, recipes::caseStudyScript(), 100); }), "NotAcknowledgedError");
  b.status = recipes::BindingStatus::Rejected;
  EXPECT_EQ(errorCode([&] { recipes::openStream(b, recipes::caseStudyScript(), 100); }), "NotAcknowledgedError");
}

TEST(Telemetry, DeliversScriptInOrderToEverySubscriber) {
  using namespace std::chrono;
  // A clock that runs backwards: stamps must still never decrease.
  std::atomic<long long> ms{1704067200000};
  auto stream = recipes::openStream(acknowledged(), recipes::caseStudyScript(), 100,
                                    [&] { return system_clock::time_point(milliseconds(ms -= 7)); });
  auto first = stream->subscribe();
  auto second = stream->subscribe();
  const auto& script = recipes::caseStudyScript();
  const std::size_t n = script.size() + 3;  // wraps around once
  std::vector<recipes::TelemetryEvent> a, b;
  for (std::size_t i = 0; i < n; ++i) {
    auto e1 = first->next(seconds(2));
    auto e2 = second->next(seconds(2));
    ASSERT_TRUE(e1 && e2);
    a.push_back(*e1);
    b.push_back(*e2);
  }
  stream->stop();
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_EQ(a[i].classLabel, script[i % script.size()].classLabel) << i;
    EXPECT_EQ(a[i].confidence, script[i % script.size()].confidence) << i;
    EXPECT_EQ(a[i].timestamp, b[i].timestamp);
    EXPECT_EQ(a[i].classLabel, b[i].classLabel);
    if (i) EXPECT_LE(a[i - 1].timestamp, a[i].timestamp);
  }
  EXPECT_FALSE(first->next(milliseconds(50)));
  EXPECT_TRUE(first->closed());
}

TEST(Telemetry, StoppedStreamClosesNewSubscribers) {
  recipes::TelemetryStream stream(recipes::caseStudyScript(), 1000);
  stream.stop();
  EXPECT_TRUE(stream.subscribe()->closed());
}
