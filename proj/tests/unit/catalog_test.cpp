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

#include "catalog/catalog.hpp"
#include "catalog/vocabulary.hpp"
#include "common/error.hpp"
#include "rdf/turtle.hpp"
#include "test_util.hpp"

using namespace seloc;
using nlohmann::json;

namespace {

const std::filesystem::path kSource = SELOC_SOURCE_DIR;

json modelDoc() {
  return json::parse(R"({
    "uuid": "m-1", "name": "tiny", "description": "A tiny model", "category": "image-classification",
    "created": "2022-03-14",
    "inputs": [{"sensorClass": "Camera", "shape": [1, 96, 96, 3]}],
    "macs": 1000, "minRamKb": 94, "minFlashKb": 600, "metrics": {"accuracy": 0.9}
  })");
}

json deviceDoc() {
  return json::parse(R"({
    "id": "dev-1", "name": "Board", "sensors": ["Camera", "Microphone"], "ramKb": 144, "flashKb": 621,
    "runtimePlatform": "npu",
    "datapoints": [{"role": "classification", "semanticType": "iot:ClassificationResult", "address": "db1.x"}]
  })");
}

std::vector<std::string> schemaPaths(const json& doc, bool model) {
  try {
    if (model) {
      catalog::parseModelManifest(doc);
    } else {
      catalog::parseDeviceManifest(doc);
    }
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "ManifestSchemaError");
    std::vector<std::string> paths;
    for (const auto& item : e.details()["errors"]) paths.push_back(item["path"]);
    return paths;
  }
  return {};
}

std::string prefixes() {
  std::string out;
  for (const auto& [p, ns] : vocab::defaultPrefixes().entries()) out += "@prefix " + p + ": <" + ns + "> .\n";
  return out;
}

std::vector<std::string> rulesOf(const std::string& turtle, catalog::EntityKind kind) {
  auto g = rdf::parseTurtle(prefixes() + turtle);
  g.setName("urn:seloc:graph:test");
  std::vector<std::string> out;
  for (const auto& v : catalog::validate(g, kind)) out.push_back(v.ruleId);
  return out;
}

std::string modelTurtle(const std::string& ram = "94", const std::string& unit = "om:kilobyte",
                        const std::string& sensor = "sosa_extend:Camera") {
  return R"(
model:x a nnet:NeuralNetwork ; schema:identifier "x" ; schema:name "x" ; schema:description "d" ;
  nnet:hasMultiplyAccumulateOps 10 ; ssn:hasInput _:in ;
  s3n:hasProcedureFeature _:f1 , _:f2 .
_:f1 ssn-system:inCondition [ a s3n_extend:RAM ; schema:minValue )" + ram + " ; schema:unitCode " + unit + R"( ] .
_:f2 ssn-system:inCondition [ a s3n_extend:Flash ; schema:minValue 600 ; schema:unitCode om:kilobyte ] .
_:s ssn_extend:provideInput _:in ; a )" + sensor + " .\n";
}

}  // namespace

TEST(Manifest, CompileThenExtractRoundTrips) {
  auto m = catalog::parseModelManifest(modelDoc());
  rdf::Dataset ds;
  ds.putGraph(catalog::compileModelManifest(m));
  auto cat = catalog::extractModels(ds);
  ASSERT_TRUE(cat.violations.empty());
  ASSERT_EQ(cat.models.size(), 1u);
  const auto& d = cat.models[0];
  EXPECT_EQ(d.uuid, "m-1");
  EXPECT_EQ(d.iri, "http://tinyml-schema.org/kg/model/m-1");
  EXPECT_EQ(d.macs, 1000);
  EXPECT_EQ(d.minRamKb, 94);
  EXPECT_EQ(d.minFlashKb, 600);
  EXPECT_EQ(d.created, "2022-03-14");
  EXPECT_EQ(d.metrics.at("accuracy"), 0.9);
  ASSERT_EQ(d.inputs.size(), 1u);
  EXPECT_EQ(d.inputs[0].sensorClass, vocab::ns::kSosaExtend + "Camera");
  EXPECT_EQ(d.inputs[0].shape, (std::vector<long long>{1, 96, 96, 3}));
  EXPECT_EQ(d.graphIri, "urn:seloc:graph:models");

  auto dev = catalog::parseDeviceManifest(deviceDoc());
  ds.putGraph(catalog::compileDeviceManifest(dev));
  auto devices = catalog::extractDevices(ds);
  ASSERT_TRUE(devices.violations.empty());
  ASSERT_EQ(devices.devices.size(), 1u);
  EXPECT_EQ(devices.devices[0].runtimePlatform, "npu");
  EXPECT_EQ(devices.devices[0].sensorClasses.size(), 2u);
  ASSERT_EQ(devices.devices[0].datapoints.size(), 1u);
  EXPECT_EQ(devices.devices[0].datapoints[0].semanticType, vocab::ns::kIot + "ClassificationResult");
}

TEST(Manifest, MegabytesAreConvertedToKilobytes) {
  auto doc = modelDoc();
  doc["minRamKb"] = 0.094;
  doc["minFlashKb"] = 0.6;
  doc["unit"] = "megabyte";
  rdf::Dataset ds;
  ds.putGraph(catalog::compileModelManifest(catalog::parseModelManifest(doc)));
  auto cat = catalog::extractModels(ds);
  ASSERT_EQ(cat.models.size(), 1u);
  EXPECT_NEAR(cat.models[0].minRamKb, 94, 1e-9);
  EXPECT_NEAR(cat.models[0].minFlashKb, 600, 1e-9);
}

TEST(Manifest, CollectsEveryProblem) {
  auto doc = modelDoc();
  doc["minRamKb"] = 0;
  doc["created"] = "14.03.2022";
  doc["inputs"][0]["sensorClass"] = "Sonar";
  doc["extra"] = true;
  doc["metrics"]["accuracy"] = 1.5;
  auto paths = schemaPaths(doc, true);
  std::sort(paths.begin(), paths.end());
  EXPECT_EQ(paths, (std::vector<std::string>{"created", "extra", "inputs[0].sensorClass", "metrics.accuracy",
                                             "minRamKb"}));
}

TEST(Manifest, ZeroCapacityMessage) {
  auto doc = modelDoc();
  doc["minRamKb"] = 0;
  try {
    catalog::parseModelManifest(doc);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("minRamKb must be > 0"), std::string::npos) << e.what();
  }
}

TEST(Manifest, LayersMustAgreeWithMacs) {
  auto doc = modelDoc();
  doc["layers"] = json::parse(R"([{"kind": "dense", "dims": [10, 10]}])");
  EXPECT_EQ(schemaPaths(doc, true), std::vector<std::string>{"macs"});
  doc.erase("macs");
  EXPECT_EQ(catalog::parseModelManifest(doc).macs, 100);
}

TEST(Manifest, ComputeMacs) {
  using catalog::Layer;
  using catalog::LayerKind;
  EXPECT_EQ(catalog::computeMacs({Layer{LayerKind::Dense, {128, 64}}, Layer{LayerKind::Dense, {64, 4}}}), 8448);
  EXPECT_EQ(catalog::computeMacs({Layer{LayerKind::Conv2d, {3, 3, 8, 16, 48, 48}}, Layer{LayerKind::Pooling, {}}}),
            3 * 3 * 8 * 16 * 48 * 48);
  try {
    catalog::computeMacs({Layer{LayerKind::Dense, {0, 4}}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "InvalidLayerError");
  }
}

TEST(Manifest, DeviceProblems) {
  auto doc = deviceDoc();
  doc["runtimePlatform"] = "fpga";
  doc["datapoints"].push_back(doc["datapoints"][0]);
  doc["ramKb"] = -1;
  auto paths = schemaPaths(doc, false);
  std::sort(paths.begin(), paths.end());
  EXPECT_EQ(paths, (std::vector<std::string>{"datapoints[1].role", "ramKb", "runtimePlatform"}));
}

TEST(Manifest, NonObjectIsRejected) { EXPECT_EQ(schemaPaths(json::array(), true), std::vector<std::string>{""}); }

TEST(Extract, ConformantGraphHasNoViolations) {
  EXPECT_TRUE(rulesOf(modelTurtle(), catalog::EntityKind::Model).empty());
}

TEST(Extract, ReportsRuleIds) {
  EXPECT_EQ(rulesOf(modelTurtle("0"), catalog::EntityKind::Model),
            std::vector<std::string>{catalog::rule::kNonPositiveCapacity});
  EXPECT_EQ(rulesOf(modelTurtle("94", "om:gigabyte"), catalog::EntityKind::Model),
            std::vector<std::string>{catalog::rule::kUnknownUnit});
  EXPECT_EQ(rulesOf(modelTurtle("94", "om:kilobyte", "sosa_extend:Sonar"), catalog::EntityKind::Model),
            std::vector<std::string>{catalog::rule::kUnknownSensorClass});
  EXPECT_EQ(rulesOf(modelTurtle("\"many\""), catalog::EntityKind::Model),
            std::vector<std::string>{catalog::rule::kInvalidLiteral});
  EXPECT_EQ(rulesOf("<urn:x> <urn:p> 1 .", catalog::EntityKind::Model),
            std::vector<std::string>{catalog::rule::kNoEntity});
  EXPECT_EQ(rulesOf("model:y a nnet:NeuralNetwork ; schema:name \"y\" .", catalog::EntityKind::Model),
            std::vector<std::string>{catalog::rule::kMissingIdentifier});
}

TEST(Extract, DuplicateIdentifierKeepsFirst) {
  std::string twice = modelTurtle();
  std::string copy = modelTurtle();
  copy.replace(copy.find("model:x"), 7, "model:z");
  auto g = rdf::parseTurtle(prefixes() + twice + copy);
  rdf::Dataset ds;
  ds.putGraph(g);
  auto cat = catalog::extractModels(ds);
  ASSERT_EQ(cat.models.size(), 1u);
  EXPECT_EQ(cat.models[0].iri, "http://tinyml-schema.org/kg/model/x");
  ASSERT_EQ(cat.violations.size(), 1u);
  EXPECT_EQ(cat.violations[0].ruleId, catalog::rule::kDuplicateIdentifier);
}

TEST(Extract, DeviceRules) {
  const std::string base = R"(
device:d a s3n:SmartSensor ; schema:identifier "d" ; schema:name "d" ; seloc:runtimePlatform "PLATFORM" ;
  ssn:hasSubSystem [ a sosa_extend:Camera ] , [ a s3n:MicroController ; s3n:hasSystemCapability [
    ssn-system:hasSystemProperty [ a s3n_extend:RAM ; schema:value 10 ; schema:unitCode om:kilobyte ] ,
                                 [ a s3n_extend:Flash ; schema:value 10 ; schema:unitCode om:kilobyte ] ] ] ;
  seloc:hasDatapoint [ seloc:role "r" ; seloc:semanticType TYPE ; seloc:address "a" ] .
)";
  auto variant = [&](const std::string& platform, const std::string& type) {
    std::string t = base;
    t.replace(t.find("PLATFORM"), 8, platform);
    t.replace(t.find("TYPE"), 4, type);
    return t;
  };
  EXPECT_TRUE(rulesOf(variant("npu", "iot:Confidence"), catalog::EntityKind::Device).empty());
  EXPECT_EQ(rulesOf(variant("fpga", "iot:Confidence"), catalog::EntityKind::Device),
            std::vector<std::string>{catalog::rule::kUnknownRuntimePlatform});
  EXPECT_EQ(rulesOf(variant("npu", "iot:Banana"), catalog::EntityKind::Device),
            std::vector<std::string>{catalog::rule::kUnknownSemanticType});
}

TEST(Extract, ViolationsAsJsonLines) {
  std::vector<catalog::Violation> v = {{"urn:a", "missing-property", "no RAM"}, {"urn:b", "unknown-unit", "x"}};
  auto text = catalog::violationsToJsonLines(v);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 2);
  EXPECT_EQ(json::parse(text.substr(0, text.find('\n')))["ruleId"], "missing-property");
}

TEST(Fixtures, Census) {
  auto ds = service::fixtureDataset();
  auto models = catalog::extractModels(ds);
  auto devices = catalog::extractDevices(ds);
  EXPECT_EQ(models.models.size(), 22u);
  EXPECT_EQ(devices.devices.size(), 9u);
  EXPECT_TRUE(models.violations.empty());
  EXPECT_TRUE(devices.violations.empty());
  for (const auto& m : models.models) EXPECT_FALSE(m.inputs.empty()) << m.name;
}

TEST(Fixtures, CommittedTurtleMatchesManifests) {
  for (const auto& [name, kind] : {std::pair{"models", catalog::EntityKind::Model},
                                   std::pair{"devices", catalog::EntityKind::Device}}) {
    auto compiled = catalog::compileManifestDirectory(kSource / "data/manifests" / name, kind);
    std::ifstream in(kSource / "data/fixtures" / (std::string(name) + ".ttl"));
    std::stringstream buf;
    buf << in.rdbuf();
    EXPECT_TRUE(rdf::isomorphic(compiled, rdf::parseTurtle(buf.str()))) << name << ": run the regen-fixtures target";
  }
}

TEST(Fixtures, ManifestDirectoryErrorsNameTheFile) {
  testutil::TempDir dir;
  std::ofstream(dir.path() / "bad.json") << R"({"uuid": "x"})";
  try {
    catalog::compileManifestDirectory(dir.path(), catalog::EntityKind::Model);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "ManifestSchemaError");
    EXPECT_EQ(e.details()["file"], "bad.json");
  }
}
