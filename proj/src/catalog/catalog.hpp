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

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "rdf/graph.hpp"

namespace seloc::catalog {

struct ModelInput {
  std::string sensorClass;  // IRI from the sensor taxonomy
  std::optional<std::vector<long long>> shape;

  bool operator==(const ModelInput&) const = default;
};

struct NeuralNetworkDescriptor {
  std::string iri;
  std::string uuid;
  std::string name;
  std::string description;
  std::string category;
  std::vector<ModelInput> inputs;
  long long macs = 0;
  double minRamKb = 0;
  double minFlashKb = 0;
  std::map<std::string, double> metrics;
  std::string created;  // xsd:date lexical form or empty
  std::string graphIri;

  /// Distinct sensor classes over all inputs.
  std::set<std::string> requiredSensorClasses() const;
};

struct Datapoint {
  std::string role;
  std::string semanticType;  // IRI
  std::string address;

  bool operator==(const Datapoint&) const = default;
};

struct DeviceDescriptor {
  std::string iri;
  std::string id;
  std::string name;
  std::set<std::string> sensorClasses;
  double ramKb = 0;
  double flashKb = 0;
  std::string runtimePlatform = "none";
  std::vector<Datapoint> datapoints;
  std::string graphIri;
};

/// Closed set of rule ids.
namespace rule {
inline const std::string kMissingIdentifier = "missing-identifier";
inline const std::string kMissingProperty = "missing-property";
inline const std::string kInvalidLiteral = "invalid-literal";
inline const std::string kNonPositiveCapacity = "non-positive-capacity";
inline const std::string kUnknownUnit = "unknown-unit";
inline const std::string kUnknownSensorClass = "unknown-sensor-class";
inline const std::string kUnknownSemanticType = "unknown-semantic-type";
inline const std::string kDuplicateIdentifier = "duplicate-identifier";
inline const std::string kDuplicateDatapointRole = "duplicate-datapoint-role";
inline const std::string kUnknownRuntimePlatform = "unknown-runtime-platform";
inline const std::string kNoEntity = "no-entity";
}  // namespace rule

const std::vector<std::string>& ruleIds();

struct Violation {
  std::string subjectIri;
  std::string ruleId;
  std::string message;
};

enum class EntityKind { Model, Device };

/// Runtime platforms a device may declare.
const std::vector<std::string>& knownRuntimePlatforms();

// --- manifests ---------------------------------------------------------------

enum class LayerKind { Dense, Conv2d, Pooling, Other };

struct Layer {
  LayerKind kind = LayerKind::Other;
  std::vector<long long> dims;
};

/// dense(in, out) -> in*out; conv2d(kh, kw, cin, cout, hout, wout) -> product;
/// pooling/other -> 0. Throws Error("InvalidLayerError") for missing or
/// non-positive dims and on overflow.
long long computeMacs(const std::vector<Layer>& layers);

struct ModelManifest {
  std::string uuid;
  std::string name;
  std::string description;
  std::string category;
  std::string created;
  std::vector<ModelInput> inputs;  // sensor classes already expanded
  long long macs = 0;
  double minRam = 0;    // in `unit`
  double minFlash = 0;  // in `unit`
  std::string unit;     // om: unit IRI
  std::map<std::string, double> metrics;
};

struct DeviceManifest {
  std::string id;
  std::string name;
  std::vector<std::string> sensors;  // expanded IRIs
  double ram = 0;
  double flash = 0;
  std::string unit;
  std::string runtimePlatform = "none";
  std::vector<Datapoint> datapoints;
};

/// Validate and decode. Unknown fields are rejected. Throws
/// Error("ManifestSchemaError") whose details list {path, message} items.
ModelManifest parseModelManifest(const nlohmann::json& doc);
DeviceManifest parseDeviceManifest(const nlohmann::json& doc);

/// Emits the model in the shape matched by the published discovery query:
/// type, identifier, description, one ssn:hasInput per input with a sensor
/// node providing it, MACs, and RAM/Flash procedure-feature conditions.
rdf::Graph compileModelManifest(const ModelManifest& manifest, const std::string& graphName = {});
rdf::Graph compileDeviceManifest(const DeviceManifest& manifest, const std::string& graphName = {});

/// Compiles every *.json manifest of `directory` (sorted by file name) into
/// one graph. Errors name the offending file in their details. Throws
/// Error("IoError") for an unreadable directory or file.
rdf::Graph compileManifestDirectory(const std::filesystem::path& directory, EntityKind kind,
                                    const std::string& graphName = {});

std::string modelIri(const std::string& uuid);
std::string deviceIri(const std::string& id);
/// `models` -> urn:seloc:graph:models; absolute IRIs pass through.
std::string graphIri(const std::string& name);

// --- extraction ----------------------------------------------------------------

struct ModelCatalog {
  std::vector<NeuralNetworkDescriptor> models;  // sorted by uuid
  std::vector<Violation> violations;
};

struct DeviceCatalog {
  std::vector<DeviceDescriptor> devices;  // sorted by id
  std::vector<Violation> violations;
};

ModelCatalog extractModels(const rdf::Dataset& dataset);
DeviceCatalog extractDevices(const rdf::Dataset& dataset);

/// Checks required properties, positive capacities, unit codes, sensor and
/// datapoint classes. Empty means conformant.
std::vector<Violation> validate(const rdf::Graph& graph, EntityKind kind);

// --- JSON views ----------------------------------------------------------------

nlohmann::json toJson(const NeuralNetworkDescriptor& d);
nlohmann::json toJson(const DeviceDescriptor& d);
nlohmann::json toJson(const Violation& v);
/// One compact JSON object per line.
std::string violationsToJsonLines(const std::vector<Violation>& violations);

}  // namespace seloc::catalog
