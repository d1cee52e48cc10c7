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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rdf/graph.hpp"

// Namespaces and terms of the model/device ontology. Namespace strings follow
// the published prefix block; `seloc:` and `iot:` hold the artifact's own
// additions (runtime platform, datapoints, input shapes, metrics, semantic
// datapoint types).
namespace seloc::vocab {

namespace ns {
inline const std::string kNnet = "http://tinyml-schema.org/networkschema/";
inline const std::string kSchema = "https://schema.org/";
inline const std::string kOm = "http://www.ontology-of-units-of-measure.org/resource/om-2/";
inline const std::string kSsn = "http://www.w3.org/ns/ssn/";
inline const std::string kSsnSystem = "http://www.w3.org/ns/ssn/systems/";
inline const std::string kS3n = "http://w3id.org/s3n/";
inline const std::string kSosaExtend = "http://tinyml-schema.org/sosa_extend#";
inline const std::string kSsnExtend = "http://tinyml-schema.org/ssn_extend#";
inline const std::string kS3nExtend = "http://tinyml-schema.org/s3n_extend#";
inline const std::string kSeloc = "http://tinyml-schema.org/seloc#";
inline const std::string kIot = "http://tinyml-schema.org/iot#";
inline const std::string kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline const std::string kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline const std::string kXsd = "http://www.w3.org/2001/XMLSchema#";
// Base for entity IRIs minted by the manifest compilers.
inline const std::string kModelBase = "http://tinyml-schema.org/kg/model/";
inline const std::string kDeviceBase = "http://tinyml-schema.org/kg/device/";
inline const std::string kGraphBase = "urn:seloc:graph:";
}  // namespace ns

// nnet:
inline const std::string kNeuralNetwork = ns::kNnet + "NeuralNetwork";
inline const std::string kHasMultiplyAccumulateOps = ns::kNnet + "hasMultiplyAccumulateOps";
// schema:
inline const std::string kIdentifier = ns::kSchema + "identifier";
inline const std::string kName = ns::kSchema + "name";
inline const std::string kDescription = ns::kSchema + "description";
inline const std::string kCategory = ns::kSchema + "category";
inline const std::string kDateCreated = ns::kSchema + "dateCreated";
inline const std::string kMinValue = ns::kSchema + "minValue";
inline const std::string kValue = ns::kSchema + "value";
inline const std::string kUnitCode = ns::kSchema + "unitCode";
// om:
inline const std::string kKilobyte = ns::kOm + "kilobyte";
inline const std::string kMegabyte = ns::kOm + "megabyte";
inline const std::string kByte = ns::kOm + "byte";
// ssn:
inline const std::string kHasInput = ns::kSsn + "hasInput";
inline const std::string kHasSubSystem = ns::kSsn + "hasSubSystem";
// ssn-system:
inline const std::string kInCondition = ns::kSsnSystem + "inCondition";
inline const std::string kHasSystemProperty = ns::kSsnSystem + "hasSystemProperty";
// s3n:
inline const std::string kSmartSensor = ns::kS3n + "SmartSensor";
inline const std::string kMicroController = ns::kS3n + "MicroController";
inline const std::string kHasProcedureFeature = ns::kS3n + "hasProcedureFeature";
inline const std::string kHasSystemCapability = ns::kS3n + "hasSystemCapability";
// s3n_extend:
inline const std::string kRam = ns::kS3nExtend + "RAM";
inline const std::string kFlash = ns::kS3nExtend + "Flash";
// sosa_extend: sensor taxonomy
inline const std::string kCamera = ns::kSosaExtend + "Camera";
inline const std::string kDepthCamera = ns::kSosaExtend + "DepthCamera";
inline const std::string kAccelerometer = ns::kSosaExtend + "Accelerometer";
inline const std::string kGyroscope = ns::kSosaExtend + "Gyroscope";
inline const std::string kMicrophone = ns::kSosaExtend + "Microphone";
inline const std::string kThermometer = ns::kSosaExtend + "Thermometer";
// ssn_extend:
inline const std::string kProvideInput = ns::kSsnExtend + "provideInput";
// seloc:
inline const std::string kRuntimePlatform = ns::kSeloc + "runtimePlatform";
inline const std::string kInputShape = ns::kSeloc + "inputShape";
inline const std::string kHasMetric = ns::kSeloc + "hasMetric";
inline const std::string kHasDatapoint = ns::kSeloc + "hasDatapoint";
inline const std::string kRole = ns::kSeloc + "role";
inline const std::string kSemanticType = ns::kSeloc + "semanticType";
inline const std::string kAddress = ns::kSeloc + "address";
// iot: datapoint semantic types
inline const std::string kClassificationResult = ns::kIot + "ClassificationResult";
inline const std::string kColorClassificationResult = ns::kIot + "ColorClassificationResult";
inline const std::string kConfidence = ns::kIot + "Confidence";
inline const std::string kTemperature = ns::kIot + "Temperature";
inline const std::string kVibration = ns::kIot + "Vibration";

const std::string& rdfType();

/// Every term IRI above (namespaces excluded), each listed once.
const std::vector<std::string>& allTerms();

/// Prefix map used by serializers and as the default for queries.
const rdf::PrefixMap& defaultPrefixes();

/// Closed sensor taxonomy.
const std::vector<std::string>& sensorClasses();
bool isSensorClass(const std::string& iri);

/// Datapoint semantic types.
const std::vector<std::string>& semanticTypes();

/// One-step subclass table over sensors and datapoint types.
std::optional<std::string> superClassOf(const std::string& iri);
/// `actual` equals `required` or is a direct subclass of it.
bool satisfies(const std::string& actual, const std::string& required);

/// Expands `Camera`, `sosa_extend:Camera` or a full IRI against the sensor
/// namespace / default prefixes. Returns the input unchanged if it is
/// already absolute.
std::string expandSensorClass(const std::string& text);
std::string expandSemanticType(const std::string& text);

/// Kilobyte factor for a unit IRI using the SI prefixes of the units
/// ontology (om:kilobyte 1, om:megabyte 1000, om:byte 1/1000); nullopt for
/// unknown units.
std::optional<double> kilobytesPerUnit(const std::string& unitIri);

std::string localName(const std::string& iri);

}  // namespace seloc::vocab
