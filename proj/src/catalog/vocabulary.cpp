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

#include "catalog/vocabulary.hpp"

#include <algorithm>
#include <map>

namespace seloc::vocab {

const std::string& rdfType() {
  static const std::string type(rdf::rdfns::kType);
  return type;
}

const std::vector<std::string>& allTerms() {
  static const std::vector<std::string> terms = {
      kNeuralNetwork, kHasMultiplyAccumulateOps,
      kIdentifier, kName, kDescription, kCategory, kDateCreated, kMinValue, kValue, kUnitCode,
      kKilobyte, kMegabyte, kByte,
      kHasInput, kHasSubSystem,
      kInCondition, kHasSystemProperty,
      kSmartSensor, kMicroController, kHasProcedureFeature, kHasSystemCapability,
      kRam, kFlash,
      kCamera, kDepthCamera, kAccelerometer, kGyroscope, kMicrophone, kThermometer,
      kProvideInput,
      kRuntimePlatform, kInputShape, kHasMetric, kHasDatapoint, kRole, kSemanticType, kAddress,
      kClassificationResult, kColorClassificationResult, kConfidence, kTemperature, kVibration,
  };
  return terms;
}

const rdf::PrefixMap& defaultPrefixes() {
  static const rdf::PrefixMap prefixes = {
      {"nnet", ns::kNnet},
      {"schema", ns::kSchema},
      {"om", ns::kOm},
      {"ssn", ns::kSsn},
      {"ssn-system", ns::kSsnSystem},
      {"s3n", ns::kS3n},
      {"sosa_extend", ns::kSosaExtend},
      {"ssn_extend", ns::kSsnExtend},
      {"s3n_extend", ns::kS3nExtend},
      {"seloc", ns::kSeloc},
      {"iot", ns::kIot},
      {"rdf", ns::kRdf},
      {"rdfs", ns::kRdfs},
      {"xsd", ns::kXsd},
      {"model", ns::kModelBase},
      {"device", ns::kDeviceBase},
  };
  return prefixes;
}

const std::vector<std::string>& sensorClasses() {
  static const std::vector<std::string> classes = {kCamera,    kDepthCamera, kAccelerometer,
                                                   kGyroscope, kMicrophone,  kThermometer};
  return classes;
}

bool isSensorClass(const std::string& iri) {
  const auto& c = sensorClasses();
  return std::find(c.begin(), c.end(), iri) != c.end();
}

const std::vector<std::string>& semanticTypes() {
  static const std::vector<std::string> types = {kClassificationResult, kColorClassificationResult,
                                                 kConfidence, kTemperature, kVibration};
  return types;
}

std::optional<std::string> superClassOf(const std::string& iri) {
  static const std::map<std::string, std::string> table = {
      {kDepthCamera, kCamera},
      {kColorClassificationResult, kClassificationResult},
  };
  auto it = table.find(iri);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

bool satisfies(const std::string& actual, const std::string& required) {
  if (actual == required) return true;
  auto super = superClassOf(actual);
  return super && *super == required;
}

namespace {

std::string expandWith(const std::string& text, const std::string& defaultNs) {
  if (rdf::isAbsoluteIri(text) && text.find("://") != std::string::npos) return text;
  auto colon = text.find(':');
  if (colon != std::string::npos) {
    if (auto ns = defaultPrefixes().lookup(text.substr(0, colon))) {
      return *ns + text.substr(colon + 1);
    }
    return text;
  }
  return defaultNs + text;
}

}  // namespace

std::string expandSensorClass(const std::string& text) { return expandWith(text, ns::kSosaExtend); }

std::string expandSemanticType(const std::string& text) { return expandWith(text, ns::kIot); }

std::optional<double> kilobytesPerUnit(const std::string& unitIri) {
  if (unitIri == kKilobyte) return 1.0;
  if (unitIri == kMegabyte) return 1000.0;
  if (unitIri == kByte) return 1.0 / 1000.0;
  return std::nullopt;
}

std::string localName(const std::string& iri) {
  auto pos = iri.find_last_of("#/:");
  return pos == std::string::npos ? iri : iri.substr(pos + 1);
}

}  // namespace seloc::vocab
