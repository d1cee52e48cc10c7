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
#include <set>
#include <string>
#include <vector>

#include "catalog/catalog.hpp"
#include "json.hpp"
#include "rdf/graph.hpp"

namespace seloc::match {

struct MatchResult {
  std::string modelUuid;
  std::string deviceId;
  double ramMarginKb = 0;
  double flashMarginKb = 0;
  std::set<std::string> satisfiedSensors;  // the model's required classes
  int rank = 0;                            // 1-based position after ordering
};

enum class Direction { ModelsForDevice, DevicesForModel };

/// models-for-device uses maxRamKb/maxFlashKb and, in requiredSensorClasses,
/// the sensor classes the device offers. devices-for-model uses
/// minRamKb/minFlashKb and the classes the model needs.
struct MatchConstraints {
  std::optional<double> maxRamKb;
  std::optional<double> maxFlashKb;
  std::optional<std::set<std::string>> requiredSensorClasses;
  std::optional<double> minRamKb;
  std::optional<double> minFlashKb;
  // Off unless set; compares against the "accuracy" metric.
  std::optional<double> minAccuracy;
};

/// True when `device` can host `model`: RAM and Flash minima fit (inclusive)
/// and every required sensor class is satisfied by some device sensor.
bool compatible(const catalog::NeuralNetworkDescriptor& model,
                const catalog::DeviceDescriptor& device,
                std::optional<double> minAccuracy = std::nullopt);

/// Ascending minRamKb, then uuid. Throws Error("UnknownDeviceError").
std::vector<MatchResult> modelsForDevice(const catalog::ModelCatalog& models,
                                         const catalog::DeviceCatalog& devices,
                                         const std::string& deviceId,
                                         std::optional<double> minAccuracy = std::nullopt);
/// Ascending device ramKb, then id. Throws Error("UnknownModelError").
std::vector<MatchResult> devicesForModel(const catalog::ModelCatalog& models,
                                         const catalog::DeviceCatalog& devices,
                                         const std::string& modelUuid);

std::vector<MatchResult> modelsForDevice(const rdf::Dataset& dataset, const std::string& deviceId);
std::vector<MatchResult> devicesForModel(const rdf::Dataset& dataset, const std::string& modelUuid);

/// Constraints describing a device (models-for-device) or a model
/// (devices-for-model).
MatchConstraints constraintsFor(const catalog::DeviceDescriptor& device);
MatchConstraints constraintsFor(const catalog::NeuralNetworkDescriptor& model);

/// SPARQL text in the shape of the published discovery queries. Throws
/// Error("InvalidConstraintsError") when the direction's fields are missing
/// or the other direction's fields are present.
std::string compileMatchQuery(Direction direction, const MatchConstraints& constraints);

nlohmann::json toJson(const MatchResult& r);
nlohmann::json toJson(const std::vector<MatchResult>& results);

}  // namespace seloc::match
