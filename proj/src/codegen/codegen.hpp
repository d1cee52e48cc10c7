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

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "catalog/catalog.hpp"
#include "json.hpp"

namespace seloc::codegen {

enum class ValueType { String, Integer, Decimal, Enum };

std::string valueTypeName(ValueType t);

struct ConfigField {
  std::string name;
  std::string file;  // output file the value lands in
  std::string description;
  ValueType valueType = ValueType::String;
  bool required = true;
  std::optional<std::string> defaultValue;  // only for optional fields
  std::vector<std::string> enumValues;
  std::optional<double> minimum;
  std::optional<double> maximum;
  std::string pattern;  // ECMAScript regex a string value must match fully
};

struct TargetDescriptor {
  std::string targetId;
  std::string displayName;
  std::set<std::string> compatibleRuntimePlatforms;
  std::vector<std::string> fileManifest;
};

/// Values a target may read while rendering: semantic ones derived from the
/// descriptors plus the validated user configuration (rendered verbatim).
using Context = std::map<std::string, std::string>;

class Target {
 public:
  virtual ~Target() = default;
  virtual const TargetDescriptor& descriptor() const = 0;
  virtual const std::vector<ConfigField>& fields() const = 0;
  /// Effort-table row per file: {file, traditional LOC, template LOC}.
  virtual std::vector<std::tuple<std::string, int, int>> effortBaselines() const { return {}; }
  /// path -> content. `config` holds the raw validated JSON values.
  virtual std::map<std::string, std::string> render(const Context& context,
                                                    const nlohmann::json& config) const = 0;
};

class TargetRegistry {
 public:
  /// Registry holding the built-in `npu` and `generic-c` targets.
  static const TargetRegistry& builtin();

  void add(std::unique_ptr<Target> target);
  /// Throws Error("UnknownTargetError").
  const Target& get(const std::string& targetId) const;
  std::vector<TargetDescriptor> list() const;

 private:
  std::map<std::string, std::unique_ptr<Target>> targets_;
};

/// Mustache-style `{{name}}` substitution without logic. Throws
/// Error("TemplateError") for unknown names or an unterminated `{{`.
std::string renderTemplate(const std::string& text, const Context& context);

struct BundleMetadata {
  std::string modelUuid;
  std::string deviceId;
  std::string targetId;
  std::string generatedAt;
};

struct ProjectBundle {
  std::map<std::string, std::string> files;
  BundleMetadata metadata;
};

struct EffortRow {
  std::string file;
  int traditional = 0;
  int templateApproach = 0;
  int semantic = 0;  // user inputs landing in this file
};

struct EffortReport {
  int userInputCount = 0;
  int generatedLineCount = 0;
  int baselineTraditional = 766;
  int baselineTemplate = 38;
  double reductionVsTraditional = 0;
  double reductionVsTemplate = 0;
  std::vector<EffortRow> perFile;
};

/// Throws UnknownModelError / UnknownDeviceError / UnknownTargetError /
/// IncompatibleTargetError.
std::vector<ConfigField> requiredConfig(const TargetRegistry& registry, const catalog::ModelCatalog& models,
                                        const catalog::DeviceCatalog& devices, const std::string& targetId,
                                        const std::string& modelUuid, const std::string& deviceId);

/// `generatedAt` is the injected clock reading (ISO-8601). Throws, in this
/// order, the lookup errors above, NotCompatibleError, MissingConfigError,
/// InvalidConfigError (wrong type, out of range, unknown key) and
/// TemplateError.
ProjectBundle generate(const TargetRegistry& registry, const catalog::ModelCatalog& models,
                       const catalog::DeviceCatalog& devices, const std::string& modelUuid,
                       const std::string& deviceId, const std::string& targetId,
                       const nlohmann::json& config, const std::string& generatedAt);

EffortReport effortReport(const TargetRegistry& registry, const ProjectBundle& bundle,
                          const nlohmann::json& config);

/// Uncompressed zip archive of the bundle, entries in path order.
std::string toZip(const ProjectBundle& bundle);

nlohmann::json toJson(const ConfigField& field);
nlohmann::json toJson(const TargetDescriptor& target);
nlohmann::json toJson(const EffortReport& report);

std::unique_ptr<Target> makeNpuTarget();
std::unique_ptr<Target> makeGenericCTarget();

}  // namespace seloc::codegen
