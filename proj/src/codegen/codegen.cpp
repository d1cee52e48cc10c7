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

#include "codegen/codegen.hpp"

#include <algorithm>
#include <cmath>
#include <regex>
#include <variant>

#include "catalog/vocabulary.hpp"
#include "common/error.hpp"
#include "matchmaker/matchmaker.hpp"

namespace seloc::codegen {

using nlohmann::json;

std::string valueTypeName(ValueType t) {
  switch (t) {
    case ValueType::String: return "string";
    case ValueType::Integer: return "integer";
    case ValueType::Decimal: return "decimal";
    case ValueType::Enum: return "enum";
  }
  return "string";
}

const TargetRegistry& TargetRegistry::builtin() {
  static const TargetRegistry registry = [] {
    TargetRegistry r;
    r.add(makeNpuTarget());
    r.add(makeGenericCTarget());
    return r;
  }();
  return registry;
}

void TargetRegistry::add(std::unique_ptr<Target> target) {
  auto id = target->descriptor().targetId;
  targets_[id] = std::move(target);
}

const Target& TargetRegistry::get(const std::string& targetId) const {
  auto it = targets_.find(targetId);
  if (it == targets_.end()) {
    throw Error("UnknownTargetError", "unknown target '" + targetId + "'", {{"target", targetId}});
  }
  return *it->second;
}

std::vector<TargetDescriptor> TargetRegistry::list() const {
  std::vector<TargetDescriptor> out;
  for (const auto& [_, t] : targets_) out.push_back(t->descriptor());
  return out;
}

std::string renderTemplate(const std::string& text, const Context& context) {
  std::string out;
  out.reserve(text.size());
  std::size_t pos = 0;
  while (true) {
    auto open = text.find("{{", pos);
    if (open == std::string::npos) {
      out.append(text, pos, std::string::npos);
      break;
    }
    auto close = text.find("}}", open + 2);
    if (close == std::string::npos) {
      throw Error("TemplateError", "unterminated placeholder", {{"offset", open}});
    }
    std::string name = text.substr(open + 2, close - open - 2);
    auto it = context.find(name);
    if (it == context.end()) {
      throw Error("TemplateError", "unresolved placeholder '" + name + "'", {{"placeholder", name}});
    }
    out.append(text, pos, open - pos);
    out += it->second;
    pos = close + 2;
  }
  return out;
}

namespace {

const catalog::NeuralNetworkDescriptor& findModel(const catalog::ModelCatalog& models, const std::string& uuid) {
  for (const auto& m : models.models) {
    if (m.uuid == uuid) return m;
  }
  throw Error("UnknownModelError", "unknown model '" + uuid + "'", {{"uuid", uuid}});
}

const catalog::DeviceDescriptor& findDevice(const catalog::DeviceCatalog& devices, const std::string& id) {
  for (const auto& d : devices.devices) {
    if (d.id == id) return d;
  }
  throw Error("UnknownDeviceError", "unknown device '" + id + "'", {{"id", id}});
}

void checkPlatform(const Target& target, const catalog::DeviceDescriptor& device) {
  const auto& platforms = target.descriptor().compatibleRuntimePlatforms;
  if (!platforms.count(device.runtimePlatform)) {
    throw Error("IncompatibleTargetError",
                "target '" + target.descriptor().targetId + "' cannot build for runtime platform '" +
                    device.runtimePlatform + "' of device '" + device.id + "'",
                {{"target", target.descriptor().targetId}, {"runtimePlatform", device.runtimePlatform}});
  }
}

std::string number(double v) { return rdf::Term::number(v).value(); }

// Single-line text for comments and string literals.
std::string flat(std::string s) {
  std::replace_if(s.begin(), s.end(), [](char c) { return c == '\n' || c == '\r'; }, ' ');
  return s;
}

// Returns the canonical text of a valid value or an error message.
std::variant<std::string, std::string> checkValue(const ConfigField& f, const json& v) {
  using R = std::variant<std::string, std::string>;
  auto bad = [](std::string msg) { return R(std::in_place_index<1>, std::move(msg)); };
  auto good = [](std::string text) { return R(std::in_place_index<0>, std::move(text)); };
  auto inRange = [&](double x) {
    return (!f.minimum || x >= *f.minimum) && (!f.maximum || x <= *f.maximum);
  };
  auto rangeText = [&] {
    std::string lo = f.minimum ? number(*f.minimum) : "-inf";
    std::string hi = f.maximum ? number(*f.maximum) : "inf";
    return "[" + lo + ", " + hi + "]";
  };
  switch (f.valueType) {
    case ValueType::String: {
      if (!v.is_string()) return bad("must be a string");
      auto s = v.get<std::string>();
      if (s.empty()) return bad("must not be empty");
      if (!f.pattern.empty() && !std::regex_match(s, std::regex(f.pattern))) {
        return bad("must match " + f.pattern);
      }
      return good(s);
    }
    case ValueType::Integer: {
      if (!v.is_number_integer()) return bad("must be an integer");
      auto x = v.get<long long>();
      if (!inRange(static_cast<double>(x))) return bad("must be within " + rangeText());
      return good(std::to_string(x));
    }
    case ValueType::Decimal: {
      if (!v.is_number()) return bad("must be a number");
      double x = v.get<double>();
      if (!std::isfinite(x) || !inRange(x)) return bad("must be within " + rangeText());
      return good(number(x));
    }
    case ValueType::Enum: {
      if (!v.is_string()) return bad("must be a string");
      auto s = v.get<std::string>();
      if (std::find(f.enumValues.begin(), f.enumValues.end(), s) == f.enumValues.end()) {
        std::string opts;
        for (const auto& e : f.enumValues) opts += (opts.empty() ? "" : ", ") + e;
        return bad("must be one of " + opts);
      }
      return good(s);
    }
  }
  return bad("unsupported type");
}

Context semanticContext(const catalog::NeuralNetworkDescriptor& m, const catalog::DeviceDescriptor& d,
                        const std::string& targetId, const std::string& generatedAt) {
  Context ctx;
  ctx["generated_at"] = generatedAt;
  ctx["target_id"] = targetId;
  ctx["model_uuid"] = m.uuid;
  ctx["model_name"] = flat(m.name);
  ctx["model_macs"] = std::to_string(m.macs);
  ctx["model_min_ram_kb"] = number(m.minRamKb);
  ctx["model_min_flash_kb"] = number(m.minFlashKb);
  std::string sensors;
  for (const auto& cls : m.requiredSensorClasses()) {
    sensors += (sensors.empty() ? "" : ",") + vocab::localName(cls);
  }
  ctx["model_sensor_classes"] = sensors.empty() ? "none" : sensors;
  std::string shape;
  for (const auto& in : m.inputs) {
    if (!in.shape) continue;
    for (std::size_t i = 0; i < in.shape->size(); ++i) {
      shape += (i ? ", " : "") + std::to_string((*in.shape)[i]);
    }
    break;
  }
  ctx["model_input_shape"] = shape.empty() ? "unspecified" : shape;
  ctx["model_input_shape_py"] = shape.empty() ? "None" : "(" + shape + ")";
  ctx["device_id"] = d.id;
  ctx["device_name"] = flat(d.name);
  ctx["device_ram_kb"] = number(d.ramKb);
  ctx["device_flash_kb"] = number(d.flashKb);
  ctx["device_runtime_platform"] = d.runtimePlatform;
  std::string classificationAddress = "unassigned";
  for (const auto& dp : d.datapoints) {
    if (vocab::satisfies(dp.semanticType, vocab::kClassificationResult)) {
      classificationAddress = dp.address;
      break;
    }
  }
  ctx["classification_address"] = flat(classificationAddress);
  return ctx;
}

}  // namespace

std::vector<ConfigField> requiredConfig(const TargetRegistry& registry, const catalog::ModelCatalog& models,
                                        const catalog::DeviceCatalog& devices, const std::string& targetId,
                                        const std::string& modelUuid, const std::string& deviceId) {
  findModel(models, modelUuid);
  const auto& device = findDevice(devices, deviceId);
  const auto& target = registry.get(targetId);
  checkPlatform(target, device);
  return target.fields();
}

ProjectBundle generate(const TargetRegistry& registry, const catalog::ModelCatalog& models,
                       const catalog::DeviceCatalog& devices, const std::string& modelUuid,
                       const std::string& deviceId, const std::string& targetId, const json& config,
                       const std::string& generatedAt) {
  const auto& model = findModel(models, modelUuid);
  const auto& device = findDevice(devices, deviceId);
  const auto& target = registry.get(targetId);
  checkPlatform(target, device);
  if (!match::compatible(model, device)) {
    throw Error("NotCompatibleError",
                "model '" + modelUuid + "' cannot run on device '" + deviceId + "'",
                {{"model", modelUuid}, {"device", deviceId}});
  }
  if (!config.is_object()) {
    throw Error("InvalidConfigError", "config must be a JSON object",
                {{"errors", json::array({{{"field", ""}, {"message", "config must be a JSON object"}}})}});
  }

  const auto& fields = target.fields();
  std::vector<std::string> missing;
  for (const auto& f : fields) {
    if (f.required && !config.contains(f.name)) missing.push_back(f.name);
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw Error("MissingConfigError", "missing config: " + list, {{"missing", missing}});
  }

  Context ctx = semanticContext(model, device, targetId, generatedAt);
  json errors = json::array();
  json effective = json::object();
  for (const auto& [key, value] : config.items()) {
    auto it = std::find_if(fields.begin(), fields.end(), [&](const ConfigField& f) { return f.name == key; });
    if (it == fields.end()) {
      errors.push_back({{"field", key}, {"message", "unknown config field"}});
    }
  }
  for (const auto& f : fields) {
    json value;
    if (config.contains(f.name)) {
      value = config[f.name];
    } else if (f.defaultValue) {
      value = f.valueType == ValueType::Integer   ? json(std::stoll(*f.defaultValue))
              : f.valueType == ValueType::Decimal ? json(std::stod(*f.defaultValue))
                                                  : json(*f.defaultValue);
    } else {
      continue;
    }
    auto checked = checkValue(f, value);
    if (checked.index() == 1) {
      errors.push_back({{"field", f.name}, {"message", f.name + " " + std::get<1>(checked)}});
      continue;
    }
    ctx[f.name] = std::get<0>(checked);
    effective[f.name] = value;
  }
  if (!errors.empty()) {
    throw Error("InvalidConfigError", errors.front()["message"].get<std::string>(), {{"errors", errors}});
  }

  ProjectBundle bundle;
  bundle.metadata = {modelUuid, deviceId, targetId, generatedAt};
  bundle.files = target.render(ctx, effective);
  for (const auto& [path, content] : bundle.files) {
    if (content.find("{{") != std::string::npos) {
      throw Error("TemplateError", "placeholder residue in " + path, {{"file", path}});
    }
  }
  const auto& manifest = target.descriptor().fileManifest;
  if (bundle.files.size() != manifest.size() ||
      !std::all_of(manifest.begin(), manifest.end(), [&](const std::string& f) { return bundle.files.count(f); })) {
    throw Error("TemplateError", "rendered files differ from the target's manifest");
  }
  return bundle;
}

EffortReport effortReport(const TargetRegistry& registry, const ProjectBundle& bundle, const json& config) {
  EffortReport r;
  r.userInputCount = config.is_object() ? static_cast<int>(config.size()) : 0;
  for (const auto& [_, content] : bundle.files) {
    std::size_t start = 0;
    while (start <= content.size()) {
      auto end = content.find('\n', start);
      auto line = content.substr(start, end == std::string::npos ? std::string::npos : end - start);
      if (line.find_first_not_of(" \t\r") != std::string::npos) ++r.generatedLineCount;
      if (end == std::string::npos) break;
      start = end + 1;
    }
  }
  if (r.userInputCount > 0) {
    r.reductionVsTraditional = static_cast<double>(r.baselineTraditional) / r.userInputCount;
    r.reductionVsTemplate = static_cast<double>(r.baselineTemplate) / r.userInputCount;
  }
  const auto& target = registry.get(bundle.metadata.targetId);
  for (const auto& [file, traditional, templ] : target.effortBaselines()) {
    EffortRow row{file, traditional, templ, 0};
    for (const auto& f : target.fields()) {
      if (f.file == file && config.is_object() && config.contains(f.name)) ++row.semantic;
    }
    r.perFile.push_back(row);
  }
  return r;
}

json toJson(const ConfigField& f) {
  json j = {{"name", f.name},
            {"file", f.file},
            {"description", f.description},
            {"valueType", valueTypeName(f.valueType)},
            {"required", f.required}};
  if (f.defaultValue) j["default"] = *f.defaultValue;
  if (!f.enumValues.empty()) j["enumValues"] = f.enumValues;
  if (f.minimum) j["minimum"] = *f.minimum;
  if (f.maximum) j["maximum"] = *f.maximum;
  if (!f.pattern.empty()) j["pattern"] = f.pattern;
  return j;
}

json toJson(const TargetDescriptor& t) {
  return {{"targetId", t.targetId},
          {"displayName", t.displayName},
          {"compatibleRuntimePlatforms", t.compatibleRuntimePlatforms},
          {"fileManifest", t.fileManifest}};
}

json toJson(const EffortReport& r) {
  json rows = json::array();
  for (const auto& row : r.perFile) {
    rows.push_back({{"file", row.file},
                    {"traditional", row.traditional},
                    {"template", row.templateApproach},
                    {"semantic", row.semantic}});
  }
  return {{"userInputCount", r.userInputCount},
          {"generatedLineCount", r.generatedLineCount},
          {"baselineTraditional", r.baselineTraditional},
          {"baselineTemplate", r.baselineTemplate},
          {"reductionVsTraditional", r.reductionVsTraditional},
          {"reductionVsTemplate", r.reductionVsTemplate},
          {"perFile", rows}};
}

}  // namespace seloc::codegen
