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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <set>

#include "catalog/catalog.hpp"
#include "catalog/vocabulary.hpp"
#include "common/error.hpp"

namespace seloc::catalog {

using nlohmann::json;
using rdf::Term;

namespace {

// Collects every schema problem before throwing, so callers see all paths.
class SchemaErrors {
 public:
  void add(std::string path, std::string message) {
    items_.push_back({{"path", std::move(path)}, {"message", std::move(message)}});
  }
  bool empty() const { return items_.empty(); }
  [[noreturn]] void raise() const {
    std::string first = items_.front()["message"].get<std::string>();
    std::string msg = items_.size() == 1 ? first
                                         : first + " (and " + std::to_string(items_.size() - 1) +
                                               " more)";
    throw Error("ManifestSchemaError", msg, {{"errors", items_}});
  }

 private:
  json items_ = json::array();
};

void rejectUnknown(const json& obj, const std::set<std::string>& allowed, const std::string& path,
                   SchemaErrors& errors) {
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) errors.add(path + key, "unknown field '" + key + "'");
  }
}

std::string requireString(const json& obj, const std::string& key, const std::string& path,
                          SchemaErrors& errors, bool required = true) {
  if (!obj.contains(key)) {
    if (required) errors.add(path + key, key + " is required");
    return {};
  }
  if (!obj[key].is_string()) {
    errors.add(path + key, key + " must be a string");
    return {};
  }
  auto s = obj[key].get<std::string>();
  if (required && s.empty()) errors.add(path + key, key + " must not be empty");
  return s;
}

double requirePositive(const json& obj, const std::string& key, SchemaErrors& errors) {
  if (!obj.contains(key)) {
    errors.add(key, key + " is required");
    return 0;
  }
  if (!obj[key].is_number()) {
    errors.add(key, key + " must be a number");
    return 0;
  }
  double v = obj[key].get<double>();
  if (!(v > 0) || !std::isfinite(v)) errors.add(key, key + " must be > 0");
  return v;
}

bool validIdentifier(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == '_' || c == '-' || c == '.';
    if (!ok) return false;
  }
  return true;
}

bool validDate(const std::string& s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u, 8u, 9u}) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  int month = std::stoi(s.substr(5, 2));
  int day = std::stoi(s.substr(8, 2));
  return month >= 1 && month <= 12 && day >= 1 && day <= 31;
}

std::string parseUnit(const json& doc, SchemaErrors& errors) {
  if (!doc.contains("unit")) return vocab::kKilobyte;
  if (!doc["unit"].is_string()) {
    errors.add("unit", "unit must be a string");
    return vocab::kKilobyte;
  }
  auto u = doc["unit"].get<std::string>();
  if (u == "kilobyte") return vocab::kKilobyte;
  if (u == "megabyte") return vocab::kMegabyte;
  if (u == "byte") return vocab::kByte;
  errors.add("unit", "unit must be one of byte, kilobyte, megabyte");
  return vocab::kKilobyte;
}

LayerKind parseLayerKind(const std::string& s, bool& ok) {
  ok = true;
  if (s == "dense") return LayerKind::Dense;
  if (s == "conv2d") return LayerKind::Conv2d;
  if (s == "pooling") return LayerKind::Pooling;
  if (s == "other") return LayerKind::Other;
  ok = false;
  return LayerKind::Other;
}

Term blank() { return Term::blank(rdf::freshBlankLabel()); }
Term iri(const std::string& s) { return Term::iri(s); }
Term str(const std::string& s) { return Term::literal(s); }

}  // namespace

const std::vector<std::string>& ruleIds() {
  static const std::vector<std::string> ids = {
      rule::kMissingIdentifier,   rule::kMissingProperty,         rule::kInvalidLiteral,
      rule::kNonPositiveCapacity, rule::kUnknownUnit,             rule::kUnknownSensorClass,
      rule::kUnknownSemanticType, rule::kDuplicateIdentifier,     rule::kDuplicateDatapointRole,
      rule::kUnknownRuntimePlatform, rule::kNoEntity};
  return ids;
}

const std::vector<std::string>& knownRuntimePlatforms() {
  static const std::vector<std::string> platforms = {"npu", "generic-c", "none"};
  return platforms;
}

std::set<std::string> NeuralNetworkDescriptor::requiredSensorClasses() const {
  std::set<std::string> out;
  for (const auto& in : inputs) out.insert(in.sensorClass);
  return out;
}

long long computeMacs(const std::vector<Layer>& layers) {
  long long total = 0;
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& layer = layers[i];
    std::size_t needed = 0;
    switch (layer.kind) {
      case LayerKind::Dense: needed = 2; break;
      case LayerKind::Conv2d: needed = 6; break;
      case LayerKind::Pooling:
      case LayerKind::Other: continue;
    }
    if (layer.dims.size() != needed) {
      throw Error("InvalidLayerError", "layer " + std::to_string(i) + " needs " +
                                           std::to_string(needed) + " dims, got " +
                                           std::to_string(layer.dims.size()),
                  {{"layer", i}});
    }
    long long product = 1;
    for (long long d : layer.dims) {
      if (d <= 0) {
        throw Error("InvalidLayerError", "layer " + std::to_string(i) + " has a non-positive dim",
                    {{"layer", i}});
      }
      if (__builtin_mul_overflow(product, d, &product)) {
        throw Error("InvalidLayerError", "MAC count overflows", {{"layer", i}});
      }
    }
    if (__builtin_add_overflow(total, product, &total)) {
      throw Error("InvalidLayerError", "MAC count overflows", {{"layer", i}});
    }
  }
  return total;
}

ModelManifest parseModelManifest(const json& doc) {
  SchemaErrors errors;
  if (!doc.is_object()) {
    errors.add("", "model manifest must be a JSON object");
    errors.raise();
  }
  rejectUnknown(doc,
                {"uuid", "name", "description", "category", "created", "inputs", "macs", "layers",
                 "minRamKb", "minFlashKb", "unit", "metrics"},
                "", errors);
  ModelManifest m;
  m.uuid = requireString(doc, "uuid", "", errors);
  if (!m.uuid.empty() && !validIdentifier(m.uuid)) {
    errors.add("uuid", "uuid may only contain letters, digits, '_', '-', '.'");
  }
  m.name = requireString(doc, "name", "", errors);
  m.description = requireString(doc, "description", "", errors);
  m.category = requireString(doc, "category", "", errors, false);
  m.created = requireString(doc, "created", "", errors, false);
  if (!m.created.empty() && !validDate(m.created)) errors.add("created", "created must be YYYY-MM-DD");

  if (doc.contains("inputs")) {
    if (!doc["inputs"].is_array()) {
      errors.add("inputs", "inputs must be an array");
    } else {
      for (std::size_t i = 0; i < doc["inputs"].size(); ++i) {
        const auto& in = doc["inputs"][i];
        const std::string path = "inputs[" + std::to_string(i) + "].";
        if (!in.is_object()) {
          errors.add(path, "input must be an object");
          continue;
        }
        rejectUnknown(in, {"sensorClass", "shape"}, path, errors);
        ModelInput input;
        auto cls = requireString(in, "sensorClass", path, errors);
        input.sensorClass = vocab::expandSensorClass(cls);
        if (!cls.empty() && !vocab::isSensorClass(input.sensorClass)) {
          errors.add(path + "sensorClass", "unknown sensor class '" + cls + "'");
        }
        if (in.contains("shape")) {
          std::vector<long long> shape;
          if (!in["shape"].is_array()) {
            errors.add(path + "shape", "shape must be an array of positive integers");
          } else {
            for (const auto& d : in["shape"]) {
              if (!d.is_number_integer() || d.get<long long>() <= 0) {
                errors.add(path + "shape", "shape must be an array of positive integers");
                break;
              }
              shape.push_back(d.get<long long>());
            }
          }
          input.shape = shape;
        }
        m.inputs.push_back(std::move(input));
      }
    }
  }

  std::optional<long long> macs;
  if (doc.contains("macs")) {
    if (!doc["macs"].is_number_integer() || doc["macs"].get<long long>() < 0) {
      errors.add("macs", "macs must be a non-negative integer");
    } else {
      macs = doc["macs"].get<long long>();
    }
  }
  if (doc.contains("layers")) {
    std::vector<Layer> layers;
    if (!doc["layers"].is_array()) {
      errors.add("layers", "layers must be an array");
    } else {
      bool layersOk = true;
      for (std::size_t i = 0; i < doc["layers"].size(); ++i) {
        const auto& l = doc["layers"][i];
        const std::string path = "layers[" + std::to_string(i) + "].";
        if (!l.is_object()) {
          errors.add(path, "layer must be an object");
          layersOk = false;
          continue;
        }
        rejectUnknown(l, {"kind", "dims"}, path, errors);
        Layer layer;
        bool ok = false;
        layer.kind = parseLayerKind(requireString(l, "kind", path, errors), ok);
        if (!ok) {
          errors.add(path + "kind", "kind must be dense, conv2d, pooling or other");
          layersOk = false;
        }
        if (l.contains("dims")) {
          if (!l["dims"].is_array()) {
            errors.add(path + "dims", "dims must be an array of integers");
            layersOk = false;
          } else {
            for (const auto& d : l["dims"]) {
              if (!d.is_number_integer()) {
                errors.add(path + "dims", "dims must be an array of integers");
                layersOk = false;
                break;
              }
              layer.dims.push_back(d.get<long long>());
            }
          }
        }
        layers.push_back(std::move(layer));
      }
      if (layersOk) {
        try {
          long long computed = computeMacs(layers);
          if (macs && *macs != computed) {
            errors.add("macs", "macs (" + std::to_string(*macs) + ") disagrees with layers (" +
                                   std::to_string(computed) + ")");
          }
          macs = computed;
        } catch (const Error& e) {
          errors.add("layers", e.what());
        }
      }
    }
  }
  if (!doc.contains("macs") && !doc.contains("layers")) errors.add("macs", "macs or layers is required");
  m.macs = macs.value_or(0);

  m.minRam = requirePositive(doc, "minRamKb", errors);
  m.minFlash = requirePositive(doc, "minFlashKb", errors);
  m.unit = parseUnit(doc, errors);

  if (doc.contains("metrics")) {
    if (!doc["metrics"].is_object()) {
      errors.add("metrics", "metrics must be an object of numbers");
    } else {
      for (const auto& [k, v] : doc["metrics"].items()) {
        if (!v.is_number()) {
          errors.add("metrics." + k, "metric must be a number");
          continue;
        }
        double value = v.get<double>();
        if (k == "accuracy" && (value < 0 || value > 1)) {
          errors.add("metrics.accuracy", "accuracy must be within [0, 1]");
        }
        m.metrics[k] = value;
      }
    }
  }
  if (!errors.empty()) errors.raise();
  return m;
}

DeviceManifest parseDeviceManifest(const json& doc) {
  SchemaErrors errors;
  if (!doc.is_object()) {
    errors.add("", "device manifest must be a JSON object");
    errors.raise();
  }
  rejectUnknown(doc, {"id", "name", "sensors", "ramKb", "flashKb", "unit", "runtimePlatform", "datapoints"},
                "", errors);
  DeviceManifest m;
  m.id = requireString(doc, "id", "", errors);
  if (!m.id.empty() && !validIdentifier(m.id)) {
    errors.add("id", "id may only contain letters, digits, '_', '-', '.'");
  }
  m.name = requireString(doc, "name", "", errors);
  if (doc.contains("sensors")) {
    if (!doc["sensors"].is_array()) {
      errors.add("sensors", "sensors must be an array of sensor class names");
    } else {
      std::set<std::string> seen;
      for (std::size_t i = 0; i < doc["sensors"].size(); ++i) {
        const auto& s = doc["sensors"][i];
        const std::string path = "sensors[" + std::to_string(i) + "]";
        if (!s.is_string()) {
          errors.add(path, "sensor class must be a string");
          continue;
        }
        auto cls = vocab::expandSensorClass(s.get<std::string>());
        if (!vocab::isSensorClass(cls)) {
          errors.add(path, "unknown sensor class '" + s.get<std::string>() + "'");
        } else if (seen.insert(cls).second) {
          m.sensors.push_back(cls);
        }
      }
    }
  }
  m.ram = requirePositive(doc, "ramKb", errors);
  m.flash = requirePositive(doc, "flashKb", errors);
  m.unit = parseUnit(doc, errors);
  if (doc.contains("runtimePlatform")) {
    auto p = requireString(doc, "runtimePlatform", "", errors);
    const auto& known = knownRuntimePlatforms();
    if (!p.empty() && std::find(known.begin(), known.end(), p) == known.end()) {
      errors.add("runtimePlatform", "unknown runtime platform '" + p + "'");
    }
    m.runtimePlatform = p.empty() ? "none" : p;
  }
  if (doc.contains("datapoints")) {
    if (!doc["datapoints"].is_array()) {
      errors.add("datapoints", "datapoints must be an array");
    } else {
      std::set<std::string> roles;
      for (std::size_t i = 0; i < doc["datapoints"].size(); ++i) {
        const auto& d = doc["datapoints"][i];
        const std::string path = "datapoints[" + std::to_string(i) + "].";
        if (!d.is_object()) {
          errors.add(path, "datapoint must be an object");
          continue;
        }
        rejectUnknown(d, {"role", "semanticType", "address"}, path, errors);
        Datapoint dp;
        dp.role = requireString(d, "role", path, errors);
        auto type = requireString(d, "semanticType", path, errors);
        dp.semanticType = vocab::expandSemanticType(type);
        if (!type.empty() && !rdf::isAbsoluteIri(dp.semanticType)) {
          errors.add(path + "semanticType", "semanticType must be an IRI or known prefixed name");
        }
        dp.address = requireString(d, "address", path, errors);
        if (!dp.role.empty() && !roles.insert(dp.role).second) {
          errors.add(path + "role", "duplicate datapoint role '" + dp.role + "'");
        }
        m.datapoints.push_back(std::move(dp));
      }
    }
  }
  if (!errors.empty()) errors.raise();
  return m;
}

std::string modelIri(const std::string& uuid) { return vocab::ns::kModelBase + uuid; }
std::string deviceIri(const std::string& id) { return vocab::ns::kDeviceBase + id; }

std::string graphIri(const std::string& name) {
  if (rdf::isAbsoluteIri(name)) return name;
  return vocab::ns::kGraphBase + name;
}

rdf::Graph compileModelManifest(const ModelManifest& m, const std::string& graphName) {
  rdf::Graph g(graphName.empty() ? graphIri("models") : graphName);
  const Term type = iri(vocab::rdfType());
  const Term nn = iri(modelIri(m.uuid));
  g.insert(nn, type, iri(vocab::kNeuralNetwork));
  g.insert(nn, iri(vocab::kIdentifier), str(m.uuid));
  g.insert(nn, iri(vocab::kName), str(m.name));
  g.insert(nn, iri(vocab::kDescription), str(m.description));
  if (!m.category.empty()) g.insert(nn, iri(vocab::kCategory), str(m.category));
  if (!m.created.empty()) {
    g.insert(nn, iri(vocab::kDateCreated), Term::literal(m.created, std::string(rdf::xsd::kDate)));
  }
  for (const auto& in : m.inputs) {
    Term input = blank();
    Term sensor = blank();
    g.insert(nn, iri(vocab::kHasInput), input);
    g.insert(sensor, iri(vocab::kProvideInput), input);
    g.insert(sensor, type, iri(in.sensorClass));
    if (in.shape) {
      std::string shape;
      for (std::size_t i = 0; i < in.shape->size(); ++i) {
        if (i) shape += ",";
        shape += std::to_string((*in.shape)[i]);
      }
      g.insert(input, iri(vocab::kInputShape), str(shape));
    }
  }
  g.insert(nn, iri(vocab::kHasMultiplyAccumulateOps), Term::integer(m.macs));
  for (const auto& [cls, value] : {std::pair{vocab::kRam, m.minRam}, std::pair{vocab::kFlash, m.minFlash}}) {
    Term feature = blank();
    Term cond = blank();
    g.insert(nn, iri(vocab::kHasProcedureFeature), feature);
    g.insert(feature, iri(vocab::kInCondition), cond);
    g.insert(cond, type, iri(cls));
    g.insert(cond, iri(vocab::kMinValue), Term::number(value));
    g.insert(cond, iri(vocab::kUnitCode), iri(m.unit));
  }
  for (const auto& [name, value] : m.metrics) {
    Term metric = blank();
    g.insert(nn, iri(vocab::kHasMetric), metric);
    g.insert(metric, iri(vocab::kName), str(name));
    g.insert(metric, iri(vocab::kValue), Term::number(value));
  }
  return g;
}

rdf::Graph compileDeviceManifest(const DeviceManifest& m, const std::string& graphName) {
  rdf::Graph g(graphName.empty() ? graphIri("devices") : graphName);
  const Term type = iri(vocab::rdfType());
  const Term dev = iri(deviceIri(m.id));
  g.insert(dev, type, iri(vocab::kSmartSensor));
  g.insert(dev, iri(vocab::kIdentifier), str(m.id));
  g.insert(dev, iri(vocab::kName), str(m.name));
  g.insert(dev, iri(vocab::kRuntimePlatform), str(m.runtimePlatform));
  for (const auto& cls : m.sensors) {
    Term sensor = blank();
    g.insert(dev, iri(vocab::kHasSubSystem), sensor);
    g.insert(sensor, type, iri(cls));
  }
  Term mcu = blank();
  Term capability = blank();
  g.insert(dev, iri(vocab::kHasSubSystem), mcu);
  g.insert(mcu, type, iri(vocab::kMicroController));
  g.insert(mcu, iri(vocab::kHasSystemCapability), capability);
  for (const auto& [cls, value] : {std::pair{vocab::kRam, m.ram}, std::pair{vocab::kFlash, m.flash}}) {
    Term prop = blank();
    g.insert(capability, iri(vocab::kHasSystemProperty), prop);
    g.insert(prop, type, iri(cls));
    g.insert(prop, iri(vocab::kValue), Term::number(value));
    g.insert(prop, iri(vocab::kUnitCode), iri(m.unit));
  }
  for (const auto& dp : m.datapoints) {
    Term node = blank();
    g.insert(dev, iri(vocab::kHasDatapoint), node);
    g.insert(node, iri(vocab::kRole), str(dp.role));
    g.insert(node, iri(vocab::kSemanticType), iri(dp.semanticType));
    g.insert(node, iri(vocab::kAddress), str(dp.address));
  }
  return g;
}

rdf::Graph compileManifestDirectory(const std::filesystem::path& directory, EntityKind kind,
                                    const std::string& graphName) {
  std::vector<std::filesystem::path> files;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(directory, ec)) {
    if (entry.path().extension() == ".json") files.push_back(entry.path());
  }
  if (ec) throw Error("IoError", "cannot read " + directory.string() + ": " + ec.message());
  std::sort(files.begin(), files.end());

  const std::string name = graphName.empty() ? graphIri(kind == EntityKind::Model ? "models" : "devices")
                                             : graphIri(graphName);
  rdf::Graph out(name);
  for (const auto& file : files) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw Error("IoError", "cannot read " + file.string());
    std::stringstream buf;
    buf << in.rdbuf();
    try {
      auto doc = json::parse(buf.str());
      out.merge(kind == EntityKind::Model ? compileModelManifest(parseModelManifest(doc), name)
                                          : compileDeviceManifest(parseDeviceManifest(doc), name));
    } catch (const json::exception& e) {
      throw Error("ManifestSchemaError", file.filename().string() + ": not valid JSON: " + e.what(),
                  {{"file", file.filename().string()}});
    } catch (const Error& e) {
      json details = e.details().is_object() ? e.details() : json::object();
      details["file"] = file.filename().string();
      throw Error(e.code(), file.filename().string() + ": " + e.what(), details);
    }
  }
  return out;
}

}  // namespace seloc::catalog
