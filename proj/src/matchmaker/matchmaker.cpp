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

#include "matchmaker/matchmaker.hpp"

#include <algorithm>
#include <sstream>

#include "catalog/vocabulary.hpp"
#include "common/error.hpp"

namespace seloc::match {

using catalog::DeviceDescriptor;
using catalog::NeuralNetworkDescriptor;

namespace {

bool sensorsSatisfied(const std::set<std::string>& required, const std::set<std::string>& offered) {
  for (const auto& need : required) {
    bool found = std::any_of(offered.begin(), offered.end(),
                             [&](const std::string& have) { return vocab::satisfies(have, need); });
    if (!found) return false;
  }
  return true;
}

MatchResult makeResult(const NeuralNetworkDescriptor& m, const DeviceDescriptor& d) {
  return {m.uuid, d.id, d.ramKb - m.minRamKb, d.flashKb - m.minFlashKb, m.requiredSensorClasses(), 0};
}

const DeviceDescriptor& findDevice(const catalog::DeviceCatalog& devices, const std::string& id) {
  for (const auto& d : devices.devices) {
    if (d.id == id) return d;
  }
  throw Error("UnknownDeviceError", "unknown device '" + id + "'", {{"id", id}});
}

const NeuralNetworkDescriptor& findModel(const catalog::ModelCatalog& models, const std::string& uuid) {
  for (const auto& m : models.models) {
    if (m.uuid == uuid) return m;
  }
  throw Error("UnknownModelError", "unknown model '" + uuid + "'", {{"uuid", uuid}});
}

std::string num(double v) { return rdf::Term::number(v).value(); }

std::string prefixBlock() {
  std::string out;
  for (const char* p : {"nnet", "schema", "om", "ssn", "ssn-system", "s3n", "sosa_extend",
                        "ssn_extend", "s3n_extend", "seloc"}) {
    out += std::string("PREFIX ") + p + ": <" + *vocab::defaultPrefixes().lookup(p) + ">\n";
  }
  return out;
}

std::string pname(const std::string& iri) {
  auto c = vocab::defaultPrefixes().compact(iri);
  return c ? *c : "<" + iri + ">";
}

[[noreturn]] void invalid(const std::string& message) {
  throw Error("InvalidConstraintsError", message);
}

}  // namespace

bool compatible(const NeuralNetworkDescriptor& model, const DeviceDescriptor& device,
                std::optional<double> minAccuracy) {
  if (model.minRamKb > device.ramKb || model.minFlashKb > device.flashKb) return false;
  if (minAccuracy) {
    auto it = model.metrics.find("accuracy");
    if (it == model.metrics.end() || it->second < *minAccuracy) return false;
  }
  return sensorsSatisfied(model.requiredSensorClasses(), device.sensorClasses);
}

std::vector<MatchResult> modelsForDevice(const catalog::ModelCatalog& models,
                                         const catalog::DeviceCatalog& devices,
                                         const std::string& deviceId,
                                         std::optional<double> minAccuracy) {
  const auto& device = findDevice(devices, deviceId);
  std::vector<const NeuralNetworkDescriptor*> hits;
  for (const auto& m : models.models) {
    if (compatible(m, device, minAccuracy)) hits.push_back(&m);
  }
  std::stable_sort(hits.begin(), hits.end(), [](const auto* a, const auto* b) {
    return std::tie(a->minRamKb, a->uuid) < std::tie(b->minRamKb, b->uuid);
  });
  std::vector<MatchResult> out;
  for (const auto* m : hits) {
    out.push_back(makeResult(*m, device));
    out.back().rank = static_cast<int>(out.size());
  }
  return out;
}

std::vector<MatchResult> devicesForModel(const catalog::ModelCatalog& models,
                                         const catalog::DeviceCatalog& devices,
                                         const std::string& modelUuid) {
  const auto& model = findModel(models, modelUuid);
  std::vector<const DeviceDescriptor*> hits;
  for (const auto& d : devices.devices) {
    if (compatible(model, d)) hits.push_back(&d);
  }
  std::stable_sort(hits.begin(), hits.end(), [](const auto* a, const auto* b) {
    return std::tie(a->ramKb, a->id) < std::tie(b->ramKb, b->id);
  });
  std::vector<MatchResult> out;
  for (const auto* d : hits) {
    out.push_back(makeResult(model, *d));
    out.back().rank = static_cast<int>(out.size());
  }
  return out;
}

std::vector<MatchResult> modelsForDevice(const rdf::Dataset& dataset, const std::string& deviceId) {
  return modelsForDevice(catalog::extractModels(dataset), catalog::extractDevices(dataset), deviceId);
}

std::vector<MatchResult> devicesForModel(const rdf::Dataset& dataset, const std::string& modelUuid) {
  return devicesForModel(catalog::extractModels(dataset), catalog::extractDevices(dataset), modelUuid);
}

MatchConstraints constraintsFor(const DeviceDescriptor& device) {
  MatchConstraints c;
  c.maxRamKb = device.ramKb;
  c.maxFlashKb = device.flashKb;
  c.requiredSensorClasses = device.sensorClasses;
  return c;
}

MatchConstraints constraintsFor(const NeuralNetworkDescriptor& model) {
  MatchConstraints c;
  c.minRamKb = model.minRamKb;
  c.minFlashKb = model.minFlashKb;
  c.requiredSensorClasses = model.requiredSensorClasses();
  return c;
}

std::string compileMatchQuery(Direction direction, const MatchConstraints& c) {
  std::ostringstream q;
  if (c.requiredSensorClasses) {
    for (const auto& cls : *c.requiredSensorClasses) {
      if (!vocab::isSensorClass(cls)) invalid("unknown sensor class <" + cls + ">");
    }
  }
  if (direction == Direction::ModelsForDevice) {
    if (!c.maxRamKb || !c.maxFlashKb) invalid("models-for-device needs maxRamKb and maxFlashKb");
    if (c.minRamKb || c.minFlashKb) invalid("minRamKb/minFlashKb belong to devices-for-model");

    // A model fits when none of its inputs needs a class outside what the
    // device offers (offered classes plus their direct superclasses).
    std::set<std::string> allowed;
    if (c.requiredSensorClasses) {
      for (const auto& cls : *c.requiredSensorClasses) {
        allowed.insert(cls);
        if (auto super = vocab::superClassOf(cls)) allowed.insert(*super);
      }
    }
    q << prefixBlock() << "\n"
      << "SELECT ?uuid ?MACs ?RAM ?Flash ?Description\n"
      << "WHERE {\n"
      << "    ?nn a nnet:NeuralNetwork ;\n"
      << "        schema:identifier ?uuid ;\n"
      << "        schema:description ?Description ;\n"
      << "        nnet:hasMultiplyAccumulateOps ?MACs ;\n"
      << "        s3n:hasProcedureFeature ?x_1 ;\n"
      << "        s3n:hasProcedureFeature ?x_2 .\n"
      << "    ?x_1 ssn-system:inCondition ?cond_1 .\n"
      << "    ?x_2 ssn-system:inCondition ?cond_2 .\n"
      << "    ?cond_1 a s3n_extend:RAM ;\n"
      << "        schema:minValue ?RAM ;\n"
      << "        schema:unitCode om:kilobyte .\n"
      << "    ?cond_2 a s3n_extend:Flash ;\n"
      << "        schema:minValue ?Flash ;\n"
      << "        schema:unitCode om:kilobyte .\n"
      << "    FILTER NOT EXISTS {\n"
      << "        ?nn ssn:hasInput ?input .\n"
      << "        ?sensor ssn_extend:provideInput ?input ;\n"
      << "            a ?SensorClass .\n";
    if (!allowed.empty()) {
      q << "        FILTER (";
      bool first = true;
      for (const auto& cls : allowed) {
        q << (first ? "" : " && ") << "?SensorClass != " << pname(cls);
        first = false;
      }
      q << ")\n";
    }
    q << "    }\n";
    if (c.minAccuracy) {
      q << "    ?nn seloc:hasMetric ?metric .\n"
        << "    ?metric schema:name \"accuracy\" ;\n"
        << "        schema:value ?Accuracy .\n"
        << "    FILTER (?Accuracy >= " << num(*c.minAccuracy) << ")\n";
    }
    q << "    FILTER (?RAM <= " << num(*c.maxRamKb) << ")\n"
      << "    FILTER (?Flash <= " << num(*c.maxFlashKb) << ")\n"
      << "}\n"
      << "ORDER BY ?RAM ?uuid\n";
    return q.str();
  }

  if (!c.minRamKb || !c.minFlashKb) invalid("devices-for-model needs minRamKb and minFlashKb");
  if (c.maxRamKb || c.maxFlashKb) invalid("maxRamKb/maxFlashKb belong to models-for-device");
  if (c.minAccuracy) invalid("minAccuracy applies to models-for-device only");

  std::vector<std::string> classes;
  if (c.requiredSensorClasses) classes.assign(c.requiredSensorClasses->begin(), c.requiredSensorClasses->end());
  const std::size_t mcu = classes.size() + 1;
  q << prefixBlock() << "\n"
    << "SELECT ?Device ?RAM ?Flash\n"
    << "WHERE {\n"
    << "    ?Device a s3n:SmartSensor";
  for (std::size_t i = 1; i <= mcu; ++i) q << " ;\n        ssn:hasSubSystem ?system_" << i;
  q << " .\n";
  for (std::size_t i = 0; i < classes.size(); ++i) {
    std::vector<std::string> accepted = {classes[i]};
    for (const auto& cls : vocab::sensorClasses()) {
      if (cls != classes[i] && vocab::satisfies(cls, classes[i])) accepted.push_back(cls);
    }
    if (accepted.size() == 1) {
      q << "    ?system_" << i + 1 << " a " << pname(classes[i]) << " .\n";
    } else {
      q << "    ?system_" << i + 1 << " a ?class_" << i + 1 << " .\n    FILTER (";
      for (std::size_t k = 0; k < accepted.size(); ++k) {
        q << (k ? " || " : "") << "?class_" << i + 1 << " = " << pname(accepted[k]);
      }
      q << ")\n";
    }
  }
  q << "    ?system_" << mcu << " a s3n:MicroController ;\n"
    << "        s3n:hasSystemCapability ?x .\n"
    << "    ?x ssn-system:hasSystemProperty ?cond_1 .\n"
    << "    ?x ssn-system:hasSystemProperty ?cond_2 .\n"
    << "    ?cond_1 a s3n_extend:RAM ;\n"
    << "        schema:value ?RAM ;\n"
    << "        schema:unitCode om:kilobyte .\n"
    << "    ?cond_2 a s3n_extend:Flash ;\n"
    << "        schema:value ?Flash ;\n"
    << "        schema:unitCode om:kilobyte .\n"
    << "    FILTER (?RAM >= " << num(*c.minRamKb) << ")\n"
    << "    FILTER (?Flash >= " << num(*c.minFlashKb) << ")\n"
    << "}\n"
    << "ORDER BY ?RAM\n";
  return q.str();
}

nlohmann::json toJson(const MatchResult& r) {
  return {{"modelUuid", r.modelUuid},
          {"deviceId", r.deviceId},
          {"ramMarginKb", r.ramMarginKb},
          {"flashMarginKb", r.flashMarginKb},
          {"satisfiedSensors", r.satisfiedSensors},
          {"rank", r.rank}};
}

nlohmann::json toJson(const std::vector<MatchResult>& results) {
  auto out = nlohmann::json::array();
  for (const auto& r : results) out.push_back(toJson(r));
  return out;
}

}  // namespace seloc::match
