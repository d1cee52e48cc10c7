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
#include <charconv>
#include <map>

#include "catalog/catalog.hpp"
#include "catalog/vocabulary.hpp"

namespace seloc::catalog {

using nlohmann::json;
using rdf::Term;

namespace {

struct Reader {
  const rdf::Dataset& ds;
  std::vector<Violation>& violations;

  std::vector<Term> objects(const Term& s, const std::string& p) const {
    std::vector<Term> out;
    for (const auto& t : ds.match(s, Term::iri(p), std::nullopt)) out.push_back(t.object);
    return out;
  }
  std::vector<Term> subjects(const std::string& p, const Term& o) const {
    std::vector<Term> out;
    for (const auto& t : ds.match(std::nullopt, Term::iri(p), o)) out.push_back(t.subject);
    return out;
  }
  bool hasType(const Term& s, const std::string& cls) const {
    return ds.count(s, Term::iri(vocab::rdfType()), Term::iri(cls)) > 0;
  }
  std::vector<std::string> types(const Term& s) const {
    std::vector<std::string> out;
    for (const auto& t : objects(s, vocab::rdfType())) {
      if (t.isIri()) out.push_back(t.value());
    }
    return out;
  }
  std::optional<std::string> literal(const Term& s, const std::string& p) const {
    for (const auto& t : objects(s, p)) {
      if (t.isLiteral()) return t.value();
    }
    return std::nullopt;
  }
  void report(const Term& subject, const std::string& rule, std::string message) const {
    violations.push_back({subject.isIri() ? subject.value() : subject.toNTriples(), rule,
                          std::move(message)});
  }
  std::string graphOf(const Term& s, const std::string& cls) const {
    auto graphs = ds.graphsContaining(
        rdf::Triple{s, Term::iri(vocab::rdfType()), Term::iri(cls)});
    return graphs.empty() ? std::string() : graphs.front();
  }
};

// Value of a capacity node in kilobytes; reports and returns nullopt when the
// node is malformed.
std::optional<double> capacityKb(const Reader& r, const Term& entity, const Term& node,
                                 const std::string& valueProperty, const std::string& label) {
  auto values = r.objects(node, valueProperty);
  if (values.empty()) {
    r.report(entity, rule::kMissingProperty, label + " has no " + vocab::localName(valueProperty));
    return std::nullopt;
  }
  auto value = rdf::numericValue(values.front());
  if (!value) {
    r.report(entity, rule::kInvalidLiteral, label + " value is not numeric");
    return std::nullopt;
  }
  auto units = r.objects(node, vocab::kUnitCode);
  if (units.empty()) {
    r.report(entity, rule::kMissingProperty, label + " has no unitCode");
    return std::nullopt;
  }
  auto factor = units.front().isIri() ? vocab::kilobytesPerUnit(units.front().value()) : std::nullopt;
  if (!factor) {
    r.report(entity, rule::kUnknownUnit, label + " uses unknown unit " + units.front().toNTriples());
    return std::nullopt;
  }
  if (!(*value > 0)) {
    r.report(entity, rule::kNonPositiveCapacity, label + " must be > 0");
    return std::nullopt;
  }
  return *value * *factor;
}

std::optional<std::vector<long long>> parseShape(const std::string& text) {
  std::vector<long long> dims;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    auto part = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    long long d = 0;
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), d);
    if (ec != std::errc() || ptr != part.data() + part.size() || d <= 0) return std::nullopt;
    dims.push_back(d);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return dims;
}

std::optional<NeuralNetworkDescriptor> readModel(const Reader& r, const Term& nn) {
  NeuralNetworkDescriptor d;
  d.iri = nn.isIri() ? nn.value() : nn.toNTriples();
  auto id = r.literal(nn, vocab::kIdentifier);
  if (!id || id->empty()) {
    r.report(nn, rule::kMissingIdentifier, "model has no schema:identifier");
    return std::nullopt;
  }
  d.uuid = *id;
  d.name = r.literal(nn, vocab::kName).value_or(d.uuid);
  d.description = r.literal(nn, vocab::kDescription).value_or("");
  d.category = r.literal(nn, vocab::kCategory).value_or("");
  d.created = r.literal(nn, vocab::kDateCreated).value_or("");
  d.graphIri = r.graphOf(nn, vocab::kNeuralNetwork);

  bool ok = true;
  auto macs = r.objects(nn, vocab::kHasMultiplyAccumulateOps);
  if (macs.empty()) {
    r.report(nn, rule::kMissingProperty, "model has no nnet:hasMultiplyAccumulateOps");
    ok = false;
  } else {
    auto v = rdf::numericValue(macs.front());
    if (!v || *v < 0 || *v != static_cast<double>(static_cast<long long>(*v))) {
      r.report(nn, rule::kInvalidLiteral, "MACs must be a non-negative integer");
      ok = false;
    } else {
      d.macs = static_cast<long long>(*v);
    }
  }

  for (const auto& input : r.objects(nn, vocab::kHasInput)) {
    std::optional<std::string> cls;
    bool unknown = false;
    for (const auto& sensor : r.subjects(vocab::kProvideInput, input)) {
      for (const auto& t : r.types(sensor)) {
        if (vocab::isSensorClass(t)) {
          if (!cls || vocab::satisfies(t, *cls)) cls = t;  // prefer the most specific class
        } else if (t.rfind(vocab::ns::kSosaExtend, 0) == 0) {
          unknown = true;
        }
      }
    }
    if (!cls) {
      r.report(nn, unknown ? rule::kUnknownSensorClass : rule::kMissingProperty,
               unknown ? "input sensor class is not in the taxonomy" : "input has no typed sensor");
      ok = false;
      continue;
    }
    ModelInput in{*cls, std::nullopt};
    if (auto shape = r.literal(input, vocab::kInputShape)) {
      in.shape = parseShape(*shape);
      if (!in.shape) {
        r.report(nn, rule::kInvalidLiteral, "input shape '" + *shape + "' is malformed");
        ok = false;
      }
    }
    d.inputs.push_back(std::move(in));
  }
  std::sort(d.inputs.begin(), d.inputs.end(), [](const ModelInput& a, const ModelInput& b) {
    return std::tie(a.sensorClass, a.shape) < std::tie(b.sensorClass, b.shape);
  });

  std::optional<double> ram, flash;
  for (const auto& feature : r.objects(nn, vocab::kHasProcedureFeature)) {
    for (const auto& cond : r.objects(feature, vocab::kInCondition)) {
      if (r.hasType(cond, vocab::kRam) && !ram) {
        ram = capacityKb(r, nn, cond, vocab::kMinValue, "RAM condition");
        if (!ram) ok = false;
      } else if (r.hasType(cond, vocab::kFlash) && !flash) {
        flash = capacityKb(r, nn, cond, vocab::kMinValue, "Flash condition");
        if (!flash) ok = false;
      }
    }
  }
  if (ok && !ram) {
    r.report(nn, rule::kMissingProperty, "model has no RAM condition");
    ok = false;
  }
  if (ok && !flash) {
    r.report(nn, rule::kMissingProperty, "model has no Flash condition");
    ok = false;
  }
  if (!ok) return std::nullopt;
  d.minRamKb = *ram;
  d.minFlashKb = *flash;

  for (const auto& metric : r.objects(nn, vocab::kHasMetric)) {
    auto name = r.literal(metric, vocab::kName);
    auto values = r.objects(metric, vocab::kValue);
    auto v = values.empty() ? std::nullopt : rdf::numericValue(values.front());
    if (name && v) d.metrics[*name] = *v;
  }
  return d;
}

std::optional<DeviceDescriptor> readDevice(const Reader& r, const Term& dev) {
  DeviceDescriptor d;
  d.iri = dev.isIri() ? dev.value() : dev.toNTriples();
  auto id = r.literal(dev, vocab::kIdentifier);
  if (!id || id->empty()) {
    r.report(dev, rule::kMissingIdentifier, "device has no schema:identifier");
    return std::nullopt;
  }
  d.id = *id;
  d.name = r.literal(dev, vocab::kName).value_or(d.id);
  d.graphIri = r.graphOf(dev, vocab::kSmartSensor);
  d.runtimePlatform = r.literal(dev, vocab::kRuntimePlatform).value_or("none");

  bool ok = true;
  const auto& platforms = knownRuntimePlatforms();
  if (std::find(platforms.begin(), platforms.end(), d.runtimePlatform) == platforms.end()) {
    r.report(dev, rule::kUnknownRuntimePlatform, "unknown runtime platform '" + d.runtimePlatform + "'");
    ok = false;
  }

  std::optional<double> ram, flash;
  for (const auto& sub : r.objects(dev, vocab::kHasSubSystem)) {
    for (const auto& t : r.types(sub)) {
      if (vocab::isSensorClass(t)) {
        d.sensorClasses.insert(t);
      } else if (t.rfind(vocab::ns::kSosaExtend, 0) == 0) {
        r.report(dev, rule::kUnknownSensorClass, "sensor class <" + t + "> is not in the taxonomy");
        ok = false;
      }
    }
    if (!r.hasType(sub, vocab::kMicroController)) continue;
    for (const auto& cap : r.objects(sub, vocab::kHasSystemCapability)) {
      for (const auto& prop : r.objects(cap, vocab::kHasSystemProperty)) {
        if (r.hasType(prop, vocab::kRam) && !ram) {
          ram = capacityKb(r, dev, prop, vocab::kValue, "RAM property");
          if (!ram) ok = false;
        } else if (r.hasType(prop, vocab::kFlash) && !flash) {
          flash = capacityKb(r, dev, prop, vocab::kValue, "Flash property");
          if (!flash) ok = false;
        }
      }
    }
  }
  if (ok && !ram) {
    r.report(dev, rule::kMissingProperty, "device has no RAM property");
    ok = false;
  }
  if (ok && !flash) {
    r.report(dev, rule::kMissingProperty, "device has no Flash property");
    ok = false;
  }

  std::set<std::string> roles;
  for (const auto& node : r.objects(dev, vocab::kHasDatapoint)) {
    auto role = r.literal(node, vocab::kRole);
    auto types = r.objects(node, vocab::kSemanticType);
    auto address = r.literal(node, vocab::kAddress);
    if (!role || types.empty() || !types.front().isIri() || !address) {
      r.report(dev, rule::kMissingProperty, "datapoint needs role, semanticType and address");
      ok = false;
      continue;
    }
    const auto& known = vocab::semanticTypes();
    if (std::find(known.begin(), known.end(), types.front().value()) == known.end()) {
      r.report(dev, rule::kUnknownSemanticType,
               "datapoint '" + *role + "' has unknown semantic type <" + types.front().value() + ">");
      ok = false;
      continue;
    }
    if (!roles.insert(*role).second) {
      r.report(dev, rule::kDuplicateDatapointRole, "duplicate datapoint role '" + *role + "'");
      ok = false;
      continue;
    }
    d.datapoints.push_back({*role, types.front().value(), *address});
  }
  std::sort(d.datapoints.begin(), d.datapoints.end(),
            [](const Datapoint& a, const Datapoint& b) { return a.role < b.role; });
  if (!ok) return std::nullopt;
  d.ramKb = *ram;
  d.flashKb = *flash;
  return d;
}

std::vector<Term> entitiesOfType(const rdf::Dataset& ds, const std::string& cls) {
  std::vector<Term> out;
  for (const auto& t : ds.match(std::nullopt, Term::iri(vocab::rdfType()), Term::iri(cls))) {
    out.push_back(t.subject);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

template <typename D, typename Key>
void dedupeAndSort(std::vector<D>& items, Key key, std::vector<Violation>& violations) {
  // Entities are visited in IRI order, so the first claimant of an id wins.
  std::set<std::string> seen;
  std::vector<D> kept;
  for (auto& item : items) {
    if (!seen.insert(key(item)).second) {
      violations.push_back({item.iri, rule::kDuplicateIdentifier,
                            "identifier '" + key(item) + "' is already used"});
      continue;
    }
    kept.push_back(std::move(item));
  }
  std::sort(kept.begin(), kept.end(),
            [&](const D& a, const D& b) { return key(a) < key(b); });
  items = std::move(kept);
}

}  // namespace

ModelCatalog extractModels(const rdf::Dataset& dataset) {
  ModelCatalog out;
  Reader r{dataset, out.violations};
  for (const auto& nn : entitiesOfType(dataset, vocab::kNeuralNetwork)) {
    if (auto d = readModel(r, nn)) out.models.push_back(std::move(*d));
  }
  dedupeAndSort(out.models, [](const NeuralNetworkDescriptor& d) { return d.uuid; }, out.violations);
  return out;
}

DeviceCatalog extractDevices(const rdf::Dataset& dataset) {
  DeviceCatalog out;
  Reader r{dataset, out.violations};
  for (const auto& dev : entitiesOfType(dataset, vocab::kSmartSensor)) {
    if (auto d = readDevice(r, dev)) out.devices.push_back(std::move(*d));
  }
  dedupeAndSort(out.devices, [](const DeviceDescriptor& d) { return d.id; }, out.violations);
  return out;
}

std::vector<Violation> validate(const rdf::Graph& graph, EntityKind kind) {
  rdf::Dataset ds;
  ds.putGraph(graph);
  std::vector<Violation> violations;
  if (kind == EntityKind::Model) {
    if (entitiesOfType(ds, vocab::kNeuralNetwork).empty()) {
      violations.push_back({graph.name(), rule::kNoEntity, "graph declares no nnet:NeuralNetwork"});
    }
    auto catalog = extractModels(ds);
    violations.insert(violations.end(), catalog.violations.begin(), catalog.violations.end());
  } else {
    if (entitiesOfType(ds, vocab::kSmartSensor).empty()) {
      violations.push_back({graph.name(), rule::kNoEntity, "graph declares no s3n:SmartSensor"});
    }
    auto catalog = extractDevices(ds);
    violations.insert(violations.end(), catalog.violations.begin(), catalog.violations.end());
  }
  return violations;
}

json toJson(const NeuralNetworkDescriptor& d) {
  json inputs = json::array();
  for (const auto& in : d.inputs) {
    json j = {{"sensorClass", in.sensorClass}};
    if (in.shape) j["shape"] = *in.shape;
    inputs.push_back(std::move(j));
  }
  return {{"iri", d.iri},
          {"uuid", d.uuid},
          {"name", d.name},
          {"description", d.description},
          {"category", d.category},
          {"inputs", std::move(inputs)},
          {"macs", d.macs},
          {"minRamKb", d.minRamKb},
          {"minFlashKb", d.minFlashKb},
          {"metrics", d.metrics},
          {"created", d.created},
          {"graphIri", d.graphIri}};
}

json toJson(const DeviceDescriptor& d) {
  json datapoints = json::array();
  for (const auto& dp : d.datapoints) {
    datapoints.push_back({{"role", dp.role}, {"semanticType", dp.semanticType}, {"address", dp.address}});
  }
  return {{"iri", d.iri},
          {"id", d.id},
          {"name", d.name},
          {"sensorClasses", d.sensorClasses},
          {"ramKb", d.ramKb},
          {"flashKb", d.flashKb},
          {"runtimePlatform", d.runtimePlatform},
          {"datapoints", std::move(datapoints)},
          {"graphIri", d.graphIri}};
}

json toJson(const Violation& v) {
  return {{"subjectIri", v.subjectIri}, {"ruleId", v.ruleId}, {"message", v.message}};
}

std::string violationsToJsonLines(const std::vector<Violation>& violations) {
  std::string out;
  for (const auto& v : violations) out += toJson(v).dump() + "\n";
  return out;
}

}  // namespace seloc::catalog
