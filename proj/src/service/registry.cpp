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

#include "service/registry.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <set>

#include "catalog/vocabulary.hpp"
#include "common/error.hpp"
#include "matchmaker/matchmaker.hpp"
#include "rdf/store.hpp"
#include "rdf/turtle.hpp"
#include "sparql/query.hpp"

namespace seloc::service {

using nlohmann::json;

int httpStatusFor(const std::string& code) {
  static const std::set<std::string> badRequest = {
      "SyntaxError",          "UnknownPrefixError",   "UnsupportedFeatureError", "ManifestSchemaError",
      "InvalidConstraintsError", "MissingConfigError", "InvalidConfigError",     "IncompatibleTargetError",
      "NotCompatibleError",   "ValidationError",      "InvalidDecisionError",    "InvalidIriError",
      "InvalidLiteralError",  "InvalidTripleError",   "InvalidLayerError",       "RecipeParseError",
      "InvalidTelemetryError", "InvalidJsonError"};
  static const std::set<std::string> notFound = {
      "NotFound",          "UnknownDeviceError",  "UnknownModelError",  "UnknownTargetError",
      "UnknownRecipeError", "UnknownBindingError", "UnknownEntityError"};
  static const std::set<std::string> conflict = {"InvalidTransitionError", "NotAcknowledgedError"};
  if (badRequest.count(code)) return 400;
  if (notFound.count(code)) return 404;
  if (conflict.count(code)) return 409;
  if (code == "MethodNotAllowed") return 405;
  if (code == "UnsupportedMediaTypeError") return 415;
  return 500;
}

Response errorResponse(const std::string& code, const std::string& message, const json& details) {
  json body = {{"code", code}, {"message", message}};
  if (!details.is_null()) body["details"] = details;
  return {httpStatusFor(code), "application/json", body.dump()};
}

rdf::Dataset fixtureDataset() {
  rdf::Dataset ds;
  for (const auto& [name, text] : fixtureGraphs()) {
    auto g = rdf::parseTurtle(text);
    g.setName(catalog::graphIri(name));
    ds.putGraph(std::move(g));
  }
  return ds;
}

namespace {

[[noreturn]] void validation(const std::string& message, json details = nullptr) {
  throw Error("ValidationError", message, std::move(details));
}

std::string percentDecode(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size() && std::isxdigit(static_cast<unsigned char>(s[i + 1])) &&
        std::isxdigit(static_cast<unsigned char>(s[i + 2]))) {
      out.push_back(static_cast<char>(std::stoi(std::string(s.substr(i + 1, 2)), nullptr, 16)));
      i += 2;
    } else if (s[i] == '+') {
      out.push_back(' ');
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

struct Target {
  std::vector<std::string> segments;
  std::map<std::string, std::string> query;
};

Target parseTarget(const std::string& target) {
  Target t;
  auto q = target.find('?');
  std::string path = target.substr(0, q);
  if (q != std::string::npos) {
    std::string qs = target.substr(q + 1);
    std::size_t pos = 0;
    while (pos <= qs.size()) {
      auto amp = qs.find('&', pos);
      auto part = qs.substr(pos, amp == std::string::npos ? std::string::npos : amp - pos);
      if (!part.empty()) {
        auto eq = part.find('=');
        auto key = percentDecode(part.substr(0, eq));
        auto value = eq == std::string::npos ? std::string() : percentDecode(part.substr(eq + 1));
        t.query.emplace(key, value);
      }
      if (amp == std::string::npos) break;
      pos = amp + 1;
    }
  }
  std::size_t pos = 0;
  while (pos < path.size()) {
    auto slash = path.find('/', pos);
    auto seg = path.substr(pos, slash == std::string::npos ? std::string::npos : slash - pos);
    if (!seg.empty()) t.segments.push_back(percentDecode(seg));
    if (slash == std::string::npos) break;
    pos = slash + 1;
  }
  return t;
}

std::string mediaType(const std::string& contentType) {
  std::string out = contentType.substr(0, contentType.find(';'));
  out.erase(std::remove_if(out.begin(), out.end(), [](unsigned char c) { return std::isspace(c); }), out.end());
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

void requireMedia(const Request& r, std::initializer_list<const char*> accepted) {
  auto got = mediaType(r.contentType);
  for (const char* a : accepted) {
    if (got == a) return;
  }
  std::string list;
  for (const char* a : accepted) list += (list.empty() ? "" : ", ") + std::string(a);
  throw Error("UnsupportedMediaTypeError", "expected content type " + list,
              {{"expected", std::vector<std::string>(accepted.begin(), accepted.end())},
               {"received", r.contentType}});
}

json parseJsonBody(const Request& r) {
  requireMedia(r, {"application/json"});
  try {
    return json::parse(r.body);
  } catch (const json::exception& e) {
    throw Error("InvalidJsonError", std::string("request body is not valid JSON: ") + e.what());
  }
}

std::string requireParam(const Target& t, const std::string& name) {
  auto it = t.query.find(name);
  if (it == t.query.end() || it->second.empty()) {
    validation("query parameter '" + name + "' is required", {{"parameter", name}});
  }
  return it->second;
}

std::string stringField(const json& body, const char* key) {
  if (!body.is_object() || !body.contains(key) || !body[key].is_string() || body[key].get<std::string>().empty()) {
    validation(std::string("field '") + key + "' must be a non-empty string", {{"field", key}});
  }
  return body[key].get<std::string>();
}

Response ok(const json& body) { return {200, "application/json", body.dump()}; }

// Entity triples plus everything reachable through blank nodes.
json entityTriples(const rdf::Dataset& ds, const rdf::Term& root) {
  json out = json::array();
  std::set<rdf::Term> seen{root};
  std::deque<rdf::Term> todo{root};
  while (!todo.empty()) {
    auto s = todo.front();
    todo.pop_front();
    for (const auto& t : ds.match(s, std::nullopt, std::nullopt)) {
      out.push_back(t.toNTriples());
      if (t.object.isBlank() && seen.insert(t.object).second) todo.push_back(t.object);
    }
    // Sensor nodes point at a model's inputs from the other side.
    if (s.isBlank()) {
      for (const auto& t : ds.match(std::nullopt, std::nullopt, s)) {
        if (t.subject.isBlank() && seen.insert(t.subject).second) todo.push_back(t.subject);
      }
    }
  }
  return out;
}

search::SearchFilters parseFilters(const json& f) {
  search::SearchFilters filters;
  if (f.is_null()) return filters;
  if (!f.is_object()) validation("filters must be an object");
  for (const auto& [k, _] : f.items()) {
    if (k != "kind" && k != "maxRamKb" && k != "requiredSensor") validation("unknown filter '" + k + "'");
  }
  if (f.contains("kind")) {
    auto kind = f["kind"].is_string() ? f["kind"].get<std::string>() : "";
    if (kind == "model") {
      filters.kind = search::EntityKind::Model;
    } else if (kind == "device") {
      filters.kind = search::EntityKind::Device;
    } else {
      validation("filters.kind must be 'model' or 'device'");
    }
  }
  if (f.contains("maxRamKb")) {
    if (!f["maxRamKb"].is_number()) validation("filters.maxRamKb must be a number");
    filters.maxRamKb = f["maxRamKb"].get<double>();
  }
  if (f.contains("requiredSensor")) {
    if (!f["requiredSensor"].is_string()) validation("filters.requiredSensor must be a string");
    auto cls = vocab::expandSensorClass(f["requiredSensor"].get<std::string>());
    if (!vocab::isSensorClass(cls)) validation("unknown sensor class '" + f["requiredSensor"].get<std::string>() + "'");
    filters.requiredSensor = cls;
  }
  return filters;
}

std::string nowIso() {
  return recipes::formatTimestamp(std::chrono::system_clock::now());
}

}  // namespace

// --- Registry ----------------------------------------------------------------

Registry::Registry(RegistryConfig config) : config_(std::move(config)) {
  rdf::Dataset ds;
  const auto& dir = config_.dataDirectory;
  std::error_code ec;
  if (!dir.empty() && std::filesystem::exists(dir / "manifest.json", ec)) ds = rdf::loadDataset(dir);
  bool added = false;
  if (config_.loadFixtures) {
    const rdf::Dataset fixtures = fixtureDataset();
    for (const auto& [name, g] : fixtures.graphs()) {
      if (!ds.graph(name)) {
        ds.putGraph(g);
        added = true;
      }
    }
  }
  if (!dir.empty()) {
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("IoError", "cannot create " + dir.string() + ": " + ec.message());
    if (added || !std::filesystem::exists(dir / "manifest.json", ec)) {
      rdf::saveDataset(ds, dir, vocab::defaultPrefixes());
    }
    bindings_ = std::make_unique<recipes::BindingStore>(dir / "bindings.json");
  } else {
    bindings_ = std::make_unique<recipes::BindingStore>();
  }
  recipes_ = recipes::loadRecipes(config_.recipesDirectory);
  publish(std::move(ds));
}

Registry::~Registry() {
  std::lock_guard lock(streamsMutex_);
  for (auto& [_, s] : streams_) s->stop();
}

void Registry::publish(rdf::Dataset dataset) {
  auto snap = std::make_shared<Snapshot>();
  snap->models = catalog::extractModels(dataset);
  snap->devices = catalog::extractDevices(dataset);
  snap->index = search::SearchIndex::build(snap->models, snap->devices);
  snap->dataset = std::move(dataset);
  std::lock_guard lock(snapshotMutex_);
  snapshot_ = std::move(snap);
}

std::shared_ptr<const Snapshot> Registry::snapshot() const {
  std::lock_guard lock(snapshotMutex_);
  return snapshot_;
}

void Registry::flush() {
  if (config_.dataDirectory.empty()) return;
  std::lock_guard lock(writeMutex_);
  rdf::saveDataset(snapshot()->dataset, config_.dataDirectory, vocab::defaultPrefixes());
}

Registry::PutResult Registry::putGraph(const std::string& name, const std::string& turtle) {
  if (name.empty()) validation("graph name must not be empty");
  PutResult result;
  result.graphIri = catalog::graphIri(name);
  auto graph = rdf::parseTurtle(turtle, result.graphIri);
  graph.setName(result.graphIri);
  result.tripleCount = graph.size();
  {
    rdf::Dataset alone;
    alone.putGraph(graph);
    result.violations = catalog::extractModels(alone).violations;
    auto dv = catalog::extractDevices(alone).violations;
    result.violations.insert(result.violations.end(), dv.begin(), dv.end());
  }
  std::lock_guard lock(writeMutex_);
  rdf::Dataset next = snapshot()->dataset;
  next.putGraph(std::move(graph));
  // Persist before publishing so a 2xx response implies durability.
  if (!config_.dataDirectory.empty()) rdf::saveDataset(next, config_.dataDirectory, vocab::defaultPrefixes());
  publish(std::move(next));
  return result;
}

std::shared_ptr<recipes::Subscription> Registry::subscribe(const std::string& bindingId) {
  auto binding = bindings_->get(bindingId);
  std::lock_guard lock(streamsMutex_);
  auto it = streams_.find(bindingId);
  if (it == streams_.end()) {
    std::shared_ptr<recipes::TelemetryStream> stream =
        recipes::openStream(binding, recipes::caseStudyScript(), config_.telemetryRate);
    it = streams_.emplace(bindingId, std::move(stream)).first;
  } else if (binding.status != recipes::BindingStatus::Acknowledged) {
    recipes::openStream(binding, {}, 1);  // throws NotAcknowledgedError
  }
  return it->second->subscribe();
}

Response Registry::handle(const Request& request) {
  try {
    return route(request);
  } catch (const Error& e) {
    return errorResponse(e.code(), e.what(), e.details());
  } catch (const json::exception& e) {
    return errorResponse("ValidationError", std::string("malformed request: ") + e.what());
  } catch (const std::exception& e) {
    return errorResponse("InternalError", e.what());
  }
}

Response Registry::route(const Request& req) {
  const Target t = parseTarget(req.target);
  const auto& seg = t.segments;
  const std::string& m = req.method;
  auto methodNotAllowed = [&](std::initializer_list<const char*> allowed) -> Response {
    std::string list;
    for (const char* a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
    return errorResponse("MethodNotAllowed", "method " + m + " not allowed; use " + list);
  };
  auto is = [&](std::initializer_list<const char*> parts) {
    if (seg.size() != parts.size()) return false;
    std::size_t i = 0;
    for (const char* p : parts) {
      if (std::string(p) != "*" && seg[i] != p) return false;
      ++i;
    }
    return true;
  };

  if (is({"graphs", "*"})) {
    if (m != "PUT") return methodNotAllowed({"PUT"});
    requireMedia(req, {"text/turtle"});
    auto put = putGraph(seg[1], req.body);
    json violations = json::array();
    for (const auto& v : put.violations) violations.push_back(catalog::toJson(v));
    return ok({{"graph", put.graphIri}, {"tripleCount", put.tripleCount}, {"violations", violations}});
  }

  if (is({"models"}) || is({"devices"})) {
    if (m != "GET") return methodNotAllowed({"GET"});
    auto snap = snapshot();
    json out = json::array();
    if (seg[0] == "models") {
      for (const auto& d : snap->models.models) out.push_back(catalog::toJson(d));
    } else {
      for (const auto& d : snap->devices.devices) out.push_back(catalog::toJson(d));
    }
    return ok(out);
  }

  if (is({"models", "*"}) || is({"devices", "*"})) {
    if (m != "GET") return methodNotAllowed({"GET"});
    auto snap = snapshot();
    if (seg[0] == "models") {
      for (const auto& d : snap->models.models) {
        if (d.uuid == seg[1]) {
          return ok({{"descriptor", catalog::toJson(d)},
                     {"triples", entityTriples(snap->dataset, rdf::Term::iri(d.iri))}});
        }
      }
      throw Error("UnknownModelError", "unknown model '" + seg[1] + "'", {{"uuid", seg[1]}});
    }
    for (const auto& d : snap->devices.devices) {
      if (d.id == seg[1]) {
        return ok({{"descriptor", catalog::toJson(d)},
                   {"triples", entityTriples(snap->dataset, rdf::Term::iri(d.iri))}});
      }
    }
    throw Error("UnknownDeviceError", "unknown device '" + seg[1] + "'", {{"id", seg[1]}});
  }

  if (is({"violations"})) {
    if (m != "GET") return methodNotAllowed({"GET"});
    auto snap = snapshot();
    json out = json::array();
    for (const auto& v : snap->models.violations) out.push_back(catalog::toJson(v));
    for (const auto& v : snap->devices.violations) out.push_back(catalog::toJson(v));
    return ok(out);
  }

  if (is({"match", "models"})) {
    if (m != "GET") return methodNotAllowed({"GET"});
    auto snap = snapshot();
    return ok(match::toJson(match::modelsForDevice(snap->models, snap->devices, requireParam(t, "device"))));
  }
  if (is({"match", "devices"})) {
    if (m != "GET") return methodNotAllowed({"GET"});
    auto snap = snapshot();
    return ok(match::toJson(match::devicesForModel(snap->models, snap->devices, requireParam(t, "model"))));
  }

  if (is({"search"})) {
    if (m != "POST") return methodNotAllowed({"POST"});
    auto body = parseJsonBody(req);
    auto text = stringField(body, "text");
    auto filters = parseFilters(body.value("filters", json()));
    std::size_t k = 20;
    if (body.contains("k")) {
      if (!body["k"].is_number_integer() || body["k"].get<long long>() < 1) validation("k must be a positive integer");
      k = body["k"].get<std::size_t>();
    }
    return ok(search::toJson(snapshot()->index.search(text, filters, k)));
  }

  if (is({"sparql"})) {
    if (m != "POST") return methodNotAllowed({"POST"});
    requireMedia(req, {"application/sparql-query"});
    auto query = sparql::parseQuery(req.body, vocab::defaultPrefixes());
    auto table = sparql::evaluate(snapshot()->dataset, query);
    return {200, "application/sparql-results+json", sparql::toResultsJson(table)};
  }

  if (is({"targets"})) {
    if (m != "GET") return methodNotAllowed({"GET"});
    json out = json::array();
    for (const auto& d : codegen::TargetRegistry::builtin().list()) out.push_back(codegen::toJson(d));
    return ok(out);
  }

  if (is({"projects", "config"})) {
    if (m != "GET") return methodNotAllowed({"GET"});
    auto snap = snapshot();
    auto fields = codegen::requiredConfig(codegen::TargetRegistry::builtin(), snap->models, snap->devices,
                                          requireParam(t, "target"), requireParam(t, "model"),
                                          requireParam(t, "device"));
    json out = json::array();
    for (const auto& f : fields) out.push_back(codegen::toJson(f));
    return ok(out);
  }

  if (is({"projects"})) {
    if (m != "POST") return methodNotAllowed({"POST"});
    auto body = parseJsonBody(req);
    auto model = stringField(body, "model");
    auto device = stringField(body, "device");
    auto target = stringField(body, "target");
    json config = body.value("config", json::object());
    std::string generatedAt = body.contains("generatedAt") ? stringField(body, "generatedAt") : nowIso();
    auto snap = snapshot();
    const auto& registry = codegen::TargetRegistry::builtin();
    auto bundle = codegen::generate(registry, snap->models, snap->devices, model, device, target, config, generatedAt);
    if (mediaType(req.accept) == "application/zip") return {200, "application/zip", codegen::toZip(bundle)};
    return ok({{"files", bundle.files},
               {"effortReport", codegen::toJson(codegen::effortReport(registry, bundle, config))},
               {"metadata",
                {{"modelUuid", bundle.metadata.modelUuid},
                 {"deviceId", bundle.metadata.deviceId},
                 {"targetId", bundle.metadata.targetId},
                 {"generatedAt", bundle.metadata.generatedAt}}}});
  }

  if (is({"recipes"})) {
    if (m != "GET") return methodNotAllowed({"GET"});
    json out = json::array();
    for (const auto& r : recipes_.recipes) out.push_back(recipes::toJson(r));
    return ok(out);
  }

  if (is({"recipes", "*", "bindings"})) {
    if (m != "POST") return methodNotAllowed({"POST"});
    auto body = parseJsonBody(req);
    const recipes::Recipe* recipe = nullptr;
    for (const auto& r : recipes_.recipes) {
      if (r.recipeId == seg[1]) recipe = &r;
    }
    if (!recipe) throw Error("UnknownRecipeError", "unknown recipe '" + seg[1] + "'", {{"id", seg[1]}});
    if (!body.is_object() || !body.contains("deviceIds") || !body["deviceIds"].is_array()) {
      validation("deviceIds must be an array of device ids");
    }
    auto snap = snapshot();
    std::vector<catalog::DeviceDescriptor> devices;
    for (const auto& id : body["deviceIds"]) {
      if (!id.is_string()) validation("deviceIds must be an array of device ids");
      auto it = std::find_if(snap->devices.devices.begin(), snap->devices.devices.end(),
                             [&](const catalog::DeviceDescriptor& d) { return d.id == id.get<std::string>(); });
      if (it == snap->devices.devices.end()) {
        throw Error("UnknownDeviceError", "unknown device '" + id.get<std::string>() + "'",
                    {{"id", id.get<std::string>()}});
      }
      devices.push_back(*it);
    }
    auto proposal = recipes::proposeBinding(*recipe, devices);
    if (auto* b = std::get_if<recipes::Binding>(&proposal)) return ok(recipes::toJson(bindings_->add(*b)));
    return ok(recipes::toJson(proposal));
  }

  if (is({"bindings", "*"})) {
    if (m != "GET") return methodNotAllowed({"GET"});
    return ok(recipes::toJson(bindings_->get(seg[1])));
  }

  if (is({"bindings", "*", "ack"})) {
    if (m != "POST") return methodNotAllowed({"POST"});
    auto body = parseJsonBody(req);
    return ok(recipes::toJson(bindings_->acknowledge(seg[1], stringField(body, "decision"))));
  }

  if (is({"bindings", "*", "stream"})) {
    // The event stream itself needs a streaming transport; here only the
    // precondition is checked so in-process callers see the same errors.
    if (m != "GET") return methodNotAllowed({"GET"});
    auto binding = bindings_->get(seg[1]);
    if (binding.status != recipes::BindingStatus::Acknowledged) recipes::openStream(binding, {}, 1);
    return errorResponse("UnsupportedFeatureError", "the telemetry stream is only served over HTTP");
  }

  return errorResponse("NotFound", "no route for " + m + " " + req.target);
}

}  // namespace seloc::service
