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

#include "recipes/recipes.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "catalog/vocabulary.hpp"
#include "common/error.hpp"

namespace seloc::recipes {

using nlohmann::json;

namespace {

[[noreturn]] void parseError(const std::string& message) { throw Error("RecipeParseError", message); }

std::string requireString(const json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_string() || obj[key].get<std::string>().empty()) {
    parseError(where + std::string(key) + " must be a non-empty string");
  }
  return obj[key].get<std::string>();
}

const std::set<std::string>& widgetKinds() {
  static const std::set<std::string> kinds = {"counterByClass", "timeline", "table"};
  return kinds;
}

std::string cardinalityName(Cardinality c) {
  return c == Cardinality::ExactlyOne ? "exactly-one" : "one-or-more";
}

json candidateJson(const Candidate& c) {
  return {{"deviceId", c.deviceId},
          {"datapointRole", c.datapointRole},
          {"address", c.address},
          {"semanticType", c.semanticType}};
}

json candidateMap(const std::map<std::string, std::vector<Candidate>>& m) {
  json out = json::object();
  for (const auto& [role, list] : m) {
    json arr = json::array();
    for (const auto& c : list) arr.push_back(candidateJson(c));
    out[role] = std::move(arr);
  }
  return out;
}

BindingStatus parseStatus(const std::string& s) {
  if (s == "proposed") return BindingStatus::Proposed;
  if (s == "acknowledged") return BindingStatus::Acknowledged;
  if (s == "rejected") return BindingStatus::Rejected;
  throw Error("CorruptStoreError", "unknown binding status '" + s + "'");
}

}  // namespace

Recipe parseRecipe(const json& doc) {
  if (!doc.is_object()) parseError("recipe must be a JSON object");
  static const std::set<std::string> allowed = {"recipeId", "name", "description", "inputs", "widgets"};
  for (const auto& [k, _] : doc.items()) {
    if (!allowed.count(k)) parseError("unknown field '" + k + "'");
  }
  Recipe r;
  r.recipeId = requireString(doc, "recipeId", "");
  r.name = requireString(doc, "name", "");
  r.description = doc.value("description", "");
  if (!doc.contains("inputs") || !doc["inputs"].is_array() || doc["inputs"].empty()) {
    parseError("inputs must be a non-empty array");
  }
  std::set<std::string> roles;
  for (std::size_t i = 0; i < doc["inputs"].size(); ++i) {
    const auto& in = doc["inputs"][i];
    const std::string where = "inputs[" + std::to_string(i) + "].";
    if (!in.is_object()) parseError(where + " must be an object");
    RecipeInput input;
    input.role = requireString(in, "role", where);
    input.semanticType = vocab::expandSemanticType(requireString(in, "semanticType", where));
    if (!rdf::isAbsoluteIri(input.semanticType)) parseError(where + "semanticType must be an IRI");
    auto card = in.value("cardinality", std::string("exactly-one"));
    if (card == "exactly-one") {
      input.cardinality = Cardinality::ExactlyOne;
    } else if (card == "one-or-more") {
      input.cardinality = Cardinality::OneOrMore;
    } else {
      parseError(where + "cardinality must be exactly-one or one-or-more");
    }
    if (!roles.insert(input.role).second) parseError("duplicate role '" + input.role + "'");
    r.inputs.push_back(std::move(input));
  }
  if (doc.contains("widgets")) {
    if (!doc["widgets"].is_array()) parseError("widgets must be an array");
    for (std::size_t i = 0; i < doc["widgets"].size(); ++i) {
      const auto& w = doc["widgets"][i];
      const std::string where = "widgets[" + std::to_string(i) + "].";
      if (!w.is_object()) parseError(where + " must be an object");
      Widget widget{requireString(w, "widgetKind", where), requireString(w, "boundRole", where)};
      if (!widgetKinds().count(widget.widgetKind)) parseError(where + "unknown widgetKind '" + widget.widgetKind + "'");
      if (!roles.count(widget.boundRole)) parseError(where + "boundRole '" + widget.boundRole + "' is not an input");
      r.widgets.push_back(std::move(widget));
    }
  }
  return r;
}

const std::vector<Recipe>& builtinRecipes() {
  static const std::vector<Recipe> recipes = {parseRecipe(json::parse(R"({
    "recipeId": "classification-monitor",
    "name": "Classification monitor",
    "description": "Counts and plots classification results reported by a PLC",
    "inputs": [
      {"role": "classification", "semanticType": "iot:ClassificationResult", "cardinality": "exactly-one"}
    ],
    "widgets": [
      {"widgetKind": "counterByClass", "boundRole": "classification"},
      {"widgetKind": "timeline", "boundRole": "classification"}
    ]
  })"))};
  return recipes;
}

RecipeSet loadRecipes(const std::filesystem::path& directory, bool includeBuiltins) {
  std::map<std::string, Recipe> byId;
  RecipeSet out;
  if (includeBuiltins) {
    for (const auto& r : builtinRecipes()) byId[r.recipeId] = r;
  }
  std::error_code ec;
  if (!directory.empty() && std::filesystem::is_directory(directory, ec)) {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(directory, ec)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      try {
        std::ifstream in(file);
        std::stringstream buf;
        buf << in.rdbuf();
        auto recipe = parseRecipe(json::parse(buf.str()));
        byId[recipe.recipeId] = std::move(recipe);
      } catch (const json::exception& e) {
        out.errors.push_back({file.filename().string(), std::string("invalid JSON: ") + e.what()});
      } catch (const Error& e) {
        out.errors.push_back({file.filename().string(), e.what()});
      }
    }
  }
  for (auto& [_, r] : byId) out.recipes.push_back(std::move(r));
  return out;
}

std::string statusName(BindingStatus s) {
  switch (s) {
    case BindingStatus::Proposed: return "proposed";
    case BindingStatus::Acknowledged: return "acknowledged";
    case BindingStatus::Rejected: return "rejected";
  }
  return "proposed";
}

Proposal proposeBinding(const Recipe& recipe, const std::vector<catalog::DeviceDescriptor>& devices) {
  std::map<std::string, std::vector<Candidate>> candidates;
  for (const auto& input : recipe.inputs) {
    auto& list = candidates[input.role];
    for (const auto& d : devices) {
      for (const auto& dp : d.datapoints) {
        if (vocab::satisfies(dp.semanticType, input.semanticType)) {
          list.push_back({d.id, dp.role, dp.address, dp.semanticType});
        }
      }
    }
    std::sort(list.begin(), list.end(), [](const Candidate& a, const Candidate& b) {
      return std::tie(a.deviceId, a.datapointRole) < std::tie(b.deviceId, b.datapointRole);
    });
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }

  MissingReport missing{recipe.recipeId, {}};
  for (const auto& input : recipe.inputs) {
    if (candidates[input.role].empty()) missing.missing.push_back(input);
  }
  if (!missing.missing.empty()) return missing;

  AmbiguityReport ambiguity{recipe.recipeId, {}};
  for (const auto& input : recipe.inputs) {
    if (input.cardinality == Cardinality::ExactlyOne && candidates[input.role].size() > 1) {
      ambiguity.candidates[input.role] = candidates[input.role];
    }
  }
  if (!ambiguity.candidates.empty()) return ambiguity;

  return Binding{"", recipe.recipeId, std::move(candidates), BindingStatus::Proposed};
}

// --- BindingStore ------------------------------------------------------------

BindingStore::BindingStore(std::filesystem::path file) : file_(std::move(file)) {
  std::error_code ec;
  if (file_.empty() || !std::filesystem::exists(file_, ec)) return;
  try {
    std::ifstream in(file_);
    std::stringstream buf;
    buf << in.rdbuf();
    auto doc = json::parse(buf.str());
    next_ = doc.at("next").get<long>();
    for (const auto& b : doc.at("bindings")) {
      Binding binding;
      binding.bindingId = b.at("bindingId").get<std::string>();
      binding.recipeId = b.at("recipeId").get<std::string>();
      binding.status = parseStatus(b.at("status").get<std::string>());
      for (const auto& [role, list] : b.at("assignments").items()) {
        for (const auto& c : list) {
          binding.assignments[role].push_back({c.at("deviceId").get<std::string>(),
                                               c.at("datapointRole").get<std::string>(),
                                               c.at("address").get<std::string>(),
                                               c.at("semanticType").get<std::string>()});
        }
      }
      bindings_[binding.bindingId] = std::move(binding);
    }
  } catch (const json::exception& e) {
    throw Error("CorruptStoreError", "cannot read " + file_.string() + ": " + e.what(),
                {{"file", file_.filename().string()}});
  }
}

void BindingStore::persist() const {
  if (file_.empty()) return;
  json arr = json::array();
  for (const auto& [_, b] : bindings_) arr.push_back(toJson(b));
  json doc = {{"next", next_}, {"bindings", arr}};
  std::error_code ec;
  std::filesystem::create_directories(file_.parent_path(), ec);
  auto tmp = file_;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << doc.dump(2) << "\n";
    if (!out) throw Error("IoError", "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, file_, ec);
  if (ec) throw Error("IoError", "cannot replace " + file_.string() + ": " + ec.message());
}

Binding BindingStore::add(Binding binding) {
  std::lock_guard lock(mutex_);
  binding.bindingId = "binding-" + std::to_string(next_++);
  binding.status = BindingStatus::Proposed;
  bindings_[binding.bindingId] = binding;
  persist();
  return binding;
}

Binding BindingStore::get(const std::string& bindingId) const {
  std::lock_guard lock(mutex_);
  auto it = bindings_.find(bindingId);
  if (it == bindings_.end()) {
    throw Error("UnknownBindingError", "unknown binding '" + bindingId + "'", {{"id", bindingId}});
  }
  return it->second;
}

std::vector<Binding> BindingStore::list() const {
  std::lock_guard lock(mutex_);
  std::vector<Binding> out;
  for (const auto& [_, b] : bindings_) out.push_back(b);
  return out;
}

Binding BindingStore::acknowledge(const std::string& bindingId, const std::string& decision) {
  std::lock_guard lock(mutex_);
  auto it = bindings_.find(bindingId);
  if (it == bindings_.end()) {
    throw Error("UnknownBindingError", "unknown binding '" + bindingId + "'", {{"id", bindingId}});
  }
  if (decision != "accept" && decision != "reject") {
    throw Error("InvalidDecisionError", "decision must be 'accept' or 'reject'", {{"decision", decision}});
  }
  if (it->second.status != BindingStatus::Proposed) {
    throw Error("InvalidTransitionError",
                "binding '" + bindingId + "' is already " + statusName(it->second.status),
                {{"id", bindingId}, {"status", statusName(it->second.status)}});
  }
  auto previous = it->second.status;
  it->second.status = decision == "accept" ? BindingStatus::Acknowledged : BindingStatus::Rejected;
  try {
    persist();
  } catch (...) {
    it->second.status = previous;
    throw;
  }
  return it->second;
}

// --- JSON --------------------------------------------------------------------

json toJson(const Recipe& r) {
  json inputs = json::array();
  for (const auto& in : r.inputs) {
    inputs.push_back({{"role", in.role},
                      {"semanticType", in.semanticType},
                      {"cardinality", cardinalityName(in.cardinality)}});
  }
  json widgets = json::array();
  for (const auto& w : r.widgets) widgets.push_back({{"widgetKind", w.widgetKind}, {"boundRole", w.boundRole}});
  return {{"recipeId", r.recipeId},
          {"name", r.name},
          {"description", r.description},
          {"inputs", inputs},
          {"widgets", widgets}};
}

json toJson(const Binding& b) {
  return {{"kind", "binding"},
          {"bindingId", b.bindingId},
          {"recipeId", b.recipeId},
          {"status", statusName(b.status)},
          {"assignments", candidateMap(b.assignments)}};
}

json toJson(const Proposal& p) {
  if (const auto* b = std::get_if<Binding>(&p)) return toJson(*b);
  if (const auto* a = std::get_if<AmbiguityReport>(&p)) {
    return {{"kind", "ambiguity"}, {"recipeId", a->recipeId}, {"candidates", candidateMap(a->candidates)}};
  }
  const auto& m = std::get<MissingReport>(p);
  json missing = json::array();
  for (const auto& in : m.missing) {
    missing.push_back({{"role", in.role}, {"semanticType", in.semanticType}});
  }
  return {{"kind", "missing"}, {"recipeId", m.recipeId}, {"missing", missing}};
}

json toJson(const TelemetryEvent& e) {
  return {{"ts", e.timestamp}, {"classLabel", e.classLabel}, {"confidence", e.confidence}, {"color", e.color}};
}

}  // namespace seloc::recipes
