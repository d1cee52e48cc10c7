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

#include "search/search.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "catalog/vocabulary.hpp"
#include "common/error.hpp"

namespace seloc::search {

std::string kindName(EntityKind kind) { return kind == EntityKind::Model ? "model" : "device"; }

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  auto flush = [&] {
    if (current.size() >= 2) out.push_back(current);
    current.clear();
  };
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if ((c >= '0' && c <= '9') || (c >= 'a' && c <= 'z')) {
      current.push_back(static_cast<char>(c));
    } else if (c >= 'A' && c <= 'Z') {
      current.push_back(static_cast<char>(c - 'A' + 'a'));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

namespace {

void addText(Document& doc, std::string_view text) {
  for (auto& t : tokenize(text)) ++doc.termFrequency[t];
}

std::vector<std::string> distinctTokens(std::string_view text) {
  auto tokens = tokenize(text);
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  return tokens;
}

bool passes(const Document& doc, const SearchFilters& f) {
  if (f.kind && doc.kind != *f.kind) return false;
  if (f.maxRamKb && doc.ramKb > *f.maxRamKb) return false;
  if (f.requiredSensor) {
    bool ok = std::any_of(doc.sensorClasses.begin(), doc.sensorClasses.end(), [&](const std::string& c) {
      // A model needing DepthCamera is relevant to a Camera search and a
      // device with a DepthCamera offers a Camera.
      return vocab::satisfies(c, *f.requiredSensor);
    });
    if (!ok) return false;
  }
  return true;
}

}  // namespace

SearchIndex SearchIndex::build(const catalog::ModelCatalog& models, const catalog::DeviceCatalog& devices) {
  SearchIndex index;
  for (const auto& m : models.models) {
    Document doc;
    doc.entityIri = m.iri;
    doc.kind = EntityKind::Model;
    doc.key = m.uuid;
    doc.name = m.name;
    doc.ramKb = m.minRamKb;
    doc.sensorClasses = m.requiredSensorClasses();
    addText(doc, m.name);
    addText(doc, m.description);
    addText(doc, m.category);
    for (const auto& in : m.inputs) addText(doc, vocab::localName(in.sensorClass));
    index.documents_.push_back(std::move(doc));
  }
  for (const auto& d : devices.devices) {
    Document doc;
    doc.entityIri = d.iri;
    doc.kind = EntityKind::Device;
    doc.key = d.id;
    doc.name = d.name;
    doc.ramKb = d.ramKb;
    doc.sensorClasses = d.sensorClasses;
    addText(doc, d.name);
    for (const auto& c : d.sensorClasses) addText(doc, vocab::localName(c));
    index.documents_.push_back(std::move(doc));
  }
  std::sort(index.documents_.begin(), index.documents_.end(),
            [](const Document& a, const Document& b) { return a.entityIri < b.entityIri; });
  for (const auto& doc : index.documents_) {
    for (const auto& [t, _] : doc.termFrequency) ++index.df_[t];
  }
  return index;
}

SearchIndex SearchIndex::build(const rdf::Dataset& dataset) {
  return build(catalog::extractModels(dataset), catalog::extractDevices(dataset));
}

double SearchIndex::idf(const std::string& token) const {
  auto it = df_.find(token);
  if (it == df_.end() || it->second == 0) return 0;
  return std::log(1.0 + static_cast<double>(documents_.size()) / it->second);
}

const Document* SearchIndex::find(const std::string& entityIri) const {
  auto it = std::lower_bound(documents_.begin(), documents_.end(), entityIri,
                             [](const Document& d, const std::string& iri) { return d.entityIri < iri; });
  return it != documents_.end() && it->entityIri == entityIri ? &*it : nullptr;
}

std::vector<std::pair<std::string, double>> SearchIndex::explain(const std::string& entityIri,
                                                                 std::string_view text) const {
  const Document* doc = find(entityIri);
  if (!doc) throw Error("UnknownEntityError", "entity <" + entityIri + "> is not indexed", {{"iri", entityIri}});
  std::vector<std::pair<std::string, double>> out;
  for (const auto& t : distinctTokens(text)) {
    auto it = doc->termFrequency.find(t);
    if (it == doc->termFrequency.end()) continue;
    out.emplace_back(t, it->second * idf(t));
  }
  return out;
}

std::vector<SearchHit> SearchIndex::search(std::string_view text, const SearchFilters& filters,
                                           std::size_t k) const {
  const auto tokens = distinctTokens(text);
  std::vector<SearchHit> hits;
  for (const auto& doc : documents_) {
    if (!passes(doc, filters)) continue;
    SearchHit hit{doc.entityIri, doc.kind, doc.key, doc.name, 0, {}};
    for (const auto& t : tokens) {
      auto it = doc.termFrequency.find(t);
      if (it == doc.termFrequency.end()) continue;
      hit.score += it->second * idf(t);
      hit.matchedTerms.push_back(t);
    }
    if (hit.score > 0) hits.push_back(std::move(hit));
  }
  std::sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.entityIri < b.entityIri;
  });
  if (hits.size() > k) hits.resize(k);
  return hits;
}

nlohmann::json toJson(const SearchHit& hit) {
  return {{"entityIri", hit.entityIri}, {"kind", kindName(hit.kind)}, {"key", hit.key},
          {"name", hit.name},           {"score", hit.score},         {"matchedTerms", hit.matchedTerms}};
}

nlohmann::json toJson(const std::vector<SearchHit>& hits) {
  auto out = nlohmann::json::array();
  for (const auto& h : hits) out.push_back(toJson(h));
  return out;
}

}  // namespace seloc::search
