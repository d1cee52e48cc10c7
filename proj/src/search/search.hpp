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
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "catalog/catalog.hpp"
#include "json.hpp"

namespace seloc::search {

enum class EntityKind { Model, Device };

std::string kindName(EntityKind kind);

/// Lowercase, split on non-alphanumerics, drop tokens shorter than two
/// characters. Non-ASCII bytes count as separators.
std::vector<std::string> tokenize(std::string_view text);

struct Document {
  std::string entityIri;
  EntityKind kind = EntityKind::Model;
  std::string key;  // uuid or device id
  std::string name;
  std::map<std::string, int> termFrequency;
  // Filter attributes.
  double ramKb = 0;  // model minimum or device capacity
  std::set<std::string> sensorClasses;
};

struct SearchFilters {
  std::optional<EntityKind> kind;
  std::optional<double> maxRamKb;
  std::optional<std::string> requiredSensor;  // sensor class IRI
};

struct SearchHit {
  std::string entityIri;
  EntityKind kind = EntityKind::Model;
  std::string key;
  std::string name;
  double score = 0;
  std::vector<std::string> matchedTerms;  // sorted
};

class SearchIndex {
 public:
  SearchIndex() = default;
  static SearchIndex build(const catalog::ModelCatalog& models, const catalog::DeviceCatalog& devices);
  static SearchIndex build(const rdf::Dataset& dataset);

  std::size_t size() const noexcept { return documents_.size(); }
  const std::vector<Document>& documents() const noexcept { return documents_; }
  const std::map<std::string, int>& documentFrequency() const noexcept { return df_; }

  /// ln(1 + N/df), N being the whole corpus; 0 for unknown tokens.
  double idf(const std::string& token) const;

  /// Filters first, then tf-idf over the distinct query tokens. Hits with
  /// score 0 are dropped; descending score, ties by entity IRI; top k.
  std::vector<SearchHit> search(std::string_view text, const SearchFilters& filters = {},
                                std::size_t k = 20) const;

  /// Per-token contributions for one entity, sorted by token. Throws
  /// Error("UnknownEntityError").
  std::vector<std::pair<std::string, double>> explain(const std::string& entityIri,
                                                      std::string_view text) const;

 private:
  const Document* find(const std::string& entityIri) const;

  std::vector<Document> documents_;  // sorted by entity IRI
  std::map<std::string, int> df_;
};

nlohmann::json toJson(const SearchHit& hit);
nlohmann::json toJson(const std::vector<SearchHit>& hits);

}  // namespace seloc::search
