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

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "catalog/catalog.hpp"
#include "codegen/codegen.hpp"
#include "json.hpp"
#include "rdf/graph.hpp"
#include "recipes/recipes.hpp"
#include "search/search.hpp"

namespace seloc::service {

struct RegistryConfig {
  std::filesystem::path dataDirectory;  // empty: in-memory only
  bool loadFixtures = false;
  std::filesystem::path recipesDirectory;  // empty: built-ins only
  double telemetryRate = 1.0;              // events per second
};

/// Immutable view published after every write; readers hold it by
/// shared_ptr so an ingest never shows up half-applied.
struct Snapshot {
  rdf::Dataset dataset;
  catalog::ModelCatalog models;
  catalog::DeviceCatalog devices;
  search::SearchIndex index;
};

struct Request {
  std::string method;
  std::string target;  // path plus optional query string, percent-encoded
  std::string contentType;
  std::string accept;
  std::string body;
};

struct Response {
  int status = 200;
  std::string contentType = "application/json";
  std::string body;
};

/// HTTP status for a library error code.
int httpStatusFor(const std::string& code);
/// {"code", "message", "details"?} envelope.
Response errorResponse(const std::string& code, const std::string& message,
                       const nlohmann::json& details = nullptr);

/// Graph name the seed fixtures use (`models`, `devices`) mapped to their
/// Turtle text.
const std::vector<std::pair<std::string, std::string>>& fixtureGraphs();
/// Parses the bundled fixtures into named graphs.
rdf::Dataset fixtureDataset();

/// The artifact's service layer: dataset lifecycle plus the JSON route table.
/// The HTTP server and the C API both dispatch through `handle`, so their
/// bodies are byte-identical.
class Registry {
 public:
  /// Loads the persisted store when present; with `loadFixtures`, adds every
  /// fixture graph the store does not already hold. Throws IoError /
  /// CorruptStoreError.
  explicit Registry(RegistryConfig config);
  ~Registry();

  Response handle(const Request& request);

  std::shared_ptr<const Snapshot> snapshot() const;
  const RegistryConfig& config() const noexcept { return config_; }

  struct PutResult {
    std::string graphIri;
    std::size_t tripleCount = 0;
    std::vector<catalog::Violation> violations;  // advisory, from this graph alone
  };

  /// Replaces the named graph, persists, then publishes.
  PutResult putGraph(const std::string& name, const std::string& turtle);

  /// Opens (or joins) the telemetry replay of an acknowledged binding.
  /// Throws UnknownBindingError / NotAcknowledgedError.
  std::shared_ptr<recipes::Subscription> subscribe(const std::string& bindingId);

  /// Writes the dataset to the data directory (no-op in memory).
  void flush();

 private:
  void publish(rdf::Dataset dataset);
  Response route(const Request& request);

  RegistryConfig config_;
  mutable std::mutex snapshotMutex_;
  std::shared_ptr<const Snapshot> snapshot_;
  std::mutex writeMutex_;
  std::unique_ptr<recipes::BindingStore> bindings_;
  recipes::RecipeSet recipes_;
  std::mutex streamsMutex_;
  std::map<std::string, std::shared_ptr<recipes::TelemetryStream>> streams_;
};

}  // namespace seloc::service
