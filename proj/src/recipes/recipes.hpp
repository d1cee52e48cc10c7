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

#include <chrono>
#include <condition_variable>
#include <deque>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "catalog/catalog.hpp"
#include "json.hpp"

namespace seloc::recipes {

enum class Cardinality { ExactlyOne, OneOrMore };

struct RecipeInput {
  std::string role;
  std::string semanticType;  // IRI
  Cardinality cardinality = Cardinality::ExactlyOne;
};

struct Widget {
  std::string widgetKind;  // counterByClass | timeline | table
  std::string boundRole;
};

struct Recipe {
  std::string recipeId;
  std::string name;
  std::string description;
  std::vector<RecipeInput> inputs;
  std::vector<Widget> widgets;
};

/// Throws Error("RecipeParseError").
Recipe parseRecipe(const nlohmann::json& doc);
const std::vector<Recipe>& builtinRecipes();

struct RecipeLoadError {
  std::string file;
  std::string message;
};

struct RecipeSet {
  std::vector<Recipe> recipes;  // sorted by id; files override built-ins
  std::vector<RecipeLoadError> errors;
};

/// Loads every *.json file of `directory` (which may be empty or absent).
RecipeSet loadRecipes(const std::filesystem::path& directory, bool includeBuiltins = true);

// --- bindings ----------------------------------------------------------------

struct Candidate {
  std::string deviceId;
  std::string datapointRole;
  std::string address;
  std::string semanticType;

  bool operator==(const Candidate&) const = default;
};

enum class BindingStatus { Proposed, Acknowledged, Rejected };

std::string statusName(BindingStatus s);

struct Binding {
  std::string bindingId;
  std::string recipeId;
  std::map<std::string, std::vector<Candidate>> assignments;  // role -> datapoints
  BindingStatus status = BindingStatus::Proposed;
};

struct AmbiguityReport {
  std::string recipeId;
  std::map<std::string, std::vector<Candidate>> candidates;  // only ambiguous roles
};

struct MissingReport {
  std::string recipeId;
  std::vector<RecipeInput> missing;
};

using Proposal = std::variant<Binding, AmbiguityReport, MissingReport>;

/// Candidates are datapoints whose type equals or directly subclasses the
/// role's type. Any role without candidates yields a MissingReport; else any
/// exactly-one role with several yields an AmbiguityReport; else a proposed
/// Binding (without id).
Proposal proposeBinding(const Recipe& recipe, const std::vector<catalog::DeviceDescriptor>& devices);

/// Thread-safe binding registry persisted to a JSON file after each change.
class BindingStore {
 public:
  /// Empty path keeps bindings in memory only. Throws Error("CorruptStoreError")
  /// for an unreadable file.
  explicit BindingStore(std::filesystem::path file = {});

  /// Assigns the next "binding-N" id.
  Binding add(Binding binding);
  /// Throws Error("UnknownBindingError").
  Binding get(const std::string& bindingId) const;
  std::vector<Binding> list() const;
  /// decision: "accept" | "reject". Throws UnknownBindingError,
  /// InvalidDecisionError, InvalidTransitionError.
  Binding acknowledge(const std::string& bindingId, const std::string& decision);

 private:
  void persist() const;

  std::filesystem::path file_;
  mutable std::mutex mutex_;
  std::map<std::string, Binding> bindings_;
  long next_ = 1;
};

// --- telemetry ---------------------------------------------------------------

struct TelemetryEvent {
  std::string timestamp;  // ISO-8601 UTC, millisecond precision
  std::string classLabel;
  double confidence = 0;
  std::string color;
};

/// Throws Error("InvalidTelemetryError") for an empty script, a malformed
/// entry or a confidence outside [0, 1].
std::vector<TelemetryEvent> parseTelemetryScript(const nlohmann::json& doc);
/// Conveyor-belt workpieces classified by colour.
const std::vector<TelemetryEvent>& caseStudyScript();

std::string formatTimestamp(std::chrono::system_clock::time_point t);

/// Per-subscriber queue fed by a TelemetryStream.
class Subscription {
 public:
  /// Blocks up to `timeout`; nullopt on timeout or after the stream stops.
  std::optional<TelemetryEvent> next(std::chrono::milliseconds timeout);
  bool closed() const;

 private:
  friend class TelemetryStream;
  void push(TelemetryEvent e);
  void close();

  mutable std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<TelemetryEvent> queue_;
  bool closed_ = false;
};

/// Replays a script at `rate` events per second, looping, stamping each
/// event with the current time (never earlier than the previous stamp) and
/// fanning out to every live subscriber.
class TelemetryStream {
 public:
  using Clock = std::function<std::chrono::system_clock::time_point()>;

  TelemetryStream(std::vector<TelemetryEvent> script, double rate, Clock clock = {});
  ~TelemetryStream();
  TelemetryStream(const TelemetryStream&) = delete;
  TelemetryStream& operator=(const TelemetryStream&) = delete;

  std::shared_ptr<Subscription> subscribe();
  void stop();

 private:
  void run();

  std::vector<TelemetryEvent> script_;
  std::chrono::nanoseconds period_;
  Clock clock_;
  std::mutex mutex_;
  std::condition_variable cv_;
  std::vector<std::weak_ptr<Subscription>> subscribers_;
  bool stopping_ = false;
  std::thread thread_;
};

/// Refuses (Error("NotAcknowledgedError")) unless the binding is acknowledged.
std::unique_ptr<TelemetryStream> openStream(const Binding& binding, std::vector<TelemetryEvent> script,
                                            double rate, TelemetryStream::Clock clock = {});

nlohmann::json toJson(const Recipe& r);
nlohmann::json toJson(const Binding& b);
nlohmann::json toJson(const Proposal& p);
nlohmann::json toJson(const TelemetryEvent& e);

}  // namespace seloc::recipes
