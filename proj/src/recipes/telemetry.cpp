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

#include <cmath>
#include <ctime>

#include "common/error.hpp"
#include "recipes/recipes.hpp"

namespace seloc::recipes {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& message) { throw Error("InvalidTelemetryError", message); }

constexpr std::size_t kMaxQueued = 1000;

}  // namespace

std::vector<TelemetryEvent> parseTelemetryScript(const json& doc) {
  if (!doc.is_array() || doc.empty()) invalid("telemetry script must be a non-empty array");
  std::vector<TelemetryEvent> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& e = doc[i];
    const std::string where = "event " + std::to_string(i) + ": ";
    if (!e.is_object()) invalid(where + "must be an object");
    for (const auto& [k, _] : e.items()) {
      if (k != "classLabel" && k != "confidence" && k != "color") invalid(where + "unknown field '" + k + "'");
    }
    if (!e.contains("classLabel") || !e["classLabel"].is_string()) invalid(where + "classLabel must be a string");
    if (!e.contains("color") || !e["color"].is_string()) invalid(where + "color must be a string");
    if (!e.contains("confidence") || !e["confidence"].is_number()) invalid(where + "confidence must be a number");
    double c = e["confidence"].get<double>();
    if (!(c >= 0 && c <= 1)) invalid(where + "confidence must be within [0, 1]");
    out.push_back({"", e["classLabel"].get<std::string>(), c, e["color"].get<std::string>()});
  }
  return out;
}

const std::vector<TelemetryEvent>& caseStudyScript() {
  static const std::vector<TelemetryEvent> script = parseTelemetryScript(json::parse(R"([
    {"classLabel": "red_workpiece", "confidence": 0.97, "color": "red"},
    {"classLabel": "blue_workpiece", "confidence": 0.94, "color": "blue"},
    {"classLabel": "white_workpiece", "confidence": 0.91, "color": "white"},
    {"classLabel": "red_workpiece", "confidence": 0.88, "color": "red"},
    {"classLabel": "blue_workpiece", "confidence": 0.96, "color": "blue"},
    {"classLabel": "reject", "confidence": 0.42, "color": "gray"},
    {"classLabel": "white_workpiece", "confidence": 0.93, "color": "white"},
    {"classLabel": "red_workpiece", "confidence": 0.95, "color": "red"}
  ])"));
  return script;
}

std::string formatTimestamp(std::chrono::system_clock::time_point t) {
  using namespace std::chrono;
  auto ms = duration_cast<milliseconds>(t.time_since_epoch()).count();
  std::time_t secs = static_cast<std::time_t>(ms / 1000);
  long frac = static_cast<long>(ms % 1000);
  if (frac < 0) {
    frac += 1000;
    --secs;
  }
  std::tm tm{};
  gmtime_r(&secs, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof out, "%s.%03ldZ", buf, frac);
  return out;
}

// --- Subscription ------------------------------------------------------------

std::optional<TelemetryEvent> Subscription::next(std::chrono::milliseconds timeout) {
  std::unique_lock lock(mutex_);
  cv_.wait_for(lock, timeout, [&] { return !queue_.empty() || closed_; });
  if (queue_.empty()) return std::nullopt;
  auto e = std::move(queue_.front());
  queue_.pop_front();
  return e;
}

bool Subscription::closed() const {
  std::lock_guard lock(mutex_);
  return closed_ && queue_.empty();
}

void Subscription::push(TelemetryEvent e) {
  {
    std::lock_guard lock(mutex_);
    if (queue_.size() >= kMaxQueued) queue_.pop_front();
    queue_.push_back(std::move(e));
  }
  cv_.notify_all();
}

void Subscription::close() {
  {
    std::lock_guard lock(mutex_);
    closed_ = true;
  }
  cv_.notify_all();
}

// --- TelemetryStream ---------------------------------------------------------

TelemetryStream::TelemetryStream(std::vector<TelemetryEvent> script, double rate, Clock clock)
    : script_(std::move(script)), clock_(std::move(clock)) {
  if (script_.empty()) invalid("telemetry script must be non-empty");
  if (!(rate > 0) || !std::isfinite(rate)) invalid("rate must be > 0");
  period_ = std::chrono::nanoseconds(static_cast<long long>(1e9 / rate));
  if (!clock_) clock_ = [] { return std::chrono::system_clock::now(); };
  thread_ = std::thread([this] { run(); });
}

TelemetryStream::~TelemetryStream() { stop(); }

std::shared_ptr<Subscription> TelemetryStream::subscribe() {
  auto sub = std::make_shared<Subscription>();
  std::lock_guard lock(mutex_);
  if (stopping_) {
    sub->close();
  } else {
    subscribers_.push_back(sub);
  }
  return sub;
}

void TelemetryStream::stop() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  cv_.notify_all();
  if (thread_.joinable()) thread_.join();
  std::lock_guard lock(mutex_);
  for (auto& weak : subscribers_) {
    if (auto sub = weak.lock()) sub->close();
  }
  subscribers_.clear();
}

void TelemetryStream::run() {
  auto due = std::chrono::steady_clock::now();
  std::chrono::system_clock::time_point last{};
  for (std::size_t i = 0;; i = (i + 1) % script_.size()) {
    due += period_;
    std::unique_lock lock(mutex_);
    if (cv_.wait_until(lock, due, [&] { return stopping_; })) return;
    auto now = clock_();
    if (now < last) now = last;
    last = now;
    TelemetryEvent e = script_[i];
    e.timestamp = formatTimestamp(now);
    std::erase_if(subscribers_, [](const std::weak_ptr<Subscription>& w) { return w.expired(); });
    for (auto& weak : subscribers_) {
      if (auto sub = weak.lock()) sub->push(e);
    }
  }
}

std::unique_ptr<TelemetryStream> openStream(const Binding& binding, std::vector<TelemetryEvent> script,
                                            double rate, TelemetryStream::Clock clock) {
  if (binding.status != BindingStatus::Acknowledged) {
    throw Error("NotAcknowledgedError",
                "binding '" + binding.bindingId + "' is " + statusName(binding.status) + ", not acknowledged",
                {{"id", binding.bindingId}, {"status", statusName(binding.status)}});
  }
  return std::make_unique<TelemetryStream>(std::move(script), rate, std::move(clock));
}

}  // namespace seloc::recipes
