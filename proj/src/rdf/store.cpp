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

#include "rdf/store.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "common/error.hpp"
#include "json.hpp"
#include "rdf/turtle.hpp"

namespace seloc::rdf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void writeAtomically(const fs::path& target, const std::string& content) {
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("IoError", "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error("IoError", "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) throw Error("IoError", "cannot rename " + tmp.string() + ": " + ec.message());
}

std::string readFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("IoError", "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

std::string graphFileName(const std::string& graphName, std::size_t index) {
  std::string stem = graphName;
  auto slash = stem.find_last_of("/#:");
  if (slash != std::string::npos && slash + 1 < stem.size()) stem = stem.substr(slash + 1);
  for (auto& c : stem) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == '_' || c == '-';
    if (!ok) c = '_';
  }
  return std::to_string(index) + "_" + stem + ".ttl";
}

void saveDataset(const Dataset& dataset, const fs::path& directory, const PrefixMap& prefixes) {
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw Error("IoError", "cannot create " + directory.string() + ": " + ec.message());

  json manifest = json::array();
  std::set<std::string> written;
  std::size_t index = 0;
  for (const auto& [name, graph] : dataset.graphs()) {
    std::string file = graphFileName(name, index++);
    writeAtomically(directory / file, serializeTurtle(graph, prefixes));
    manifest.push_back({{"graphName", name}, {"file", file}});
    written.insert(file);
  }
  writeAtomically(directory / "manifest.json", manifest.dump(2) + "\n");

  // Drop graph files left over from an earlier snapshot.
  for (const auto& entry : fs::directory_iterator(directory, ec)) {
    if (entry.path().extension() == ".ttl" && !written.count(entry.path().filename().string())) {
      fs::remove(entry.path(), ec);
    }
  }
}

Dataset loadDataset(const fs::path& directory) {
  const fs::path manifestPath = directory / "manifest.json";
  if (!fs::exists(manifestPath)) {
    throw Error("CorruptStoreError", "missing manifest.json in " + directory.string(),
                {{"file", "manifest.json"}});
  }
  json manifest;
  try {
    manifest = json::parse(readFile(manifestPath));
  } catch (const json::exception& e) {
    throw Error("CorruptStoreError", std::string("manifest.json is not valid JSON: ") + e.what(),
                {{"file", "manifest.json"}});
  }
  if (!manifest.is_array()) {
    throw Error("CorruptStoreError", "manifest.json must be an array", {{"file", "manifest.json"}});
  }

  Dataset dataset;
  std::set<std::string> names;
  for (const auto& entry : manifest) {
    if (!entry.is_object() || !entry.contains("graphName") || !entry.contains("file") ||
        !entry["graphName"].is_string() || !entry["file"].is_string()) {
      throw Error("CorruptStoreError", "manifest entry lacks graphName/file",
                  {{"file", "manifest.json"}});
    }
    const auto name = entry["graphName"].get<std::string>();
    const auto file = entry["file"].get<std::string>();
    if (!names.insert(name).second) {
      throw Error("CorruptStoreError", "duplicate graph " + name + " in manifest",
                  {{"file", "manifest.json"}});
    }
    const fs::path path = directory / file;
    if (!fs::exists(path)) {
      throw Error("CorruptStoreError", "manifest lists missing file " + file, {{"file", file}});
    }
    Graph graph;
    try {
      graph = parseTurtle(readFile(path));
    } catch (const Error& e) {
      throw Error("CorruptStoreError", file + ": " + e.what(), {{"file", file}});
    }
    graph.setName(name);
    dataset.putGraph(std::move(graph));
  }
  return dataset;
}

}  // namespace seloc::rdf
