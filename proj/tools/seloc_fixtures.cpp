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

// Regenerates data/fixtures/*.ttl from data/manifests. Links only the core
// library, so it can run before the fixtures are embedded anywhere.
#include <fstream>
#include <iostream>

#include "catalog/catalog.hpp"
#include "catalog/vocabulary.hpp"
#include "common/error.hpp"
#include "rdf/turtle.hpp"

int main(int argc, char** argv) {
  if (argc != 3) {
    std::cerr << "usage: seloc-fixtures <manifests-dir> <fixtures-dir>\n";
    return 2;
  }
  const std::filesystem::path manifests = argv[1];
  const std::filesystem::path fixtures = argv[2];
  try {
    std::filesystem::create_directories(fixtures);
    const std::pair<const char*, seloc::catalog::EntityKind> kinds[] = {
        {"models", seloc::catalog::EntityKind::Model}, {"devices", seloc::catalog::EntityKind::Device}};
    for (const auto& [name, kind] : kinds) {
      auto graph = seloc::catalog::compileManifestDirectory(manifests / name, kind);
      std::ofstream out(fixtures / (std::string(name) + ".ttl"), std::ios::binary);
      out << seloc::rdf::serializeTurtle(graph, seloc::vocab::defaultPrefixes());
      if (!out) throw seloc::Error("IoError", "cannot write fixtures");
      std::cout << name << ": " << graph.size() << " triples\n";
    }
  } catch (const seloc::Error& e) {
    std::cerr << e.code() << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}
