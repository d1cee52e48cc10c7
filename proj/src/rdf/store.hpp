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

#include "rdf/graph.hpp"

namespace seloc::rdf {

/// Writes one Turtle file per named graph plus `manifest.json`, a JSON array
/// of {"graphName", "file"} objects. Files are written to temporaries and
/// renamed so a crash leaves either the old or the new snapshot.
/// Throws Error("IoError").
void saveDataset(const Dataset& dataset, const std::filesystem::path& directory,
                 const PrefixMap& prefixes = {});

/// Throws Error("IoError") on unreadable input and Error("CorruptStoreError")
/// when the manifest and the files disagree.
Dataset loadDataset(const std::filesystem::path& directory);

/// File stem used for a graph name (non [A-Za-z0-9_-] bytes become '_').
std::string graphFileName(const std::string& graphName, std::size_t index);

}  // namespace seloc::rdf
