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

#include <optional>
#include <string>
#include <string_view>

#include "rdf/graph.hpp"

namespace seloc::rdf {

struct TurtleDocument {
  Graph graph;
  PrefixMap prefixes;  // declarations seen while parsing
};

/// Parses a Turtle document (no collections, no RDF-star).
///
/// Blank node labels are replaced by fresh process-unique labels, so two
/// parses of the same text never share blank nodes. Throws SyntaxError with
/// the 1-based line/column and offending token, or Error("UnknownPrefixError").
TurtleDocument parseTurtleDocument(std::string_view text,
                                   const std::optional<std::string>& base = std::nullopt);

inline Graph parseTurtle(std::string_view text,
                         const std::optional<std::string>& base = std::nullopt) {
  return parseTurtleDocument(text, base).graph;
}

/// Deterministic Turtle: prefix block, then IRI subjects in lexicographic
/// order, then blank subjects in first-use order labelled _:b0, _:b1, ...
std::string serializeTurtle(const Graph& graph, const PrefixMap& prefixes);

}  // namespace seloc::rdf
