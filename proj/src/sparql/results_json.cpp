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

#include "json.hpp"
#include "sparql/query.hpp"

namespace seloc::sparql {

std::string toResultsJson(const ResultTable& table) {
  using nlohmann::json;
  json bindings = json::array();
  for (const auto& row : table.rows) {
    json b = json::object();
    for (std::size_t i = 0; i < table.vars.size() && i < row.size(); ++i) {
      if (!row[i]) continue;
      const rdf::Term& t = *row[i];
      json cell;
      switch (t.kind()) {
        case rdf::TermKind::Iri:
          cell = {{"type", "uri"}, {"value", t.value()}};
          break;
        case rdf::TermKind::BlankNode:
          cell = {{"type", "bnode"}, {"value", t.value()}};
          break;
        case rdf::TermKind::Literal:
          cell = {{"type", "literal"}, {"value", t.value()}};
          if (!t.language().empty()) {
            cell["xml:lang"] = t.language();
          } else if (t.datatype() != rdf::xsd::kString) {
            cell["datatype"] = t.datatype();
          }
          break;
      }
      b[table.vars[i]] = std::move(cell);
    }
    bindings.push_back(std::move(b));
  }
  json doc = {{"head", {{"vars", table.vars}}}, {"results", {{"bindings", std::move(bindings)}}}};
  return doc.dump();
}

}  // namespace seloc::sparql
