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

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rdf/graph.hpp"

namespace seloc::sparql {

struct Variable {
  std::string name;  // without the leading '?'
  auto operator<=>(const Variable&) const = default;
};

using PatternTerm = std::variant<rdf::Term, Variable>;

struct TriplePattern {
  PatternTerm subject;
  PatternTerm predicate;
  PatternTerm object;
};

enum class CompareOp { Equal, NotEqual, Less, LessEqual, Greater, GreaterEqual };

struct GroupPattern;

/// FILTER expression tree.
struct Expr {
  enum class Kind { Or, And, Not, Compare, Var, Constant, NotExists };

  Kind kind = Kind::Constant;
  CompareOp op = CompareOp::Equal;
  std::shared_ptr<const Expr> lhs;
  std::shared_ptr<const Expr> rhs;
  std::string variable;
  rdf::Term constant;
  std::shared_ptr<const GroupPattern> group;  // NotExists only

  /// Variables referenced outside any NOT EXISTS group.
  void collectVariables(std::vector<std::string>& out) const;
};

using ExprPtr = std::shared_ptr<const Expr>;

/// A basic graph pattern with its filters.
struct GroupPattern {
  std::vector<TriplePattern> patterns;
  std::vector<ExprPtr> filters;
};

struct OrderKey {
  std::string variable;
  bool descending = false;
};

struct Query {
  std::vector<std::string> projection;  // resolved, even for SELECT *
  bool distinct = false;
  rdf::PrefixMap prefixes;
  GroupPattern where;
  std::vector<OrderKey> orderBy;
  std::optional<std::size_t> limit;
  std::optional<std::size_t> offset;
};

/// Parses a SELECT query of the supported subset: BGP, FILTER with
/// comparisons, `&&`, `||`, `!` and NOT EXISTS, DISTINCT, ORDER BY,
/// LIMIT/OFFSET. Prefixed names resolve against the query's own
/// declarations first, then `defaults`.
///
/// Throws SyntaxError, Error("UnknownPrefixError") or
/// Error("UnsupportedFeatureError") naming the construct.
Query parseQuery(std::string_view text, const rdf::PrefixMap& defaults = {});

/// One solution row: slot i binds `ResultTable::vars[i]`.
using Row = std::vector<std::optional<rdf::Term>>;

struct ResultTable {
  std::vector<std::string> vars;
  std::vector<Row> rows;
};

struct EvaluateOptions {
  /// Apply each filter as soon as its variables are bound. Disabling it
  /// runs every filter after the full join; results are identical.
  bool pushFilters = true;
  /// Greedy most-selective-first join order; false joins in text order.
  bool reorderJoins = true;
};

ResultTable evaluate(const rdf::Dataset& dataset, const Query& query,
                     const EvaluateOptions& options = {});

/// SPARQL 1.1 Query Results JSON (compact, row order preserved).
std::string toResultsJson(const ResultTable& table);

}  // namespace seloc::sparql
