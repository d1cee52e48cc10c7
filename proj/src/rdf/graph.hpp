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
#include <vector>

#include "rdf/term.hpp"

namespace seloc::rdf {

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  /// Validating constructor: subject is IRI/blank, predicate an IRI.
  static Triple make(Term s, Term p, Term o);

  auto operator<=>(const Triple&) const = default;
  bool operator==(const Triple&) const = default;

  std::string toNTriples() const;
};

/// A named set of triples.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::string name) : name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }
  void setName(std::string name) { name_ = std::move(name); }

  /// Returns false when the triple was already present.
  bool insert(Triple triple) { return triples_.insert(std::move(triple)).second; }
  bool insert(Term s, Term p, Term o) { return insert(Triple::make(std::move(s), std::move(p), std::move(o))); }
  bool erase(const Triple& triple) { return triples_.erase(triple) > 0; }
  bool contains(const Triple& triple) const { return triples_.count(triple) > 0; }
  void merge(const Graph& other);

  std::size_t size() const noexcept { return triples_.size(); }
  bool empty() const noexcept { return triples_.empty(); }
  const std::set<Triple>& triples() const noexcept { return triples_; }

  auto begin() const { return triples_.begin(); }
  auto end() const { return triples_.end(); }

 private:
  std::string name_;
  std::set<Triple> triples_;
};

/// Prefix label -> namespace IRI.
class PrefixMap {
 public:
  PrefixMap() = default;
  PrefixMap(std::initializer_list<std::pair<const std::string, std::string>> init)
      : map_(init) {}

  void set(std::string prefix, std::string ns) { map_[std::move(prefix)] = std::move(ns); }
  std::optional<std::string> lookup(const std::string& prefix) const;
  /// Throws Error("UnknownPrefixError") when the prefix is not bound.
  std::string expand(const std::string& prefix, const std::string& local) const;
  /// `prefix:local` using the longest matching namespace whose remainder is
  /// a valid local name, or nullopt.
  std::optional<std::string> compact(const std::string& iri) const;

  const std::map<std::string, std::string>& entries() const noexcept { return map_; }
  bool empty() const noexcept { return map_.empty(); }

 private:
  std::map<std::string, std::string> map_;
};

/// True iff a bijection between blank nodes maps `a`'s triples onto `b`'s.
bool isomorphic(const Graph& a, const Graph& b);

/// Named graphs plus SPO/POS/OSP indices over their union.
///
/// Datasets are value types; the registry publishes immutable snapshots and
/// swaps a fresh copy in after each write.
class Dataset {
 public:
  /// Adds to graph `graphName`, creating it when absent.
  bool insert(const std::string& graphName, const Triple& triple);
  /// Replaces (or creates) a whole named graph.
  void putGraph(Graph graph);
  bool removeGraph(const std::string& graphName);

  const Graph* graph(const std::string& graphName) const;
  std::vector<std::string> graphNames() const;
  const std::map<std::string, Graph>& graphs() const noexcept { return graphs_; }

  /// Distinct triples in the union graph.
  std::size_t size() const noexcept { return unionCounts_.size(); }
  bool empty() const noexcept { return unionCounts_.empty(); }

  /// Triples of the union graph agreeing with every bound position.
  std::vector<Triple> match(const std::optional<Term>& s, const std::optional<Term>& p,
                            const std::optional<Term>& o) const;
  /// Number of union triples agreeing with every bound position.
  std::size_t count(const std::optional<Term>& s, const std::optional<Term>& p,
                    const std::optional<Term>& o) const;

  /// Names of the graphs holding `triple`.
  std::vector<std::string> graphsContaining(const Triple& triple) const;

 private:
  void indexAdd(const Triple& t);
  void indexRemove(const Triple& t);

  using Inner = std::map<Term, std::set<Term>>;
  std::map<std::string, Graph> graphs_;
  std::map<Triple, unsigned> unionCounts_;
  std::map<Term, Inner> spo_;
  std::map<Term, Inner> pos_;
  std::map<Term, Inner> osp_;
};

}  // namespace seloc::rdf
