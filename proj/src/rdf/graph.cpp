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

#include "rdf/graph.hpp"

#include <algorithm>
#include <functional>
#include <unordered_map>

#include "common/error.hpp"

namespace seloc::rdf {

Triple Triple::make(Term s, Term p, Term o) {
  if (s.isLiteral()) throw Error("InvalidTripleError", "literal in subject position");
  if (!p.isIri()) throw Error("InvalidTripleError", "predicate must be an IRI");
  return Triple{std::move(s), std::move(p), std::move(o)};
}

std::string Triple::toNTriples() const {
  return subject.toNTriples() + " " + predicate.toNTriples() + " " + object.toNTriples() + " .";
}

void Graph::merge(const Graph& other) {
  for (const auto& t : other) triples_.insert(t);
}

// ---------------------------------------------------------------------------
// PrefixMap

namespace {

bool isLocalStart(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

bool isLocalChar(char c) { return isLocalStart(c) || c == '-' || c == '.'; }

bool isValidLocalName(std::string_view local) {
  if (local.empty()) return true;
  if (!isLocalStart(local.front()) || local.back() == '.') return false;
  return std::all_of(local.begin(), local.end(), isLocalChar);
}

}  // namespace

std::optional<std::string> PrefixMap::lookup(const std::string& prefix) const {
  auto it = map_.find(prefix);
  if (it == map_.end()) return std::nullopt;
  return it->second;
}

std::string PrefixMap::expand(const std::string& prefix, const std::string& local) const {
  auto it = map_.find(prefix);
  if (it == map_.end()) {
    throw Error("UnknownPrefixError", "unknown prefix '" + prefix + ":'", {{"prefix", prefix}});
  }
  return it->second + local;
}

std::optional<std::string> PrefixMap::compact(const std::string& iri) const {
  const std::pair<const std::string, std::string>* best = nullptr;
  for (const auto& entry : map_) {
    const auto& ns = entry.second;
    if (ns.empty() || iri.size() < ns.size() || iri.compare(0, ns.size(), ns) != 0) continue;
    if (!isValidLocalName(std::string_view(iri).substr(ns.size()))) continue;
    if (best == nullptr || ns.size() > best->second.size()) best = &entry;
  }
  if (best == nullptr) return std::nullopt;
  return best->first + ":" + iri.substr(best->second.size());
}

// ---------------------------------------------------------------------------
// Isomorphism

namespace {

using Color = std::size_t;

struct BlankColoring {
  std::map<std::string, Color> colors;  // blank label -> color
};

// Shared colour dictionary so both graphs get comparable colour ids.
class ColorDictionary {
 public:
  Color intern(const std::string& signature) {
    auto [it, inserted] = ids_.emplace(signature, ids_.size());
    return it->second;
  }

 private:
  std::map<std::string, Color> ids_;
};

std::vector<std::string> blankLabels(const Graph& g) {
  std::set<std::string> labels;
  for (const auto& t : g) {
    if (t.subject.isBlank()) labels.insert(t.subject.value());
    if (t.object.isBlank()) labels.insert(t.object.value());
  }
  return {labels.begin(), labels.end()};
}

std::string termKey(const Term& term, const std::map<std::string, Color>& colors) {
  if (term.isBlank()) {
    auto it = colors.find(term.value());
    return "_:" + std::to_string(it == colors.end() ? 0 : it->second);
  }
  return term.toNTriples();
}

std::map<std::string, Color> refine(const Graph& g, const std::vector<std::string>& labels,
                                    const std::map<std::string, Color>& previous,
                                    ColorDictionary& dict) {
  std::map<std::string, std::vector<std::string>> sigs;
  for (const auto& label : labels) sigs[label];
  for (const auto& t : g) {
    if (t.subject.isBlank()) {
      sigs[t.subject.value()].push_back("s|" + t.predicate.value() + "|" +
                                        termKey(t.object, previous));
    }
    if (t.object.isBlank()) {
      sigs[t.object.value()].push_back("o|" + t.predicate.value() + "|" +
                                       termKey(t.subject, previous));
    }
  }
  std::map<std::string, Color> next;
  for (auto& [label, parts] : sigs) {
    std::sort(parts.begin(), parts.end());
    std::string sig = std::to_string(previous.count(label) ? previous.at(label) : 0);
    for (const auto& p : parts) sig += "\n" + p;
    next[label] = dict.intern(sig);
  }
  return next;
}

std::size_t distinctColors(const std::map<std::string, Color>& colors) {
  std::set<Color> s;
  for (const auto& [_, c] : colors) s.insert(c);
  return s.size();
}

class IsoSearch {
 public:
  IsoSearch(const Graph& a, const Graph& b, std::map<std::string, Color> colorsA,
            std::map<std::string, Color> colorsB)
      : a_(a), b_(b), colorsA_(std::move(colorsA)), colorsB_(std::move(colorsB)) {
    for (const auto& t : a_) {
      if (t.subject.isBlank() || t.object.isBlank()) {
        if (t.subject.isBlank()) byBlank_[t.subject.value()].push_back(&t);
        if (t.object.isBlank() && t.object != t.subject) byBlank_[t.object.value()].push_back(&t);
      }
    }
    for (const auto& [label, color] : colorsA_) order_.push_back(label);
    std::map<Color, std::size_t> classSize;
    for (const auto& [_, c] : colorsB_) ++classSize[c];
    std::stable_sort(order_.begin(), order_.end(), [&](const auto& x, const auto& y) {
      return classSize[colorsA_.at(x)] < classSize[colorsA_.at(y)];
    });
  }

  bool run() { return assign(0); }

 private:
  std::optional<Term> mapped(const Term& t) const {
    if (!t.isBlank()) return t;
    auto it = mapping_.find(t.value());
    if (it == mapping_.end()) return std::nullopt;
    return Term::blank(it->second);
  }

  bool consistent(const std::string& label) const {
    auto it = byBlank_.find(label);
    if (it == byBlank_.end()) return true;
    for (const Triple* t : it->second) {
      auto s = mapped(t->subject);
      auto o = mapped(t->object);
      if (!s || !o) continue;
      if (!b_.contains(Triple{*s, t->predicate, *o})) return false;
    }
    return true;
  }

  bool assign(std::size_t index) {
    if (index == order_.size()) return true;
    const auto& label = order_[index];
    const Color color = colorsA_.at(label);
    for (const auto& [candidate, candColor] : colorsB_) {
      if (candColor != color || used_.count(candidate)) continue;
      mapping_[label] = candidate;
      used_.insert(candidate);
      if (consistent(label) && assign(index + 1)) return true;
      used_.erase(candidate);
      mapping_.erase(label);
    }
    return false;
  }

  const Graph& a_;
  const Graph& b_;
  std::map<std::string, Color> colorsA_;
  std::map<std::string, Color> colorsB_;
  std::map<std::string, std::vector<const Triple*>> byBlank_;
  std::vector<std::string> order_;
  std::map<std::string, std::string> mapping_;
  std::set<std::string> used_;
};

}  // namespace

bool isomorphic(const Graph& a, const Graph& b) {
  if (a.size() != b.size()) return false;
  std::vector<const Triple*> groundA;
  std::size_t groundB = 0;
  for (const auto& t : a) {
    if (!t.subject.isBlank() && !t.object.isBlank()) groundA.push_back(&t);
  }
  for (const auto& t : b) {
    if (!t.subject.isBlank() && !t.object.isBlank()) ++groundB;
  }
  if (groundA.size() != groundB) return false;
  for (const Triple* t : groundA) {
    if (!b.contains(*t)) return false;
  }

  auto labelsA = blankLabels(a);
  auto labelsB = blankLabels(b);
  if (labelsA.size() != labelsB.size()) return false;
  if (labelsA.empty()) return true;

  ColorDictionary dict;
  std::map<std::string, Color> colorsA, colorsB;
  for (const auto& l : labelsA) colorsA[l] = 0;
  for (const auto& l : labelsB) colorsB[l] = 0;
  for (std::size_t round = 0; round <= labelsA.size(); ++round) {
    auto nextA = refine(a, labelsA, colorsA, dict);
    auto nextB = refine(b, labelsB, colorsB, dict);
    bool stable = distinctColors(nextA) == distinctColors(colorsA) &&
                  distinctColors(nextB) == distinctColors(colorsB);
    colorsA = std::move(nextA);
    colorsB = std::move(nextB);
    if (stable) break;
  }

  std::map<Color, std::size_t> histA, histB;
  for (const auto& [_, c] : colorsA) ++histA[c];
  for (const auto& [_, c] : colorsB) ++histB[c];
  if (histA != histB) return false;

  return IsoSearch(a, b, std::move(colorsA), std::move(colorsB)).run();
}

// ---------------------------------------------------------------------------
// Dataset

void Dataset::indexAdd(const Triple& t) {
  spo_[t.subject][t.predicate].insert(t.object);
  pos_[t.predicate][t.object].insert(t.subject);
  osp_[t.object][t.subject].insert(t.predicate);
}

void Dataset::indexRemove(const Triple& t) {
  auto drop = [](std::map<Term, Inner>& index, const Term& a, const Term& b, const Term& c) {
    auto outer = index.find(a);
    if (outer == index.end()) return;
    auto inner = outer->second.find(b);
    if (inner == outer->second.end()) return;
    inner->second.erase(c);
    if (inner->second.empty()) outer->second.erase(inner);
    if (outer->second.empty()) index.erase(outer);
  };
  drop(spo_, t.subject, t.predicate, t.object);
  drop(pos_, t.predicate, t.object, t.subject);
  drop(osp_, t.object, t.subject, t.predicate);
}

bool Dataset::insert(const std::string& graphName, const Triple& triple) {
  auto& g = graphs_[graphName];
  if (g.name().empty()) g.setName(graphName);
  if (!g.insert(triple)) return false;
  if (unionCounts_[triple]++ == 0) indexAdd(triple);
  return true;
}

void Dataset::putGraph(Graph graph) {
  removeGraph(graph.name());
  const std::string name = graph.name();
  for (const auto& t : graph) {
    if (unionCounts_[t]++ == 0) indexAdd(t);
  }
  graphs_[name] = std::move(graph);
}

bool Dataset::removeGraph(const std::string& graphName) {
  auto it = graphs_.find(graphName);
  if (it == graphs_.end()) return false;
  for (const auto& t : it->second) {
    auto c = unionCounts_.find(t);
    if (c != unionCounts_.end() && --c->second == 0) {
      unionCounts_.erase(c);
      indexRemove(t);
    }
  }
  graphs_.erase(it);
  return true;
}

const Graph* Dataset::graph(const std::string& graphName) const {
  auto it = graphs_.find(graphName);
  return it == graphs_.end() ? nullptr : &it->second;
}

std::vector<std::string> Dataset::graphNames() const {
  std::vector<std::string> names;
  for (const auto& [name, _] : graphs_) names.push_back(name);
  return names;
}

std::vector<std::string> Dataset::graphsContaining(const Triple& triple) const {
  std::vector<std::string> names;
  for (const auto& [name, g] : graphs_) {
    if (g.contains(triple)) names.push_back(name);
  }
  return names;
}

namespace {

// Walks the index chosen for the bound positions and reports each matching
// (s, p, o) through `emit`.
template <typename Emit>
void scan(const std::map<Term, std::map<Term, std::set<Term>>>& spo,
          const std::map<Term, std::map<Term, std::set<Term>>>& pos,
          const std::map<Term, std::map<Term, std::set<Term>>>& osp,
          const std::optional<Term>& s, const std::optional<Term>& p,
          const std::optional<Term>& o, Emit&& emit) {
  if (s) {
    if (o && !p) {
      // OSP covers (o, s).
      auto oi = osp.find(*o);
      if (oi == osp.end()) return;
      auto si = oi->second.find(*s);
      if (si == oi->second.end()) return;
      for (const auto& pred : si->second) emit(*s, pred, *o);
      return;
    }
    auto si = spo.find(*s);
    if (si == spo.end()) return;
    for (const auto& [pred, objects] : si->second) {
      if (p && pred != *p) continue;
      if (o) {
        if (objects.count(*o)) emit(*s, pred, *o);
      } else {
        for (const auto& obj : objects) emit(*s, pred, obj);
      }
    }
    return;
  }
  if (p) {
    auto pi = pos.find(*p);
    if (pi == pos.end()) return;
    if (o) {
      auto oi = pi->second.find(*o);
      if (oi == pi->second.end()) return;
      for (const auto& subj : oi->second) emit(subj, *p, *o);
      return;
    }
    for (const auto& [obj, subjects] : pi->second) {
      for (const auto& subj : subjects) emit(subj, *p, obj);
    }
    return;
  }
  if (o) {
    auto oi = osp.find(*o);
    if (oi == osp.end()) return;
    for (const auto& [subj, preds] : oi->second) {
      for (const auto& pred : preds) emit(subj, pred, *o);
    }
    return;
  }
  for (const auto& [subj, inner] : spo) {
    for (const auto& [pred, objects] : inner) {
      for (const auto& obj : objects) emit(subj, pred, obj);
    }
  }
}

}  // namespace

std::vector<Triple> Dataset::match(const std::optional<Term>& s, const std::optional<Term>& p,
                                   const std::optional<Term>& o) const {
  std::vector<Triple> out;
  scan(spo_, pos_, osp_, s, p, o, [&](const Term& a, const Term& b, const Term& c) {
    out.push_back(Triple{a, b, c});
  });
  return out;
}

std::size_t Dataset::count(const std::optional<Term>& s, const std::optional<Term>& p,
                           const std::optional<Term>& o) const {
  if (!s && !p && !o) return size();
  if (!s && p && !o) {
    auto pi = pos_.find(*p);
    if (pi == pos_.end()) return 0;
    std::size_t n = 0;
    for (const auto& [_, subjects] : pi->second) n += subjects.size();
    return n;
  }
  std::size_t n = 0;
  scan(spo_, pos_, osp_, s, p, o, [&](const Term&, const Term&, const Term&) { ++n; });
  return n;
}

}  // namespace seloc::rdf
