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

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "sparql/query.hpp"

namespace seloc::sparql {

namespace {

using rdf::Term;

// Variable name -> slot in a Row.
class SlotMap {
 public:
  std::size_t slot(const std::string& name) {
    auto [it, inserted] = slots_.emplace(name, slots_.size());
    return it->second;
  }
  std::optional<std::size_t> find(const std::string& name) const {
    auto it = slots_.find(name);
    if (it == slots_.end()) return std::nullopt;
    return it->second;
  }
  std::size_t size() const { return slots_.size(); }

 private:
  std::map<std::string, std::size_t> slots_;
};

void registerGroup(const GroupPattern& g, SlotMap& slots) {
  for (const auto& p : g.patterns) {
    for (const PatternTerm* t : {&p.subject, &p.predicate, &p.object}) {
      if (const auto* v = std::get_if<Variable>(t)) slots.slot(v->name);
    }
  }
  std::vector<std::string> vars;
  for (const auto& f : g.filters) f->collectVariables(vars);
  for (const auto& v : vars) slots.slot(v);
  // Inner NOT EXISTS groups share the slot space.
  std::vector<const Expr*> stack;
  for (const auto& f : g.filters) stack.push_back(f.get());
  while (!stack.empty()) {
    const Expr* e = stack.back();
    stack.pop_back();
    if (e->kind == Expr::Kind::NotExists) registerGroup(*e->group, slots);
    if (e->lhs) stack.push_back(e->lhs.get());
    if (e->rhs) stack.push_back(e->rhs.get());
  }
}

// --- expression evaluation (three-valued: true / false / error) -----------

enum class Truth { False, True, Error };

struct Value {
  enum class Kind { Error, Bool, Term } kind = Kind::Error;
  bool boolean = false;
  Term term;
};

class Evaluator;

struct Context {
  const rdf::Dataset& dataset;
  const SlotMap& slots;
  const EvaluateOptions& options;
};

std::vector<Row> solve(const Context& ctx, const GroupPattern& group, std::vector<Row> seed);

Value evalExpr(const Context& ctx, const Expr& e, const Row& row);

Truth effectiveBoolean(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Error: return Truth::Error;
    case Value::Kind::Bool: return v.boolean ? Truth::True : Truth::False;
    case Value::Kind::Term: {
      const Term& t = v.term;
      if (!t.isLiteral()) return Truth::Error;
      if (t.datatype() == rdf::xsd::kBoolean) return t.value() == "true" || t.value() == "1" ? Truth::True : Truth::False;
      if (auto n = rdf::numericValue(t)) return (*n != 0 && !std::isnan(*n)) ? Truth::True : Truth::False;
      if (t.datatype() == rdf::xsd::kString || t.datatype() == rdf::rdfns::kLangString) {
        return t.value().empty() ? Truth::False : Truth::True;
      }
      return Truth::Error;
    }
  }
  return Truth::Error;
}

Value boolValue(bool b) {
  Value v;
  v.kind = Value::Kind::Bool;
  v.boolean = b;
  return v;
}

Value fromTruth(Truth t) { return t == Truth::Error ? Value{} : boolValue(t == Truth::True); }

bool orderableLiteral(const std::string& datatype) {
  return datatype == rdf::xsd::kString || datatype == rdf::xsd::kDate ||
         datatype == rdf::xsd::kBoolean || datatype == rdf::rdfns::kLangString;
}

Value compare(CompareOp op, const Value& a, const Value& b) {
  if (a.kind == Value::Kind::Error || b.kind == Value::Kind::Error) return {};
  if (a.kind == Value::Kind::Bool || b.kind == Value::Kind::Bool) {
    if (a.kind != b.kind) return {};
    if (op == CompareOp::Equal) return boolValue(a.boolean == b.boolean);
    if (op == CompareOp::NotEqual) return boolValue(a.boolean != b.boolean);
    return {};
  }
  const Term& x = a.term;
  const Term& y = b.term;
  std::optional<std::partial_ordering> ord;
  if (auto numeric = rdf::compareNumeric(x, y)) {
    ord = *numeric;
  } else if (x.isLiteral() && y.isLiteral() && !rdf::isNumericDatatype(x.datatype()) &&
             !rdf::isNumericDatatype(y.datatype()) && x.datatype() == y.datatype() &&
             x.language() == y.language() && orderableLiteral(x.datatype())) {
    ord = x.value() <=> y.value();
  } else {
    // Only (in)equality is defined across kinds; compared as RDF terms.
    if (op == CompareOp::Equal) return boolValue(x == y);
    if (op == CompareOp::NotEqual) return boolValue(x != y);
    return {};
  }
  if (*ord == std::partial_ordering::unordered) {
    return op == CompareOp::NotEqual ? boolValue(true) : boolValue(false);
  }
  switch (op) {
    case CompareOp::Equal: return boolValue(*ord == 0);
    case CompareOp::NotEqual: return boolValue(*ord != 0);
    case CompareOp::Less: return boolValue(*ord < 0);
    case CompareOp::LessEqual: return boolValue(*ord <= 0);
    case CompareOp::Greater: return boolValue(*ord > 0);
    case CompareOp::GreaterEqual: return boolValue(*ord >= 0);
  }
  return {};
}

Value evalExpr(const Context& ctx, const Expr& e, const Row& row) {
  switch (e.kind) {
    case Expr::Kind::Constant: {
      Value v;
      v.kind = Value::Kind::Term;
      v.term = e.constant;
      return v;
    }
    case Expr::Kind::Var: {
      auto slot = ctx.slots.find(e.variable);
      if (!slot || !row[*slot]) return {};
      Value v;
      v.kind = Value::Kind::Term;
      v.term = *row[*slot];
      return v;
    }
    case Expr::Kind::Compare:
      return compare(e.op, evalExpr(ctx, *e.lhs, row), evalExpr(ctx, *e.rhs, row));
    case Expr::Kind::Not: {
      Truth t = effectiveBoolean(evalExpr(ctx, *e.lhs, row));
      if (t == Truth::Error) return {};
      return boolValue(t == Truth::False);
    }
    case Expr::Kind::And: {
      Truth l = effectiveBoolean(evalExpr(ctx, *e.lhs, row));
      Truth r = effectiveBoolean(evalExpr(ctx, *e.rhs, row));
      if (l == Truth::False || r == Truth::False) return boolValue(false);
      if (l == Truth::Error || r == Truth::Error) return {};
      return boolValue(true);
    }
    case Expr::Kind::Or: {
      Truth l = effectiveBoolean(evalExpr(ctx, *e.lhs, row));
      Truth r = effectiveBoolean(evalExpr(ctx, *e.rhs, row));
      if (l == Truth::True || r == Truth::True) return boolValue(true);
      if (l == Truth::Error || r == Truth::Error) return {};
      return boolValue(false);
    }
    case Expr::Kind::NotExists: {
      auto inner = solve(ctx, *e.group, {row});
      return fromTruth(inner.empty() ? Truth::True : Truth::False);
    }
  }
  return {};
}

bool passes(const Context& ctx, const Expr& e, const Row& row) {
  return effectiveBoolean(evalExpr(ctx, e, row)) == Truth::True;
}

// --- BGP join --------------------------------------------------------------

std::optional<std::size_t> slotOf(const Context& ctx, const PatternTerm& t) {
  if (const auto* v = std::get_if<Variable>(&t)) return ctx.slots.find(v->name);
  return std::nullopt;
}

std::optional<Term> resolve(const Context& ctx, const PatternTerm& t, const Row& row) {
  if (const auto* term = std::get_if<Term>(&t)) return *term;
  auto slot = slotOf(ctx, t);
  return row[*slot];
}

bool bindInto(Row& row, std::optional<std::size_t> slot, const Term& value) {
  if (!slot) return true;
  auto& cell = row[*slot];
  if (cell) return *cell == value;
  cell = value;
  return true;
}

// Selectivity estimate: constant-only match count, shrunk per position bound
// by an earlier join.
double estimate(const Context& ctx, const TriplePattern& p, const std::set<std::size_t>& bound) {
  auto constant = [](const PatternTerm& t) -> std::optional<Term> {
    if (const auto* term = std::get_if<Term>(&t)) return *term;
    return std::nullopt;
  };
  double n = static_cast<double>(
      ctx.dataset.count(constant(p.subject), constant(p.predicate), constant(p.object)));
  for (const PatternTerm* t : {&p.subject, &p.predicate, &p.object}) {
    auto slot = slotOf(ctx, *t);
    if (slot && bound.count(*slot)) n /= 25.0;
  }
  return n;
}

std::vector<Row> solve(const Context& ctx, const GroupPattern& group, std::vector<Row> rows) {
  std::vector<const TriplePattern*> remaining;
  for (const auto& p : group.patterns) remaining.push_back(&p);

  struct PendingFilter {
    const Expr* expr;
    std::vector<std::size_t> slots;
    bool deferred;  // NOT EXISTS anywhere inside, or push-down disabled
  };
  std::vector<PendingFilter> filters;
  for (const auto& f : group.filters) {
    std::vector<std::string> names;
    f->collectVariables(names);
    PendingFilter pf{f.get(), {}, !ctx.options.pushFilters};
    for (const auto& n : names) pf.slots.push_back(*ctx.slots.find(n));
    std::vector<const Expr*> stack{f.get()};
    while (!stack.empty()) {
      const Expr* e = stack.back();
      stack.pop_back();
      if (e->kind == Expr::Kind::NotExists) pf.deferred = true;
      if (e->lhs) stack.push_back(e->lhs.get());
      if (e->rhs) stack.push_back(e->rhs.get());
    }
    filters.push_back(std::move(pf));
  }

  std::set<std::size_t> bound;
  if (!rows.empty()) {
    for (std::size_t i = 0; i < rows.front().size(); ++i) {
      if (rows.front()[i]) bound.insert(i);
    }
  }

  auto applyReadyFilters = [&](bool final) {
    for (auto it = filters.begin(); it != filters.end();) {
      bool ready = final || (!it->deferred && std::all_of(it->slots.begin(), it->slots.end(),
                                                          [&](std::size_t s) { return bound.count(s) > 0; }));
      if (!ready) {
        ++it;
        continue;
      }
      std::vector<Row> kept;
      kept.reserve(rows.size());
      for (auto& r : rows) {
        if (passes(ctx, *it->expr, r)) kept.push_back(std::move(r));
      }
      rows = std::move(kept);
      it = filters.erase(it);
    }
  };

  applyReadyFilters(false);
  while (!remaining.empty() && !rows.empty()) {
    std::size_t pick = 0;
    if (ctx.options.reorderJoins) {
      double best = estimate(ctx, *remaining[0], bound);
      for (std::size_t i = 1; i < remaining.size(); ++i) {
        double e = estimate(ctx, *remaining[i], bound);
        if (e < best) {
          best = e;
          pick = i;
        }
      }
    }
    const TriplePattern& p = *remaining[pick];
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));

    auto sSlot = slotOf(ctx, p.subject);
    auto pSlot = slotOf(ctx, p.predicate);
    auto oSlot = slotOf(ctx, p.object);
    std::vector<Row> next;
    for (const auto& row : rows) {
      auto s = resolve(ctx, p.subject, row);
      auto pr = resolve(ctx, p.predicate, row);
      auto o = resolve(ctx, p.object, row);
      if (pr && !pr->isIri()) continue;
      if (s && s->isLiteral()) continue;
      for (const auto& t : ctx.dataset.match(s, pr, o)) {
        Row extended = row;
        if (bindInto(extended, sSlot, t.subject) && bindInto(extended, pSlot, t.predicate) &&
            bindInto(extended, oSlot, t.object)) {
          next.push_back(std::move(extended));
        }
      }
    }
    rows = std::move(next);
    for (auto slot : {sSlot, pSlot, oSlot}) {
      if (slot) bound.insert(*slot);
    }
    applyReadyFilters(false);
  }
  if (!remaining.empty()) rows.clear();
  applyReadyFilters(true);
  return rows;
}

// --- ordering --------------------------------------------------------------

int kindRank(const Term& t) {
  switch (t.kind()) {
    case rdf::TermKind::BlankNode: return 0;
    case rdf::TermKind::Iri: return 1;
    case rdf::TermKind::Literal: return 2;
  }
  return 3;
}

// Negative/zero/positive; both unbound compare equal, unbound sorts last.
int compareForOrder(const std::optional<Term>& a, const std::optional<Term>& b) {
  if (!a || !b) return a ? -1 : (b ? 1 : 0);
  if (auto n = rdf::compareNumeric(*a, *b); n && *n != std::partial_ordering::unordered) {
    return *n < 0 ? -1 : (*n > 0 ? 1 : 0);
  }
  bool an = rdf::numericValue(*a).has_value();
  bool bn = rdf::numericValue(*b).has_value();
  if (an != bn) return an ? -1 : 1;
  if (kindRank(*a) != kindRank(*b)) return kindRank(*a) < kindRank(*b) ? -1 : 1;
  auto c = *a <=> *b;
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

}  // namespace

ResultTable evaluate(const rdf::Dataset& dataset, const Query& query,
                     const EvaluateOptions& options) {
  SlotMap slots;
  registerGroup(query.where, slots);
  for (const auto& v : query.projection) slots.slot(v);
  for (const auto& k : query.orderBy) slots.slot(k.variable);

  Context ctx{dataset, slots, options};
  std::vector<Row> solutions = solve(ctx, query.where, {Row(slots.size())});

  ResultTable table;
  table.vars = query.projection;
  std::vector<std::size_t> projected;
  for (const auto& v : query.projection) projected.push_back(*slots.find(v));
  std::vector<std::size_t> orderSlots;
  for (const auto& k : query.orderBy) orderSlots.push_back(*slots.find(k.variable));

  struct Keyed {
    Row projected;
    std::vector<std::optional<Term>> keys;
    std::vector<std::string> tieBreak;
  };
  std::vector<Keyed> keyed;
  keyed.reserve(solutions.size());
  for (const auto& s : solutions) {
    Keyed k;
    for (auto slot : projected) {
      k.projected.push_back(s[slot]);
      k.tieBreak.push_back(s[slot] ? s[slot]->toNTriples() : std::string());
    }
    for (auto slot : orderSlots) k.keys.push_back(s[slot]);
    keyed.push_back(std::move(k));
  }

  if (query.distinct) {
    std::set<std::vector<std::string>> seen;
    std::vector<Keyed> unique;
    for (auto& k : keyed) {
      if (seen.insert(k.tieBreak).second) unique.push_back(std::move(k));
    }
    keyed = std::move(unique);
  }

  std::stable_sort(keyed.begin(), keyed.end(), [&](const Keyed& a, const Keyed& b) {
    for (std::size_t i = 0; i < query.orderBy.size(); ++i) {
      int c = compareForOrder(a.keys[i], b.keys[i]);
      if (c != 0) {
        bool unboundInvolved = !a.keys[i] || !b.keys[i];
        if (query.orderBy[i].descending && !unboundInvolved) c = -c;
        return c < 0;
      }
    }
    return a.tieBreak < b.tieBreak;
  });

  std::size_t begin = std::min(query.offset.value_or(0), keyed.size());
  std::size_t end = keyed.size();
  if (query.limit) end = std::min(end, begin + *query.limit);
  for (std::size_t i = begin; i < end; ++i) table.rows.push_back(std::move(keyed[i].projected));
  return table;
}

}  // namespace seloc::sparql
