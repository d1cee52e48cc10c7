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

#include "rdf/term.hpp"

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>

#include "common/error.hpp"

namespace seloc::rdf {

namespace {

bool isDigit(char c) { return c >= '0' && c <= '9'; }

bool matchesInteger(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!isDigit(s[i])) return false;
  }
  return true;
}

bool matchesDecimal(std::string_view s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t intDigits = 0;
  while (i < s.size() && isDigit(s[i])) {
    ++i;
    ++intDigits;
  }
  if (i == s.size()) return intDigits > 0;
  if (s[i] != '.') return false;
  ++i;
  std::size_t fracDigits = 0;
  while (i < s.size() && isDigit(s[i])) {
    ++i;
    ++fracDigits;
  }
  return i == s.size() && (intDigits + fracDigits) > 0;
}

bool matchesDouble(std::string_view s) {
  if (s == "INF" || s == "-INF" || s == "+INF" || s == "NaN") return true;
  auto e = s.find_first_of("eE");
  if (e == std::string_view::npos) return matchesDecimal(s);
  return matchesDecimal(s.substr(0, e)) && matchesInteger(s.substr(e + 1));
}

}  // namespace

bool isAbsoluteIri(std::string_view iri) {
  auto colon = iri.find(':');
  if (colon == std::string_view::npos || colon == 0) return false;
  auto isAlpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); };
  if (!isAlpha(iri[0])) return false;
  for (std::size_t i = 1; i < colon; ++i) {
    char c = iri[i];
    if (!(isAlpha(c) || isDigit(c) || c == '+' || c == '-' || c == '.')) return false;
  }
  return true;
}

bool isNumericDatatype(std::string_view datatype) {
  return datatype == xsd::kInteger || datatype == xsd::kDecimal || datatype == xsd::kDouble;
}

bool isValidNumericLexical(std::string_view lexical, std::string_view datatype) {
  if (datatype == xsd::kInteger) return matchesInteger(lexical);
  if (datatype == xsd::kDecimal) return matchesDecimal(lexical);
  if (datatype == xsd::kDouble) return matchesDouble(lexical);
  return true;
}

Term Term::iri(std::string value) {
  if (!isAbsoluteIri(value)) {
    throw Error("InvalidIriError", "IRI is not absolute: " + value);
  }
  Term t;
  t.kind_ = TermKind::Iri;
  t.value_ = std::move(value);
  return t;
}

Term Term::blank(std::string label) {
  Term t;
  t.kind_ = TermKind::BlankNode;
  t.value_ = std::move(label);
  return t;
}

Term Term::literal(std::string lexical, std::string datatype, std::string language) {
  Term t;
  t.kind_ = TermKind::Literal;
  if (!language.empty()) {
    for (auto& c : language) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    t.datatype_ = std::string(rdfns::kLangString);
    t.language_ = std::move(language);
  } else {
    t.datatype_ = datatype.empty() ? std::string(xsd::kString) : std::move(datatype);
    if (!isValidNumericLexical(lexical, t.datatype_)) {
      throw Error("InvalidLiteralError",
                  "'" + lexical + "' is not a valid lexical form for " + t.datatype_);
    }
  }
  t.value_ = std::move(lexical);
  return t;
}

Term Term::integer(long long value) {
  return literal(std::to_string(value), std::string(xsd::kInteger));
}

Term Term::number(double value) {
  if (std::isfinite(value) && std::floor(value) == value && std::fabs(value) < 9.0e15) {
    return integer(static_cast<long long>(value));
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  std::string lex(buf, res.ptr);
  if (lex.find_first_of("eE") != std::string::npos) {
    return literal(lex, std::string(xsd::kDouble));
  }
  return literal(lex, std::string(xsd::kDecimal));
}

std::string escapeString(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

std::string Term::toNTriples() const {
  switch (kind_) {
    case TermKind::Iri: return "<" + value_ + ">";
    case TermKind::BlankNode: return "_:" + value_;
    case TermKind::Literal: {
      std::string out = "\"" + escapeString(value_) + "\"";
      if (!language_.empty()) return out + "@" + language_;
      if (datatype_ != xsd::kString) out += "^^<" + datatype_ + ">";
      return out;
    }
  }
  return {};
}

std::optional<double> numericValue(const Term& term) {
  if (!term.isLiteral() || !isNumericDatatype(term.datatype())) return std::nullopt;
  const auto& lex = term.value();
  if (lex == "INF" || lex == "+INF") return HUGE_VAL;
  if (lex == "-INF") return -HUGE_VAL;
  if (lex == "NaN") return std::nan("");
  return std::strtod(lex.c_str(), nullptr);
}

std::optional<std::partial_ordering> compareNumeric(const Term& a, const Term& b) {
  auto x = numericValue(a);
  auto y = numericValue(b);
  if (!x || !y) return std::nullopt;
  return *x <=> *y;
}

std::string freshBlankLabel() {
  static std::atomic<std::uint64_t> counter{0};
  return "n" + std::to_string(counter.fetch_add(1, std::memory_order_relaxed));
}

}  // namespace seloc::rdf
