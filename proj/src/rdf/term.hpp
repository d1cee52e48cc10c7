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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace seloc::rdf {

namespace xsd {
inline constexpr std::string_view kNamespace = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kString = "http://www.w3.org/2001/XMLSchema#string";
inline constexpr std::string_view kInteger = "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr std::string_view kDecimal = "http://www.w3.org/2001/XMLSchema#decimal";
inline constexpr std::string_view kDouble = "http://www.w3.org/2001/XMLSchema#double";
inline constexpr std::string_view kBoolean = "http://www.w3.org/2001/XMLSchema#boolean";
inline constexpr std::string_view kDate = "http://www.w3.org/2001/XMLSchema#date";
}  // namespace xsd

namespace rdfns {
inline constexpr std::string_view kNamespace = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kLangString =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
}  // namespace rdfns

enum class TermKind : std::uint8_t { Iri = 0, BlankNode = 1, Literal = 2 };

/// An RDF term: an absolute IRI, a blank node label, or a literal.
///
/// Equality and ordering are structural (kind, lexical value, datatype,
/// language); numeric value comparison lives in `compareNumeric`.
class Term {
 public:
  Term() = default;

  /// Throws Error("InvalidIriError") unless `value` carries a scheme.
  static Term iri(std::string value);
  static Term blank(std::string label);
  /// A language tag forces rdf:langString. An empty datatype means
  /// xsd:string. Numeric datatypes validate their lexical form and throw
  /// Error("InvalidLiteralError") on mismatch.
  static Term literal(std::string lexical, std::string datatype = {},
                      std::string language = {});
  static Term integer(long long value);
  /// Integral values are emitted as xsd:integer, others as xsd:decimal.
  static Term number(double value);

  TermKind kind() const noexcept { return kind_; }
  bool isIri() const noexcept { return kind_ == TermKind::Iri; }
  bool isBlank() const noexcept { return kind_ == TermKind::BlankNode; }
  bool isLiteral() const noexcept { return kind_ == TermKind::Literal; }

  /// IRI string, blank label, or literal lexical form.
  const std::string& value() const noexcept { return value_; }
  const std::string& datatype() const noexcept { return datatype_; }
  const std::string& language() const noexcept { return language_; }

  /// N-Triples rendering (`<iri>`, `_:label`, `"lex"^^<dt>`, `"lex"@en`).
  std::string toNTriples() const;

  auto operator<=>(const Term&) const = default;
  bool operator==(const Term&) const = default;

 private:
  TermKind kind_ = TermKind::Iri;
  std::string value_;
  std::string datatype_;
  std::string language_;
};

bool isAbsoluteIri(std::string_view iri);
bool isNumericDatatype(std::string_view datatype);
bool isValidNumericLexical(std::string_view lexical, std::string_view datatype);

/// Numeric value of an xsd:integer/decimal/double literal.
std::optional<double> numericValue(const Term& term);

/// Value comparison between two numeric literals (integers promote to
/// decimal); nullopt when either side is not numeric.
std::optional<std::partial_ordering> compareNumeric(const Term& a, const Term& b);

/// Escapes a lexical form for a double-quoted Turtle/N-Triples string.
std::string escapeString(std::string_view text);

/// Fresh process-unique blank node label.
std::string freshBlankLabel();

}  // namespace seloc::rdf
