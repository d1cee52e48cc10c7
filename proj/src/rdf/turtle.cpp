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

#include "rdf/turtle.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <vector>

#include "common/error.hpp"

namespace seloc::rdf {

namespace {

bool isNameStartByte(unsigned char c) {
  return std::isalpha(c) || c == '_' || c >= 0x80;
}

bool isNameByte(unsigned char c) {
  return isNameStartByte(c) || std::isdigit(c) || c == '-';
}

void appendUtf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

std::string resolveIri(const std::string& ref, const std::optional<std::string>& base) {
  if (isAbsoluteIri(ref) || !base) return ref;
  const std::string& b = *base;
  if (ref.empty()) return b;
  if (ref[0] == '#') return b.substr(0, b.find('#')) + ref;
  if (ref[0] == '/') {
    auto scheme = b.find("://");
    if (scheme != std::string::npos) {
      auto path = b.find('/', scheme + 3);
      return (path == std::string::npos ? b : b.substr(0, path)) + ref;
    }
    return b.substr(0, b.find(':') + 1) + ref;
  }
  auto slash = b.rfind('/');
  return (slash == std::string::npos ? b : b.substr(0, slash + 1)) + ref;
}

class TurtleParser {
 public:
  TurtleParser(std::string_view text, std::optional<std::string> base)
      : text_(text), base_(std::move(base)) {}

  TurtleDocument parse() {
    skipWs();
    while (!atEnd()) {
      statement();
      skipWs();
    }
    return {std::move(graph_), std::move(prefixes_)};
  }

 private:
  // --- low level -----------------------------------------------------------
  bool atEnd() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void skipWs() {
    while (!atEnd()) {
      char c = peek();
      if (c == '#') {
        while (!atEnd() && peek() != '\n') ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        ++pos_;
      } else {
        break;
      }
    }
  }

  [[noreturn]] void fail(const std::string& message) const { failAt(message, pos_); }

  [[noreturn]] void failAt(const std::string& message, std::size_t offset) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string token;
    if (offset >= text_.size()) {
      token = "<EOF>";
    } else {
      std::size_t end = offset;
      while (end < text_.size() && !std::isspace(static_cast<unsigned char>(text_[end])) &&
             end - offset < 40) {
        ++end;
        if (end - offset == 1 && std::string_view(".;,[]()").find(text_[offset]) != std::string_view::npos) break;
      }
      token = std::string(text_.substr(offset, end - offset));
    }
    throw SyntaxError(message, line, col, token);
  }

  void expect(char c) {
    skipWs();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  bool keywordAhead(std::string_view kw, bool caseInsensitive) const {
    if (pos_ + kw.size() > text_.size()) return false;
    for (std::size_t i = 0; i < kw.size(); ++i) {
      char a = text_[pos_ + i];
      char b = kw[i];
      if (caseInsensitive ? std::tolower(static_cast<unsigned char>(a)) != std::tolower(static_cast<unsigned char>(b)) : a != b) return false;
    }
    char next = peek(kw.size());
    return !(isNameByte(static_cast<unsigned char>(next)) || next == ':');
  }

  // --- statements ----------------------------------------------------------
  void statement() {
    if (peek() == '@') {
      if (keywordAhead("@prefix", false)) {
        pos_ += 7;
        prefixDecl();
        expect('.');
        return;
      }
      if (keywordAhead("@base", false)) {
        pos_ += 5;
        skipWs();
        base_ = resolveIri(iriRef(), base_);
        expect('.');
        return;
      }
      fail("unknown directive");
    }
    if (keywordAhead("PREFIX", true)) {
      pos_ += 6;
      prefixDecl();
      return;
    }
    if (keywordAhead("BASE", true)) {
      pos_ += 4;
      skipWs();
      base_ = resolveIri(iriRef(), base_);
      return;
    }
    triples();
    expect('.');
  }

  void prefixDecl() {
    skipWs();
    std::string prefix;
    while (!atEnd() && peek() != ':') {
      char c = peek();
      if (!(isNameByte(static_cast<unsigned char>(c)) || c == '.')) fail("invalid prefix label");
      prefix += c;
      ++pos_;
    }
    if (atEnd()) fail("expected ':' in prefix declaration");
    ++pos_;
    skipWs();
    prefixes_.set(prefix, resolveIri(iriRef(), base_));
  }

  void triples() {
    skipWs();
    if (peek() == '[') {
      Term subject = blankNodePropertyList();
      skipWs();
      if (peek() != '.') predicateObjectList(subject);
      return;
    }
    Term subject = subjectTerm();
    skipWs();
    predicateObjectList(subject);
  }

  Term subjectTerm() {
    skipWs();
    char c = peek();
    if (c == '<') return Term::iri(resolvedIri());
    if (c == '_' && peek(1) == ':') return blankLabel();
    if (c == '(') fail("collections are not supported");
    if (c == '"' || c == '\'' || std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-') {
      fail("literal not allowed as subject");
    }
    return Term::iri(prefixedName());
  }

  void predicateObjectList(const Term& subject) {
    for (;;) {
      skipWs();
      Term predicate = verb();
      objectList(subject, predicate);
      skipWs();
      if (peek() != ';') return;
      while (peek() == ';') {
        ++pos_;
        skipWs();
      }
      char c = peek();
      if (c == '.' || c == ']' || atEnd()) return;
    }
  }

  void objectList(const Term& subject, const Term& predicate) {
    for (;;) {
      Term obj = object();
      graph_.insert(Triple::make(subject, predicate, std::move(obj)));
      skipWs();
      if (peek() != ',') return;
      ++pos_;
    }
  }

  Term verb() {
    skipWs();
    if (peek() == 'a' && keywordAhead("a", false)) {
      ++pos_;
      return Term::iri(std::string(rdfns::kType));
    }
    char c = peek();
    if (c == '<') return Term::iri(resolvedIri());
    if (c == '.' || c == ';' || c == ',' || c == ']' || atEnd()) fail("expected predicate");
    if (c == '_' || c == '[' || c == '"' || c == '\'') fail("predicate must be an IRI");
    return Term::iri(prefixedName());
  }

  Term object() {
    skipWs();
    char c = peek();
    if (atEnd() || c == '.' || c == ';' || c == ',' || c == ']') fail("expected object");
    if (c == '<') return Term::iri(resolvedIri());
    if (c == '_' && peek(1) == ':') return blankLabel();
    if (c == '[') return blankNodePropertyList();
    if (c == '(') fail("collections are not supported");
    if (c == '"' || c == '\'') return literal();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      return numericLiteral();
    }
    if (keywordAhead("true", false)) {
      pos_ += 4;
      return Term::literal("true", std::string(xsd::kBoolean));
    }
    if (keywordAhead("false", false)) {
      pos_ += 5;
      return Term::literal("false", std::string(xsd::kBoolean));
    }
    return Term::iri(prefixedName());
  }

  Term blankNodePropertyList() {
    ++pos_;  // '['
    Term node = Term::blank(freshBlankLabel());
    skipWs();
    if (peek() == ']') {
      ++pos_;
      return node;
    }
    predicateObjectList(node);
    expect(']');
    return node;
  }

  Term blankLabel() {
    pos_ += 2;
    std::string label;
    while (!atEnd()) {
      unsigned char c = static_cast<unsigned char>(peek());
      if (isNameByte(c) || std::isdigit(c) || (c == '.' && isNameByte(static_cast<unsigned char>(peek(1))))) {
        label += static_cast<char>(c);
        ++pos_;
      } else {
        break;
      }
    }
    if (label.empty()) fail("empty blank node label");
    auto [it, inserted] = blankLabels_.try_emplace(label);
    if (inserted) it->second = freshBlankLabel();
    return Term::blank(it->second);
  }

  // --- IRIs ----------------------------------------------------------------
  std::string iriRef() {
    if (peek() != '<') fail("expected IRI");
    std::size_t start = pos_;
    ++pos_;
    std::string out;
    while (!atEnd() && peek() != '>') {
      char c = peek();
      if (c == '\\') {
        char kind = peek(1);
        if (kind == 'u' || kind == 'U') {
          pos_ += 2;
          out += ucharEscape(kind == 'u' ? 4 : 8);
          continue;
        }
        fail("invalid IRI escape");
      }
      if (c == ' ' || c == '\n' || c == '<' || c == '"' || c == '{' || c == '}') {
        fail("invalid character in IRI");
      }
      out += c;
      ++pos_;
    }
    if (atEnd()) failAt("unterminated IRI", start);
    ++pos_;
    return out;
  }

  std::string resolvedIri() {
    std::size_t start = pos_;
    std::string ref = iriRef();
    std::string iri = resolveIri(ref, base_);
    if (!isAbsoluteIri(iri)) failAt("relative IRI without base", start);
    return iri;
  }

  std::string prefixedName() {
    std::size_t start = pos_;
    std::string prefix;
    while (!atEnd()) {
      char c = peek();
      if (c == ':') break;
      if (!(isNameByte(static_cast<unsigned char>(c)) || (c == '.' && isNameByte(static_cast<unsigned char>(peek(1)))))) {
        break;
      }
      prefix += c;
      ++pos_;
    }
    if (peek() != ':') failAt("unexpected token", start);
    ++pos_;
    std::string local;
    while (!atEnd()) {
      unsigned char c = static_cast<unsigned char>(peek());
      if (isNameByte(c) || std::isdigit(c) || c == ':') {
        local += static_cast<char>(c);
        ++pos_;
      } else if (c == '.') {
        unsigned char n = static_cast<unsigned char>(peek(1));
        if (isNameByte(n) || std::isdigit(n) || n == ':' || n == '%' || n == '\\') {
          local += '.';
          ++pos_;
        } else {
          break;
        }
      } else if (c == '%') {
        if (!std::isxdigit(static_cast<unsigned char>(peek(1))) || !std::isxdigit(static_cast<unsigned char>(peek(2)))) {
          fail("invalid percent escape");
        }
        local += std::string(text_.substr(pos_, 3));
        pos_ += 3;
      } else if (c == '\\') {
        char e = peek(1);
        if (std::string_view("_~.-!$&'()*+,;=/?#@%").find(e) == std::string_view::npos) {
          fail("invalid local name escape");
        }
        local += e;
        pos_ += 2;
      } else {
        break;
      }
    }
    auto ns = prefixes_.lookup(prefix);
    if (!ns) {
      throw Error("UnknownPrefixError", "unknown prefix '" + prefix + ":'", {{"prefix", prefix}});
    }
    return *ns + local;
  }

  // --- literals ------------------------------------------------------------
  std::string ucharEscape(int digits) {
    unsigned long cp = 0;
    for (int i = 0; i < digits; ++i) {
      char h = peek();
      if (!std::isxdigit(static_cast<unsigned char>(h))) fail("invalid unicode escape");
      cp = cp * 16 + static_cast<unsigned long>(std::isdigit(static_cast<unsigned char>(h)) ? h - '0' : (std::tolower(h) - 'a' + 10));
      ++pos_;
    }
    std::string out;
    appendUtf8(out, cp);
    return out;
  }

  std::string quotedString() {
    std::size_t start = pos_;
    char q = peek();
    bool longForm = peek(1) == q && peek(2) == q;
    pos_ += longForm ? 3 : 1;
    std::string out;
    for (;;) {
      if (atEnd()) failAt("unterminated string", start);
      char c = peek();
      if (longForm) {
        if (c == q && peek(1) == q && peek(2) == q) {
          pos_ += 3;
          // a fourth/fifth quote belongs to the content
          while (peek() == q) {
            out += q;
            ++pos_;
          }
          return out;
        }
      } else {
        if (c == q) {
          ++pos_;
          return out;
        }
        if (c == '\n' || c == '\r') fail("newline in short string");
      }
      if (c == '\\') {
        char e = peek(1);
        pos_ += 2;
        switch (e) {
          case 't': out += '\t'; break;
          case 'b': out += '\b'; break;
          case 'n': out += '\n'; break;
          case 'r': out += '\r'; break;
          case 'f': out += '\f'; break;
          case '"': out += '"'; break;
          case '\'': out += '\''; break;
          case '\\': out += '\\'; break;
          case 'u': out += ucharEscape(4); break;
          case 'U': out += ucharEscape(8); break;
          default: failAt("invalid string escape", pos_ - 2);
        }
        continue;
      }
      out += c;
      ++pos_;
    }
  }

  Term literal() {
    std::size_t start = pos_;
    std::string lexical = quotedString();
    if (peek() == '@') {
      ++pos_;
      std::string lang;
      while (!atEnd() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-')) {
        lang += peek();
        ++pos_;
      }
      if (lang.empty()) fail("empty language tag");
      return Term::literal(std::move(lexical), {}, std::move(lang));
    }
    if (peek() == '^' && peek(1) == '^') {
      pos_ += 2;
      std::string datatype = peek() == '<' ? resolvedIri() : prefixedName();
      if (isNumericDatatype(datatype) && !isValidNumericLexical(lexical, datatype)) {
        failAt("invalid lexical form for datatype", start);
      }
      return Term::literal(std::move(lexical), std::move(datatype));
    }
    return Term::literal(std::move(lexical));
  }

  Term numericLiteral() {
    std::size_t start = pos_;
    std::string lex;
    if (peek() == '+' || peek() == '-') lex += text_[pos_++];
    while (std::isdigit(static_cast<unsigned char>(peek()))) lex += text_[pos_++];
    bool decimal = false, exponent = false;
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      decimal = true;
      lex += text_[pos_++];
      while (std::isdigit(static_cast<unsigned char>(peek()))) lex += text_[pos_++];
    }
    if (peek() == 'e' || peek() == 'E') {
      exponent = true;
      lex += text_[pos_++];
      if (peek() == '+' || peek() == '-') lex += text_[pos_++];
      if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("invalid exponent");
      while (std::isdigit(static_cast<unsigned char>(peek()))) lex += text_[pos_++];
    }
    std::string_view datatype = exponent ? xsd::kDouble : decimal ? xsd::kDecimal : xsd::kInteger;
    if (!isValidNumericLexical(lex, datatype)) failAt("invalid numeric literal", start);
    return Term::literal(std::move(lex), std::string(datatype));
  }

  std::string_view text_;
  std::optional<std::string> base_;
  std::size_t pos_ = 0;
  Graph graph_;
  PrefixMap prefixes_;
  std::map<std::string, std::string> blankLabels_;
};

// --- serializer ------------------------------------------------------------

class TurtleWriter {
 public:
  TurtleWriter(const Graph& graph, const PrefixMap& prefixes)
      : graph_(graph), prefixes_(prefixes) {
    for (const auto& t : graph_) bySubject_[t.subject].push_back(&t);
  }

  std::string write() {
    for (const auto& [prefix, ns] : prefixes_.entries()) {
      out_ += "@prefix " + prefix + ": <" + ns + "> .\n";
    }
    std::vector<Term> iriSubjects;
    std::vector<Term> blankSubjects;
    for (const auto& [subject, _] : bySubject_) {
      (subject.isBlank() ? blankSubjects : iriSubjects).push_back(subject);
    }
    // Term ordering on IRIs is lexicographic on the IRI string.
    for (const auto& s : iriSubjects) emitSubject(s);
    // Blank subjects in first-use order; unreferenced ones by content.
    std::sort(blankSubjects.begin(), blankSubjects.end(), [&](const Term& a, const Term& b) {
      return contentKey(a) < contentKey(b);
    });
    for (;;) {
      bool progressed = false;
      for (std::size_t i = 0; i < nextLabel_; ++i) {
        const Term& t = labelled_[i];
        if (!emitted_.count(t) && bySubject_.count(t)) {
          emitSubject(t);
          progressed = true;
          break;
        }
      }
      if (progressed) continue;
      auto pending = std::find_if(blankSubjects.begin(), blankSubjects.end(),
                                  [&](const Term& t) { return !emitted_.count(t); });
      if (pending == blankSubjects.end()) break;
      emitSubject(*pending);
    }
    return out_;
  }

 private:
  std::string contentKey(const Term& subject) const {
    std::vector<std::string> parts;
    for (const Triple* t : bySubject_.at(subject)) {
      parts.push_back(t->predicate.value() + " " + (t->object.isBlank() ? "_" : t->object.toNTriples()));
    }
    std::sort(parts.begin(), parts.end());
    std::string key;
    for (const auto& p : parts) key += p + "\n";
    return key + subject.value();
  }

  std::string label(const Term& blank) {
    auto it = labels_.find(blank);
    if (it != labels_.end()) return it->second;
    std::string l = "_:b" + std::to_string(nextLabel_++);
    labels_.emplace(blank, l);
    labelled_.push_back(blank);
    return l;
  }

  std::string render(const Term& t) {
    switch (t.kind()) {
      case TermKind::Iri: {
        if (t.value() == rdfns::kType) return "a";
        return renderIri(t.value());
      }
      case TermKind::BlankNode: return label(t);
      case TermKind::Literal: {
        const auto& dt = t.datatype();
        if (!t.language().empty()) return "\"" + escapeString(t.value()) + "\"@" + t.language();
        std::string quoted = "\"" + escapeString(t.value()) + "\"";
        if (dt == xsd::kString) return quoted;
        if (dt == xsd::kInteger && isValidNumericLexical(t.value(), dt)) return t.value();
        if (dt == xsd::kBoolean && (t.value() == "true" || t.value() == "false")) return t.value();
        return quoted + "^^" + renderIri(dt);
      }
    }
    return {};
  }

  std::string renderIri(const std::string& iri) const {
    if (auto c = prefixes_.compact(iri)) return *c;
    return "<" + iri + ">";
  }

  void emitSubject(const Term& subject) {
    emitted_.insert(subject);
    std::string head = render(subject);
    std::map<Term, std::vector<Term>> byPredicate;
    for (const Triple* t : bySubject_.at(subject)) byPredicate[t->predicate].push_back(t->object);
    // rdf:type first, the rest in IRI order.
    std::vector<Term> predicates;
    for (const auto& [p, _] : byPredicate) {
      if (p.value() == rdfns::kType) predicates.insert(predicates.begin(), p);
      else predicates.push_back(p);
    }
    out_ += "\n" + head;
    bool firstPredicate = true;
    for (const auto& p : predicates) {
      auto& objects = byPredicate[p];
      std::stable_sort(objects.begin(), objects.end(), [&](const Term& a, const Term& b) {
        if (a.isBlank() != b.isBlank()) return !a.isBlank();
        if (a.isBlank()) return contentKeyOrEmpty(a) < contentKeyOrEmpty(b);
        return a < b;
      });
      out_ += firstPredicate ? " " : " ;\n    ";
      firstPredicate = false;
      out_ += render(p) + " ";
      for (std::size_t i = 0; i < objects.size(); ++i) {
        if (i) out_ += ", ";
        out_ += render(objects[i]);
      }
    }
    out_ += " .\n";
  }

  std::string contentKeyOrEmpty(const Term& t) const {
    return bySubject_.count(t) ? contentKey(t) : t.value();
  }

  const Graph& graph_;
  const PrefixMap& prefixes_;
  std::map<Term, std::vector<const Triple*>> bySubject_;
  std::map<Term, std::string> labels_;
  std::vector<Term> labelled_;
  std::set<Term> emitted_;
  std::size_t nextLabel_ = 0;
  std::string out_;
};

}  // namespace

TurtleDocument parseTurtleDocument(std::string_view text, const std::optional<std::string>& base) {
  return TurtleParser(text, base).parse();
}

std::string serializeTurtle(const Graph& graph, const PrefixMap& prefixes) {
  return TurtleWriter(graph, prefixes).write();
}

}  // namespace seloc::rdf
