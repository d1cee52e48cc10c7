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
#include <cctype>
#include <set>

#include "common/error.hpp"
#include "sparql/query.hpp"

namespace seloc::sparql {

namespace {

enum class Tok {
  Iri,        // <...>
  PName,      // prefix:local
  Var,        // ?x / $x
  String,     // "..." or '...'
  Number,
  Word,       // bare identifier / keyword
  Punct,      // { } ( ) . ; , * ^^ @lang
  Op,         // = != < <= > >= && || !
  LangTag,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t offset;
};

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

bool isNameChar(unsigned char c) { return std::isalnum(c) || c == '_' || c == '-' || c >= 0x80; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skipWs();
      if (pos_ >= text_.size()) {
        out.push_back({Tok::End, "", pos_});
        return out;
      }
      out.push_back(next());
    }
  }

  [[noreturn]] static void failAt(std::string_view text, const std::string& message,
                                  std::size_t offset, const std::string& token) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SyntaxError(message, line, col, token);
  }

 private:
  char peek(std::size_t k = 0) const { return pos_ + k < text_.size() ? text_[pos_ + k] : '\0'; }

  void skipWs() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  bool iriAhead() const {
    for (std::size_t i = pos_ + 1; i < text_.size(); ++i) {
      char c = text_[i];
      if (c == '>') return true;
      if (std::isspace(static_cast<unsigned char>(c)) || c == '<' || c == '"' || c == '{' ||
          c == '}' || c == '|' || c == '^' || c == '`' || c == '\\') {
        return false;
      }
    }
    return false;
  }

  Token next() {
    const std::size_t start = pos_;
    char c = peek();
    if (c == '<' && iriAhead()) {
      auto end = text_.find('>', pos_);
      std::string iri(text_.substr(pos_ + 1, end - pos_ - 1));
      pos_ = end + 1;
      return {Tok::Iri, iri, start};
    }
    if (c == '?' || c == '$') {
      ++pos_;
      std::string name;
      while (isNameChar(static_cast<unsigned char>(peek())) && peek() != '-') name += text_[pos_++];
      if (name.empty()) failAt(text_, "empty variable name", start, std::string(1, c));
      return {Tok::Var, name, start};
    }
    if (c == '"' || c == '\'') return stringToken();
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        ((c == '+' || c == '-' || c == '.') && std::isdigit(static_cast<unsigned char>(peek(1))))) {
      return numberToken();
    }
    if (c == '@') {
      ++pos_;
      std::string tag;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-') tag += text_[pos_++];
      return {Tok::LangTag, tag, start};
    }
    if (c == '^' && peek(1) == '^') {
      pos_ += 2;
      return {Tok::Punct, "^^", start};
    }
    if (c == '&' && peek(1) == '&') {
      pos_ += 2;
      return {Tok::Op, "&&", start};
    }
    if (c == '|' && peek(1) == '|') {
      pos_ += 2;
      return {Tok::Op, "||", start};
    }
    if ((c == '<' || c == '>' || c == '!') && peek(1) == '=') {
      pos_ += 2;
      return {Tok::Op, std::string{c, '='}, start};
    }
    if (c == '<' || c == '>' || c == '=' || c == '!') {
      ++pos_;
      return {Tok::Op, std::string(1, c), start};
    }
    if (std::string_view("{}()[].;,*/|^+").find(c) != std::string_view::npos) {
      ++pos_;
      return {Tok::Punct, std::string(1, c), start};
    }
    if (isNameChar(static_cast<unsigned char>(c)) || c == ':') {
      std::string word;
      while (isNameChar(static_cast<unsigned char>(peek())) || peek() == '.') {
        if (peek() == '.' && !isNameChar(static_cast<unsigned char>(peek(1)))) break;
        word += text_[pos_++];
      }
      if (peek() == ':') {
        word += text_[pos_++];
        while (isNameChar(static_cast<unsigned char>(peek())) || peek() == '.' || peek() == ':' ||
               peek() == '%') {
          if (peek() == '.' && !isNameChar(static_cast<unsigned char>(peek(1)))) break;
          word += text_[pos_++];
        }
        return {Tok::PName, word, start};
      }
      return {Tok::Word, word, start};
    }
    failAt(text_, "unexpected character", start, std::string(1, c));
  }

  Token stringToken() {
    const std::size_t start = pos_;
    char q = peek();
    bool longForm = peek(1) == q && peek(2) == q;
    pos_ += longForm ? 3 : 1;
    std::string out;
    for (;;) {
      if (pos_ >= text_.size()) failAt(text_, "unterminated string", start, std::string(1, q));
      char c = peek();
      if (longForm ? (c == q && peek(1) == q && peek(2) == q) : c == q) {
        pos_ += longForm ? 3 : 1;
        return {Tok::String, out, start};
      }
      if (c == '\\') {
        char e = peek(1);
        pos_ += 2;
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case '"': out += '"'; break;
          case '\'': out += '\''; break;
          case '\\': out += '\\'; break;
          default: failAt(text_, "invalid escape", pos_ - 2, std::string("\\") + e);
        }
        continue;
      }
      out += c;
      ++pos_;
    }
  }

  Token numberToken() {
    const std::size_t start = pos_;
    std::string lex;
    if (peek() == '+' || peek() == '-') lex += text_[pos_++];
    while (std::isdigit(static_cast<unsigned char>(peek()))) lex += text_[pos_++];
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      lex += text_[pos_++];
      while (std::isdigit(static_cast<unsigned char>(peek()))) lex += text_[pos_++];
    }
    if ((peek() == 'e' || peek() == 'E') &&
        (std::isdigit(static_cast<unsigned char>(peek(1))) ||
         ((peek(1) == '+' || peek(1) == '-') && std::isdigit(static_cast<unsigned char>(peek(2)))))) {
      lex += text_[pos_++];
      if (peek() == '+' || peek() == '-') lex += text_[pos_++];
      while (std::isdigit(static_cast<unsigned char>(peek()))) lex += text_[pos_++];
    }
    return {Tok::Number, lex, start};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

const std::set<std::string>& unsupportedKeywords() {
  static const std::set<std::string> words = {
      "OPTIONAL", "UNION",   "MINUS",  "GRAPH",    "SERVICE", "BIND",   "VALUES",
      "GROUP",    "HAVING",  "COUNT",  "SUM",      "AVG",     "MIN",    "MAX",
      "SAMPLE",   "GROUP_CONCAT",     "CONSTRUCT", "ASK",     "DESCRIBE", "FROM",
      "INSERT",   "DELETE",  "LOAD",   "CLEAR",    "DROP",    "CREATE", "EXISTS",
      "REDUCED",  "IN"};
  return words;
}

class QueryParser {
 public:
  QueryParser(std::string_view text, const rdf::PrefixMap& defaults)
      : text_(text), tokens_(Lexer(text).run()), defaults_(defaults) {}

  Query parse() {
    Query q;
    prologue(q);
    expectWord("SELECT");
    if (isWord("DISTINCT")) {
      advance();
      q.distinct = true;
    }
    bool selectAll = false;
    if (isPunct("*")) {
      advance();
      selectAll = true;
    } else {
      while (cur().kind == Tok::Var) q.projection.push_back(advance().text);
      if (cur().kind == Tok::Punct && cur().text == "(") unsupported("projection expression");
      if (q.projection.empty()) fail("expected projection variables or '*'");
    }
    if (isWord("WHERE")) advance();
    q.prefixes = prefixes_;
    q.where = group();
    solutionModifiers(q);
    if (cur().kind != Tok::End) fail("unexpected trailing token");

    std::vector<std::string> used;
    collect(q.where, used);
    if (selectAll) {
      q.projection = used;
    } else {
      for (const auto& v : q.projection) {
        if (std::find(used.begin(), used.end(), v) == used.end()) {
          throw SyntaxError("projected variable ?" + v + " does not occur in the query", 1, 1,
                            "?" + v);
        }
      }
    }
    for (const auto& k : q.orderBy) {
      if (std::find(used.begin(), used.end(), k.variable) == used.end()) {
        throw SyntaxError("ORDER BY variable ?" + k.variable + " does not occur in the query", 1,
                          1, "?" + k.variable);
      }
    }
    return q;
  }

 private:
  // --- token helpers -------------------------------------------------------
  const Token& cur() const { return tokens_[index_]; }
  const Token& ahead(std::size_t k) const {
    return tokens_[std::min(index_ + k, tokens_.size() - 1)];
  }
  const Token& advance() { return tokens_[index_ < tokens_.size() - 1 ? index_++ : index_]; }
  bool isWord(const char* w) const { return cur().kind == Tok::Word && upper(cur().text) == w; }
  bool isPunct(const char* p) const { return cur().kind == Tok::Punct && cur().text == p; }
  bool isOp(const char* p) const { return cur().kind == Tok::Op && cur().text == p; }

  [[noreturn]] void fail(const std::string& message) const {
    const auto& t = cur();
    Lexer::failAt(text_, message, t.offset, t.kind == Tok::End ? "<EOF>" : tokenText(t));
  }

  static std::string tokenText(const Token& t) {
    switch (t.kind) {
      case Tok::Iri: return "<" + t.text + ">";
      case Tok::Var: return "?" + t.text;
      case Tok::String: return "\"" + t.text + "\"";
      case Tok::LangTag: return "@" + t.text;
      default: return t.text;
    }
  }

  [[noreturn]] void unsupported(const std::string& construct) const {
    throw Error("UnsupportedFeatureError", "unsupported SPARQL feature: " + construct,
                {{"feature", construct}});
  }

  void checkUnsupportedWord() const {
    if (cur().kind == Tok::Word) {
      auto w = upper(cur().text);
      if (unsupportedKeywords().count(w)) unsupported(w);
    }
  }

  void expectWord(const char* w) {
    checkUnsupportedWord();
    if (!isWord(w)) fail(std::string("expected ") + w);
    advance();
  }

  void expectPunct(const char* p) {
    if (!isPunct(p)) fail(std::string("expected '") + p + "'");
    advance();
  }

  // --- prologue ------------------------------------------------------------
  void prologue(Query&) {
    for (;;) {
      if (isWord("PREFIX")) {
        advance();
        if (cur().kind != Tok::PName || cur().text.back() != ':') fail("expected prefix label");
        std::string label = advance().text;
        label.pop_back();
        if (cur().kind != Tok::Iri) fail("expected namespace IRI");
        prefixes_.set(label, advance().text);
      } else if (isWord("BASE")) {
        advance();
        if (cur().kind != Tok::Iri) fail("expected base IRI");
        advance();
      } else {
        checkUnsupportedWord();
        return;
      }
    }
  }

  std::string expandPName(const Token& t) const {
    auto colon = t.text.find(':');
    std::string prefix = t.text.substr(0, colon);
    std::string local = t.text.substr(colon + 1);
    if (auto ns = prefixes_.lookup(prefix)) return *ns + local;
    if (auto ns = defaults_.lookup(prefix)) return *ns + local;
    throw Error("UnknownPrefixError", "unknown prefix '" + prefix + ":'", {{"prefix", prefix}});
  }

  // --- group graph pattern -------------------------------------------------
  GroupPattern group() {
    expectPunct("{");
    GroupPattern g;
    for (;;) {
      checkUnsupportedWord();
      if (isPunct("}")) {
        advance();
        return g;
      }
      if (cur().kind == Tok::End) fail("unterminated group pattern, expected '}'");
      if (isPunct("{")) {
        if (ahead(1).kind == Tok::Word && upper(ahead(1).text) == "SELECT") unsupported("subquery");
        unsupported("nested group pattern");
      }
      if (isWord("FILTER")) {
        advance();
        g.filters.push_back(filterBody());
        if (isPunct(".")) advance();
        continue;
      }
      triplesSameSubject(g);
      if (isPunct(".")) {
        advance();
      } else if (!isPunct("}") && !isWord("FILTER")) {
        checkUnsupportedWord();
        fail("expected '.' or '}'");
      }
    }
  }

  PatternTerm varOrTerm(bool allowLiteral) {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::Var: advance(); return Variable{t.text};
      case Tok::Iri: advance(); return rdf::Term::iri(t.text);
      case Tok::PName: advance(); return rdf::Term::iri(expandPName(t));
      case Tok::String:
      case Tok::Number:
        if (!allowLiteral) fail("literal not allowed here");
        return literalTerm();
      case Tok::Punct:
        if (t.text == "[") unsupported("blank node property list");
        if (t.text == "(") unsupported("collection");
        break;
      case Tok::Word: {
        auto w = upper(t.text);
        if (allowLiteral && (w == "TRUE" || w == "FALSE")) {
          advance();
          return rdf::Term::literal(t.text == "true" || w == "TRUE" ? "true" : "false",
                                    std::string(rdf::xsd::kBoolean));
        }
        break;
      }
      default: break;
    }
    checkUnsupportedWord();
    fail("expected variable or term");
  }

  rdf::Term literalTerm() {
    const Token t = advance();
    if (t.kind == Tok::Number) {
      std::string_view dt = rdf::xsd::kInteger;
      if (t.text.find_first_of("eE") != std::string::npos) dt = rdf::xsd::kDouble;
      else if (t.text.find('.') != std::string::npos) dt = rdf::xsd::kDecimal;
      return rdf::Term::literal(t.text, std::string(dt));
    }
    if (cur().kind == Tok::LangTag) return rdf::Term::literal(t.text, {}, advance().text);
    if (isPunct("^^")) {
      advance();
      const Token& d = cur();
      std::string dt;
      if (d.kind == Tok::Iri) dt = d.text;
      else if (d.kind == Tok::PName) dt = expandPName(d);
      else fail("expected datatype IRI");
      advance();
      try {
        return rdf::Term::literal(t.text, dt);
      } catch (const Error&) {
        Lexer::failAt(text_, "invalid lexical form for datatype", t.offset, "\"" + t.text + "\"");
      }
    }
    return rdf::Term::literal(t.text);
  }

  PatternTerm verb() {
    if (cur().kind == Tok::Word && cur().text == "a") {
      advance();
      return rdf::Term::iri(std::string(rdf::rdfns::kType));
    }
    if (isPunct("^") || isPunct("(") || isOp("!")) unsupported("property path");
    PatternTerm p = varOrTerm(false);
    if (isPunct("/") || isPunct("|") || isPunct("*") || isPunct("+") ||
        (cur().kind == Tok::Punct && cur().text == "?")) {
      unsupported("property path");
    }
    return p;
  }

  void triplesSameSubject(GroupPattern& g) {
    PatternTerm subject = varOrTerm(false);
    for (;;) {
      PatternTerm predicate = verb();
      for (;;) {
        PatternTerm object = varOrTerm(true);
        if (cur().kind == Tok::Punct && (cur().text == "*" || cur().text == "+")) {
          unsupported("property path");
        }
        g.patterns.push_back({subject, predicate, object});
        if (!isPunct(",")) break;
        advance();
      }
      if (!isPunct(";")) return;
      while (isPunct(";")) advance();
      if (isPunct(".") || isPunct("}")) return;
    }
  }

  // --- filters -------------------------------------------------------------
  ExprPtr filterBody() {
    if (isWord("NOT") && ahead(1).kind == Tok::Word && upper(ahead(1).text) == "EXISTS") {
      return notExists();
    }
    if (cur().kind == Tok::Word) {
      auto w = upper(cur().text);
      if (w == "EXISTS") unsupported("EXISTS");
      unsupported(w);
    }
    expectPunct("(");
    ExprPtr e = orExpr();
    expectPunct(")");
    return e;
  }

  ExprPtr notExists() {
    advance();
    advance();
    auto e = std::make_shared<Expr>();
    e->kind = Expr::Kind::NotExists;
    e->group = std::make_shared<GroupPattern>(group());
    return e;
  }

  ExprPtr orExpr() {
    ExprPtr lhs = andExpr();
    while (isOp("||")) {
      advance();
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::Or;
      e->lhs = lhs;
      e->rhs = andExpr();
      lhs = e;
    }
    return lhs;
  }

  ExprPtr andExpr() {
    ExprPtr lhs = relational();
    while (isOp("&&")) {
      advance();
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::And;
      e->lhs = lhs;
      e->rhs = relational();
      lhs = e;
    }
    return lhs;
  }

  ExprPtr relational() {
    ExprPtr lhs = unary();
    checkUnsupportedWord();
    if (cur().kind != Tok::Op || cur().text == "&&" || cur().text == "||" || cur().text == "!") {
      return lhs;
    }
    static const std::pair<const char*, CompareOp> ops[] = {
        {"=", CompareOp::Equal},        {"!=", CompareOp::NotEqual},
        {"<", CompareOp::Less},         {"<=", CompareOp::LessEqual},
        {">", CompareOp::Greater},      {">=", CompareOp::GreaterEqual}};
    for (const auto& [text, op] : ops) {
      if (cur().text == text) {
        advance();
        auto e = std::make_shared<Expr>();
        e->kind = Expr::Kind::Compare;
        e->op = op;
        e->lhs = lhs;
        e->rhs = unary();
        return e;
      }
    }
    fail("unknown operator");
  }

  ExprPtr unary() {
    if (isOp("!")) {
      advance();
      if (isWord("EXISTS")) unsupported("EXISTS");
      auto e = std::make_shared<Expr>();
      e->kind = Expr::Kind::Not;
      e->lhs = unary();
      return e;
    }
    if (isPunct("(")) {
      advance();
      ExprPtr inner = orExpr();
      expectPunct(")");
      return inner;
    }
    if (isWord("NOT") && ahead(1).kind == Tok::Word && upper(ahead(1).text) == "EXISTS") {
      return notExists();
    }
    if (cur().kind == Tok::Word) {
      auto w = upper(cur().text);
      if (w != "TRUE" && w != "FALSE") unsupported(w);
    }
    if (cur().kind == Tok::PName && ahead(1).kind == Tok::Punct && ahead(1).text == "(") {
      unsupported("function call " + cur().text);
    }
    auto e = std::make_shared<Expr>();
    if (cur().kind == Tok::Var) {
      e->kind = Expr::Kind::Var;
      e->variable = advance().text;
      return e;
    }
    PatternTerm t = varOrTerm(true);
    e->kind = Expr::Kind::Constant;
    e->constant = std::get<rdf::Term>(t);
    return e;
  }

  // --- modifiers -----------------------------------------------------------
  void solutionModifiers(Query& q) {
    checkUnsupportedWord();
    if (isWord("ORDER")) {
      advance();
      expectWord("BY");
      for (;;) {
        if (cur().kind == Tok::Var) {
          q.orderBy.push_back({advance().text, false});
        } else if (isWord("ASC") || isWord("DESC")) {
          bool desc = isWord("DESC");
          advance();
          expectPunct("(");
          if (cur().kind != Tok::Var) unsupported("ORDER BY expression");
          q.orderBy.push_back({advance().text, desc});
          expectPunct(")");
        } else if (isPunct("(")) {
          unsupported("ORDER BY expression");
        } else {
          break;
        }
      }
      if (q.orderBy.empty()) fail("expected ORDER BY key");
    }
    for (int i = 0; i < 2; ++i) {
      if (isWord("LIMIT")) {
        advance();
        q.limit = count();
      } else if (isWord("OFFSET")) {
        advance();
        q.offset = count();
      }
    }
    checkUnsupportedWord();
  }

  std::size_t count() {
    if (cur().kind != Tok::Number || cur().text.find_first_not_of("0123456789") != std::string::npos) {
      fail("expected non-negative integer");
    }
    return static_cast<std::size_t>(std::stoull(advance().text));
  }

  static void collectPattern(const PatternTerm& t, std::vector<std::string>& out) {
    if (const auto* v = std::get_if<Variable>(&t)) {
      if (std::find(out.begin(), out.end(), v->name) == out.end()) out.push_back(v->name);
    }
  }

  static void collect(const GroupPattern& g, std::vector<std::string>& out) {
    for (const auto& p : g.patterns) {
      collectPattern(p.subject, out);
      collectPattern(p.predicate, out);
      collectPattern(p.object, out);
    }
    for (const auto& f : g.filters) f->collectVariables(out);
  }

  std::string_view text_;
  std::vector<Token> tokens_;
  std::size_t index_ = 0;
  const rdf::PrefixMap& defaults_;
  rdf::PrefixMap prefixes_;
};

}  // namespace

void Expr::collectVariables(std::vector<std::string>& out) const {
  switch (kind) {
    case Kind::Var:
      if (std::find(out.begin(), out.end(), variable) == out.end()) out.push_back(variable);
      break;
    case Kind::Or:
    case Kind::And:
    case Kind::Compare:
      lhs->collectVariables(out);
      rhs->collectVariables(out);
      break;
    case Kind::Not: lhs->collectVariables(out); break;
    case Kind::Constant:
    case Kind::NotExists: break;
  }
}

Query parseQuery(std::string_view text, const rdf::PrefixMap& defaults) {
  return QueryParser(text, defaults).parse();
}

}  // namespace seloc::sparql
