#pragma once

#include <cctype>
#include <string>
#include <string_view>

#include "linkclimate/rdf/turtle.hpp"
#include "linkclimate/sparql/ast.hpp"

namespace linkclimate::sparql {

// Prefixed name uses a label that is neither declared nor predeclared.
class UndeclaredPrefixError : public SyntaxError {
 public:
  UndeclaredPrefixError(std::size_t line, std::size_t column, std::string prefix)
      : SyntaxError(line, column, prefix + ":", "undeclared prefix '" + prefix + "'"),
        prefix_(std::move(prefix)) {}
  const std::string& prefix() const noexcept { return prefix_; }

 private:
  std::string prefix_;
};

// Well-formed query that breaks a structural rule, e.g. a projected
// variable that no triple pattern binds.
class QueryValidationError : public SyntaxError {
 public:
  using SyntaxError::SyntaxError;
};

namespace detail {

/// Recursive-descent parser for the supported SELECT subset:
///
///   PREFIX* SELECT [DISTINCT] (?var+ | *) WHERE { (pattern | FILTER(...))+ }
///   [ORDER BY [ASC|DESC](?var) | ORDER BY ?var] [LIMIT n] [OFFSET n]
///
/// LIMIT and OFFSET may appear in either order. Within the group, patterns
/// are '.'-separated and may use ';' and ',' shorthand.
class QueryParser {
 public:
  QueryParser(std::string_view text, const rdf::PrefixMap& predeclared)
      : s_(text), predeclared_(predeclared) {}

  QueryAst parse() {
    QueryAst ast;
    prefixes_ = &ast.prefixes;
    skip_ws();
    while (peek_keyword("PREFIX")) parse_prefix(ast);
    if (!peek_keyword("SELECT")) fail("expected SELECT");
    consume_keyword();
    skip_ws();
    if (peek_keyword("DISTINCT")) {
      consume_keyword();
      ast.distinct = true;
      skip_ws();
    }
    std::vector<std::pair<Variable, Position>> projected;
    if (!at_end() && peek() == '*') {
      ++pos_;
      ast.select_all = true;
      skip_ws();
    } else {
      while (!at_end() && peek() == '?') {
        Position where = position();
        projected.emplace_back(parse_variable(), where);
        skip_ws();
      }
      if (projected.empty()) fail("expected a variable or '*' in the projection");
    }
    for (auto& [v, where] : projected) ast.projection.push_back(v);

    if (!peek_keyword("WHERE")) fail("expected WHERE");
    consume_keyword();
    skip_ws();
    expect('{');
    parse_group(ast);
    expect('}');
    skip_ws();
    parse_modifiers(ast);
    if (!at_end()) fail("unexpected trailing input");

    validate(ast, projected);
    return ast;
  }

 private:
  struct Position {
    std::size_t offset;
  };

  bool at_end() const { return pos_ >= s_.size(); }
  char peek(std::size_t ahead = 0) const { return pos_ + ahead < s_.size() ? s_[pos_ + ahead] : '\0'; }
  Position position() const { return {pos_}; }

  std::pair<std::size_t, std::size_t> line_col(std::size_t offset) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < offset && i < s_.size(); ++i) {
      if (s_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }

  std::string token_at(std::size_t offset) const {
    if (offset >= s_.size()) return "end of input";
    std::size_t end = offset;
    if (std::isalnum(static_cast<unsigned char>(s_[offset])) || s_[offset] == '?' || s_[offset] == '_') {
      ++end;
      while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_' || s_[end] == ':'))
        ++end;
    } else {
      ++end;
    }
    return std::string(s_.substr(offset, end - offset));
  }

  [[noreturn]] void fail_at(std::size_t offset, const std::string& message) const {
    auto [line, col] = line_col(offset);
    throw SyntaxError(line, col, token_at(offset), message);
  }
  [[noreturn]] void fail(const std::string& message) const { fail_at(pos_, message); }

  void skip_ws() {
    while (!at_end()) {
      char c = peek();
      if (c == '#') {
        while (!at_end() && peek() != '\n') ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  void expect(char c) {
    skip_ws();
    if (at_end() || peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
    skip_ws();
  }

  // Case-insensitive keyword at the cursor, not followed by a name character.
  bool peek_keyword(std::string_view kw) {
    if (pos_ + kw.size() > s_.size() || !text::iequals(s_.substr(pos_, kw.size()), kw)) return false;
    char next = peek(kw.size());
    if (std::isalnum(static_cast<unsigned char>(next)) || next == '_' || next == ':') return false;
    keyword_len_ = kw.size();
    return true;
  }
  void consume_keyword() { pos_ += keyword_len_; }

  static bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  }

  void parse_prefix(QueryAst& ast) {
    consume_keyword();
    skip_ws();
    std::size_t start = pos_;
    while (!at_end() && is_name_char(peek())) ++pos_;
    std::string label(s_.substr(start, pos_ - start));
    if (!label.empty() && !std::isalpha(static_cast<unsigned char>(label[0]))) fail_at(start, "bad prefix label");
    if (at_end() || peek() != ':') fail("expected ':' after prefix label");
    ++pos_;
    skip_ws();
    std::string ns = parse_iriref();
    ast.prefixes[label] = ns;
    skip_ws();
  }

  std::string parse_iriref() {
    if (at_end() || peek() != '<') fail("expected an IRI");
    std::size_t start = pos_;
    ++pos_;
    std::string value;
    while (!at_end() && peek() != '>') {
      char c = peek();
      if (std::isspace(static_cast<unsigned char>(c))) fail_at(start, "unterminated IRI");
      value.push_back(c);
      ++pos_;
    }
    if (at_end()) fail_at(start, "unterminated IRI");
    ++pos_;
    if (!rdf::Iri::is_valid(value)) fail_at(start, "invalid IRI");
    return value;
  }

  Variable parse_variable() {
    if (at_end() || peek() != '?') fail("expected a variable");
    ++pos_;
    std::size_t start = pos_;
    while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
    if (pos_ == start) fail("empty variable name");
    return Variable{std::string(s_.substr(start, pos_ - start))};
  }

  const std::map<std::string, std::string>* prefixes_ = nullptr;

  std::string resolve_pname() {
    std::size_t start = pos_;
    while (!at_end() && is_name_char(peek())) ++pos_;
    std::string label(s_.substr(start, pos_ - start));
    if (at_end() || peek() != ':') fail_at(start, "expected a term");
    if (!label.empty() && !std::isalpha(static_cast<unsigned char>(label[0]))) fail_at(start, "bad prefix label");
    ++pos_;
    std::size_t local_start = pos_;
    while (!at_end() && (is_name_char(peek()) || (peek() == '.' && is_name_char(peek(1))))) ++pos_;
    std::string local(s_.substr(local_start, pos_ - local_start));
    std::string ns;
    if (auto it = prefixes_->find(label); it != prefixes_->end()) {
      ns = it->second;
    } else if (auto pit = predeclared_.find(label); pit != predeclared_.end()) {
      ns = pit->second;
    } else {
      auto [line, col] = line_col(start);
      throw UndeclaredPrefixError(line, col, label);
    }
    std::string full = ns + local;
    if (!rdf::Iri::is_valid(full)) fail_at(start, "prefixed name expands to an invalid IRI");
    return full;
  }

  std::string parse_string_body() {
    char quote = peek();
    std::size_t start = pos_;
    ++pos_;
    std::string out;
    for (;;) {
      if (at_end() || peek() == '\n') fail_at(start, "unterminated string");
      char c = peek();
      if (c == quote) break;
      if (c == '\\') {
        ++pos_;
        char e = peek();
        switch (e) {
          case 't': out.push_back('\t'); break;
          case 'n': out.push_back('\n'); break;
          case 'r': out.push_back('\r'); break;
          case 'b': out.push_back('\b'); break;
          case 'f': out.push_back('\f'); break;
          case '"': out.push_back('"'); break;
          case '\'': out.push_back('\''); break;
          case '\\': out.push_back('\\'); break;
          default: fail("bad string escape");
        }
        ++pos_;
        continue;
      }
      out.push_back(c);
      ++pos_;
    }
    ++pos_;
    return out;
  }

  rdf::Term parse_literal() {
    std::size_t start = pos_;
    std::string lexical = parse_string_body();
    try {
      if (!at_end() && peek() == '@') {
        ++pos_;
        std::size_t tag_start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-')) ++pos_;
        return rdf::Term(rdf::Literal::lang_string(lexical, s_.substr(tag_start, pos_ - tag_start)));
      }
      if (peek() == '^' && peek(1) == '^') {
        pos_ += 2;
        std::string dt = peek() == '<' ? parse_iriref() : resolve_pname();
        return rdf::Term(rdf::Literal::typed(lexical, rdf::Iri(dt)));
      }
    } catch (const ValidationError& e) {
      fail_at(start, e.what());
    }
    return rdf::Term(rdf::Literal::string(lexical));
  }

  rdf::Term parse_number() {
    std::size_t start = pos_;
    if (peek() == '+' || peek() == '-') ++pos_;
    bool digits = false, dot = false, exp = false;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_, digits = true;
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      dot = true;
      ++pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      digits = true;
    }
    if (!digits) fail_at(start, "expected a number");
    if ((peek() == 'e' || peek() == 'E') &&
        (std::isdigit(static_cast<unsigned char>(peek(1))) ||
         ((peek(1) == '+' || peek(1) == '-') && std::isdigit(static_cast<unsigned char>(peek(2)))))) {
      exp = true;
      pos_ += 2;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    }
    std::string lexical(s_.substr(start, pos_ - start));
    const std::string& dt = exp ? rdf::iri::xsd_double : dot ? rdf::iri::xsd_decimal : rdf::iri::xsd_integer;
    return rdf::Term(rdf::Literal::typed(lexical, rdf::Iri(dt)));
  }

  // A constant: IRI, prefixed name, literal, number or boolean.
  rdf::Term parse_constant() {
    if (at_end()) fail("expected a term");
    char c = peek();
    if (c == '<') return rdf::Term(rdf::Iri(parse_iriref()));
    if (c == '"' || c == '\'') return parse_literal();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-' || c == '.') return parse_number();
    if (peek_keyword("true") && s_.substr(pos_, 4) == "true") {
      consume_keyword();
      return rdf::Term(rdf::Literal::typed("true", rdf::Iri(rdf::iri::xsd_boolean)));
    }
    if (peek_keyword("false") && s_.substr(pos_, 5) == "false") {
      consume_keyword();
      return rdf::Term(rdf::Literal::typed("false", rdf::Iri(rdf::iri::xsd_boolean)));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == ':') return rdf::Term(rdf::Iri(resolve_pname()));
    if (c == '$') fail("'$' variables are not supported; use '?'");
    fail("expected a term");
  }

  PatternTerm parse_pattern_term(bool predicate_position) {
    skip_ws();
    if (at_end()) fail("expected a term");
    if (peek() == '?') return parse_variable();
    if (predicate_position && peek() == 'a' && !is_name_char(peek(1)) && peek(1) != ':') {
      ++pos_;
      return rdf::Term(rdf::Iri(rdf::iri::rdf_type));
    }
    std::size_t start = pos_;
    rdf::Term t = parse_constant();
    if (predicate_position && !t.is_iri()) fail_at(start, "predicate must be an IRI or variable");
    if (!predicate_position && subject_mode_ && t.is_literal()) fail_at(start, "a literal cannot be a subject");
    return t;
  }

  bool subject_mode_ = false;

  void parse_group(QueryAst& ast) {
    bool need_separator = false;
    for (;;) {
      skip_ws();
      if (at_end()) fail("expected '}'");
      if (peek() == '}') break;
      if (peek() == '.') {
        ++pos_;
        need_separator = false;
        continue;
      }
      if (peek_keyword("FILTER")) {
        consume_keyword();
        ast.filters.push_back(parse_filter());
        need_separator = false;
        continue;
      }
      if (need_separator) fail("expected '.' between triple patterns");
      parse_triples_same_subject(ast);
      need_separator = true;
    }
    if (ast.patterns.empty()) fail("expected at least one triple pattern");
  }

  void parse_triples_same_subject(QueryAst& ast) {
    subject_mode_ = true;
    PatternTerm subject = parse_pattern_term(false);
    subject_mode_ = false;
    for (;;) {
      PatternTerm predicate = parse_pattern_term(true);
      for (;;) {
        PatternTerm object = parse_pattern_term(false);
        ast.patterns.push_back({subject, predicate, object});
        skip_ws();
        if (peek() != ',') break;
        ++pos_;
      }
      skip_ws();
      if (peek() != ';') break;
      ++pos_;
      skip_ws();
      if (peek() == '.' || peek() == '}') break;
    }
  }

  FilterExpr parse_filter() {
    expect('(');
    filter_offsets_.push_back(pos_);
    Variable left = parse_variable();
    skip_ws();
    CompareOp op;
    char c = peek();
    if (c == '=') {
      op = CompareOp::eq;
      ++pos_;
    } else if (c == '!' && peek(1) == '=') {
      op = CompareOp::ne;
      pos_ += 2;
    } else if (c == '<' || c == '>') {
      bool eq = peek(1) == '=';
      op = c == '<' ? (eq ? CompareOp::le : CompareOp::lt) : (eq ? CompareOp::ge : CompareOp::gt);
      pos_ += eq ? 2 : 1;
    } else {
      fail("expected a comparison operator (=, !=, <, <=, >, >=)");
    }
    skip_ws();
    if (peek() == '?') fail("right-hand side of a filter must be a constant");
    rdf::Term right = parse_constant();
    expect(')');
    return FilterExpr{std::move(left), op, std::move(right)};
  }

  std::size_t parse_count(const char* what) {
    skip_ws();
    std::size_t start = pos_;
    while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (pos_ == start) fail(std::string("expected a non-negative integer after ") + what);
    std::size_t value = 0;
    auto [p, ec] = std::from_chars(s_.data() + start, s_.data() + pos_, value);
    if (ec != std::errc{}) fail_at(start, std::string(what) + " value out of range");
    skip_ws();
    return value;
  }

  void parse_modifiers(QueryAst& ast) {
    if (peek_keyword("ORDER")) {
      consume_keyword();
      skip_ws();
      if (!peek_keyword("BY")) fail("expected BY");
      consume_keyword();
      skip_ws();
      OrderBy order;
      if (peek_keyword("ASC") || peek_keyword("DESC")) {
        order.ascending = text::iequals(s_.substr(pos_, keyword_len_), "ASC");
        consume_keyword();
        expect('(');
        order_offset_ = pos_;
        order.variable = parse_variable();
        expect(')');
      } else if (peek() == '(') {
        expect('(');
        order_offset_ = pos_;
        order.variable = parse_variable();
        expect(')');
      } else {
        order_offset_ = pos_;
        order.variable = parse_variable();
      }
      ast.order_by = order;
      skip_ws();
    }
    for (int i = 0; i < 2; ++i) {
      if (!ast.limit && peek_keyword("LIMIT")) {
        consume_keyword();
        ast.limit = parse_count("LIMIT");
      } else if (!ast.offset && peek_keyword("OFFSET")) {
        consume_keyword();
        ast.offset = parse_count("OFFSET");
      }
    }
  }

  void validate(const QueryAst& ast, const std::vector<std::pair<Variable, Position>>& projected) const {
    auto vars = ast.pattern_variables();
    auto bound = [&](const Variable& v) { return std::find(vars.begin(), vars.end(), v) != vars.end(); };
    auto raise = [&](std::size_t offset, const std::string& message) {
      auto [line, col] = line_col(offset);
      throw QueryValidationError(line, col, token_at(offset), message);
    };
    for (const auto& [v, where] : projected)
      if (!bound(v)) raise(where.offset, "projected variable ?" + v.name + " does not appear in any triple pattern");
    for (std::size_t i = 0; i < ast.filters.size(); ++i)
      if (const auto& f = ast.filters[i]; !bound(f.left)) raise(filter_offsets_[i], "filter variable ?" + f.left.name + " does not appear in any triple pattern");
    if (ast.order_by && !bound(ast.order_by->variable))
      raise(order_offset_, "ORDER BY variable ?" + ast.order_by->variable.name + " does not appear in any triple pattern");
  }

  std::string_view s_;
  const rdf::PrefixMap& predeclared_;
  std::size_t pos_ = 0;
  std::size_t keyword_len_ = 0;
  std::size_t order_offset_ = 0;
  std::vector<std::size_t> filter_offsets_;
};

}  // namespace detail

/// Parses a query of the supported SELECT subset. Prefix labels not
/// declared in the query fall back to predeclared. Throws SyntaxError
/// (or one of its subclasses) positioned at the offending token.
inline QueryAst parse_query(std::string_view text, const rdf::PrefixMap& predeclared = {}) {
  return detail::QueryParser(text, predeclared).parse();
}

}  // namespace linkclimate::sparql
