#pragma once

#include <string>
#include <string_view>

#include "linkclimate/rdf/graph.hpp"

namespace linkclimate::rdf {

namespace detail {

inline void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

inline void append_escaped_string(std::string& out, std::string_view s) {
  out.push_back('"');
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      default: out.push_back(c);
    }
  }
  out.push_back('"');
}

}  // namespace detail

inline void append_ntriples_term(std::string& out, const Term& term) {
  switch (term.kind()) {
    case TermKind::iri:
      out += '<';
      out += term.as_iri().str();
      out += '>';
      break;
    case TermKind::blank:
      out += "_:";
      out += term.as_blank().label();
      break;
    case TermKind::literal: {
      const Literal& lit = term.as_literal();
      detail::append_escaped_string(out, lit.lexical());
      if (lit.has_language()) {
        out += '@';
        out += lit.language();
      } else if (!lit.is_plain_string()) {
        out += "^^<";
        out += lit.datatype().str();
        out += '>';
      }
      break;
    }
  }
}

inline std::string to_ntriples(const Term& term) {
  std::string out;
  append_ntriples_term(out, term);
  return out;
}

inline void append_ntriples_line(std::string& out, const Triple& t) {
  append_ntriples_term(out, t.subject);
  out += ' ';
  append_ntriples_term(out, t.predicate);
  out += ' ';
  append_ntriples_term(out, t.object);
  out += " .\n";
}

/// Canonical N-Triples, one line per triple in term order.
inline std::string serialize_ntriples(const Graph& graph) {
  std::string out;
  for (const auto& t : graph) append_ntriples_line(out, t);
  return out;
}

namespace detail {

class NTriplesLineParser {
 public:
  NTriplesLineParser(std::string_view line, std::size_t line_no) : s_(line), line_no_(line_no) {}

  // Returns false for blank and comment-only lines.
  bool parse(std::optional<Triple>& out) {
    skip_ws();
    if (at_end() || peek() == '#') return false;
    Term subject = parse_subject();
    skip_ws();
    Term predicate = parse_iri_term();
    skip_ws();
    Term object = parse_object();
    skip_ws();
    if (at_end() || peek() != '.') fail("expected '.' to end the triple");
    ++pos_;
    skip_ws();
    if (!at_end() && peek() != '#') fail("unexpected content after '.'");
    try {
      out.emplace(std::move(subject), std::move(predicate), std::move(object));
    } catch (const ValidationError& e) {
      fail(e.what());
    }
    return true;
  }

 private:
  bool at_end() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }

  void skip_ws() {
    while (!at_end() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++pos_;
  }

  [[noreturn]] void fail(const std::string& message) const {
    std::string token;
    if (at_end()) {
      token = "end of line";
    } else {
      auto end = s_.find_first_of(" \t\r", pos_);
      token = std::string(s_.substr(pos_, std::min<std::size_t>(end == std::string_view::npos ? s_.size() - pos_ : end - pos_, 40)));
    }
    throw SyntaxError(line_no_, pos_ + 1, token, message);
  }

  Term parse_subject() {
    if (!at_end() && peek() == '<') return parse_iri_term();
    if (!at_end() && peek() == '_') return parse_blank();
    fail("expected an IRI or blank node subject");
  }

  Term parse_object() {
    if (at_end()) fail("expected an object");
    if (peek() == '<') return parse_iri_term();
    if (peek() == '_') return parse_blank();
    if (peek() == '"') return parse_literal();
    fail("expected an IRI, blank node or literal object");
  }

  char32_t parse_hex(std::size_t digits) {
    if (pos_ + digits > s_.size()) fail("truncated \\u escape");
    char32_t cp = 0;
    for (std::size_t i = 0; i < digits; ++i) {
      char c = s_[pos_ + i];
      int v = (c >= '0' && c <= '9') ? c - '0'
              : (c >= 'a' && c <= 'f') ? c - 'a' + 10
              : (c >= 'A' && c <= 'F') ? c - 'A' + 10 : -1;
      if (v < 0) fail("bad hex digit in escape");
      cp = cp * 16 + static_cast<char32_t>(v);
    }
    if (cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) fail("escape is not a Unicode scalar value");
    pos_ += digits;
    return cp;
  }

  std::string parse_iri_text() {
    if (at_end() || peek() != '<') fail("expected '<'");
    std::size_t start = pos_;
    ++pos_;
    std::string value;
    while (!at_end() && peek() != '>') {
      if (peek() == '\\') {
        ++pos_;
        if (at_end()) fail("truncated escape in IRI");
        char kind = peek();
        ++pos_;
        if (kind == 'u') append_utf8(value, parse_hex(4));
        else if (kind == 'U') append_utf8(value, parse_hex(8));
        else fail("bad escape in IRI");
      } else {
        value.push_back(peek());
        ++pos_;
      }
    }
    if (at_end()) {
      pos_ = start;
      fail("unterminated IRI");
    }
    ++pos_;
    if (!Iri::is_valid(value)) {
      pos_ = start;
      fail("invalid IRI");
    }
    return value;
  }

  Term parse_iri_term() { return Term(Iri(parse_iri_text())); }

  Term parse_blank() {
    if (s_.substr(pos_, 2) != "_:") fail("expected '_:'");
    pos_ += 2;
    std::size_t start = pos_;
    while (!at_end() && BlankNode::is_valid_label(s_.substr(pos_, 1))) ++pos_;
    if (pos_ == start) fail("empty blank node label");
    return Term(BlankNode(std::string(s_.substr(start, pos_ - start))));
  }

  Term parse_literal() {
    std::size_t start = pos_;
    ++pos_;
    std::string lexical;
    for (;;) {
      if (at_end()) {
        pos_ = start;
        fail("unterminated string literal");
      }
      char c = peek();
      if (c == '"') break;
      if (c == '\n' || c == '\r') fail("raw line break in literal");
      if (c == '\\') {
        ++pos_;
        if (at_end()) fail("truncated escape");
        char e = peek();
        ++pos_;
        switch (e) {
          case 't': lexical.push_back('\t'); break;
          case 'b': lexical.push_back('\b'); break;
          case 'n': lexical.push_back('\n'); break;
          case 'r': lexical.push_back('\r'); break;
          case 'f': lexical.push_back('\f'); break;
          case '"': lexical.push_back('"'); break;
          case '\'': lexical.push_back('\''); break;
          case '\\': lexical.push_back('\\'); break;
          case 'u': append_utf8(lexical, parse_hex(4)); break;
          case 'U': append_utf8(lexical, parse_hex(8)); break;
          default: --pos_; fail("bad string escape");
        }
        continue;
      }
      lexical.push_back(c);
      ++pos_;
    }
    ++pos_;
    try {
      if (!at_end() && peek() == '@') {
        ++pos_;
        std::size_t tag_start = pos_;
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-')) ++pos_;
        if (pos_ == tag_start) fail("empty language tag");
        return Term(Literal::lang_string(std::move(lexical), s_.substr(tag_start, pos_ - tag_start)));
      }
      if (s_.substr(pos_, 2) == "^^") {
        pos_ += 2;
        return Term(Literal::typed(std::move(lexical), Iri(parse_iri_text())));
      }
    } catch (const ValidationError& e) {
      pos_ = start;
      fail(e.what());
    }
    return Term(Literal::string(std::move(lexical)));
  }

  std::string_view s_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Parses N-Triples. All-or-nothing: the first error throws SyntaxError
/// with its 1-based line number.
inline Graph parse_ntriples(std::string_view text) {
  Graph graph;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    auto nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    ++line_no;
    std::optional<Triple> triple;
    if (detail::NTriplesLineParser(line, line_no).parse(triple)) graph.insert(*triple);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return graph;
}

}  // namespace linkclimate::rdf
