#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "linkclimate/util/date.hpp"
#include "linkclimate/util/error.hpp"
#include "linkclimate/util/text.hpp"

namespace linkclimate::rdf {

namespace ns {
inline constexpr std::string_view rdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view rdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view xsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view wgs84 = "http://www.w3.org/2003/01/geo/wgs84_pos#";
}  // namespace ns

namespace iri {
inline const std::string rdf_type = std::string(ns::rdf) + "type";
inline const std::string rdf_property = std::string(ns::rdf) + "Property";
inline const std::string rdf_lang_string = std::string(ns::rdf) + "langString";
inline const std::string rdfs_label = std::string(ns::rdfs) + "label";
inline const std::string rdfs_class = std::string(ns::rdfs) + "Class";
inline const std::string rdfs_domain = std::string(ns::rdfs) + "domain";
inline const std::string rdfs_range = std::string(ns::rdfs) + "range";
inline const std::string xsd_string = std::string(ns::xsd) + "string";
inline const std::string xsd_decimal = std::string(ns::xsd) + "decimal";
inline const std::string xsd_double = std::string(ns::xsd) + "double";
inline const std::string xsd_integer = std::string(ns::xsd) + "integer";
inline const std::string xsd_boolean = std::string(ns::xsd) + "boolean";
inline const std::string xsd_date = std::string(ns::xsd) + "date";
inline const std::string wgs84_lat = std::string(ns::wgs84) + "lat";
inline const std::string wgs84_long = std::string(ns::wgs84) + "long";
}  // namespace iri

/// Absolute IRI. Construction validates: a scheme followed by ':', and none of
/// the characters that cannot appear unescaped in an N-Triples IRIREF.
class Iri {
 public:
  explicit Iri(std::string value) : value_(std::move(value)) {
    if (!is_valid(value_)) throw ValidationError("iri", "not an absolute IRI: '" + value_ + "'");
  }

  static bool is_valid(std::string_view s) noexcept {
    if (s.empty()) return false;
    auto colon = s.find(':');
    if (colon == std::string_view::npos || colon == 0) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0]))) return false;
    for (std::size_t i = 1; i < colon; ++i) {
      unsigned char c = static_cast<unsigned char>(s[i]);
      if (!std::isalnum(c) && c != '+' && c != '-' && c != '.') return false;
    }
    for (unsigned char c : s) {
      if (c <= 0x20 || c == 0x7F) return false;
      switch (c) {
        case '<': case '>': case '"': case '{': case '}':
        case '|': case '^': case '`': case '\\':
          return false;
        default:
          break;
      }
    }
    return true;
  }

  const std::string& str() const noexcept { return value_; }

  friend auto operator<=>(const Iri&, const Iri&) = default;
  friend bool operator==(const Iri&, const Iri&) = default;

 private:
  std::string value_;
};

class BlankNode {
 public:
  explicit BlankNode(std::string label) : label_(std::move(label)) {
    if (!is_valid_label(label_)) throw ValidationError("blank node", "bad label '" + label_ + "'");
  }

  static bool is_valid_label(std::string_view s) noexcept {
    if (s.empty()) return false;
    for (unsigned char c : s)
      if (!std::isalnum(c) && c != '_' && c != '-') return false;
    return true;
  }

  const std::string& label() const noexcept { return label_; }

  friend auto operator<=>(const BlankNode&, const BlankNode&) = default;
  friend bool operator==(const BlankNode&, const BlankNode&) = default;

 private:
  std::string label_;
};

/// Literal with a datatype and, for rdf:langString only, a language tag.
/// Numeric and date datatypes are checked against their lexical space.
class Literal {
 public:
  static Literal string(std::string lexical) {
    return Literal(std::move(lexical), Iri(iri::xsd_string), {});
  }

  static Literal lang_string(std::string lexical, std::string_view language) {
    std::string tag = text::to_lower(language);
    if (!is_valid_language(tag)) throw ValidationError("language", "bad language tag '" + tag + "'");
    return Literal(std::move(lexical), Iri(iri::rdf_lang_string), std::move(tag));
  }

  static Literal typed(std::string lexical, Iri datatype) {
    if (datatype.str() == iri::rdf_lang_string)
      throw ValidationError("language", "rdf:langString literal needs a language tag");
    check_lexical(lexical, datatype.str());
    return Literal(std::move(lexical), std::move(datatype), {});
  }

  static Literal decimal(double value) {
    return Literal(text::format_decimal(value), Iri(iri::xsd_decimal), {});
  }

  static Literal date(const Date& d) { return Literal(format_date(d), Iri(iri::xsd_date), {}); }

  static bool is_valid_language(std::string_view tag) noexcept {
    if (tag.empty() || tag.front() == '-' || tag.back() == '-') return false;
    for (unsigned char c : tag)
      if (!(std::islower(c) || std::isdigit(c) || c == '-')) return false;
    return true;
  }

  const std::string& lexical() const noexcept { return lexical_; }
  const Iri& datatype() const noexcept { return datatype_; }
  const std::string& language() const noexcept { return language_; }
  bool has_language() const noexcept { return !language_.empty(); }
  bool is_plain_string() const noexcept { return datatype_.str() == iri::xsd_string; }

  friend auto operator<=>(const Literal&, const Literal&) = default;
  friend bool operator==(const Literal&, const Literal&) = default;

 private:
  Literal(std::string lexical, Iri datatype, std::string language)
      : lexical_(std::move(lexical)), datatype_(std::move(datatype)), language_(std::move(language)) {}

  static void check_lexical(std::string_view lexical, const std::string& datatype) {
    if (datatype == iri::xsd_decimal) {
      if (lexical.find_first_of("eE") != std::string_view::npos || !text::parse_number(lexical))
        throw ValidationError("literal", "'" + std::string(lexical) + "' is not an xsd:decimal");
    } else if (datatype == iri::xsd_double) {
      if (!text::parse_number(lexical))
        throw ValidationError("literal", "'" + std::string(lexical) + "' is not an xsd:double");
    } else if (datatype == iri::xsd_integer) {
      std::string_view digits = lexical;
      if (!digits.empty() && (digits.front() == '+' || digits.front() == '-')) digits.remove_prefix(1);
      if (digits.empty() || digits.find_first_not_of("0123456789") != std::string_view::npos)
        throw ValidationError("literal", "'" + std::string(lexical) + "' is not an xsd:integer");
    } else if (datatype == iri::xsd_date) {
      if (!parse_date(lexical))
        throw ValidationError("literal", "'" + std::string(lexical) + "' is not an xsd:date");
    }
  }

  std::string lexical_;
  Iri datatype_;
  std::string language_;
};

enum class TermKind { iri = 0, blank = 1, literal = 2 };

/// An RDF term. The total order ranks IRIs before blank nodes before
/// literals, then compares lexically within a kind.
class Term {
 public:
  Term(Iri v) : v_(std::move(v)) {}
  Term(BlankNode v) : v_(std::move(v)) {}
  Term(Literal v) : v_(std::move(v)) {}

  static Term iri(std::string value) { return Term(Iri(std::move(value))); }

  TermKind kind() const noexcept { return static_cast<TermKind>(v_.index()); }
  bool is_iri() const noexcept { return kind() == TermKind::iri; }
  bool is_blank() const noexcept { return kind() == TermKind::blank; }
  bool is_literal() const noexcept { return kind() == TermKind::literal; }

  const Iri& as_iri() const { return std::get<Iri>(v_); }
  const BlankNode& as_blank() const { return std::get<BlankNode>(v_); }
  const Literal& as_literal() const { return std::get<Literal>(v_); }

  // IRI text, blank label, or literal lexical form.
  const std::string& value() const noexcept {
    switch (kind()) {
      case TermKind::iri: return std::get<Iri>(v_).str();
      case TermKind::blank: return std::get<BlankNode>(v_).label();
      default: return std::get<Literal>(v_).lexical();
    }
  }

  friend auto operator<=>(const Term&, const Term&) = default;
  friend bool operator==(const Term&, const Term&) = default;

 private:
  std::variant<Iri, BlankNode, Literal> v_;
};

struct Triple {
  Term subject;
  Term predicate;
  Term object;

  Triple(Term s, Term p, Term o) : subject(std::move(s)), predicate(std::move(p)), object(std::move(o)) {
    if (subject.is_literal()) throw ValidationError("subject", "a literal cannot be a subject");
    if (!predicate.is_iri()) throw ValidationError("predicate", "the predicate must be an IRI");
  }

  friend auto operator<=>(const Triple&, const Triple&) = default;
  friend bool operator==(const Triple&, const Triple&) = default;
};

inline std::size_t hash_term(const Term& t) noexcept {
  std::size_t h = std::hash<std::string>{}(t.value());
  h ^= static_cast<std::size_t>(t.kind()) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  if (t.is_literal()) {
    h ^= std::hash<std::string>{}(t.as_literal().datatype().str()) + (h << 6) + (h >> 2);
    h ^= std::hash<std::string>{}(t.as_literal().language()) + (h << 6) + (h >> 2);
  }
  return h;
}

}  // namespace linkclimate::rdf

template <>
struct std::hash<linkclimate::rdf::Term> {
  std::size_t operator()(const linkclimate::rdf::Term& t) const noexcept {
    return linkclimate::rdf::hash_term(t);
  }
};
