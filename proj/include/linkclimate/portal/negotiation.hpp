#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "linkclimate/util/text.hpp"

namespace linkclimate::portal {

struct MediaRange {
  std::string type;     // lowercase, may be "*"
  std::string subtype;  // lowercase, may be "*"
  double quality = 1.0;
};

/// Splits an Accept header into media ranges in header order. Malformed
/// entries are dropped; a malformed q counts as 1.
inline std::vector<MediaRange> parse_accept(std::string_view header) {
  std::vector<MediaRange> ranges;
  for (auto item : text::split(header, ',')) {
    auto parts = text::split(item, ';');
    auto mime = text::trim(parts.front());
    auto slash = mime.find('/');
    if (mime.empty() || slash == std::string_view::npos) continue;
    MediaRange range{text::to_lower(text::trim(mime.substr(0, slash))), text::to_lower(text::trim(mime.substr(slash + 1))), 1.0};
    if (range.type.empty() || range.subtype.empty()) continue;
    for (std::size_t i = 1; i < parts.size(); ++i) {
      auto param = text::trim(parts[i]);
      auto eq = param.find('=');
      if (eq == std::string_view::npos || !text::iequals(text::trim(param.substr(0, eq)), "q")) continue;
      if (auto q = text::parse_number(text::trim(param.substr(eq + 1))); q && *q >= 0 && *q <= 1) range.quality = *q;
    }
    ranges.push_back(std::move(range));
  }
  return ranges;
}

/// Server-side offer: a concrete media type and the value it selects.
template <typename T>
struct Offer {
  std::string_view media_type;
  T value;
};

/// Picks among offers. Each media range in the header selects the first
/// offer it matches ("*/*" and "type/*" included); the range with the
/// highest q wins, ties going to the earlier range. q=0 ranges never
/// select. An absent or blank header selects the first offer. No match
/// yields nullopt (the caller answers 406).
template <typename T, std::size_t N>
std::optional<T> negotiate_among(std::string_view accept, const Offer<T> (&offers)[N]) {
  if (text::trim(accept).empty()) return offers[0].value;
  std::optional<T> best;
  double best_q = 0;
  for (const auto& range : parse_accept(accept)) {
    if (range.quality <= 0 || range.quality <= best_q) continue;
    for (const auto& offer : offers) {
      auto slash = offer.media_type.find('/');
      auto type = offer.media_type.substr(0, slash), subtype = offer.media_type.substr(slash + 1);
      bool type_ok = range.type == "*" || range.type == type;
      bool subtype_ok = range.subtype == "*" || range.subtype == subtype;
      if (range.type == "*" && range.subtype != "*") continue;
      if (type_ok && subtype_ok) {
        best = offer.value;
        best_q = range.quality;
        break;
      }
    }
  }
  return best;
}

// Representations of a dereferenced entity.
enum class Format { turtle, json, html, ntriples };

inline const char* media_type(Format f) {
  switch (f) {
    case Format::turtle: return "text/turtle";
    case Format::json: return "application/json";
    case Format::html: return "text/html";
    case Format::ntriples: return "application/n-triples";
  }
  return "";
}

inline constexpr Offer<Format> entity_offers[] = {
    {"text/turtle", Format::turtle},
    {"application/json", Format::json},
    {"text/html", Format::html},
    {"application/xhtml+xml", Format::html},
    {"application/n-triples", Format::ntriples},
};

/// Entity representation for an Accept header: "*/*" and no header give
/// Turtle; a browser's "text/html,...,*/*;q=0.8" gives HTML.
inline std::optional<Format> negotiate(std::string_view accept) { return negotiate_among(accept, entity_offers); }

enum class ResultFormat { json, csv };

inline constexpr Offer<ResultFormat> result_offers[] = {
    {"application/sparql-results+json", ResultFormat::json},
    {"application/json", ResultFormat::json},
    {"text/csv", ResultFormat::csv},
};

inline std::optional<ResultFormat> negotiate_results(std::string_view accept) {
  return negotiate_among(accept, result_offers);
}

}  // namespace linkclimate::portal
