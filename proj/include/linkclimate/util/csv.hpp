#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "linkclimate/util/error.hpp"

namespace linkclimate::csv {

using Row = std::vector<std::string>;

/// RFC 4180 reader. Accepts LF or CRLF line ends; a trailing newline does
/// not produce an empty row. Unterminated quotes throw SyntaxError.
inline std::vector<Row> parse(std::string_view text) {
  std::vector<Row> rows;
  Row row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1, col = 1, quote_line = 0, quote_col = 0;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i, ++col) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
          ++col;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line, col = 0;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started) throw SyntaxError(line, col, "\"", "quote inside an unquoted field");
        in_quotes = true;
        field_started = true;
        quote_line = line;
        quote_col = col;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        end_row();
        ++line, col = 0;
        break;
      case '\n':
        end_row();
        ++line, col = 0;
        break;
      default:
        field.push_back(c);
        field_started = true;
    }
  }
  if (in_quotes) throw SyntaxError(quote_line, quote_col, "\"", "unterminated quoted field");
  if (field_started || !row.empty()) end_row();
  return rows;
}

}  // namespace linkclimate::csv
