#pragma once

// Minimal CSV reader/writer for the worksheet tables. Supports RFC-4180
// style quoting (fields containing comma, quote or newline are quoted,
// embedded quotes doubled). No multi-line records outside quotes.

#include <cstddef>
#include <string>
#include <vector>

#include "ftmea/errors.hpp"

namespace ftmea::csv {

using Row = std::vector<std::string>;

inline std::vector<Row> parse(const std::string& text) {
  std::vector<Row> rows;
  Row row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;

  auto end_field = [&] {
    row.push_back(field);
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    // skip rows that are entirely empty (blank lines)
    if (!(row.size() == 1 && row[0].empty())) rows.push_back(row);
    row.clear();
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
    } else if (c == '"') {
      if (field_started && !field.empty())
        throw MalformedCsv("line " + std::to_string(line) +
                           ": quote inside unquoted field");
      in_quotes = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\r') {
      // tolerated before \n, dropped
    } else if (c == '\n') {
      end_row();
      ++line;
    } else {
      field += c;
      field_started = true;
    }
  }
  if (in_quotes)
    throw MalformedCsv("line " + std::to_string(line) + ": unterminated quote");
  if (field_started || !row.empty()) end_row();
  return rows;
}

inline std::string quote_field(const std::string& f) {
  bool needs = f.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs) return f;
  std::string out = "\"";
  for (char c : f) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

inline std::string render_row(const Row& row) {
  std::string out;
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) out += ',';
    out += quote_field(row[i]);
  }
  out += '\n';
  return out;
}

}  // namespace ftmea::csv
