// Copyright 2026 The ArchLens Authors.
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

#include "archlens/csv.h"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "archlens/error.h"
#include "archlens/text.h"

namespace archlens {

CsvReader::CsvReader(std::istream &in) : in_(in) {
  if (!read_record(header_)) throw FormatError("CSV input has no header row");
  for (auto &name : header_) name = std::string(trim(name));
}

std::size_t CsvReader::column(std::string_view name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  throw FormatError("CSV input is missing column '" + std::string(name) + "'");
}

bool CsvReader::next(std::vector<std::string> &fields) {
  if (!read_record(fields)) return false;
  if (fields.size() != header_.size()) {
    throw ParseError(record_line_,
                     "expected " + std::to_string(header_.size()) +
                         " fields, found " + std::to_string(fields.size()));
  }
  return true;
}

bool CsvReader::read_record(std::vector<std::string> &fields) {
  fields.clear();
  std::string line;
  while (true) {
    if (!std::getline(in_, line)) return false;
    ++line_;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty() || line.front() == '#') continue;
    break;
  }
  record_line_ = line_;

  std::string field;
  bool quoted = false;
  std::size_t i = 0;
  while (true) {
    if (i == line.size()) {
      if (!quoted) break;
      // Quoted field spanning a newline.
      std::string more;
      if (!std::getline(in_, more)) {
        throw ParseError(record_line_, "unterminated quoted field");
      }
      ++line_;
      if (!more.empty() && more.back() == '\r') more.pop_back();
      field += '\n';
      line = std::move(more);
      i = 0;
      continue;
    }
    const char c = line[i++];
    if (quoted) {
      if (c == '"') {
        if (i < line.size() && line[i] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else {
      field += c;
    }
  }
  fields.push_back(std::move(field));
  return true;
}

namespace {

void write_field(std::ostream &out, std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos &&
      (field.empty() || field.front() != '#')) {
    out << field;
    return;
  }
  out << '"';
  for (char c : field) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

template <typename Range>
void write_row(std::ostream &out, const Range &fields) {
  bool first = true;
  for (const auto &f : fields) {
    if (!first) out << ',';
    write_field(out, f);
    first = false;
  }
  out << '\n';
}

}  // namespace

void write_csv_row(std::ostream &out,
                   std::initializer_list<std::string_view> fields) {
  write_row(out, fields);
}

void write_csv_row(std::ostream &out, const std::vector<std::string> &fields) {
  write_row(out, fields);
}

double parse_double_field(std::string_view text, std::string_view column,
                          std::size_t line) {
  text = trim(text);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() ||
      !std::isfinite(value)) {
    throw ParseError(line, "column '" + std::string(column) +
                               "': not a finite number: '" + std::string(text) + "'");
  }
  return value;
}

std::int64_t parse_int_field(std::string_view text, std::string_view column,
                             std::size_t line) {
  text = trim(text);
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParseError(line, "column '" + std::string(column) +
                               "': not an integer: '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace archlens
