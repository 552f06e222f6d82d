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

#ifndef ARCHLENS_CSV_H_
#define ARCHLENS_CSV_H_

#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace archlens {

// Minimal RFC 4180 reader. Lines starting with '#' before or between records
// are treated as comments and skipped; blank lines are skipped.
class CsvReader {
 public:
  // Reads the header row. Throws FormatError if the stream has no header.
  explicit CsvReader(std::istream &in);

  const std::vector<std::string> &header() const { return header_; }

  // Position of `name` in the header; throws FormatError naming the missing
  // column otherwise.
  std::size_t column(std::string_view name) const;

  // Reads the next record into `fields`. Returns false at end of input.
  // Throws ParseError when the field count differs from the header.
  bool next(std::vector<std::string> &fields);

  // 1-based line number of the last record returned.
  std::size_t line() const { return record_line_; }

 private:
  bool read_record(std::vector<std::string> &fields);

  std::istream &in_;
  std::vector<std::string> header_;
  std::size_t line_ = 0;
  std::size_t record_line_ = 0;
};

// Writes one CSV record, quoting fields that need it.
void write_csv_row(std::ostream &out, std::initializer_list<std::string_view> fields);
void write_csv_row(std::ostream &out, const std::vector<std::string> &fields);

// Field conversions that throw ParseError(line, ...) with the column name.
double parse_double_field(std::string_view text, std::string_view column,
                          std::size_t line);
std::int64_t parse_int_field(std::string_view text, std::string_view column,
                             std::size_t line);

}  // namespace archlens

#endif  // ARCHLENS_CSV_H_
