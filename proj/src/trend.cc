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

#include "archlens/trend.h"

#include <istream>
#include <ostream>
#include <string>

#include "archlens/csv.h"
#include "archlens/error.h"
#include "archlens/text.h"

namespace archlens {

namespace {

constexpr std::string_view kFitPrefix = "# fit ";

std::optional<Quadratic> parse_fit_comment(std::string_view line) {
  if (!line.starts_with(kFitPrefix)) return std::nullopt;
  line.remove_prefix(kFitPrefix.size());
  Quadratic q;
  int seen = 0;
  while (!line.empty()) {
    const auto comma = line.find(',');
    std::string_view item = trim(line.substr(0, comma));
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw FormatError("malformed fit comment");
    }
    const std::string_view key = item.substr(0, eq);
    const double value = parse_double_field(item.substr(eq + 1), key, 1);
    if (key == "a") {
      q.a = value;
    } else if (key == "b") {
      q.b = value;
    } else if (key == "c") {
      q.c = value;
    } else {
      throw FormatError("unknown fit coefficient '" + std::string(key) + "'");
    }
    ++seen;
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  if (seen != 3) throw FormatError("fit comment needs a, b and c");
  return q;
}

}  // namespace

int bin_start(int year, int width) {
  if (width <= 0) throw Error("bin width must be positive");
  int q = year / width;
  if (year % width != 0 && year < 0) --q;
  return q * width;
}

void write_series_csv(const TrendSeries &series, std::ostream &out) {
  if (series.fit) {
    out << kFitPrefix << "a=" << format_double(series.fit->a)
        << ",b=" << format_double(series.fit->b)
        << ",c=" << format_double(series.fit->c) << '\n';
  }
  write_csv_row(out, {"bin_start", "value", "support"});
  for (const TrendPoint &p : series.points) {
    write_csv_row(out, {std::to_string(p.bin_start), format_double(p.value),
                        std::to_string(p.support)});
  }
}

TrendSeries read_series_csv(std::istream &in) {
  // Pull leading comment lines ourselves so the fit survives a round trip.
  TrendSeries series;
  std::string line;
  while (in.peek() == '#' && std::getline(in, line)) {
    if (!series.fit) series.fit = parse_fit_comment(line);
  }
  CsvReader reader(in);
  const std::size_t bin_col = reader.column("bin_start");
  const std::size_t value_col = reader.column("value");
  const std::size_t support_col = reader.column("support");
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    TrendPoint p;
    p.bin_start = static_cast<int>(parse_int_field(fields[bin_col], "bin_start", reader.line()));
    p.value = parse_double_field(fields[value_col], "value", reader.line());
    p.support = parse_int_field(fields[support_col], "support", reader.line());
    series.points.push_back(p);
  }
  return series;
}

}  // namespace archlens
