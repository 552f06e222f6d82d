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

#ifndef ARCHLENS_TREND_H_
#define ARCHLENS_TREND_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

namespace archlens {

// Start year of the half-open bin [start, start + width) containing `year`,
// with bins anchored at year 0. Throws Error when width <= 0.
int bin_start(int year, int width);

// y = a x^2 + b x + c, x in calendar years.
struct Quadratic {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;

  double operator()(double x) const { return (a * x + b) * x + c; }
};

struct TrendPoint {
  int bin_start = 0;
  double value = 0.0;
  std::int64_t support = 0;

  bool operator==(const TrendPoint &) const = default;
};

// Time series over strictly increasing bins.
struct TrendSeries {
  std::vector<TrendPoint> points;
  std::optional<Quadratic> fit;
};

// CSV `bin_start,value,support`; a fitted quadratic is written first as the
// comment line `# fit a=...,b=...,c=...`.
void write_series_csv(const TrendSeries &series, std::ostream &out);

// Reads the format above. The fit comment, when present, is parsed back.
// Throws FormatError naming a missing column.
TrendSeries read_series_csv(std::istream &in);

}  // namespace archlens

#endif  // ARCHLENS_TREND_H_
