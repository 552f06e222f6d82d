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

#ifndef ARCHLENS_DIACHRONIC_H_
#define ARCHLENS_DIACHRONIC_H_

#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "archlens/dataset.h"
#include "archlens/trend.h"

namespace archlens {

// Keeps, per novel, the k characters with the highest mention_count (ties to
// the lexicographically smaller character_id). Record order is preserved and
// embeddings are carried over unchanged.
Dataset select_top_characters(const Dataset &dataset, std::size_t k);

// Share of predicted detectives per time bin. `predicted` is aligned with
// dataset.characters. Empty bins are omitted.
TrendSeries ratio_series(const Dataset &dataset, std::span<const Label> predicted,
                         int bin_width_years);

struct CentralityRecord {
  std::string character_id;
  std::string novel_id;
  int year = 0;
  // Mention count over the mean mention count of the novel's characters.
  double mention_ratio = 0.0;
};

struct CentralityResult {
  std::vector<CentralityRecord> records;  // dataset order
  std::vector<std::string> warnings;      // novels left out
};

// Mention ratios within each novel over the characters present in `dataset`
// (normally the top-k retained set). Novels whose characters all have zero
// mentions are excluded with a warning.
CentralityResult mention_ratios(const Dataset &dataset);

// Mean mention ratio of the given detectives per time bin.
TrendSeries centrality_series(const Dataset &dataset,
                              const std::unordered_set<std::string> &detective_ids,
                              int bin_width_years,
                              std::vector<std::string> *warnings = nullptr);

// Least squares on the [x^2, x, 1] basis with x centred and scaled internally;
// coefficients are reported for the original x. Throws Error when fewer than
// three distinct x values are given.
Quadratic quadratic_fit(std::span<const std::pair<double, double>> points);

// Least squares line y = slope x + intercept, as a Quadratic with a = 0.
Quadratic linear_fit(std::span<const std::pair<double, double>> points);

double residual_sum_of_squares(const Quadratic &fit,
                               std::span<const std::pair<double, double>> points);

// (bin_start, value) pairs of a series.
std::vector<std::pair<double, double>> series_points(const TrendSeries &series);

}  // namespace archlens

#endif  // ARCHLENS_DIACHRONIC_H_
