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

// Attribute distinctiveness between two groups of characters, scored by a
// log-odds ratio with Dirichlet prior smoothing over its standard error:
//
//            log( ((c1 + p/n) / (n1 + 1)) / ((c2 + p/n) / (n2 + 1)) )
//   z  =  ------------------------------------------------------------
//                  sqrt( 1 / (c1 + p/n) + 1 / (c2 + p/n) )
//
// where c1, c2 are the attribute's counts in each group, n1, n2 the group
// totals, p = c1 + c2 and n = n1 + n2. Positive z means the attribute leans
// towards group 1.

#ifndef ARCHLENS_DISTINCTIVENESS_H_
#define ARCHLENS_DISTINCTIVENESS_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "archlens/dataset.h"

namespace archlens {

struct AttributeCounts {
  std::int64_t c1 = 0;
  std::int64_t c2 = 0;
  std::int64_t n1 = 0;
  std::int64_t n2 = 0;

  std::int64_t p() const { return c1 + c2; }
  std::int64_t n() const { return n1 + n2; }

  // The same counts with the two groups exchanged.
  AttributeCounts swapped() const { return {c2, c1, n2, n1}; }

  bool operator==(const AttributeCounts &) const = default;
};

// Throws Error when n = 0, p = 0, or a count falls outside [0, group total].
double zscore(const AttributeCounts &counts);

struct DistinctivenessRow {
  Category category;
  std::string lemma;
  AttributeCounts counts;
  double raw_z = 0.0;
  double normalized_z = 0.0;  // raw_z / max |raw_z| within the category
};

struct DistinctivenessTable {
  std::string group1_label = "group1";
  std::string group2_label = "group2";
  // Sorted by (category, lemma).
  std::vector<DistinctivenessRow> rows;
};

// Character id -> group (1 or 2). Characters not in the map are ignored.
using Partition = std::unordered_map<std::string, int>;

// One row per (category, lemma) seen in either group. Counts, totals and the
// smoothing prior are taken per category. Throws Error when a group is empty.
DistinctivenessTable group_distinctiveness(const Dataset &dataset,
                                           const Partition &partition,
                                           const CategorySet &categories);

enum class Sign { kPositive, kNegative, kBoth };

// Positive: raw_z > 0 by descending raw_z. Negative: raw_z < 0 by ascending
// raw_z. Both: the positive selection followed by the negative one. Ties are
// ordered by (category, lemma). Up to k rows per side.
std::vector<DistinctivenessRow> top_attributes(
    const std::vector<DistinctivenessRow> &rows, std::size_t k, Sign sign);

std::vector<DistinctivenessRow> rows_in_category(const DistinctivenessTable &table,
                                                 Category category);

// CSV `category,lemma,c1,c2,n1,n2,raw_z,normalized_z`.
void write_distinctiveness_csv(const std::vector<DistinctivenessRow> &rows,
                               std::ostream &out);

}  // namespace archlens

#endif  // ARCHLENS_DISTINCTIVENESS_H_
