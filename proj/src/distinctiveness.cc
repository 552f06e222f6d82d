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

#include "archlens/distinctiveness.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <ostream>

#include "archlens/csv.h"
#include "archlens/error.h"
#include "archlens/text.h"

namespace archlens {

double zscore(const AttributeCounts &counts) {
  const auto [c1, c2, n1, n2] = counts;
  if (counts.n() <= 0) throw Error("z-score needs a positive attribute total");
  if (c1 < 0 || c2 < 0 || c1 > n1 || c2 > n2) {
    throw Error("attribute counts outside their group totals");
  }
  if (counts.p() == 0) throw Error("z-score of an attribute absent from both groups");
  const double prior = static_cast<double>(counts.p()) / static_cast<double>(counts.n());
  const double s1 = static_cast<double>(c1) + prior;
  const double s2 = static_cast<double>(c2) + prior;
  const double rate1 = s1 / (static_cast<double>(n1) + 1.0);
  const double rate2 = s2 / (static_cast<double>(n2) + 1.0);
  // log(rate1 / rate2) as a difference; exchanging the groups negates it
  // exactly.
  const double log_odds = std::log(rate1) - std::log(rate2);
  return log_odds / std::sqrt(1.0 / s1 + 1.0 / s2);
}

DistinctivenessTable group_distinctiveness(const Dataset &dataset,
                                           const Partition &partition,
                                           const CategorySet &categories) {
  bool has1 = false;
  bool has2 = false;
  for (const auto &[id, group] : partition) {
    if (group == 1) has1 = true;
    if (group == 2) has2 = true;
  }
  if (!has1 || !has2) throw Error("distinctiveness needs two non-empty groups");

  // (category, lemma) -> {c1, c2}; totals per category.
  std::map<std::pair<Category, std::string>, std::array<std::int64_t, 2>> counts;
  std::array<std::array<std::int64_t, 2>, 4> totals{};
  bool seen1 = false;
  bool seen2 = false;
  for (const CharacterRecord &c : dataset.characters) {
    auto it = partition.find(c.character_id);
    if (it == partition.end() || (it->second != 1 && it->second != 2)) continue;
    const int g = it->second - 1;
    (g == 0 ? seen1 : seen2) = true;
    for (Category cat : categories.members()) {
      for (const auto &[lemma, count] : c.attributes[cat]) {
        counts[{cat, lemma}][g] += count;
        totals[static_cast<std::size_t>(cat)][g] += count;
      }
    }
  }
  if (!seen1 || !seen2) {
    throw Error("distinctiveness needs two non-empty groups present in the dataset");
  }

  DistinctivenessTable table;
  for (const auto &[key, c] : counts) {
    const auto &tot = totals[static_cast<std::size_t>(key.first)];
    DistinctivenessRow row{key.first, key.second, {c[0], c[1], tot[0], tot[1]}};
    row.raw_z = zscore(row.counts);
    table.rows.push_back(std::move(row));
  }

  std::array<double, 4> max_abs{};
  for (const auto &row : table.rows) {
    auto &m = max_abs[static_cast<std::size_t>(row.category)];
    m = std::max(m, std::abs(row.raw_z));
  }
  for (auto &row : table.rows) {
    const double m = max_abs[static_cast<std::size_t>(row.category)];
    row.normalized_z = m == 0.0 ? 0.0 : row.raw_z / m;
  }
  return table;
}

std::vector<DistinctivenessRow> top_attributes(
    const std::vector<DistinctivenessRow> &rows, std::size_t k, Sign sign) {
  if (k == 0) throw Error("top_attributes needs k >= 1");
  auto key_less = [](const DistinctivenessRow &a, const DistinctivenessRow &b) {
    if (a.category != b.category) return a.category < b.category;
    return a.lemma < b.lemma;
  };
  auto select = [&](bool positive) {
    std::vector<DistinctivenessRow> out;
    for (const auto &row : rows) {
      if (positive ? row.raw_z > 0.0 : row.raw_z < 0.0) out.push_back(row);
    }
    std::sort(out.begin(), out.end(), [&](const auto &a, const auto &b) {
      if (a.raw_z != b.raw_z) return positive ? a.raw_z > b.raw_z : a.raw_z < b.raw_z;
      return key_less(a, b);
    });
    if (out.size() > k) out.resize(k);
    return out;
  };
  if (sign == Sign::kPositive) return select(true);
  if (sign == Sign::kNegative) return select(false);
  auto out = select(true);
  auto neg = select(false);
  out.insert(out.end(), neg.begin(), neg.end());
  return out;
}

std::vector<DistinctivenessRow> rows_in_category(const DistinctivenessTable &table,
                                                 Category category) {
  std::vector<DistinctivenessRow> out;
  for (const auto &row : table.rows) {
    if (row.category == category) out.push_back(row);
  }
  return out;
}

void write_distinctiveness_csv(const std::vector<DistinctivenessRow> &rows,
                               std::ostream &out) {
  write_csv_row(out, {"category", "lemma", "c1", "c2", "n1", "n2", "raw_z",
                      "normalized_z"});
  for (const auto &r : rows) {
    write_csv_row(out, {category_name(r.category), r.lemma, std::to_string(r.counts.c1),
                        std::to_string(r.counts.c2), std::to_string(r.counts.n1),
                        std::to_string(r.counts.n2), format_double(r.raw_z),
                        format_double(r.normalized_z)});
  }
}

}  // namespace archlens
