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


#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

#include "archlens/distinctiveness.h"
#include "archlens/error.h"
#include "doctest.h"
#include "test_util.h"

namespace archlens {
namespace {

using testing::character;
using Big = boost::multiprecision::cpp_bin_float_50;

// The smoothed log-odds score evaluated in 50-digit arithmetic.
double oracle_z(std::int64_t c1, std::int64_t c2, std::int64_t n1, std::int64_t n2) {
  const Big p = Big(c1 + c2);
  const Big n = Big(n1 + n2);
  const Big s1 = Big(c1) + p / n;
  const Big s2 = Big(c2) + p / n;
  const Big ratio = (s1 / (Big(n1) + 1)) / (s2 / (Big(n2) + 1));
  return static_cast<double>(log(ratio) / sqrt(1 / s1 + 1 / s2));
}

AttributeCounts random_counts(std::mt19937_64 &gen) {
  AttributeCounts c;
  c.n1 = static_cast<std::int64_t>(gen() % 100000);
  c.n2 = static_cast<std::int64_t>(gen() % 100000) + (c.n1 == 0 ? 1 : 0);
  c.c1 = c.n1 == 0 ? 0 : static_cast<std::int64_t>(gen() % (c.n1 + 1));
  c.c2 = c.n2 == 0 ? 0 : static_cast<std::int64_t>(gen() % (c.n2 + 1));
  if (c.c1 + c.c2 == 0) c.c2 = c.n2 > 0 ? 1 : 0;
  if (c.c1 + c.c2 == 0) c.c1 = 1;
  return c;
}

TEST_CASE("worked z-score values") {
  CHECK(zscore({5, 5, 100, 100}) == 0.0);
  CHECK(zscore({10, 0, 100, 100}) == doctest::Approx(1.1829).epsilon(1e-4));
  CHECK(std::abs(zscore({10, 0, 100, 100}) - oracle_z(10, 0, 100, 100)) < 1e-12);
}

TEST_CASE("z-score agrees with a 50-digit evaluation") {
  std::mt19937_64 gen(2024);
  for (int i = 0; i < 1000; ++i) {
    const AttributeCounts c = random_counts(gen);
    CHECK(std::abs(zscore(c) - oracle_z(c.c1, c.c2, c.n1, c.n2)) <= 1e-12);
  }
}

TEST_CASE("z-score antisymmetry, monotonicity and zero counts") {
  std::mt19937_64 gen(7);
  for (int i = 0; i < 1000; ++i) {
    const AttributeCounts c = random_counts(gen);
    CHECK(zscore(c.swapped()) == -zscore(c));
  }
  // Strictly increasing in c1 wherever the log-ratio is non-negative.
  for (int trial = 0; trial < 200; ++trial) {
    const std::int64_t n1 = 50 + static_cast<std::int64_t>(gen() % 5000);
    const std::int64_t n2 = 50 + static_cast<std::int64_t>(gen() % 5000);
    const std::int64_t c2 = static_cast<std::int64_t>(gen() % 30);
    std::int64_t c1 = std::max<std::int64_t>(1, (c2 * (n1 + 1) + n2) / (n2 + 1));
    double previous = zscore({c1, c2, n1, n2});
    for (int step = 1; step < 50 && c1 < n1; ++step) {
      const double z = zscore({++c1, c2, n1, n2});
      CHECK(z > previous);
      previous = z;
    }
  }
  // Below that point the shrinking variance term can outrun the log-ratio.
  CHECK(zscore({1, 3, 500, 800}) < zscore({0, 3, 500, 800}));
  CHECK(std::isfinite(zscore({0, 7, 100, 100})));
  CHECK(std::isfinite(zscore({7, 0, 100, 100})));
}

TEST_CASE("z-score input errors") {
  CHECK_THROWS_AS(zscore({0, 0, 0, 0}), Error);
  CHECK_THROWS_AS(zscore({0, 0, 10, 10}), Error);
  CHECK_THROWS_AS(zscore({5, 0, 4, 10}), Error);
  CHECK_THROWS_AS(zscore({-1, 2, 4, 10}), Error);
}

Dataset two_groups() {
  Dataset d;
  d.characters.push_back(character("d1", "n", "a", 1900, 1, Label::kDetective,
                                   {{Category::kAgentVerbs, "enqueter", 4},
                                    {Category::kAgentVerbs, "dire", 2},
                                    {Category::kPossessives, "pipe", 1}}));
  d.characters.push_back(character("n1", "n", "a", 1900, 1, Label::kNonDetective,
                                   {{Category::kAgentVerbs, "dire", 6},
                                    {Category::kAgentVerbs, "pleurer", 1},
                                    {Category::kPossessives, "pipe", 1}}));
  return d;
}

Partition by_label(const Dataset &d) {
  Partition p;
  for (const auto &c : d.characters) {
    if (c.label) p[c.character_id] = *c.label == Label::kDetective ? 1 : 2;
  }
  return p;
}

TEST_CASE("group distinctiveness on a small table") {
  const Dataset d = two_groups();
  const DistinctivenessTable t = group_distinctiveness(d, by_label(d), CategorySet::all());
  REQUIRE(t.rows.size() == 4);
  std::map<std::string, DistinctivenessRow> by_lemma;
  for (const auto &r : t.rows) by_lemma[r.lemma] = r;
  CHECK(by_lemma["enqueter"].raw_z > 0.0);
  CHECK(by_lemma["pleurer"].raw_z < 0.0);
  CHECK(by_lemma["enqueter"].counts == AttributeCounts{4, 0, 6, 7});
  CHECK(by_lemma["pipe"].counts == AttributeCounts{1, 1, 1, 1});
  CHECK(by_lemma["pipe"].raw_z == 0.0);
  CHECK(by_lemma["pipe"].normalized_z == 0.0);
}

TEST_CASE("identical groups score zero everywhere") {
  Dataset d;
  for (const char *id : {"a", "b"}) {
    d.characters.push_back(character(id, "n", "x", 1900, 1, std::nullopt,
                                     {{Category::kModifiers, "vieux", 3},
                                      {Category::kModifiers, "las", 1}}));
  }
  const DistinctivenessTable t = group_distinctiveness(d, {{"a", 1}, {"b", 2}},
                                                       CategorySet::all());
  for (const auto &r : t.rows) {
    CHECK(r.raw_z == 0.0);
    CHECK(r.normalized_z == 0.0);
  }
  CHECK(top_attributes(t.rows, 5, Sign::kPositive).empty());
}

TEST_CASE("empty groups are errors") {
  const Dataset d = two_groups();
  CHECK_THROWS_AS(group_distinctiveness(d, {{"d1", 1}}, CategorySet::all()), Error);
  CHECK_THROWS_AS(group_distinctiveness(d, {{"d1", 1}, {"ghost", 2}}, CategorySet::all()),
                  Error);
}

TEST_CASE("table equals an independent recount") {
  std::mt19937_64 gen(31);
  Dataset d;
  Partition part;
  for (int i = 0; i < 80; ++i) {
    CharacterRecord c = character("c" + std::to_string(i), "n", "x", 1900, 1, std::nullopt);
    for (int t = 0; t < 25; ++t) {
      c.attributes.add(kAllCategories[gen() % 4], "w" + std::to_string(gen() % 30));
    }
    part[c.character_id] = 1 + static_cast<int>(gen() % 2);
    d.characters.push_back(std::move(c));
  }
  const CategorySet cats = CategorySet::defaults();
  const DistinctivenessTable t = group_distinctiveness(d, part, cats);

  std::map<std::pair<Category, std::string>, std::array<std::int64_t, 2>> c;
  std::map<Category, std::array<std::int64_t, 2>> n;
  for (const auto &ch : d.characters) {
    const int g = part[ch.character_id] - 1;
    for (Category cat : kAllCategories) {
      if (!cats.contains(cat)) continue;
      for (const auto &[lemma, k] : ch.attributes[cat]) {
        c[{cat, lemma}][g] += k;
        n[cat][g] += k;
      }
    }
  }
  REQUIRE(t.rows.size() == c.size());
  std::map<Category, double> max_abs;
  for (const auto &r : t.rows) {
    const auto &cc = c.at({r.category, r.lemma});
    const auto &nn = n.at(r.category);
    CHECK(r.counts == AttributeCounts{cc[0], cc[1], nn[0], nn[1]});
    CHECK(std::abs(r.raw_z - oracle_z(cc[0], cc[1], nn[0], nn[1])) <= 1e-12);
    max_abs[r.category] = std::max(max_abs[r.category], std::abs(r.raw_z));
  }
  std::map<Category, double> max_norm;
  for (const auto &r : t.rows) {
    CHECK(std::abs(r.normalized_z - r.raw_z / max_abs[r.category]) <= 1e-12);
    CHECK(std::abs(r.normalized_z) <= 1.0);
    max_norm[r.category] = std::max(max_norm[r.category], std::abs(r.normalized_z));
  }
  for (const auto &[cat, m] : max_norm) CHECK(m == 1.0);
}

std::vector<DistinctivenessRow> rows_with(std::initializer_list<double> zs) {
  std::vector<DistinctivenessRow> rows;
  int i = 0;
  for (double z : zs) {
    DistinctivenessRow r{Category::kAgentVerbs, "l" + std::to_string(i++), {}};
    r.raw_z = z;
    rows.push_back(r);
  }
  return rows;
}

TEST_CASE("top attribute selection") {
  const auto rows = rows_with({0.5, -1.0, 2.0, 0.0, -3.0, 1.0});
  CHECK(top_attributes(rows, 14, Sign::kPositive).size() == 3);
  const auto both = top_attributes(rows, 2, Sign::kBoth);
  REQUIRE(both.size() == 4);
  CHECK(both[0].raw_z == 2.0);
  CHECK(both[1].raw_z == 1.0);
  CHECK(both[2].raw_z == -3.0);
  CHECK(both[3].raw_z == -1.0);
  const auto neg = top_attributes(rows, 5, Sign::kNegative);
  CHECK(neg.size() == 2);
}

TEST_CASE("top attributes equal a sort oracle") {
  std::mt19937_64 gen(12);
  std::normal_distribution<double> normal;
  std::vector<DistinctivenessRow> rows;
  for (int i = 0; i < 300; ++i) {
    DistinctivenessRow r{kAllCategories[gen() % 4], "w" + std::to_string(gen() % 100), {}};
    r.raw_z = std::round(normal(gen) * 4) / 4;  // plenty of ties
    rows.push_back(r);
  }
  auto oracle = rows;
  std::erase_if(oracle, [](const auto &r) { return r.raw_z <= 0.0; });
  std::sort(oracle.begin(), oracle.end(), [](const auto &a, const auto &b) {
    if (a.raw_z != b.raw_z) return a.raw_z > b.raw_z;
    if (a.category != b.category) return a.category < b.category;
    return a.lemma < b.lemma;
  });
  oracle.resize(std::min<std::size_t>(oracle.size(), 40));
  const auto top = top_attributes(rows, 40, Sign::kPositive);
  REQUIRE(top.size() == oracle.size());
  for (std::size_t i = 0; i < top.size(); ++i) {
    CHECK(top[i].raw_z == oracle[i].raw_z);
    CHECK(top[i].category == oracle[i].category);
    CHECK(top[i].lemma == oracle[i].lemma);
  }
}

TEST_CASE("distinctiveness csv") {
  const Dataset d = two_groups();
  const auto t = group_distinctiveness(d, by_label(d), CategorySet{Category::kPossessives});
  std::ostringstream out;
  write_distinctiveness_csv(t.rows, out);
  CHECK(out.str() == "category,lemma,c1,c2,n1,n2,raw_z,normalized_z\n"
                     "possessives,pipe,1,1,1,1,0,0\n");
}

}  // namespace
}  // namespace archlens
