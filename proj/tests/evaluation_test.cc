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
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "archlens/error.h"
#include "archlens/evaluation.h"
#include "archlens/synthetic.h"
#include "doctest.h"
#include "test_util.h"

namespace archlens {
namespace {

using testing::character;

Dataset labeled_fixture(std::size_t pos, std::size_t neg) {
  Dataset d;
  for (std::size_t i = 0; i < pos + neg; ++i) {
    d.characters.push_back(character("c" + std::to_string(i), "n", "a", 1900, 1,
                                     i < pos ? Label::kDetective : Label::kNonDetective));
  }
  return d;
}

// Random labeled fixture with a handful of authors, figures and years.
Dataset random_groups(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Dataset d;
  const std::size_t n = 30 + gen() % 50;
  for (std::size_t i = 0; i < n; ++i) {
    CharacterRecord c = character("c" + std::to_string(i), "n" + std::to_string(gen() % 9),
                                  " Author" + std::to_string(gen() % 6),
                                  1850 + static_cast<int>(gen() % 120), 1,
                                  i % 2 ? Label::kDetective : Label::kNonDetective);
    if (gen() % 2) c.figure_id = "Figure" + std::to_string(gen() % 8);
    d.characters.push_back(std::move(c));
  }
  return d;
}

void check_partition(const Dataset &d, const SplitPlan &plan) {
  std::size_t labeled = 0;
  for (const auto &c : d.characters) labeled += c.label.has_value();
  std::map<std::size_t, int> tested;
  for (const Fold &f : plan.folds) {
    std::set<std::size_t> train(f.train.begin(), f.train.end());
    for (std::size_t t : f.test) {
      tested[t]++;
      CHECK_FALSE(train.contains(t));
    }
    CHECK(f.train.size() + f.test.size() == labeled);
  }
  CHECK(tested.size() == labeled);
  for (const auto &[row, count] : tested) CHECK(count == 1);
}

TEST_CASE("scheme strings") {
  CHECK(parse_scheme("stratified:5").folds == 5);
  CHECK(parse_scheme("logo:author").grouping == Grouping::kAuthor);
  CHECK(parse_scheme("logo:character").grouping == Grouping::kCharacter);
  const Scheme bins = parse_scheme("logo:timebin:20");
  CHECK(bins.grouping == Grouping::kTimeBin);
  CHECK(bins.bin_width_years == 20);
  CHECK(scheme_name(bins) == "logo:timebin:20");
  for (const char *bad : {"stratified:1", "stratified:x", "logo:planet", "kfold",
                          "logo:timebin:0", "logo:timebin:", ""}) {
    CHECK_THROWS_AS(parse_scheme(bad), UsageError);
  }
}

TEST_CASE("stratified folds at annotated-corpus class counts") {
  const Dataset d = labeled_fixture(185, 419);
  const SplitPlan plan = make_splits(d, Scheme::stratified(5), 42);
  REQUIRE(plan.folds.size() == 5);
  for (const Fold &f : plan.folds) {
    std::size_t pos = 0;
    for (std::size_t row : f.test) pos += d.characters[row].label == Label::kDetective;
    CHECK(pos >= 36);
    CHECK(pos <= 38);
    CHECK(f.test.size() - pos >= 83);
    CHECK(f.test.size() - pos <= 84);
    CHECK(f.train.size() + f.test.size() == 604);
  }
  check_partition(d, plan);
  const SplitPlan again = make_splits(d, Scheme::stratified(5), 42);
  const SplitPlan other = make_splits(d, Scheme::stratified(5), 43);
  bool same = true;
  bool differs = false;
  for (std::size_t f = 0; f < 5; ++f) {
    same = same && plan.folds[f].test == again.folds[f].test;
    differs = differs || plan.folds[f].test != other.folds[f].test;
  }
  CHECK(same);
  CHECK(differs);
}

TEST_CASE("stratification holds for arbitrary class sizes") {
  std::mt19937_64 gen(1);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t k = 2 + gen() % 8;
    const std::size_t pos = k + gen() % 60;
    const std::size_t neg = k + gen() % 200;
    const Dataset d = labeled_fixture(pos, neg);
    const SplitPlan plan = make_splits(d, Scheme::stratified(static_cast<int>(k)), gen());
    const double ideal = static_cast<double>(pos) / static_cast<double>(k);
    for (const Fold &f : plan.folds) {
      std::size_t p = 0;
      for (std::size_t row : f.test) p += d.characters[row].label == Label::kDetective;
      CHECK(std::abs(static_cast<double>(p) - ideal) <= 1.0);
    }
    check_partition(d, plan);
  }
}

TEST_CASE("leave-one-group-out never shares a group across train and test") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Dataset d = random_groups(seed);
    for (const Scheme &scheme : {Scheme::logo(Grouping::kAuthor),
                                 Scheme::logo(Grouping::kCharacter),
                                 Scheme::logo(Grouping::kTimeBin, 10),
                                 Scheme::logo(Grouping::kTimeBin, 25)}) {
      SplitPlan plan;
      try {
        plan = make_splits(d, scheme, seed);
      } catch (const Error &) {
        continue;  // a fold without both classes in training
      }
      for (const Fold &f : plan.folds) {
        std::set<std::string> train_groups;
        for (std::size_t row : f.train) {
          train_groups.insert(group_key(d.characters[row], scheme.grouping,
                                        scheme.bin_width_years));
        }
        for (std::size_t row : f.test) {
          const std::string key =
              group_key(d.characters[row], scheme.grouping, scheme.bin_width_years);
          CHECK(key == f.group);
          CHECK_FALSE(train_groups.contains(key));
        }
      }
      check_partition(d, plan);
    }
  }
}

TEST_CASE("author folds and group normalization") {
  Dataset d;
  int id = 0;
  for (const char *author : {"Simenon", "Leblanc", " simenon ", "Christie"}) {
    for (Label l : {Label::kDetective, Label::kNonDetective}) {
      d.characters.push_back(character("c" + std::to_string(id++), "n", author, 1900, 1, l));
    }
  }
  const SplitPlan plan = make_splits(d, Scheme::logo(Grouping::kAuthor), 1);
  REQUIRE(plan.folds.size() == 3);
  CHECK(plan.folds[0].group == "christie");
  CHECK(plan.folds[2].group == "simenon");
  CHECK(plan.folds[2].test.size() == 4);
}

TEST_CASE("time bins are half-open decades") {
  Dataset d;
  for (int year = 1860; year < 1890; ++year) {
    d.characters.push_back(character("c" + std::to_string(year), "n", "a", year, 1,
                                     year % 2 ? Label::kDetective : Label::kNonDetective));
  }
  const SplitPlan plan = make_splits(d, Scheme::logo(Grouping::kTimeBin, 10), 1);
  REQUIRE(plan.folds.size() == 3);
  CHECK(plan.folds[0].group == "1860");
  CHECK(plan.folds[1].group == "1870");
  CHECK(plan.folds[2].group == "1880");
  for (const Fold &f : plan.folds) CHECK(f.test.size() == 10);
}

TEST_CASE("a fold without both training classes is named") {
  Dataset d;
  d.characters.push_back(character("a", "n", "solo", 1900, 1, Label::kDetective));
  d.characters.push_back(character("b", "n", "other", 1900, 1, Label::kNonDetective));
  d.characters.push_back(character("c", "n", "other", 1900, 1, Label::kNonDetective));
  try {
    make_splits(d, Scheme::logo(Grouping::kAuthor), 1);
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(std::string(e.what()).find("solo") != std::string::npos);
  }
}

TEST_CASE("metric identities") {
  Confusion c{9, 1, 90, 10};
  Metrics m = compute_metrics(c);
  CHECK(m.balanced_accuracy == doctest::Approx(0.9).epsilon(1e-12));
  CHECK(m.detective.recall == 0.9);
  CHECK(m.detective.precision == doctest::Approx(9.0 / 19.0));
  const auto f1 = [](const ClassMetrics &x) {
    return 2 * x.precision * x.recall / (x.precision + x.recall);
  };
  CHECK(std::abs(m.detective.f1 - f1(m.detective)) < 1e-12);
  CHECK(std::abs(m.non_detective.f1 - f1(m.non_detective)) < 1e-12);
  CHECK(m.balanced_accuracy == (m.detective.recall + m.non_detective.recall) / 2);

  m = compute_metrics(Confusion{0, 5, 5, 0});
  CHECK(m.detective.f1 == 0.0);
  CHECK(m.balanced_accuracy == 0.5);

  std::mt19937_64 gen(4);
  for (int i = 0; i < 200; ++i) {
    Confusion r{static_cast<std::int64_t>(1 + gen() % 50),
                static_cast<std::int64_t>(gen() % 50),
                static_cast<std::int64_t>(1 + gen() % 50),
                static_cast<std::int64_t>(gen() % 50)};
    const Metrics x = compute_metrics(r);
    const double recall_pos = static_cast<double>(r.tp) / static_cast<double>(r.tp + r.fn);
    const double recall_neg = static_cast<double>(r.tn) / static_cast<double>(r.tn + r.fp);
    CHECK(std::abs(x.balanced_accuracy - (recall_pos + recall_neg) / 2) <= 1e-12);
  }
}

Dataset disjoint_vocab(std::size_t n) {
  Dataset d;
  for (std::size_t i = 0; i < n; ++i) {
    const bool det = i % 3 == 0;
    d.characters.push_back(character(
        "c" + std::to_string(i), "n" + std::to_string(i), "a" + std::to_string(i % 4),
        1850 + static_cast<int>(i), 10, det ? Label::kDetective : Label::kNonDetective,
        {{Category::kAgentVerbs, det ? "enqueter" : "dormir", 3},
         {Category::kModifiers, "grand", 1}}));
  }
  return d;
}

TEST_CASE("disjoint class vocabularies are classified perfectly") {
  const Dataset d = disjoint_vocab(60);
  FeatureSpec spec;
  spec.kind = FeatureKind::kBoW;
  for (ModelKind kind : {ModelKind::kLogReg, ModelKind::kLinearSvm}) {
    TrainConfig config;
    config.kind = kind;
    const CvResult cv =
        cross_validate(d, spec, config, make_splits(d, Scheme::stratified(5), 3), 1);
    CHECK(cv.report.pooled.balanced_accuracy == 1.0);
    CHECK(cv.predictions.size() == 60);
    CHECK(cv.report.per_fold.size() == 5);
  }
}

TEST_CASE("a test-only lemma never reaches a fold vocabulary") {
  Dataset d = disjoint_vocab(50);
  const SplitPlan plan = make_splits(d, Scheme::stratified(5), 11);
  // Plant one sentinel per fold, in a character of that fold's test set.
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    d.characters[plan.folds[f].test.front()].attributes.add(
        Category::kAgentVerbs, "sentinel" + std::to_string(f), 50);
  }
  FeatureSpec spec;
  spec.kind = FeatureKind::kBoW;
  const CvResult cv = cross_validate(d, spec, TrainConfig{}, plan, 2);
  REQUIRE(cv.fold_vocabularies.size() == plan.folds.size());
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    const Vocabulary &v = cv.fold_vocabularies[f];
    CHECK_FALSE(v.find(Category::kAgentVerbs, "sentinel" + std::to_string(f)));
    // Sentinels of the other folds sit in this fold's training rows.
    for (std::size_t g = 0; g < plan.folds.size(); ++g) {
      if (g != f) CHECK(v.find(Category::kAgentVerbs, "sentinel" + std::to_string(g)));
    }
  }
}

TEST_CASE("cross-validation does not depend on thread count") {
  PlantedOptions o;
  o.detectives = 40;
  o.non_detectives = 80;
  o.authors = 4;
  const Dataset d = make_planted_corpus(o);
  const SplitPlan plan = make_splits(d, Scheme::logo(Grouping::kAuthor), 1);
  FeatureSpec spec;
  TrainConfig config;
  config.kind = ModelKind::kLinearSvm;
  const CvResult one = cross_validate(d, spec, config, plan, 1);
  const CvResult four = cross_validate(d, spec, config, plan, 4);
  std::ostringstream a;
  std::ostringstream b;
  write_predictions_csv(one.predictions, a);
  write_predictions_csv(four.predictions, b);
  CHECK(a.str() == b.str());
  CHECK(one.report.pooled.confusion == four.report.pooled.confusion);
}

TEST_CASE("error over time") {
  std::vector<OutOfFoldPrediction> p;
  const Label D = Label::kDetective;
  const Label N = Label::kNonDetective;
  p.push_back({"a", 1901, D, D, 1.0});
  p.push_back({"b", 1903, N, D, 0.5});
  p.push_back({"c", 1905, N, N, -1.0});
  p.push_back({"d", 1909, D, D, 2.0});
  p.push_back({"e", 1925, N, N, -2.0});
  const TrendSeries s = error_over_time(p, 10);
  REQUIRE(s.points.size() == 2);
  CHECK(s.points[0] == TrendPoint{1900, 0.25, 4});
  CHECK(s.points[1] == TrendPoint{1920, 0.0, 1});

  std::mt19937_64 gen(8);
  std::vector<OutOfFoldPrediction> r;
  for (int i = 0; i < 300; ++i) {
    r.push_back({"x", 1800 + static_cast<int>(gen() % 200), gen() % 2 ? D : N,
                 gen() % 2 ? D : N, 0.0});
  }
  const TrendSeries rs = error_over_time(r, 7);
  for (const TrendPoint &pt : rs.points) {
    int errors = 0;
    int total = 0;
    for (const auto &x : r) {
      if (x.year >= pt.bin_start && x.year < pt.bin_start + 7) {
        ++total;
        errors += x.gold != x.predicted;
      }
    }
    CHECK(pt.support == total);
    CHECK(pt.value == doctest::Approx(static_cast<double>(errors) / total).epsilon(1e-15));
  }
}

TEST_CASE("report formats") {
  EvalReport r;
  r.pooled = compute_metrics(Confusion{9, 1, 90, 10});
  r.per_fold = {r.pooled};
  r.fold_groups = {"simenon"};
  std::ostringstream report;
  write_report(r, {"model=svm"}, report);
  CHECK(report.str().starts_with("model=svm\nfolds=1\nn=110\nbalanced_accuracy=0.9"));
  std::ostringstream folds;
  write_fold_metrics_csv(r, folds);
  CHECK(folds.str().find("\n1,simenon,110,9,1,90,10,") != std::string::npos);
  std::ostringstream preds;
  const std::vector<OutOfFoldPrediction> p = {
      {"m", 1931, Label::kDetective, Label::kNonDetective, -0.5}};
  write_predictions_csv(p, preds);
  CHECK(preds.str() ==
        "character_id,year,gold,predicted,score\nm,1931,detective,non_detective,-0.5\n");
}

}  // namespace
}  // namespace archlens
