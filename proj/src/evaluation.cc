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

#include "archlens/evaluation.h"

#include <algorithm>
#include <charconv>
#include <map>
#include <ostream>

#include "archlens/csv.h"
#include "archlens/error.h"
#include "archlens/parallel.h"
#include "archlens/rng.h"
#include "archlens/text.h"

namespace archlens {

namespace {

int parse_positive(std::string_view text, std::string_view what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value <= 0) {
    throw UsageError("invalid " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}


void fill_training_sets(const std::vector<std::size_t> &labeled, SplitPlan &plan) {
  std::vector<int> fold_of(labeled.empty() ? 0 : labeled.back() + 1, -1);
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    std::sort(plan.folds[f].test.begin(), plan.folds[f].test.end());
    for (std::size_t row : plan.folds[f].test) fold_of[row] = static_cast<int>(f);
  }
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    for (std::size_t row : labeled) {
      if (fold_of[row] != static_cast<int>(f)) plan.folds[f].train.push_back(row);
    }
  }
}

void check_training_classes(const Dataset &dataset, const SplitPlan &plan) {
  std::string bad;
  for (std::size_t f = 0; f < plan.folds.size(); ++f) {
    bool pos = false;
    bool neg = false;
    for (std::size_t row : plan.folds[f].train) {
      (*dataset.characters[row].label == Label::kDetective ? pos : neg) = true;
    }
    if (!pos || !neg) {
      if (!bad.empty()) bad += ", ";
      bad += std::to_string(f + 1);
      if (!plan.folds[f].group.empty()) bad += " (" + plan.folds[f].group + ")";
    }
  }
  if (!bad.empty()) {
    throw Error("a class is absent from the training set of fold(s) " + bad);
  }
}

double safe_ratio(std::int64_t num, std::int64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

ClassMetrics class_metrics(std::int64_t hit, std::int64_t missed,
                           std::int64_t false_alarm) {
  ClassMetrics m;
  m.support = hit + missed;
  m.precision = safe_ratio(hit, hit + false_alarm);
  m.recall = safe_ratio(hit, hit + missed);
  m.f1 = m.precision + m.recall == 0.0
             ? 0.0
             : 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

}  // namespace

Scheme parse_scheme(std::string_view text) {
  text = trim(text);
  if (text.starts_with("stratified:")) {
    const int k = parse_positive(text.substr(11), "fold count");
    if (k < 2) throw UsageError("stratified k-fold needs k >= 2");
    return Scheme::stratified(k);
  }
  if (text == "logo:character") return Scheme::logo(Grouping::kCharacter);
  if (text == "logo:author") return Scheme::logo(Grouping::kAuthor);
  if (text.starts_with("logo:timebin:")) {
    return Scheme::logo(Grouping::kTimeBin,
                        parse_positive(text.substr(13), "time-bin width"));
  }
  throw UsageError("invalid scheme '" + std::string(text) +
                   "' (expected stratified:K, logo:character, logo:author or "
                   "logo:timebin:W)");
}

std::string scheme_name(const Scheme &scheme) {
  if (scheme.kind == SchemeKind::kStratifiedKFold) {
    return "stratified:" + std::to_string(scheme.folds);
  }
  switch (scheme.grouping) {
    case Grouping::kCharacter:
      return "logo:character";
    case Grouping::kAuthor:
      return "logo:author";
    case Grouping::kTimeBin:
      return "logo:timebin:" + std::to_string(scheme.bin_width_years);
  }
  return "logo";
}

std::vector<std::size_t> labeled_rows(const Dataset &dataset) {
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < dataset.characters.size(); ++i) {
    if (dataset.characters[i].label) rows.push_back(i);
  }
  return rows;
}

TrainConfig resolve_scaling(TrainConfig config) {
  if (!config.standardize) config.standardize = true;
  return config;
}

std::string group_key(const CharacterRecord &c, Grouping grouping, int bin_width) {
  switch (grouping) {
    case Grouping::kCharacter:
      return lowercase(trim(c.figure()));
    case Grouping::kAuthor:
      return lowercase(trim(c.author));
    case Grouping::kTimeBin:
      return std::to_string(bin_start(c.year, bin_width));
  }
  return {};
}

SplitPlan make_splits(const Dataset &dataset, const Scheme &scheme,
                      std::uint64_t seed) {
  const std::vector<std::size_t> labeled = labeled_rows(dataset);
  SplitPlan plan;
  plan.scheme = scheme;

  if (scheme.kind == SchemeKind::kStratifiedKFold) {
    const auto k = static_cast<std::size_t>(scheme.folds);
    if (scheme.folds < 2) throw Error("stratified k-fold needs k >= 2");
    if (labeled.size() < k) {
      throw Error("need at least " + std::to_string(k) + " labeled characters, found " +
                  std::to_string(labeled.size()));
    }
    std::vector<std::size_t> pos;
    std::vector<std::size_t> neg;
    for (std::size_t row : labeled) {
      (*dataset.characters[row].label == Label::kDetective ? pos : neg).push_back(row);
    }
    Rng rng(seed);
    rng.shuffle(std::span<std::size_t>(pos));
    rng.shuffle(std::span<std::size_t>(neg));
    // Positives, then negatives, dealt round-robin.
    plan.folds.resize(k);
    std::size_t next = 0;
    for (std::size_t row : pos) plan.folds[next++ % k].test.push_back(row);
    for (std::size_t row : neg) plan.folds[next++ % k].test.push_back(row);
  } else {
    // Time bins sort numerically, other keys lexicographically.
    std::map<std::pair<long long, std::string>, std::vector<std::size_t>> groups;
    for (std::size_t row : labeled) {
      const CharacterRecord &c = dataset.characters[row];
      std::string key = group_key(c, scheme.grouping, scheme.bin_width_years);
      const long long order = scheme.grouping == Grouping::kTimeBin
                                  ? bin_start(c.year, scheme.bin_width_years)
                                  : 0;
      groups[{order, std::move(key)}].push_back(row);
    }
    if (groups.size() < 2) {
      throw Error("leave-one-group-out needs at least 2 groups, found " +
                  std::to_string(groups.size()));
    }
    for (auto &[key, rows] : groups) {
      plan.folds.push_back(Fold{{}, std::move(rows), key.second});
    }
  }

  fill_training_sets(labeled, plan);
  check_training_classes(dataset, plan);
  return plan;
}

void Confusion::add(Label gold, Label predicted) {
  if (gold == Label::kDetective) {
    ++(predicted == Label::kDetective ? tp : fn);
  } else {
    ++(predicted == Label::kDetective ? fp : tn);
  }
}

Confusion &Confusion::operator+=(const Confusion &o) {
  tp += o.tp;
  fn += o.fn;
  tn += o.tn;
  fp += o.fp;
  return *this;
}

Metrics compute_metrics(const Confusion &confusion) {
  Metrics m;
  m.confusion = confusion;
  m.detective = class_metrics(confusion.tp, confusion.fn, confusion.fp);
  m.non_detective = class_metrics(confusion.tn, confusion.fp, confusion.fn);
  double recall_sum = 0.0;
  int present = 0;
  for (const ClassMetrics *c : {&m.detective, &m.non_detective}) {
    if (c->support > 0) {
      recall_sum += c->recall;
      ++present;
    }
  }
  m.balanced_accuracy = present == 0 ? 0.0 : recall_sum / present;
  return m;
}

CvResult cross_validate(const Dataset &dataset, const FeatureSpec &features,
                        const TrainConfig &config, const SplitPlan &plan,
                        std::size_t threads) {
  struct FoldOutput {
    Confusion confusion;
    std::vector<std::pair<std::size_t, OutOfFoldPrediction>> predictions;
    Vocabulary vocabulary;
  };
  const TrainConfig resolved = resolve_scaling(config);

  std::vector<FoldOutput> outputs(plan.folds.size());
  parallel_for(
      plan.folds.size(),
      [&](std::size_t f) {
        const Fold &fold = plan.folds[f];
        Featurizer featurizer = Featurizer::fit(features, dataset, fold.train);
        Matrix x_train = featurizer.transform(dataset, fold.train);
        std::vector<Label> y_train;
        y_train.reserve(fold.train.size());
        for (std::size_t row : fold.train) y_train.push_back(*dataset.characters[row].label);
        LinearModel model = train(x_train, y_train, resolved);

        Matrix x_test = featurizer.transform(dataset, fold.test);
        FoldOutput &out = outputs[f];
        for (std::size_t i = 0; i < fold.test.size(); ++i) {
          const CharacterRecord &c = dataset.characters[fold.test[i]];
          const double score = decision_score(model, x_test.row(i));
          const Label predicted = score > 0.0 ? Label::kDetective : Label::kNonDetective;
          out.confusion.add(*c.label, predicted);
          out.predictions.push_back(
              {fold.test[i], {c.character_id, c.year, *c.label, predicted, score}});
        }
        if (features.kind == FeatureKind::kBoW) out.vocabulary = featurizer.vocabulary();
      },
      threads);

  CvResult result;
  Confusion pooled;
  std::vector<std::pair<std::size_t, OutOfFoldPrediction>> all;
  for (std::size_t f = 0; f < outputs.size(); ++f) {
    pooled += outputs[f].confusion;
    result.report.per_fold.push_back(compute_metrics(outputs[f].confusion));
    result.report.fold_groups.push_back(plan.folds[f].group);
    for (auto &p : outputs[f].predictions) all.push_back(std::move(p));
    if (features.kind == FeatureKind::kBoW) {
      result.fold_vocabularies.push_back(std::move(outputs[f].vocabulary));
    }
  }
  result.report.pooled = compute_metrics(pooled);
  std::sort(all.begin(), all.end(),
            [](const auto &a, const auto &b) { return a.first < b.first; });
  for (auto &p : all) result.predictions.push_back(std::move(p.second));
  return result;
}

TrendSeries error_over_time(std::span<const OutOfFoldPrediction> predictions,
                            int bin_width_years) {
  std::map<int, std::pair<std::int64_t, std::int64_t>> bins;  // errors, total
  for (const OutOfFoldPrediction &p : predictions) {
    auto &[errors, total] = bins[bin_start(p.year, bin_width_years)];
    if (p.gold != p.predicted) ++errors;
    ++total;
  }
  TrendSeries series;
  for (const auto &[start, counts] : bins) {
    series.points.push_back({start, safe_ratio(counts.first, counts.second),
                             counts.second});
  }
  return series;
}

void write_report(const EvalReport &report, const std::vector<std::string> &header,
                  std::ostream &out) {
  for (const std::string &line : header) out << line << '\n';
  const Metrics &m = report.pooled;
  out << "folds=" << report.per_fold.size() << '\n';
  out << "n=" << m.confusion.total() << '\n';
  out << "balanced_accuracy=" << format_double(m.balanced_accuracy) << '\n';
  for (const auto &[name, c] : {std::pair{"detective", &m.detective},
                                std::pair{"non_detective", &m.non_detective}}) {
    out << name << ".precision=" << format_double(c->precision) << '\n';
    out << name << ".recall=" << format_double(c->recall) << '\n';
    out << name << ".f1=" << format_double(c->f1) << '\n';
    out << name << ".support=" << c->support << '\n';
  }
  out << "confusion.tp=" << m.confusion.tp << '\n';
  out << "confusion.fn=" << m.confusion.fn << '\n';
  out << "confusion.tn=" << m.confusion.tn << '\n';
  out << "confusion.fp=" << m.confusion.fp << '\n';
}

void write_fold_metrics_csv(const EvalReport &report, std::ostream &out) {
  write_csv_row(out, {"fold", "group", "n_test", "tp", "fn", "tn", "fp",
                      "balanced_accuracy", "detective_precision", "detective_recall",
                      "detective_f1", "non_detective_precision",
                      "non_detective_recall", "non_detective_f1"});
  for (std::size_t f = 0; f < report.per_fold.size(); ++f) {
    const Metrics &m = report.per_fold[f];
    const std::string group = f < report.fold_groups.size() ? report.fold_groups[f] : "";
    write_csv_row(out, {std::to_string(f + 1), group, std::to_string(m.confusion.total()),
                        std::to_string(m.confusion.tp), std::to_string(m.confusion.fn),
                        std::to_string(m.confusion.tn), std::to_string(m.confusion.fp),
                        format_double(m.balanced_accuracy),
                        format_double(m.detective.precision),
                        format_double(m.detective.recall), format_double(m.detective.f1),
                        format_double(m.non_detective.precision),
                        format_double(m.non_detective.recall),
                        format_double(m.non_detective.f1)});
  }
}

void write_predictions_csv(std::span<const OutOfFoldPrediction> predictions,
                           std::ostream &out) {
  write_csv_row(out, {"character_id", "year", "gold", "predicted", "score"});
  for (const OutOfFoldPrediction &p : predictions) {
    write_csv_row(out, {p.character_id, std::to_string(p.year), label_name(p.gold),
                        label_name(p.predicted), format_double(p.score)});
  }
}

}  // namespace archlens
