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

#ifndef ARCHLENS_EVALUATION_H_
#define ARCHLENS_EVALUATION_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "archlens/dataset.h"
#include "archlens/featurize.h"
#include "archlens/linear_model.h"
#include "archlens/trend.h"

namespace archlens {

enum class SchemeKind { kStratifiedKFold, kLogo };
enum class Grouping { kCharacter, kAuthor, kTimeBin };

struct Scheme {
  SchemeKind kind = SchemeKind::kStratifiedKFold;
  int folds = 5;                       // stratified only
  Grouping grouping = Grouping::kAuthor;  // LOGO only
  int bin_width_years = 10;            // LOGO time bins only

  static Scheme stratified(int k) { return {SchemeKind::kStratifiedKFold, k}; }
  static Scheme logo(Grouping g, int width = 10) {
    return {SchemeKind::kLogo, 0, g, width};
  }
};

// Accepts "stratified:K", "logo:character", "logo:author", "logo:timebin:W".
// Throws UsageError otherwise.
Scheme parse_scheme(std::string_view text);
std::string scheme_name(const Scheme &scheme);

struct Fold {
  std::vector<std::size_t> train;  // indices into dataset.characters
  std::vector<std::size_t> test;
  std::string group;               // held-out group key (LOGO only)
};

struct SplitPlan {
  Scheme scheme;
  std::vector<Fold> folds;
};

// Indices of the characters that carry a gold label, in dataset order.
std::vector<std::size_t> labeled_rows(const Dataset &dataset);

// Pipeline default for an unset `standardize`: on, for both feature kinds.
TrainConfig resolve_scaling(TrainConfig config);

// Grouping key of a character: normalized figure id, normalized author, or
// the start year of its half-open time bin.
std::string group_key(const CharacterRecord &c, Grouping grouping, int bin_width);

// Builds folds over the labeled characters. Stratified folds deal each class
// round-robin after a seeded shuffle; LOGO folds are ordered by group key.
// Throws Error when there are too few examples or groups, or when a fold's
// training set lacks a class.
SplitPlan make_splits(const Dataset &dataset, const Scheme &scheme,
                      std::uint64_t seed);

struct Confusion {
  std::int64_t tp = 0;  // detective predicted detective
  std::int64_t fn = 0;
  std::int64_t tn = 0;
  std::int64_t fp = 0;

  void add(Label gold, Label predicted);
  Confusion &operator+=(const Confusion &o);
  std::int64_t total() const { return tp + fn + tn + fp; }
  bool operator==(const Confusion &) const = default;
};

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t support = 0;
};

struct Metrics {
  // Mean recall over the classes present in the gold labels.
  double balanced_accuracy = 0.0;
  ClassMetrics detective;
  ClassMetrics non_detective;
  Confusion confusion;
};

Metrics compute_metrics(const Confusion &confusion);

struct EvalReport {
  Metrics pooled;                 // from the confusion summed over folds
  std::vector<Metrics> per_fold;
  std::vector<std::string> fold_groups;  // held-out group per fold (LOGO)
};

struct OutOfFoldPrediction {
  std::string character_id;
  int year = 0;
  Label gold;
  Label predicted;
  double score = 0.0;
};

struct CvResult {
  EvalReport report;
  std::vector<OutOfFoldPrediction> predictions;  // in dataset order
  std::vector<Vocabulary> fold_vocabularies;     // bag-of-words only
};

// Fits featurizer and model on each fold's training rows only and scores the
// held-out rows. Folds may run concurrently; results are assembled in fold
// order.
CvResult cross_validate(const Dataset &dataset, const FeatureSpec &features,
                        const TrainConfig &config, const SplitPlan &plan,
                        std::size_t threads = 0);

// Misclassification rate per time bin; bins without predictions are omitted.
TrendSeries error_over_time(std::span<const OutOfFoldPrediction> predictions,
                            int bin_width_years);

// Key-value report, one `key=value` per line.
void write_report(const EvalReport &report, const std::vector<std::string> &header,
                  std::ostream &out);
void write_fold_metrics_csv(const EvalReport &report, std::ostream &out);
// CSV `character_id,year,gold,predicted,score`.
void write_predictions_csv(std::span<const OutOfFoldPrediction> predictions,
                           std::ostream &out);

}  // namespace archlens

#endif  // ARCHLENS_EVALUATION_H_
