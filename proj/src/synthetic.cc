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


#include "archlens/synthetic.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "archlens/error.h"
#include "archlens/rng.h"

namespace archlens {

namespace {

// Token share of each category, in Category order.
constexpr std::array<double, 4> kCategoryShare = {0.35, 0.25, 0.15, 0.25};
constexpr std::array<const char *, 4> kCategoryPrefix = {"ag", "mo", "pa", "po"};

std::string numbered(const char *prefix, std::size_t n, int width) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s%0*zu", prefix, width, n);
  return buf;
}

int uniform_year(Rng &rng, int first, int last) {
  return first + static_cast<int>(rng.below(static_cast<std::uint64_t>(last - first + 1)));
}

class SignalModel {
 public:
  SignalModel(const SignalOptions &options, Rng &rng) : o_(options) {
    if (o_.dim == 0) throw Error("synthetic embeddings need dim >= 1");
    if (o_.lemmas_per_category == 0) throw Error("synthetic vocabulary is empty");
    if (!(o_.exclusive_fraction >= 0.0 && o_.exclusive_fraction <= 1.0)) {
      throw Error("exclusive fraction must lie in [0, 1]");
    }
    exclusive_ = static_cast<std::size_t>(
        std::llround(o_.exclusive_fraction * static_cast<double>(o_.lemmas_per_category)));
    direction_.resize(o_.dim);
    double norm = 0.0;
    while (norm == 0.0) {
      for (double &v : direction_) v = rng.normal();
      norm = std::sqrt(std::inner_product(direction_.begin(), direction_.end(),
                                          direction_.begin(), 0.0));
    }
    for (double &v : direction_) v /= norm;
  }

  void fill(CharacterRecord &c, Label label, Rng &rng, EmbeddingMatrix &embeddings) const {
    const std::size_t shared = o_.lemmas_per_category - exclusive_;
    const char *tag = label == Label::kDetective ? "d" : "n";
    for (std::size_t t = 0; t < o_.tokens_per_character; ++t) {
      double u = rng.uniform();
      std::size_t cat = 0;
      while (cat + 1 < kCategoryShare.size() && u >= kCategoryShare[cat]) {
        u -= kCategoryShare[cat];
        ++cat;
      }
      const std::size_t i = rng.below(o_.lemmas_per_category);
      std::string lemma = std::string(kCategoryPrefix[cat]) + "-";
      lemma += i < shared ? numbered("s", i, 3) : numbered(tag, i - shared, 3);
      c.attributes.add(kAllCategories[cat], std::move(lemma));
    }
    const double offset = 0.5 * o_.separation * o_.spread *
                          (label == Label::kDetective ? 1.0 : -1.0);
    std::vector<float> v(o_.dim);
    for (std::size_t j = 0; j < o_.dim; ++j) {
      v[j] = static_cast<float>(offset * direction_[j] + o_.spread * rng.normal());
    }
    embeddings.add(c.character_id, v);
  }

 private:
  SignalOptions o_;
  std::size_t exclusive_ = 0;
  std::vector<double> direction_;
};

void check_years(int first, int last) {
  if (first > last) throw Error("synthetic year range is empty");
}

}  // namespace

Dataset make_planted_corpus(const PlantedOptions &options) {
  check_years(options.first_year, options.last_year);
  if (options.authors == 0 || options.characters_per_novel == 0 ||
      options.novels_per_figure == 0) {
    throw Error("synthetic corpus shape parameters must be positive");
  }
  Rng rng(options.seed);
  SignalModel model(options.signal, rng);
  Dataset dataset;
  dataset.embeddings.emplace(options.signal.dim);

  std::vector<std::vector<Label>> by_author(options.authors);
  for (std::size_t i = 0; i < options.detectives; ++i) {
    by_author[i % options.authors].push_back(Label::kDetective);
  }
  for (std::size_t i = 0; i < options.non_detectives; ++i) {
    by_author[i % options.authors].push_back(Label::kNonDetective);
  }

  std::size_t next_id = 0;
  for (std::size_t a = 0; a < options.authors; ++a) {
    const std::string author = numbered("author_", a, 2);
    const auto &labels = by_author[a];
    const auto detectives = static_cast<std::size_t>(
        std::count(labels.begin(), labels.end(), Label::kDetective));
    const std::size_t novels = std::max<std::size_t>(
        {1, detectives,
         (labels.size() + options.characters_per_novel - 1) / options.characters_per_novel});
    const int career_start = uniform_year(
        rng, options.first_year, std::max(options.first_year, options.last_year - 30));
    std::vector<int> novel_years(novels);
    for (int &y : novel_years) {
      y = std::min(options.last_year, career_start + static_cast<int>(rng.below(31)));
    }
    std::size_t det_seen = 0;
    std::size_t other_seen = 0;
    for (Label label : labels) {
      CharacterRecord c;
      c.character_id = numbered("p", next_id++, 4);
      c.author = author;
      c.label = label;
      std::size_t novel = 0;
      if (label == Label::kDetective) {
        novel = det_seen;
        c.figure_id = author + "-det-" + std::to_string(det_seen / options.novels_per_figure);
        c.mention_count = 100 + static_cast<std::int64_t>(rng.below(201));
        ++det_seen;
      } else {
        novel = other_seen % novels;
        c.mention_count = 5 + static_cast<std::int64_t>(rng.below(146));
        ++other_seen;
      }
      c.novel_id = author + "-novel-" + std::to_string(novel);
      c.year = novel_years[novel];
      model.fill(c, label, rng, *dataset.embeddings);
      dataset.characters.push_back(std::move(c));
    }
  }
  return dataset;
}

SyntheticCorpus make_unlabeled_corpus(const CorpusOptions &options) {
  check_years(options.first_year, options.last_year);
  if (options.novels == 0 || options.characters_per_novel == 0 || options.authors == 0) {
    throw Error("synthetic corpus shape parameters must be positive");
  }
  Rng rng(options.seed);
  SignalModel model(options.signal, rng);
  SyntheticCorpus corpus;
  corpus.dataset.embeddings.emplace(options.signal.dim);
  for (std::size_t n = 0; n < options.novels; ++n) {
    const std::string novel = numbered("n", n, 3);
    const int year = uniform_year(rng, options.first_year, options.last_year);
    const bool has_detective =
        rng.uniform() < options.detective_rate && year >= options.detectives_from_year;
    for (std::size_t r = 0; r < options.characters_per_novel; ++r) {
      CharacterRecord c;
      c.character_id = novel + numbered("_c", r, 2);
      c.novel_id = novel;
      c.author = numbered("writer_", n % options.authors, 2);
      c.year = year;
      c.mention_count = r == 0 ? 150 + static_cast<std::int64_t>(rng.below(151))
                               : 120 / static_cast<std::int64_t>(r + 1) +
                                     static_cast<std::int64_t>(rng.below(10));
      const Label label = has_detective && r == 0 ? Label::kDetective : Label::kNonDetective;
      if (label == Label::kDetective) corpus.planted_detectives.push_back(c.character_id);
      model.fill(c, label, rng, *corpus.dataset.embeddings);
      corpus.dataset.characters.push_back(std::move(c));
    }
  }
  return corpus;
}

}  // namespace archlens
