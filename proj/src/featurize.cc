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

#include "archlens/featurize.h"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "archlens/csv.h"
#include "archlens/error.h"

namespace archlens {

Vocabulary::Vocabulary(std::vector<VocabularyTerm> terms, CategorySet categories)
    : terms_(std::move(terms)), categories_(categories) {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    index_.emplace(std::make_pair(terms_[i].category, terms_[i].lemma), i);
  }
}

std::optional<std::size_t> Vocabulary::find(Category category,
                                            std::string_view lemma) const {
  auto it = index_.find(std::make_pair(category, std::string(lemma)));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary build_vocabulary(const Dataset &dataset, std::size_t size,
                            const CategorySet &categories) {
  std::vector<std::size_t> rows(dataset.characters.size());
  std::iota(rows.begin(), rows.end(), 0);
  return build_vocabulary(dataset, rows, size, categories);
}

Vocabulary build_vocabulary(const Dataset &dataset,
                            std::span<const std::size_t> rows, std::size_t size,
                            const CategorySet &categories) {
  if (size == 0) throw Error("vocabulary size must be positive");
  std::map<std::pair<Category, std::string>, std::int64_t, std::less<>> counts;
  for (std::size_t row : rows) {
    const AttributeBag &bag = dataset.characters.at(row).attributes;
    for (Category c : categories.members()) {
      for (const auto &[lemma, count] : bag[c]) {
        counts[std::make_pair(c, lemma)] += count;
      }
    }
  }
  if (counts.empty()) {
    throw Error("cannot build a vocabulary: no attributes in the selected categories");
  }

  // The map iterates in (category, lemma) order, so a stable sort by count
  // leaves ties in that order.
  std::vector<VocabularyTerm> terms;
  terms.reserve(counts.size());
  for (auto &[key, count] : counts) {
    terms.push_back({key.first, key.second, count});
  }
  std::stable_sort(terms.begin(), terms.end(),
                   [](const VocabularyTerm &a, const VocabularyTerm &b) {
                     return a.count > b.count;
                   });
  if (terms.size() > size) terms.resize(size);
  return Vocabulary(std::move(terms), categories);
}

void write_vocabulary_csv(const Vocabulary &vocab, std::ostream &out) {
  write_csv_row(out, {"rank", "category", "lemma", "count"});
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    const VocabularyTerm &t = vocab.terms()[i];
    write_csv_row(out, {std::to_string(i + 1), category_name(t.category), t.lemma,
                        std::to_string(t.count)});
  }
}

std::string_view feature_kind_name(FeatureKind kind) {
  return kind == FeatureKind::kBoW ? "bow" : "emb";
}

FeatureVector bow_vector(const CharacterRecord &character, const Vocabulary &vocab) {
  FeatureVector out{std::vector<double>(vocab.size(), 0.0), FeatureKind::kBoW};
  std::int64_t total = 0;
  for (Category c : vocab.categories().members()) {
    for (const auto &[lemma, count] : character.attributes[c]) {
      if (auto pos = vocab.find(c, lemma)) {
        out.values[*pos] += static_cast<double>(count);
        total += count;
      }
    }
  }
  if (total > 0) {
    const double denom = static_cast<double>(total);
    for (double &v : out.values) v /= denom;
  }
  return out;
}

std::vector<double> aggregate_embedding(
    std::span<const std::vector<double>> attribute_vectors) {
  if (attribute_vectors.empty()) throw Error("no attributes to pool");
  const std::size_t dim = attribute_vectors.front().size();
  std::vector<double> mean(dim, 0.0);
  for (const auto &v : attribute_vectors) {
    if (v.size() != dim) {
      throw Error("attribute vector dimension mismatch: expected " +
                  std::to_string(dim) + ", got " + std::to_string(v.size()));
    }
    for (std::size_t j = 0; j < dim; ++j) mean[j] += v[j];
  }
  const double n = static_cast<double>(attribute_vectors.size());
  for (double &m : mean) m /= n;
  return mean;
}

Featurizer Featurizer::fit(const FeatureSpec &spec, const Dataset &dataset,
                           std::span<const std::size_t> rows) {
  Featurizer f;
  f.spec_ = spec;
  if (spec.kind == FeatureKind::kBoW) {
    f.vocab_ = build_vocabulary(dataset, rows, spec.vocab_size, spec.categories);
  } else {
    if (!dataset.embeddings) {
      throw Error("embedding features requested but no embeddings were loaded");
    }
    f.embedding_dim_ = dataset.embeddings->dim();
  }
  return f;
}

std::size_t Featurizer::dim() const {
  return spec_.kind == FeatureKind::kBoW ? vocab_.size() : embedding_dim_;
}

Matrix Featurizer::transform(const Dataset &dataset,
                             std::span<const std::size_t> rows) const {
  Matrix out(rows.size(), dim());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const CharacterRecord &c = dataset.characters.at(rows[i]);
    auto dst = out.row(i);
    if (spec_.kind == FeatureKind::kBoW) {
      FeatureVector v = bow_vector(c, vocab_);
      std::copy(v.values.begin(), v.values.end(), dst.begin());
    } else {
      const float *src =
          dataset.embeddings ? dataset.embeddings->find(c.character_id) : nullptr;
      if (src == nullptr) {
        throw Error("character '" + c.character_id + "' has no embedding");
      }
      if (dataset.embeddings->dim() != embedding_dim_) {
        throw Error("embedding dimension differs from the fitted featurizer");
      }
      for (std::size_t j = 0; j < dst.size(); ++j) dst[j] = src[j];
    }
  }
  return out;
}

}  // namespace archlens
