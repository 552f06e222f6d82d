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

#ifndef ARCHLENS_FEATURIZE_H_
#define ARCHLENS_FEATURIZE_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "archlens/dataset.h"
#include "archlens/matrix.h"

namespace archlens {

struct VocabularyTerm {
  Category category;
  std::string lemma;
  std::int64_t count;  // total occurrences over the corpus it was built from

  bool operator==(const VocabularyTerm &) const = default;
};

// Most-frequent (category, lemma) pairs. Position i of a bag-of-words vector
// is terms()[i]. The same lemma under two categories is two terms.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<VocabularyTerm> terms, CategorySet categories);

  std::size_t size() const { return terms_.size(); }
  const std::vector<VocabularyTerm> &terms() const { return terms_; }
  const CategorySet &categories() const { return categories_; }

  std::optional<std::size_t> find(Category category, std::string_view lemma) const;

  bool operator==(const Vocabulary &other) const {
    return terms_ == other.terms_ && categories_ == other.categories_;
  }

 private:
  std::vector<VocabularyTerm> terms_;
  CategorySet categories_;
  std::map<std::pair<Category, std::string>, std::size_t, std::less<>> index_;
};

// Top `size` terms by total count over the given characters, ties broken by
// (category, lemma). Throws Error when no character carries an attribute in
// the selected categories.
Vocabulary build_vocabulary(const Dataset &dataset, std::size_t size,
                            const CategorySet &categories);
Vocabulary build_vocabulary(const Dataset &dataset,
                            std::span<const std::size_t> rows, std::size_t size,
                            const CategorySet &categories);

// CSV `rank,category,lemma,count`, rank starting at 1.
void write_vocabulary_csv(const Vocabulary &vocab, std::ostream &out);

enum class FeatureKind { kBoW, kEmbedding };

std::string_view feature_kind_name(FeatureKind kind);

struct FeatureVector {
  std::vector<double> values;
  FeatureKind kind;
};

// Relative frequency of each vocabulary term among the character's
// in-vocabulary attribute occurrences; all zeros if there are none.
FeatureVector bow_vector(const CharacterRecord &character, const Vocabulary &vocab);

// Element-wise mean, accumulated in input order. Throws Error on an empty
// list or mismatched dimensions.
std::vector<double> aggregate_embedding(
    std::span<const std::vector<double>> attribute_vectors);

struct FeatureSpec {
  FeatureKind kind = FeatureKind::kEmbedding;
  std::size_t vocab_size = 1000;
  CategorySet categories = CategorySet::defaults();
};

// A featurizer fitted on a training subset. For bag-of-words that means the
// vocabulary; embeddings are looked up as-is.
class Featurizer {
 public:
  // Fits on dataset.characters[rows]. Embedding features require
  // dataset.embeddings.
  static Featurizer fit(const FeatureSpec &spec, const Dataset &dataset,
                        std::span<const std::size_t> rows);

  FeatureKind kind() const { return spec_.kind; }
  std::size_t dim() const;
  const Vocabulary &vocabulary() const { return vocab_; }

  // One row per requested character. Throws Error when an embedding row is
  // missing.
  Matrix transform(const Dataset &dataset, std::span<const std::size_t> rows) const;

 private:
  FeatureSpec spec_;
  Vocabulary vocab_;
  std::uint32_t embedding_dim_ = 0;
};

}  // namespace archlens

#endif  // ARCHLENS_FEATURIZE_H_
