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


#ifndef ARCHLENS_SYNTHETIC_H_
#define ARCHLENS_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "archlens/dataset.h"

namespace archlens {

// Generators for corpora with a known, planted class signal. Each class
// draws attribute lemmas from its own vocabulary, a fraction of which is
// exclusive to the class, and embeddings from an isotropic Gaussian whose
// centre depends on the class.
struct SignalOptions {
  std::uint32_t dim = 16;
  double spread = 1.0;                // within-class std per dimension
  double separation = 4.0;            // centroid distance, in units of spread
  double exclusive_fraction = 0.3;    // share of a class's lemmas it owns
  std::size_t lemmas_per_category = 200;  // per class
  std::size_t tokens_per_character = 40;
};

struct PlantedOptions {
  std::size_t detectives = 180;
  std::size_t non_detectives = 420;
  std::size_t authors = 12;
  std::size_t characters_per_novel = 4;
  std::size_t novels_per_figure = 3;  // recurring detective figures
  int first_year = 1850;
  int last_year = 1999;
  std::uint64_t seed = 42;
  SignalOptions signal;
};

// Labeled corpus with embeddings; every author writes both classes.
Dataset make_planted_corpus(const PlantedOptions &options);

struct CorpusOptions {
  std::size_t novels = 60;
  std::size_t characters_per_novel = 12;
  std::size_t authors = 15;
  int first_year = 1850;
  int last_year = 1999;
  // Probability that a novel features a detective as its lead character.
  double detective_rate = 0.4;
  // Detectives are only planted in novels published from this year on.
  int detectives_from_year = 0;
  std::uint64_t seed = 7;
  SignalOptions signal;
};

struct SyntheticCorpus {
  Dataset dataset;  // unlabeled, with embeddings
  std::vector<std::string> planted_detectives;
};

SyntheticCorpus make_unlabeled_corpus(const CorpusOptions &options);

}  // namespace archlens

#endif  // ARCHLENS_SYNTHETIC_H_
