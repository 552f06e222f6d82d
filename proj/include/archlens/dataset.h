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

// Corpus data model: characters with their attribute bags and metadata, the
// dense embedding matrix, and the readers/writers for their interchange
// files.
//
// Characters file: UTF-8, one JSON object per line:
//
//   {"character_id": "...", "novel_id": "...", "figure_id": "...",
//    "author": "...", "year": 1907, "mention_count": 412,
//    "attributes": {"agent_verbs": [...], "patient_verbs": [...],
//                   "modifiers": [...], "possessives": [...]},
//    "label": "detective" | "non_detective"}
//
// figure_id and label are optional. Attribute arrays list lemma occurrences
// with repetition. Unknown keys are ignored; unknown attribute categories
// are ignored with a warning.
//
// Embeddings file (little-endian):
//
//   "CEMB" | u32 version = 1 | u32 dim | u64 count |
//   count x [u16 id_len | id bytes (UTF-8) | dim x f32]

#ifndef ARCHLENS_DATASET_H_
#define ARCHLENS_DATASET_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <initializer_list>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace archlens {

enum class Label { kDetective, kNonDetective };

std::string_view label_name(Label label);
std::optional<Label> parse_label(std::string_view text);

// Attribute categories. Declared in name order so that enum order and
// lexicographic name order agree.
enum class Category { kAgentVerbs, kModifiers, kPatientVerbs, kPossessives };

inline constexpr std::array<Category, 4> kAllCategories = {
    Category::kAgentVerbs, Category::kModifiers, Category::kPatientVerbs,
    Category::kPossessives};

std::string_view category_name(Category category);
std::optional<Category> parse_category(std::string_view text);

class CategorySet {
 public:
  constexpr CategorySet() = default;
  constexpr CategorySet(std::initializer_list<Category> categories) {
    for (Category c : categories) insert(c);
  }

  // Agent verbs, modifiers and possessives; patient verbs are left out.
  static constexpr CategorySet defaults() {
    return {Category::kAgentVerbs, Category::kModifiers, Category::kPossessives};
  }
  static constexpr CategorySet all() {
    return {Category::kAgentVerbs, Category::kModifiers,
            Category::kPatientVerbs, Category::kPossessives};
  }

  constexpr void insert(Category c) { bits_ |= bit(c); }
  constexpr void erase(Category c) { bits_ &= ~bit(c); }
  constexpr bool contains(Category c) const { return (bits_ & bit(c)) != 0; }
  constexpr bool empty() const { return bits_ == 0; }
  std::vector<Category> members() const;

  bool operator==(const CategorySet &) const = default;

 private:
  static constexpr unsigned bit(Category c) {
    return 1u << static_cast<unsigned>(c);
  }
  unsigned bits_ = 0;
};

// Parses a comma-separated list of category names.
CategorySet parse_category_set(std::string_view text);

// One multiset of lemmas per category.
class AttributeBag {
 public:
  using Counts = std::map<std::string, std::int64_t, std::less<>>;

  void add(Category category, std::string lemma, std::int64_t count = 1);

  const Counts &operator[](Category category) const {
    return bags_[static_cast<std::size_t>(category)];
  }

  std::int64_t total(Category category) const;
  std::int64_t total(const CategorySet &categories) const;

  bool operator==(const AttributeBag &) const = default;

 private:
  std::array<Counts, 4> bags_;
};

struct CharacterRecord {
  std::string character_id;
  std::string novel_id;
  // Cross-novel identity of the figure (e.g. every Maigret shares one id).
  // Empty means "same as character_id".
  std::string figure_id;
  std::string author;
  int year = 0;
  std::int64_t mention_count = 0;
  AttributeBag attributes;
  std::optional<Label> label;

  std::string_view figure() const {
    return figure_id.empty() ? std::string_view(character_id)
                             : std::string_view(figure_id);
  }

  bool operator==(const CharacterRecord &) const = default;
};

// Dense per-character vectors, stored in insertion order.
class EmbeddingMatrix {
 public:
  explicit EmbeddingMatrix(std::uint32_t dim = 1024);

  std::uint32_t dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  const std::vector<std::string> &ids() const { return ids_; }

  // Throws Error on a duplicate id or a vector of the wrong length.
  void add(std::string id, std::span<const float> values);

  bool contains(std::string_view id) const;
  // Null when the id is absent.
  const float *find(std::string_view id) const;
  std::span<const float> row(std::size_t index) const {
    return {values_.data() + index * dim_, dim_};
  }

  // Bitwise equality of ids, order and vector contents.
  bool operator==(const EmbeddingMatrix &other) const;

 private:
  std::uint32_t dim_;
  std::vector<std::string> ids_;
  std::vector<float> values_;
  std::unordered_map<std::string, std::size_t> index_;
};

struct Dataset {
  std::vector<CharacterRecord> characters;
  std::optional<EmbeddingMatrix> embeddings;

  // Index of the character with the given id, if present.
  std::optional<std::size_t> find(std::string_view character_id) const;
};

// Reads the characters file. Warnings (unknown attribute categories) are
// appended to `warnings` when non-null. Throws ParseError with a 1-based line
// number on malformed input or a duplicate character_id.
Dataset parse_characters(std::istream &in,
                         std::vector<std::string> *warnings = nullptr);
Dataset load_characters(const std::filesystem::path &path,
                        std::vector<std::string> *warnings = nullptr);

// Canonical serialization; parse_characters(write_characters(d)) == d.
void write_characters(const Dataset &dataset, std::ostream &out);
void save_characters(const Dataset &dataset, const std::filesystem::path &path);

// Applies a `character_id,label` CSV on top of the parsed labels. Unknown ids
// and unknown label values are errors.
void apply_labels(Dataset &dataset, std::istream &in);

// Throws FormatError on bad magic or version, CorruptionError (with the byte
// offset) on truncated or inconsistent records.
EmbeddingMatrix read_embeddings(std::istream &in);
EmbeddingMatrix read_embeddings(const std::filesystem::path &path);
void write_embeddings(const EmbeddingMatrix &matrix, std::ostream &out);
void write_embeddings(const EmbeddingMatrix &matrix,
                      const std::filesystem::path &path);

struct Finding {
  std::string character_id;
  std::string reason;

  bool operator==(const Finding &) const = default;
};

struct ValidationOptions {
  int min_year = 1700;
  int max_year = 2100;
};

// Checks every type invariant; an empty result means the dataset is clean.
std::vector<Finding> validate_dataset(const Dataset &dataset,
                                      const ValidationOptions &options = {});

}  // namespace archlens

#endif  // ARCHLENS_DATASET_H_
