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

#include "archlens/dataset.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <set>
#include <unordered_set>

#include "archlens/csv.h"
#include "archlens/error.h"
#include "archlens/text.h"
#include "binary_io.h"
#include "json.hpp"

namespace archlens {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr std::array<char, 4> kEmbeddingMagic = {'C', 'E', 'M', 'B'};
constexpr std::uint32_t kEmbeddingVersion = 1;

// Order of the attribute arrays inside a serialized record.
constexpr std::array<Category, 4> kFileCategoryOrder = {
    Category::kAgentVerbs, Category::kPatientVerbs, Category::kModifiers,
    Category::kPossessives};

const json &require(const json &object, const char *key, std::size_t line) {
  auto it = object.find(key);
  if (it == object.end()) {
    throw ParseError(line, std::string("missing key '") + key + "'");
  }
  return *it;
}

std::string require_string(const json &object, const char *key,
                           std::size_t line) {
  const json &value = require(object, key, line);
  if (!value.is_string()) {
    throw ParseError(line, std::string("'") + key + "' must be a string");
  }
  return std::string(trim(value.get_ref<const std::string &>()));
}

std::int64_t require_integer(const json &object, const char *key,
                             std::size_t line) {
  const json &value = require(object, key, line);
  if (!value.is_number_integer()) {
    throw ParseError(line, std::string("'") + key + "' must be an integer");
  }
  return value.get<std::int64_t>();
}

CharacterRecord parse_record(const json &object, std::size_t line,
                             std::set<std::string> &unknown_categories) {
  if (!object.is_object()) throw ParseError(line, "expected a JSON object");

  CharacterRecord record;
  record.character_id = require_string(object, "character_id", line);
  if (record.character_id.empty()) {
    throw ParseError(line, "'character_id' must be non-empty");
  }
  record.novel_id = require_string(object, "novel_id", line);
  record.author = require_string(object, "author", line);
  if (auto it = object.find("figure_id"); it != object.end() && !it->is_null()) {
    if (!it->is_string()) throw ParseError(line, "'figure_id' must be a string");
    record.figure_id = std::string(trim(it->get_ref<const std::string &>()));
  }

  const std::int64_t year = require_integer(object, "year", line);
  if (year < std::numeric_limits<int>::min() ||
      year > std::numeric_limits<int>::max()) {
    throw ParseError(line, "'year' out of integer range");
  }
  record.year = static_cast<int>(year);

  const json &mentions = require(object, "mention_count", line);
  if (!mentions.is_number_integer() || mentions.get<std::int64_t>() < 0) {
    throw ParseError(line, "'mention_count' must be a non-negative integer");
  }
  record.mention_count = mentions.get<std::int64_t>();

  const json &attributes = require(object, "attributes", line);
  if (!attributes.is_object()) {
    throw ParseError(line, "'attributes' must be an object");
  }
  for (const auto &[key, values] : attributes.items()) {
    auto category = parse_category(key);
    if (!category) {
      unknown_categories.insert(key);
      continue;
    }
    if (!values.is_array()) {
      throw ParseError(line, "attribute category '" + key + "' must be an array");
    }
    for (const json &value : values) {
      if (!value.is_string()) {
        throw ParseError(line, "attribute lemmas in '" + key + "' must be strings");
      }
      std::string lemma = lowercase(trim(value.get_ref<const std::string &>()));
      if (lemma.empty()) {
        throw ParseError(line, "empty lemma in '" + key + "'");
      }
      record.attributes.add(*category, std::move(lemma));
    }
  }

  if (auto it = object.find("label"); it != object.end() && !it->is_null()) {
    if (!it->is_string()) throw ParseError(line, "'label' must be a string");
    auto label = parse_label(it->get_ref<const std::string &>());
    if (!label) {
      throw ParseError(line, "unknown label '" +
                                 it->get_ref<const std::string &>() +
                                 "' (expected detective or non_detective)");
    }
    record.label = label;
  }
  return record;
}

std::ifstream open_input(const std::filesystem::path &path,
                         std::ios::openmode mode = std::ios::in) {
  std::ifstream in(path, mode);
  if (!in) throw FormatError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_output(const std::filesystem::path &path,
                          std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode | std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
  return out;
}

}  // namespace

std::string_view label_name(Label label) {
  return label == Label::kDetective ? "detective" : "non_detective";
}

std::optional<Label> parse_label(std::string_view text) {
  text = trim(text);
  if (text == "detective") return Label::kDetective;
  if (text == "non_detective") return Label::kNonDetective;
  return std::nullopt;
}

std::string_view category_name(Category category) {
  switch (category) {
    case Category::kAgentVerbs:
      return "agent_verbs";
    case Category::kModifiers:
      return "modifiers";
    case Category::kPatientVerbs:
      return "patient_verbs";
    case Category::kPossessives:
      return "possessives";
  }
  return "unknown";
}

std::optional<Category> parse_category(std::string_view text) {
  for (Category c : kAllCategories) {
    if (category_name(c) == text) return c;
  }
  return std::nullopt;
}

std::vector<Category> CategorySet::members() const {
  std::vector<Category> out;
  for (Category c : kAllCategories) {
    if (contains(c)) out.push_back(c);
  }
  return out;
}

CategorySet parse_category_set(std::string_view text) {
  CategorySet set;
  while (!text.empty()) {
    const auto comma = text.find(',');
    std::string_view item = trim(text.substr(0, comma));
    if (!item.empty()) {
      auto category = parse_category(item);
      if (!category) {
        throw UsageError("unknown attribute category '" + std::string(item) + "'");
      }
      set.insert(*category);
    }
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (set.empty()) throw UsageError("empty attribute category list");
  return set;
}

void AttributeBag::add(Category category, std::string lemma, std::int64_t count) {
  bags_[static_cast<std::size_t>(category)][std::move(lemma)] += count;
}

std::int64_t AttributeBag::total(Category category) const {
  std::int64_t sum = 0;
  for (const auto &[lemma, count] : (*this)[category]) sum += count;
  return sum;
}

std::int64_t AttributeBag::total(const CategorySet &categories) const {
  std::int64_t sum = 0;
  for (Category c : kAllCategories) {
    if (categories.contains(c)) sum += total(c);
  }
  return sum;
}

EmbeddingMatrix::EmbeddingMatrix(std::uint32_t dim) : dim_(dim) {
  if (dim == 0) throw Error("embedding dimension must be positive");
}

void EmbeddingMatrix::add(std::string id, std::span<const float> values) {
  if (values.size() != dim_) {
    throw Error("embedding for '" + id + "' has " +
                std::to_string(values.size()) + " components, expected " +
                std::to_string(dim_));
  }
  if (index_.contains(id)) throw Error("duplicate embedding id '" + id + "'");
  index_.emplace(id, ids_.size());
  ids_.push_back(std::move(id));
  values_.insert(values_.end(), values.begin(), values.end());
}

bool EmbeddingMatrix::contains(std::string_view id) const {
  return index_.contains(std::string(id));
}

const float *EmbeddingMatrix::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) return nullptr;
  return values_.data() + it->second * dim_;
}

bool EmbeddingMatrix::operator==(const EmbeddingMatrix &other) const {
  return dim_ == other.dim_ && ids_ == other.ids_ &&
         values_.size() == other.values_.size() &&
         std::memcmp(values_.data(), other.values_.data(),
                     values_.size() * sizeof(float)) == 0;
}

std::optional<std::size_t> Dataset::find(std::string_view character_id) const {
  for (std::size_t i = 0; i < characters.size(); ++i) {
    if (characters[i].character_id == character_id) return i;
  }
  return std::nullopt;
}

Dataset parse_characters(std::istream &in, std::vector<std::string> *warnings) {
  Dataset dataset;
  std::unordered_set<std::string> seen;
  std::set<std::string> unknown_categories;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (trim(text).empty()) continue;
    json object;
    try {
      object = json::parse(text);
    } catch (const json::parse_error &e) {
      throw ParseError(line, std::string("invalid JSON: ") + e.what());
    }
    CharacterRecord record = parse_record(object, line, unknown_categories);
    if (!seen.insert(record.character_id).second) {
      throw ParseError(line, "duplicate character_id '" + record.character_id + "'");
    }
    dataset.characters.push_back(std::move(record));
  }
  if (warnings != nullptr) {
    for (const auto &name : unknown_categories) {
      warnings->push_back("ignored unknown attribute category '" + name + "'");
    }
  }
  return dataset;
}

Dataset load_characters(const std::filesystem::path &path,
                        std::vector<std::string> *warnings) {
  auto in = open_input(path);
  return parse_characters(in, warnings);
}

void write_characters(const Dataset &dataset, std::ostream &out) {
  for (const CharacterRecord &record : dataset.characters) {
    ordered_json object;
    object["character_id"] = record.character_id;
    object["novel_id"] = record.novel_id;
    if (!record.figure_id.empty()) object["figure_id"] = record.figure_id;
    object["author"] = record.author;
    object["year"] = record.year;
    object["mention_count"] = record.mention_count;
    ordered_json attributes = ordered_json::object();
    for (Category c : kFileCategoryOrder) {
      ordered_json lemmas = ordered_json::array();
      for (const auto &[lemma, count] : record.attributes[c]) {
        for (std::int64_t i = 0; i < count; ++i) lemmas.push_back(lemma);
      }
      attributes[std::string(category_name(c))] = std::move(lemmas);
    }
    object["attributes"] = std::move(attributes);
    if (record.label) object["label"] = std::string(label_name(*record.label));
    out << object.dump() << '\n';
  }
}

void save_characters(const Dataset &dataset, const std::filesystem::path &path) {
  auto out = open_output(path);
  write_characters(dataset, out);
  if (!out) throw FormatError("failed writing '" + path.string() + "'");
}

void apply_labels(Dataset &dataset, std::istream &in) {
  CsvReader reader(in);
  const std::size_t id_col = reader.column("character_id");
  const std::size_t label_col = reader.column("label");
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < dataset.characters.size(); ++i) {
    index.emplace(dataset.characters[i].character_id, i);
  }
  std::vector<std::string> fields;
  while (reader.next(fields)) {
    const std::string id(trim(fields[id_col]));
    auto it = index.find(id);
    if (it == index.end()) {
      throw ParseError(reader.line(), "unknown character_id '" + id + "'");
    }
    auto label = parse_label(fields[label_col]);
    if (!label) {
      throw ParseError(reader.line(), "unknown label '" + fields[label_col] + "'");
    }
    dataset.characters[it->second].label = label;
  }
}

EmbeddingMatrix read_embeddings(std::istream &in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (in.gcount() != 4 || magic != kEmbeddingMagic) {
    throw FormatError("not an embeddings file (bad magic)");
  }
  binary::Reader reader(in, magic.size());
  const auto version = reader.get<std::uint32_t>("header");
  if (version != kEmbeddingVersion) {
    throw FormatError("unsupported embeddings version " + std::to_string(version));
  }
  const auto dim = reader.get<std::uint32_t>("header");
  const auto count = reader.get<std::uint64_t>("header");
  if (dim == 0) throw CorruptionError(8, "dim must be positive");

  EmbeddingMatrix matrix(dim);
  std::vector<float> row(dim);
  std::string id;
  for (std::uint64_t r = 0; r < count; ++r) {
    const std::uint64_t record_start = reader.offset();
    const auto id_len = reader.get<std::uint16_t>("record id length");
    id.assign(id_len, '\0');
    reader.read_bytes(id.data(), id_len, "record id");
    if (id.empty()) throw CorruptionError(record_start, "empty character id");
    for (std::uint32_t j = 0; j < dim; ++j) {
      row[j] = reader.get_f32("record vector");
      if (!std::isfinite(row[j])) {
        throw CorruptionError(reader.offset() - 4,
                              "non-finite component for '" + id + "'");
      }
    }
    if (matrix.contains(id)) {
      throw CorruptionError(record_start, "duplicate character id '" + id + "'");
    }
    matrix.add(id, row);
  }
  if (!reader.at_end()) {
    throw CorruptionError(reader.offset(), "trailing bytes after last record");
  }
  return matrix;
}

EmbeddingMatrix read_embeddings(const std::filesystem::path &path) {
  auto in = open_input(path, std::ios::in | std::ios::binary);
  return read_embeddings(in);
}

void write_embeddings(const EmbeddingMatrix &matrix, std::ostream &out) {
  out.write(kEmbeddingMagic.data(), kEmbeddingMagic.size());
  binary::put<std::uint32_t>(out, kEmbeddingVersion);
  binary::put<std::uint32_t>(out, matrix.dim());
  binary::put<std::uint64_t>(out, matrix.size());
  for (std::size_t r = 0; r < matrix.size(); ++r) {
    const std::string &id = matrix.ids()[r];
    if (id.size() > std::numeric_limits<std::uint16_t>::max()) {
      throw FormatError("character id too long for embeddings file: '" + id + "'");
    }
    binary::put<std::uint16_t>(out, static_cast<std::uint16_t>(id.size()));
    out.write(id.data(), static_cast<std::streamsize>(id.size()));
    for (float v : matrix.row(r)) binary::put_f32(out, v);
  }
}

void write_embeddings(const EmbeddingMatrix &matrix,
                      const std::filesystem::path &path) {
  auto out = open_output(path, std::ios::out | std::ios::binary);
  write_embeddings(matrix, out);
  if (!out) throw FormatError("failed writing '" + path.string() + "'");
}

std::vector<Finding> validate_dataset(const Dataset &dataset,
                                      const ValidationOptions &options) {
  std::vector<Finding> findings;
  std::unordered_set<std::string_view> seen;
  for (const CharacterRecord &record : dataset.characters) {
    const std::string &id = record.character_id;
    if (id.empty()) findings.push_back({id, "empty character_id"});
    if (!seen.insert(id).second) findings.push_back({id, "duplicate character_id"});
    if (record.mention_count < 0) findings.push_back({id, "negative mention_count"});
    if (record.year < options.min_year || record.year > options.max_year) {
      findings.push_back({id, "year out of range"});
    }
    for (Category c : kAllCategories) {
      for (const auto &[lemma, count] : record.attributes[c]) {
        if (lemma.empty() || trim(lemma) != lemma || lowercase(lemma) != lemma) {
          findings.push_back({id, "invalid lemma '" + lemma + "' in " +
                                      std::string(category_name(c))});
        }
        if (count < 1) {
          findings.push_back({id, "non-positive count for '" + lemma + "' in " +
                                      std::string(category_name(c))});
        }
      }
    }
    if (dataset.embeddings && record.label &&
        !dataset.embeddings->contains(record.character_id)) {
      findings.push_back({id, "missing embedding"});
    }
  }
  if (dataset.embeddings) {
    const EmbeddingMatrix &m = *dataset.embeddings;
    for (std::size_t r = 0; r < m.size(); ++r) {
      for (float v : m.row(r)) {
        if (!std::isfinite(v)) {
          findings.push_back({m.ids()[r], "non-finite embedding component"});
          break;
        }
      }
    }
  }
  return findings;
}

}  // namespace archlens
