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


#include <bit>
#include <cmath>
#include <cstring>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "archlens/dataset.h"
#include "archlens/error.h"
#include "doctest.h"
#include "test_util.h"

namespace archlens {
namespace {

using testing::character;

std::string line(const std::string &id, const std::string &extra = "") {
  return R"({"character_id":")" + id +
         R"(","novel_id":"n1","author":"Simenon","year":1931,"mention_count":40,)"
         R"("attributes":{"agent_verbs":["dire","dire","voir"],"patient_verbs":[],)"
         R"("modifiers":["gros"],"possessives":["pipe"]})" +
         extra + "}\n";
}

Dataset random_dataset(std::uint64_t seed, std::size_t n) {
  std::mt19937_64 gen(seed);
  Dataset d;
  for (std::size_t i = 0; i < n; ++i) {
    CharacterRecord c = character("c" + std::to_string(i), "n" + std::to_string(i % 7),
                                  "a" + std::to_string(i % 3),
                                  1800 + static_cast<int>(gen() % 200),
                                  static_cast<std::int64_t>(gen() % 500), std::nullopt);
    if (gen() % 3 != 0) c.label = gen() % 2 ? Label::kDetective : Label::kNonDetective;
    if (gen() % 4 == 0) c.figure_id = "fig" + std::to_string(gen() % 5);
    for (int t = 0; t < 12; ++t) {
      c.attributes.add(kAllCategories[gen() % 4], "l" + std::to_string(gen() % 9));
    }
    d.characters.push_back(std::move(c));
  }
  return d;
}

EmbeddingMatrix small_matrix() {
  EmbeddingMatrix m(4);
  const float a[] = {1.0f, -0.0f, std::numeric_limits<float>::denorm_min(), 3.4e38f};
  const float b[] = {0.1f, 0.2f, 0.3f, 0.4f};
  const float c[] = {-1e-30f, 7.0f, -7.0f, 0.0f};
  m.add("alpha", a);
  m.add("b\xC3\xA9ta", b);
  m.add("gamma", c);
  return m;
}

TEST_CASE("a detective line maps to a labeled record") {
  std::istringstream in(line("maigret-1", R"(,"label":"detective","figure_id":"maigret")"));
  const Dataset d = parse_characters(in);
  REQUIRE(d.characters.size() == 1);
  const CharacterRecord &c = d.characters[0];
  CHECK(c.label == Label::kDetective);
  CHECK(c.figure() == "maigret");
  CHECK(c.year == 1931);
  CHECK(c.attributes[Category::kAgentVerbs].at("dire") == 2);
  CHECK(c.attributes.total(CategorySet::defaults()) == 5);
}

TEST_CASE("duplicate character ids fail on the second line") {
  std::istringstream in(line("c1") + line("c1"));
  try {
    parse_characters(in);
    FAIL("expected a parse error");
  } catch (const ParseError &e) {
    CHECK(e.line() == 2);
    CHECK(std::string(e.what()).find("'c1'") != std::string::npos);
  }
}

TEST_CASE("malformed lines report their line number") {
  std::string negative = line("x");
  negative.replace(negative.find("40"), 2, "-4");
  for (const std::string &bad :
       {std::string("{not json}\n"), line("x", R"(,"label":"suspect")"),
        std::string(R"({"character_id":"x","novel_id":"n","author":"a","year":1900})") + "\n",
        negative,
        std::string(R"({"character_id":"x","novel_id":"n","author":"a","year":"1900",)"
                    R"("mention_count":1,"attributes":{}})") +
            "\n"}) {
    std::istringstream in("\n" + line("ok") + bad);
    try {
      parse_characters(in);
      FAIL("expected a parse error for: " << bad);
    } catch (const ParseError &e) {
      CHECK(e.line() == 3);
    }
  }
}

TEST_CASE("unknown keys are ignored and unknown categories warn") {
  std::istringstream in(
      R"({"character_id":"x","novel_id":"n","author":"a","year":1900,"mention_count":3,)"
      R"("colour":"blue","attributes":{"agent_verbs":["  Courir "],"gestures":["wink"]}})"
      "\n");
  std::vector<std::string> warnings;
  const Dataset d = parse_characters(in, &warnings);
  REQUIRE(d.characters.size() == 1);
  CHECK(d.characters[0].attributes[Category::kAgentVerbs].count("courir") == 1);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("gestures") != std::string::npos);
}

TEST_CASE("annotated-scale fixture keeps its class counts") {
  std::string text;
  for (int i = 0; i < 604; ++i) {
    text += line("c" + std::to_string(i),
                 i < 185 ? R"(,"label":"detective")" : R"(,"label":"non_detective")");
  }
  std::istringstream in(text);
  const Dataset d = parse_characters(in);
  int detectives = 0;
  int others = 0;
  for (const auto &c : d.characters) {
    (c.label == Label::kDetective ? detectives : others)++;
  }
  CHECK(detectives == 185);
  CHECK(others == 419);
}

TEST_CASE("serialization is a fixed point") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Dataset d = random_dataset(seed, 30);
    std::stringstream first;
    write_characters(d, first);
    const Dataset back = parse_characters(first);
    CHECK(back.characters == d.characters);
    std::stringstream second;
    write_characters(back, second);
    CHECK(second.str() == first.str());
  }
}

TEST_CASE("label overrides") {
  Dataset d = random_dataset(5, 4);
  std::istringstream labels("character_id,label\nc0,detective\nc1,non_detective\n");
  apply_labels(d, labels);
  CHECK(d.characters[0].label == Label::kDetective);
  CHECK(d.characters[1].label == Label::kNonDetective);
  std::istringstream unknown("character_id,label\nnobody,detective\n");
  CHECK_THROWS_AS(apply_labels(d, unknown), ParseError);
  std::istringstream bad("character_id,label\nc0,villain\n");
  CHECK_THROWS_AS(apply_labels(d, bad), ParseError);
  std::istringstream schema("id,label\nc0,detective\n");
  CHECK_THROWS_AS(apply_labels(d, schema), FormatError);
}

TEST_CASE("embeddings round-trip bit-exactly") {
  const EmbeddingMatrix m = small_matrix();
  std::stringstream buffer;
  write_embeddings(m, buffer);
  const std::string bytes = buffer.str();
  CHECK(bytes.substr(0, 4) == "CEMB");
  const EmbeddingMatrix back = read_embeddings(buffer);
  CHECK(back == m);
  for (std::size_t i = 0; i < m.size(); ++i) {
    CHECK(std::memcmp(back.row(i).data(), m.row(i).data(), 4 * sizeof(float)) == 0);
  }
  std::stringstream again;
  write_embeddings(back, again);
  CHECK(again.str() == bytes);
}

TEST_CASE("embedding header errors") {
  std::stringstream buffer;
  write_embeddings(small_matrix(), buffer);
  std::string bytes = buffer.str();

  std::string magic = bytes;
  magic.replace(0, 4, "XXXX");
  std::istringstream bad_magic(magic);
  CHECK_THROWS_AS(read_embeddings(bad_magic), FormatError);

  std::string version = bytes;
  version[4] = 2;
  std::istringstream bad_version(version);
  try {
    read_embeddings(bad_version);
    FAIL("expected a format error");
  } catch (const CorruptionError &) {
    FAIL("version errors are format errors, not corruption");
  } catch (const FormatError &) {
  }
}

TEST_CASE("short rows are corruption with an offset") {
  EmbeddingMatrix m(1024);
  std::vector<float> v(1024, 0.5f);
  m.add("c1", v);
  std::stringstream buffer;
  write_embeddings(m, buffer);
  std::string bytes = buffer.str();
  bytes.resize(bytes.size() - 4);  // 1023 floats in the row
  std::istringstream in(bytes);
  try {
    read_embeddings(in);
    FAIL("expected a corruption error");
  } catch (const CorruptionError &e) {
    const std::uint64_t header = 4 + 4 + 4 + 8;
    CHECK(e.offset() >= header);
    CHECK(e.offset() <= bytes.size());
  }

  std::istringstream trailing(buffer.str() + "junk");
  CHECK_THROWS_AS(read_embeddings(trailing), CorruptionError);
}

TEST_CASE("embedding matrix rejects inconsistent rows") {
  EmbeddingMatrix m(2);
  const float ok[] = {1.0f, 2.0f};
  const float wrong[] = {1.0f, 2.0f, 3.0f};
  m.add("a", ok);
  CHECK_THROWS_AS(m.add("a", ok), Error);
  CHECK_THROWS_AS(m.add("b", wrong), Error);
  CHECK(m.find("zzz") == nullptr);
}

TEST_CASE("validation findings") {
  Dataset d;
  d.characters.push_back(character("a", "n", "x", 1900, 5, Label::kDetective,
                                   {{Category::kAgentVerbs, "voir", 1}}));
  d.characters.push_back(character("b", "n", "x", 1910, 5, Label::kNonDetective,
                                   {{Category::kModifiers, "grand", 2}}));
  d.characters.push_back(character("c", "n", "x", 1920, 5, std::nullopt));
  d.embeddings.emplace(2);
  const float v[] = {0.0f, 1.0f};
  d.embeddings->add("a", v);
  d.embeddings->add("b", v);
  CHECK(validate_dataset(d).empty());

  Dataset missing = d;
  missing.embeddings.emplace(2);
  missing.embeddings->add("a", v);
  auto findings = validate_dataset(missing);
  REQUIRE(findings.size() == 1);
  CHECK(findings[0] == Finding{"b", "missing embedding"});

  Dataset old = d;
  old.characters[2].year = 10;
  findings = validate_dataset(old);
  REQUIRE(findings.size() == 1);
  CHECK(findings[0] == Finding{"c", "year out of range"});
  CHECK(validate_dataset(old, {0, 2100}).empty());

  Dataset odd = d;
  odd.characters[2].mention_count = -1;
  odd.characters[2].attributes.add(Category::kPossessives, "Pipe");
  odd.embeddings.emplace(2);
  const float nan[] = {std::nanf(""), 0.0f};
  odd.embeddings->add("a", nan);
  odd.embeddings->add("b", v);
  findings = validate_dataset(odd);
  CHECK(findings.size() == 3);
}

}  // namespace
}  // namespace archlens
