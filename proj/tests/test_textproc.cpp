// Copyright 2026 The sqgen Authors.
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <string>

#include "sqgen/embedding.hpp"
#include "sqgen/error.hpp"
#include "sqgen/matcher.hpp"
#include "sqgen/rng.hpp"
#include "sqgen/taxonomy.hpp"
#include "sqgen/text.hpp"
#include "support.hpp"

using namespace sqgen;

namespace {

Taxonomy small_taxonomy() {
  return parse_taxonomy(
      "java\tToolSkill\tJava\tjava\n"
      "js\tToolSkill\tJavaScript\tjavascript|java script\n"
      "ms\tDegree\tMaster's degree\tmaster's degree|masters\n"
      "deg\tDegree\tDegree\tdegree\n"
      "cpp\tToolSkill\tC/C++\tc/c++|c++\n"
      "zh\tSpokenLanguage\tMandarin\tmandarin|chinese\n"
      "zh2\tSpokenLanguage\tChinese (any)\tchinese\n");
}

}  // namespace

TEST_CASE("split_sentences on a bulleted posting") {
  const auto s = split_sentences("Requirements:\n- 4+ years Java.\nGreat benefits.");
  REQUIRE(s.size() == 3);
  CHECK(s[0].text == "Requirements:");
  CHECK(s[1].text == "- 4+ years Java.");
  CHECK(s[2].text == "Great benefits.");
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s[i].position == i);
    CHECK(s[i].tokens == tokenize(s[i].text));
  }
}

TEST_CASE("split_sentences edge cases") {
  CHECK(split_sentences("").empty());
  CHECK(split_sentences("\n\n  \n").empty());
  const auto one = split_sentences("One line no punctuation");
  REQUIRE(one.size() == 1);
  CHECK(one[0].text == "One line no punctuation");
  const auto multi = split_sentences("Stop. Go! Why? Yes; no", "j1");
  REQUIRE(multi.size() == 5);
  CHECK(multi[3].text == "Yes;");
  CHECK(multi[4].text == "no");
  CHECK(multi[0].job_id == "j1");
  // a period not followed by whitespace does not split
  CHECK(split_sentences("Use node.js daily").size() == 1);
}

TEST_CASE("split_sentences preserves non-delimiter characters") {
  Rng rng(11);
  const std::string alphabet = "ab .!?;\n\t-x";
  for (int trial = 0; trial < 300; ++trial) {
    std::string body;
    const auto n = rng.below(60);
    for (std::size_t i = 0; i < n; ++i) body.push_back(alphabet[rng.below(alphabet.size())]);
    const auto sents = split_sentences(body);
    std::string joined, original;
    for (const auto& s : sents) {
      CHECK_FALSE(s.text.empty());
      for (char c : s.text) {
        if (!std::isspace(static_cast<unsigned char>(c))) joined.push_back(c);
      }
    }
    for (char c : body) {
      if (!std::isspace(static_cast<unsigned char>(c))) original.push_back(c);
    }
    CHECK(joined == original);
  }
}

TEST_CASE("tokenize examples") {
  CHECK(tokenize("4+ years of Java/C++") == Tokens{"4+", "years", "of", "java", "c++"});
  CHECK(tokenize("Bachelor's Degree") == Tokens{"bachelor's", "degree"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("C# and F# via node.js.") == Tokens{"c#", "and", "f#", "via", "node.js"});
  CHECK(tokenize("  --  ").empty());
  CHECK(tokenize("Zürich") == Tokens{"z\xc3\xbcrich"});
}

TEST_CASE("tokenize is idempotent over its own output") {
  Rng rng(5);
  const std::string alphabet = "aZ9 .'+#/-,\xc3\xa9";
  for (int trial = 0; trial < 1000; ++trial) {
    std::string text;
    const auto n = rng.below(40);
    for (std::size_t i = 0; i < n; ++i) text.push_back(alphabet[rng.below(alphabet.size())]);
    const auto toks = tokenize(text);
    CHECK(tokenize(join(toks, " ")) == toks);
  }
}

TEST_CASE("strip_tags removes markup") {
  // inline tags become spaces, block tags newlines
  CHECK(strip_tags("Java <b>required</b>") == "Java  required ");
  CHECK(strip_tags("<li>one</li><li>two</li>") == "\none\n\ntwo\n");
  CHECK(strip_tags("a < b") == "a < b");
}

TEST_CASE("fnv1a64 reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("zzzqx") == 1353380815162120372ULL);
}

TEST_CASE("embedding lookup") {
  EmbeddingTable t({"java", "python"}, 4, 4096);
  for (std::size_t i = 0; i < t.data().size(); ++i) t.data()[i] = static_cast<double>(i);
  SUBCASE("in-vocab token returns its row") {
    const auto r = t.lookup("python");
    CHECK(std::equal(r.begin(), r.end(), t.row(1).begin()));
  }
  SUBCASE("OOV bucket") {
    CHECK(t.row_index("zzzqx") == 2 + 2228);
    CHECK(t.bucket_of("zzzqx") == 2228);
  }
  SUBCASE("purity") {
    const auto a = t.lookup("unseen-token");
    const auto b = t.lookup("unseen-token");
    CHECK(std::equal(a.begin(), a.end(), b.begin()));
  }
  SUBCASE("mean of nothing is zero") {
    const auto m = t.mean({});
    CHECK(m.size() == 4);
    CHECK(std::all_of(m.begin(), m.end(), [](double v) { return v == 0.0; }));
  }
}

TEST_CASE("taxonomy parsing and validation") {
  const auto tax = small_taxonomy();
  CHECK(tax.size() == 7);
  REQUIRE(tax.find("cpp") != nullptr);
  CHECK(tax.find("cpp")->surfaces.front() == Tokens{"c", "c++"});
  CHECK(tax.find("nope") == nullptr);
  CHECK(tax.of_type(EntityType::kDegree).size() == 2);
  try {
    parse_taxonomy("a\tToolSkill\tA\ta\na\tToolSkill\tA\tb\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(parse_taxonomy("a\tPlanet\tA\ta\n"), ParseError);
  CHECK_THROWS_AS(parse_taxonomy("a\tToolSkill\tA\n"), ParseError);
  CHECK_THROWS_AS(parse_taxonomy("a\tToolSkill\tA\t--\n"), ParseError);
  try {
    parse_taxonomy("# header\n\nok\tDegree\tOk\tok\nbad line\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
  const auto again = parse_taxonomy(format_taxonomy(tax));
  REQUIRE(again.size() == tax.size());
  for (std::size_t i = 0; i < tax.size(); ++i) {
    CHECK(again.at(i).id == tax.at(i).id);
    CHECK(again.at(i).surfaces == tax.at(i).surfaces);
  }
}

TEST_CASE("bundled taxonomy loads") {
  const auto tax = load_taxonomy(std::string(SQGEN_DATA_DIR) + "/taxonomy.tsv");
  CHECK(tax.size() >= 150);
  for (auto t : {EntityType::kDegree, EntityType::kToolSkill, EntityType::kSpokenLanguage, EntityType::kCredential}) {
    CHECK_FALSE(tax.of_type(t).empty());
  }
}

TEST_CASE("matcher examples") {
  const auto tax = small_taxonomy();
  const SurfaceMatcher m(tax);
  const auto one = m.match(tokenize("experience in java"));
  REQUIRE(one.size() == 1);
  CHECK(one[0] == MentionSpan{"java", 2, 3});
  const auto longest = m.match(tokenize("master's degree required"));
  REQUIRE(longest.size() == 1);
  CHECK(longest[0] == MentionSpan{"ms", 0, 2});
  CHECK(m.match(tokenize("nothing to see here")).empty());
  // one surface shared by two entities yields a span per entity
  const auto shared = m.match(tokenize("fluent chinese"));
  REQUIRE(shared.size() == 2);
  CHECK(shared[0].entity_id == "zh");
  CHECK(shared[1].entity_id == "zh2");
  // non-overlap: "java script" wins over "java" at the same start
  const auto js = m.match(tokenize("java script and java"));
  REQUIRE(js.size() == 2);
  CHECK(js[0] == MentionSpan{"js", 0, 2});
  CHECK(js[1] == MentionSpan{"java", 3, 4});
}

TEST_CASE("matcher equals the naive oracle on random sequences") {
  const auto tax = load_taxonomy(std::string(SQGEN_DATA_DIR) + "/taxonomy.tsv");
  const SurfaceMatcher m(tax);
  std::vector<std::string> pool{"the", "and", "with", "xyz", "of", "degree", "years"};
  for (const auto& e : tax.entities()) {
    for (const auto& s : e.surfaces) pool.insert(pool.end(), s.begin(), s.end());
  }
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    Tokens toks;
    const auto n = rng.below(25);
    for (std::size_t i = 0; i < n; ++i) toks.push_back(rng.pick(pool));
    CHECK(m.match(toks) == testing::naive_match(tax, toks));
  }
}
