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

#include <filesystem>

#include "json.hpp"
#include "sqgen/error.hpp"
#include "sqgen/model_io.hpp"
#include "support.hpp"

using namespace sqgen;
namespace fs = std::filesystem;

namespace {

const testing::SmallWorld& world() {
  static const auto w = testing::small_world(11);
  return w;
}

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("sqgen_model_io_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string with_field(const std::string& text, const std::string& key, const nlohmann::json& value) {
  auto j = nlohmann::json::parse(text);
  j[key] = value;
  return j.dump();
}

}  // namespace

TEST_CASE("tc round trip predicts identically") {
  const auto& tc = world().models->generator.tc();
  const auto text = serialize_tc(tc);
  const auto back = deserialize_tc(text);
  CHECK(serialize_tc(back) == text);
  for (const auto& s : world().corpus.sentences.test) {
    const auto t = tokenize(s.text);
    CHECK(tc_probabilities(back, t) == tc_probabilities(tc, t));
  }
}

TEST_CASE("scorer and ranker round trips") {
  const auto& m = *world().models;
  const ScorerFile sf{m.generator.extractor().scorer(), m.generator.extractor().frequency()};
  CHECK(deserialize_scorer(serialize_scorer(sf)) == sf);
  const RankerFile rf{m.ensemble, m.schema, m.pmi};
  CHECK(deserialize_ranker(serialize_ranker(rf)) == rf);
}

TEST_CASE("header checks") {
  const auto& m = *world().models;
  const auto text = serialize_ranker({m.ensemble, m.schema, m.pmi});
  CHECK_THROWS_AS(deserialize_ranker(with_field(text, "version", 2)), FormatError);
  CHECK_THROWS_AS(deserialize_ranker(with_field(text, "format", "other")), FormatError);
  CHECK_THROWS_AS(deserialize_tc(text), FormatError);  // wrong kind
  CHECK_THROWS_AS(deserialize_tc("{not json"), FormatError);
  CHECK_THROWS_AS(deserialize_scorer("[]"), FormatError);
  auto j = nlohmann::json::parse(text);
  j.erase("ensemble");
  CHECK_THROWS_AS(deserialize_ranker(j.dump()), FormatError);
}

TEST_CASE("ranker arity must match its schema") {
  const auto& m = *world().models;
  RankerFile rf{m.ensemble, m.schema, m.pmi};
  rf.ensemble.num_features += 1;
  CHECK_THROWS_AS(deserialize_ranker(serialize_ranker(rf)), FormatError);
}

TEST_CASE("bundle directory reproduces generation") {
  const auto& w = world();
  const auto dir = scratch_dir("bundle");
  const BundlePaths p(dir);
  const auto& m = *w.models;
  write_text_file(p.tc, serialize_tc(m.generator.tc()));
  write_text_file(p.scorer, serialize_scorer({m.generator.extractor().scorer(), m.generator.extractor().frequency()}));
  write_text_file(p.ranker, serialize_ranker({m.ensemble, m.schema, m.pmi}));
  save_taxonomy(m.generator.taxonomy(), p.taxonomy);
  const auto loaded = load_bundle(dir, m.k);
  for (std::size_t i = 0; i < 30; ++i) {
    const auto& job = w.corpus.jobs.test[i];
    CHECK(generate_questions(job, loaded) == generate_questions(job, m));
  }
  fs::remove(p.ranker);
  CHECK_THROWS_AS(load_bundle(dir), IoError);
  fs::remove_all(dir);
}

TEST_CASE("text files") {
  const auto dir = scratch_dir("text");
  write_text_file(dir / "a.txt", "one");
  write_text_file(dir / "a.txt", "two");
  CHECK(read_text_file(dir / "a.txt") == "two");
  CHECK(std::distance(fs::directory_iterator(dir), fs::directory_iterator{}) == 1);
  CHECK_THROWS_AS(read_text_file(dir / "missing.txt"), IoError);
  fs::remove_all(dir);
}
