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

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "sqgen/dan.hpp"
#include "sqgen/gbdt.hpp"
#include "sqgen/param_extract.hpp"
#include "sqgen/pipeline.hpp"
#include "sqgen/ranker.hpp"

namespace sqgen {

// Model files are JSON objects tagged {"format": "sqgen", "kind": ...,
// "version": 1}. Readers throw FormatError on a wrong format, kind or
// version, and on missing or ill-shaped fields.
inline constexpr int kModelFormatVersion = 1;

std::string serialize_tc(const DanTcModel& model);
DanTcModel deserialize_tc(std::string_view text);

struct ScorerFile {
  MentionScorer scorer;
  MentionFrequency frequency;
  bool operator==(const ScorerFile&) const = default;
};
std::string serialize_scorer(const ScorerFile& s);
ScorerFile deserialize_scorer(std::string_view text);

// Ensemble, feature schema and PMI table travel together so scoring arity
// always matches training.
struct RankerFile {
  GbdtEnsemble ensemble;
  RankSchema schema;
  PmiTable pmi;
  bool operator==(const RankerFile&) const = default;
};
std::string serialize_ranker(const RankerFile& r);
RankerFile deserialize_ranker(std::string_view text);

std::string read_text_file(const std::filesystem::path& path);
// Writes to a sibling temp file then renames over the target.
void write_text_file(const std::filesystem::path& path, std::string_view text);

// A bundle directory holds tc.json, scorer.json, ranker.json and
// taxonomy.tsv.
struct BundlePaths {
  std::filesystem::path tc, scorer, ranker, taxonomy;
  explicit BundlePaths(const std::filesystem::path& dir);
};

SqgModels load_bundle(const std::filesystem::path& dir, std::size_t k = kDefaultTopK, double null_margin = 0.0);

}  // namespace sqgen
