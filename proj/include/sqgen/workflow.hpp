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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sqgen/corpus.hpp"
#include "sqgen/dan.hpp"
#include "sqgen/gbdt.hpp"
#include "sqgen/linear.hpp"
#include "sqgen/model_io.hpp"
#include "sqgen/pipeline.hpp"
#include "sqgen/ranker.hpp"
#include "sqgen/synth.hpp"

namespace sqgen {

// Every tunable the CLI and service read. Defaults reproduce the bundled
// synthetic setup; a JSON config file may override any subset.
struct Settings {
  std::uint64_t seed = 7;
  std::filesystem::path taxonomy_path;  // empty: the bundled data/taxonomy.tsv
  SynthConfig synth;
  TcHyper tc;
  LinearHyper bow{0.01, 30, 64, 0.0, 7};
  LinearHyper scorer{0.05, 200, 64, 0.0, 7};
  double scorer_threshold = 0.5;
  std::size_t scorer_sentences_per_template = 300;
  GbdtParams ranker = [] {
    GbdtParams p;
    p.objective = Objective::kPairwise;
    return p;
  }();
  double pmi_alpha = kDefaultPmiAlpha;
  std::size_t parameter_buckets = 1024;
  std::size_t k = kDefaultTopK;
  double null_margin = 0.0;
  std::string host = "127.0.0.1";
  int port = 8080;

  // Sets the seed everywhere a component takes one.
  void reseed(std::uint64_t s);
};

std::filesystem::path default_taxonomy_path();

// Applies a JSON object of overrides. Throws InvalidArgument on unknown
// keys or wrong types, so typos are not silently ignored.
void apply_settings(Settings& s, std::string_view json_text);
// Defaults, then the file (if non-empty path), then loads the taxonomy.
Settings load_settings(const std::filesystem::path& config_path);

std::vector<TcExample> tc_examples(std::span<const LabeledSentence> sentences);

// Mention scorer trained on plain-phrase sentences whose mentions are
// labelled by sentence template; frequencies are counted over the same
// sentences plus `extra` (typically the TC training set).
ScorerFile train_scorer(const DanTcModel& tc, const Taxonomy& taxonomy, const Settings& s,
                        std::span<const LabeledSentence> extra);

RankSchema rank_schema(const Settings& s, const Taxonomy& taxonomy);

// PMI over accepted training feedback, then GBDT on the joined groups.
RankerFile train_ranker(std::span<const JobPosting> jobs, std::span<const FeedbackTriple> feedback,
                        const CandidateGenerator& generator, const RankSchema& schema, const Settings& s);

}  // namespace sqgen
