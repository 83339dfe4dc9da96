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

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sqgen/corpus.hpp"
#include "sqgen/dan.hpp"
#include "sqgen/gbdt.hpp"
#include "sqgen/param_extract.hpp"
#include "sqgen/ranker.hpp"
#include "sqgen/taxonomy.hpp"

namespace sqgen {

inline constexpr std::size_t kDefaultTopK = 5;

// Sentence-level candidate generation: split, classify, extract, dedup.
// Owns its models through shared pointers so copies stay valid.
class CandidateGenerator {
 public:
  CandidateGenerator(std::shared_ptr<const DanTcModel> tc, std::shared_ptr<const Taxonomy> taxonomy,
                     MentionScorer scorer, MentionFrequency freq, double null_margin = 0.0);

  // A sentence yields candidates when its top template is not NULL and
  // p(top) - p(NULL) > null_margin. Candidates are deduplicated on
  // (template, parameter) keeping the highest tc_score (first on ties) and
  // that occurrence's linker score; parameter-free templates get linker
  // score 1. tc_rank is 1 + the number of candidates with a strictly higher
  // tc_score. Output is in first-occurrence order.
  std::vector<Candidate> candidates(const JobPosting& job) const;

  const DanTcModel& tc() const { return *tc_; }
  const Taxonomy& taxonomy() const { return *taxonomy_; }
  const ParameterExtractor& extractor() const { return extractor_; }
  double null_margin() const { return null_margin_; }

 private:
  std::shared_ptr<const DanTcModel> tc_;
  std::shared_ptr<const Taxonomy> taxonomy_;
  ParameterExtractor extractor_;
  double null_margin_;
};

struct SqgModels {
  CandidateGenerator generator;
  GbdtEnsemble ensemble;
  PmiTable pmi;
  RankSchema schema;
  std::size_t k = kDefaultTopK;
};

// Top-k screening questions for a posting. Empty body gives [].
std::vector<RankedQuestion> generate_questions(const JobPosting& job, const SqgModels& models);

// Joins deduplicated feedback to the generator's candidates. One group per
// job with feedback, in job order. A triple with no matching candidate keeps
// tc_score 0, tc_rank one past the candidate count and linker score 0.
// Throws InvalidArgument for feedback on an unknown job.
std::vector<RankingGroup> feedback_groups(std::span<const JobPosting> jobs,
                                          std::span<const FeedbackTriple> feedback,
                                          const CandidateGenerator& generator);

struct LatencyStats {
  std::size_t samples = 0;
  double mean_ms = 0.0;
  double p50_ms = 0.0;
  double p95_ms = 0.0;
};

// Times tokenize + TC inference per sentence on the calling thread,
// repetitions passes over the sentences in order. Percentiles are
// nearest-rank. Throws InvalidArgument when sentences is empty or
// repetitions is 0.
LatencyStats measure_latency(const DanTcModel& tc, std::span<const std::string> sentences,
                             std::size_t repetitions);

}  // namespace sqgen
