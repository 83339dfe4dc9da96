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
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "sqgen/corpus.hpp"
#include "sqgen/taxonomy.hpp"

namespace sqgen {

// Phrase patterns. Slots: {Degree} {ToolSkill} {SpokenLanguage} {Credential}
// are filled with a surface form of a random entity of that type; {n},
// {field} and {place} are generic fillers.
struct PhraseBank {
  std::map<TemplateId, std::vector<std::string>> patterns;  // non-NULL templates
  std::vector<std::string> distractors;                     // NULL sentences
  std::vector<std::string> prefixes;                        // optional lead-ins
  std::vector<std::string> suffixes;                        // optional tails
};

PhraseBank default_phrase_bank();

// Probability that a poster accepts a suggested question for a job.
using PreferenceFn = std::function<double(const JobFeatures&, const ScreeningQuestion&)>;

// Acceptance depends only on (industry, template): each pair is preferred
// with probability `preferred_share` (decided by a seeded hash) and then
// accepted with p_high, otherwise with p_low.
PreferenceFn interaction_preference(std::uint64_t seed, double p_high = 0.95, double p_low = 0.05,
                                    double preferred_share = 0.4);

struct SplitCounts {
  std::size_t train = 0;
  std::size_t test = 0;
  std::size_t validation = 0;

  std::size_t total() const { return train + test + validation; }
};

template <typename T>
struct Splits {
  std::vector<T> train;
  std::vector<T> test;
  std::vector<T> validation;
};

struct SynthConfig {
  std::uint64_t seed = 7;
  // Labeled sentences generated per template, per split.
  SplitCounts sentences_per_template{1000, 500, 150};
  // Job postings per split (70/20/10 by default).
  SplitCounts jobs{700, 200, 100};
  std::size_t min_question_sentences = 2;
  std::size_t max_question_sentences = 5;
  std::size_t min_filler_sentences = 2;
  std::size_t max_filler_sentences = 6;
  // Share of parameterised/WorkAuth and NULL sentences drawn from the
  // provider/recipient family, whose label is the XOR of subject
  // (candidate vs company) and voice (active vs passive).
  double compositional_share = 0.5;
  JobFeatureSchema job_schema = default_job_schema();
  PhraseBank phrases = default_phrase_bank();
  Taxonomy taxonomy;
  PreferenceFn preference;  // defaults to interaction_preference(seed)
  std::int64_t start_timestamp = 1700000000;

  // Throws InvalidArgument: zero counts, an empty phrase bank for a
  // template, a slot type missing from the taxonomy, or an empty schema.
  void validate() const;
};

struct CorpusBundle {
  Splits<LabeledSentence> sentences;
  Splits<JobPosting> jobs;
  Splits<FeedbackTriple> feedback;  // split follows the job split
  Taxonomy taxonomy;
};

// Deterministic given the config (including seed).
CorpusBundle gen_synthetic_corpus(const SynthConfig& config);

}  // namespace sqgen

namespace sqgen {

// Sentences rendered from the plain phrase banks only (no provider/recipient
// family): `per_template` per class. Mentions in non-NULL sentences are
// positive linking contexts; mentions in NULL distractors are negative.
std::vector<LabeledSentence> gen_mention_sentences(const SynthConfig& config, std::size_t per_template,
                                                   std::uint64_t seed);

}  // namespace sqgen
