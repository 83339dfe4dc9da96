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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sqgen/corpus.hpp"
#include "sqgen/embedding.hpp"
#include "sqgen/linear.hpp"
#include "sqgen/matcher.hpp"
#include "sqgen/taxonomy.hpp"

namespace sqgen {

// Entity type a template's parameter must have; nullopt for parameter-free
// templates. Throws InvalidArgument for NULL.
std::optional<EntityType> required_entity_type(TemplateId t);

// Template non-NULL, parameter present iff the template takes one, and the
// parameter names a taxonomy entity of the required type.
bool is_valid_question(const ScreeningQuestion& q, const Taxonomy& taxonomy);

enum class PosClass { kNoun = 0, kVerb = 1, kOther = 2 };

// Lexicon and suffix heuristic: function words are kOther, a small verb
// list and -ing/-ed/-ize/-ise endings are kVerb, everything else kNoun.
PosClass coarse_pos(std::string_view token);

// Corpus mention counts per entity id.
using MentionFrequency = std::map<std::string, std::size_t>;

MentionFrequency count_mentions(const SurfaceMatcher& matcher, std::span<const Tokens> sentences);

// Feature layout, kMentionFeatureCount wide:
//   [0]        log(1 + corpus frequency of the entity)
//   [1..3]     one-hot coarse POS of the mention's last token
//   [4..259]   hashed indicators of context unigrams and bigrams within
//              +-3 tokens, tagged by side
//   [260]      cosine(mean mention embedding, mean context embedding);
//              0 when the context is empty or either vector is zero
struct MentionFeatures {
  static constexpr std::size_t kWindow = 3;
  static constexpr std::size_t kHashSlots = 256;
  static constexpr std::size_t kFreq = 0;
  static constexpr std::size_t kPos = 1;
  static constexpr std::size_t kContext = 4;
  static constexpr std::size_t kCosine = kContext + kHashSlots;
  static constexpr std::size_t kCount = kCosine + 1;

  std::vector<double> values = std::vector<double>(kCount, 0.0);
};

// Throws InvalidArgument when the span lies outside the tokens.
MentionFeatures mention_features(const Tokens& tokens, const MentionSpan& span,
                                 const EmbeddingTable& embeddings, const MentionFrequency& freq);

struct MentionScorer {
  std::vector<double> weights = std::vector<double>(MentionFeatures::kCount, 0.0);
  double bias = 0.0;
  double threshold = 0.5;

  bool operator==(const MentionScorer&) const = default;
};

// sigmoid(w . x + b). Throws ShapeMismatch when the weight vector does not
// match the feature schema.
double score_mention(const MentionScorer& scorer, const MentionFeatures& features);

struct ExtractedParameter {
  std::string entity_id;
  double score = 0.0;

  bool operator==(const ExtractedParameter&) const = default;
};

// Surface matching + contextual scoring. Holds references; the taxonomy
// and embedding table must outlive it.
class ParameterExtractor {
 public:
  ParameterExtractor(const Taxonomy& taxonomy, const EmbeddingTable& embeddings, MentionScorer scorer,
                     MentionFrequency freq);

  // Mentions of the template's entity type scoring >= threshold,
  // deduplicated by entity id in first-occurrence order. Empty for
  // parameter-free templates.
  std::vector<ExtractedParameter> extract(const Tokens& tokens, TemplateId tmpl) const;

  const Taxonomy& taxonomy() const { return *taxonomy_; }
  const SurfaceMatcher& matcher() const { return matcher_; }
  const EmbeddingTable& embeddings() const { return *embeddings_; }
  const MentionScorer& scorer() const { return scorer_; }
  MentionScorer& scorer() { return scorer_; }
  const MentionFrequency& frequency() const { return freq_; }

 private:
  const Taxonomy* taxonomy_;
  const EmbeddingTable* embeddings_;
  SurfaceMatcher matcher_;
  MentionScorer scorer_;
  MentionFrequency freq_;
};

std::vector<std::string> extract_parameters(const ParameterExtractor& extractor, const Tokens& tokens,
                                            TemplateId tmpl);

// Positive examples are mentions inside non-NULL sentences whose type fits
// the sentence's template; every mention inside a NULL sentence is negative.
// Other mentions are skipped.
struct MentionExample {
  MentionFeatures features;
  int label = 0;
};

std::vector<MentionExample> mention_examples(std::span<const LabeledSentence> sentences,
                                             const Taxonomy& taxonomy, const SurfaceMatcher& matcher,
                                             const EmbeddingTable& embeddings,
                                             const MentionFrequency& freq);

MentionScorer train_mention_scorer(std::span<const MentionExample> examples, const LinearHyper& hyper,
                                   double threshold = 0.5);

}  // namespace sqgen
