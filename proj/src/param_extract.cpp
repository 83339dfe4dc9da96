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

#include "sqgen/param_extract.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "sqgen/error.hpp"

namespace sqgen {
namespace {

const std::set<std::string, std::less<>> kFunctionWords = {
    "a",    "an",   "the",  "and",  "or",   "of",  "in",   "on",   "at",    "to",   "for",
    "with", "by",   "from", "as",   "is",   "are", "was",  "were", "be",    "been", "it",
    "its",  "our",  "we",   "you",  "your", "this", "that", "these", "those", "will", "must",
    "should", "can", "may", "not",  "no",   "if",  "but",  "all",  "any",   "every", "into",
    "per",  "than", "then", "so",   "such", "their", "they", "them", "he",   "she",  "his",
    "her",  "who",  "which", "what", "when", "where", "how", "also", "very"};

const std::set<std::string, std::less<>> kVerbs = {
    "have", "has", "had", "do",    "does",  "did",   "provide", "require", "need",  "use",
    "speak", "hold", "obtain", "earn", "know", "work", "write",   "read",    "build", "apply",
    "join", "offer", "support", "maintain", "manage", "lead", "develop", "design", "ship"};

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() > suffix.size() + 1 && s.substr(s.size() - suffix.size()) == suffix;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

std::size_t slot(std::string_view feature) {
  return MentionFeatures::kContext + fnv1a64(feature) % MentionFeatures::kHashSlots;
}

}  // namespace

std::optional<EntityType> required_entity_type(TemplateId t) {
  switch (t) {
    case TemplateId::kNull:
      throw InvalidArgument("NULL template has no parameter compatibility");
    case TemplateId::kWorkAuth:
    case TemplateId::kSponsorship:
      return std::nullopt;
    case TemplateId::kEducation:
      return EntityType::kDegree;
    case TemplateId::kLanguage:
      return EntityType::kSpokenLanguage;
    case TemplateId::kCredential:
      return EntityType::kCredential;
    case TemplateId::kTools:
      return EntityType::kToolSkill;
  }
  throw InvalidArgument("unknown template");
}

bool is_valid_question(const ScreeningQuestion& q, const Taxonomy& taxonomy) {
  if (q.tmpl == TemplateId::kNull) return false;
  const auto type = required_entity_type(q.tmpl);
  if (!type) return !q.parameter.has_value();
  if (!q.parameter) return false;
  const auto* e = taxonomy.find(*q.parameter);
  return e != nullptr && e->type == *type;
}

PosClass coarse_pos(std::string_view token) {
  if (kFunctionWords.contains(token)) return PosClass::kOther;
  if (kVerbs.contains(token)) return PosClass::kVerb;
  if (ends_with(token, "ing") || ends_with(token, "ed") || ends_with(token, "ize") ||
      ends_with(token, "ise")) {
    return PosClass::kVerb;
  }
  return PosClass::kNoun;
}

MentionFrequency count_mentions(const SurfaceMatcher& matcher, std::span<const Tokens> sentences) {
  MentionFrequency freq;
  for (const auto& s : sentences) {
    for (const auto& m : matcher.match(s)) ++freq[m.entity_id];
  }
  return freq;
}

MentionFeatures mention_features(const Tokens& tokens, const MentionSpan& span,
                                 const EmbeddingTable& embeddings, const MentionFrequency& freq) {
  if (span.start >= span.end || span.end > tokens.size()) {
    throw InvalidArgument("mention span [" + std::to_string(span.start) + ", " + std::to_string(span.end) +
                          ") outside a sentence of " + std::to_string(tokens.size()) + " tokens");
  }
  MentionFeatures f;
  auto& x = f.values;

  const auto it = freq.find(span.entity_id);
  x[MentionFeatures::kFreq] = std::log1p(it == freq.end() ? 0.0 : static_cast<double>(it->second));
  x[MentionFeatures::kPos + static_cast<std::size_t>(coarse_pos(tokens[span.end - 1]))] = 1.0;

  const std::size_t left = span.start >= MentionFeatures::kWindow ? span.start - MentionFeatures::kWindow : 0;
  const std::size_t right = std::min(tokens.size(), span.end + MentionFeatures::kWindow);
  Tokens context;
  for (std::size_t i = left; i < span.start; ++i) {
    context.push_back(tokens[i]);
    x[slot("L1:" + tokens[i])] = 1.0;
    if (i + 1 < span.start) x[slot("L2:" + tokens[i] + " " + tokens[i + 1])] = 1.0;
  }
  for (std::size_t i = span.end; i < right; ++i) {
    context.push_back(tokens[i]);
    x[slot("R1:" + tokens[i])] = 1.0;
    if (i + 1 < right) x[slot("R2:" + tokens[i] + " " + tokens[i + 1])] = 1.0;
  }

  if (!context.empty()) {
    const Tokens mention(tokens.begin() + static_cast<long>(span.start),
                         tokens.begin() + static_cast<long>(span.end));
    x[MentionFeatures::kCosine] = cosine(embeddings.mean(mention), embeddings.mean(context));
  }
  return f;
}

double score_mention(const MentionScorer& scorer, const MentionFeatures& features) {
  if (scorer.weights.size() != features.values.size()) {
    throw ShapeMismatch("mention scorer has " + std::to_string(scorer.weights.size()) +
                        " weights for " + std::to_string(features.values.size()) + " features");
  }
  double s = scorer.bias;
  for (std::size_t i = 0; i < features.values.size(); ++i) s += scorer.weights[i] * features.values[i];
  return sigmoid(s);
}

ParameterExtractor::ParameterExtractor(const Taxonomy& taxonomy, const EmbeddingTable& embeddings,
                                       MentionScorer scorer, MentionFrequency freq)
    : taxonomy_(&taxonomy), embeddings_(&embeddings), matcher_(taxonomy), scorer_(std::move(scorer)),
      freq_(std::move(freq)) {}

std::vector<ExtractedParameter> ParameterExtractor::extract(const Tokens& tokens, TemplateId tmpl) const {
  const auto type = required_entity_type(tmpl);
  if (!type) return {};
  std::vector<ExtractedParameter> out;
  for (const auto& m : matcher_.match(tokens)) {
    const auto* e = taxonomy_->find(m.entity_id);
    if (e == nullptr || e->type != *type) continue;
    const bool seen = std::any_of(out.begin(), out.end(),
                                  [&](const ExtractedParameter& p) { return p.entity_id == m.entity_id; });
    if (seen) continue;
    const double score = score_mention(scorer_, mention_features(tokens, m, *embeddings_, freq_));
    if (score >= scorer_.threshold) out.push_back({m.entity_id, score});
  }
  return out;
}

std::vector<std::string> extract_parameters(const ParameterExtractor& extractor, const Tokens& tokens,
                                            TemplateId tmpl) {
  std::vector<std::string> ids;
  for (auto& p : extractor.extract(tokens, tmpl)) ids.push_back(std::move(p.entity_id));
  return ids;
}

std::vector<MentionExample> mention_examples(std::span<const LabeledSentence> sentences,
                                             const Taxonomy& taxonomy, const SurfaceMatcher& matcher,
                                             const EmbeddingTable& embeddings,
                                             const MentionFrequency& freq) {
  std::vector<MentionExample> out;
  for (const auto& s : sentences) {
    const auto tokens = tokenize(s.text);
    const auto type = s.gold == TemplateId::kNull ? std::nullopt : required_entity_type(s.gold);
    for (const auto& m : matcher.match(tokens)) {
      const auto* e = taxonomy.find(m.entity_id);
      int label;
      if (s.gold == TemplateId::kNull) {
        label = 0;
      } else if (type && e->type == *type) {
        label = 1;
      } else {
        continue;
      }
      out.push_back({mention_features(tokens, m, embeddings, freq), label});
    }
  }
  return out;
}

MentionScorer train_mention_scorer(std::span<const MentionExample> examples, const LinearHyper& hyper,
                                   double threshold) {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  x.reserve(examples.size());
  for (const auto& ex : examples) {
    x.push_back(ex.features.values);
    y.push_back(ex.label);
  }
  const auto model = train_logistic(x, y, hyper);
  MentionScorer scorer;
  scorer.weights = model.weights;
  scorer.bias = model.bias;
  scorer.threshold = threshold;
  return scorer;
}

}  // namespace sqgen
