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

// Independent reference implementations used as oracles by the unit tests
// and the acceptance binary. Each is written straight from the definition
// and shares no code path with the library routine it checks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sqgen/corpus.hpp"
#include "sqgen/dan.hpp"
#include "sqgen/gbdt.hpp"
#include "sqgen/linear.hpp"
#include "sqgen/matcher.hpp"
#include "sqgen/pipeline.hpp"
#include "sqgen/rng.hpp"
#include "sqgen/taxonomy.hpp"
#include "sqgen/text.hpp"
#include "sqgen/workflow.hpp"

namespace sqgen::testing {

// Scan every position, take the longest surface form starting there (ties:
// one span per entity in taxonomy order), advance past it.
inline std::vector<MentionSpan> naive_match(const Taxonomy& tax, const Tokens& tokens) {
  std::vector<MentionSpan> out;
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t best = 0;
    for (const auto& e : tax.entities()) {
      for (const auto& s : e.surfaces) {
        if (s.size() > best && i + s.size() <= tokens.size() &&
            std::equal(s.begin(), s.end(), tokens.begin() + static_cast<long>(i))) {
          best = s.size();
        }
      }
    }
    if (best == 0) {
      ++i;
      continue;
    }
    for (const auto& e : tax.entities()) {
      for (const auto& s : e.surfaces) {
        if (s.size() == best && std::equal(s.begin(), s.end(), tokens.begin() + static_cast<long>(i))) {
          out.push_back({e.id, i, i + best});
          break;
        }
      }
    }
    i += best;
  }
  return out;
}

// Exhaustive split search: every feature, every midpoint of distinct values,
// sums recomputed from scratch for each candidate.
inline std::optional<SplitCandidate> brute_force_split(const FeatureMatrix& x, const std::vector<double>& g,
                                                       const std::vector<double>& h, double lambda,
                                                       double gamma) {
  std::optional<SplitCandidate> best;
  for (std::size_t f = 0; f < x.cols; ++f) {
    std::vector<double> vals;
    for (std::size_t r = 0; r < x.rows; ++r) {
      if (!std::isnan(x.at(r, f))) vals.push_back(x.at(r, f));
    }
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    for (std::size_t k = 0; k + 1 < vals.size(); ++k) {
      const double thr = vals[k] + (vals[k + 1] - vals[k]) / 2.0;
      double gl = 0, hl = 0, gr = 0, hr = 0;
      for (std::size_t r = 0; r < x.rows; ++r) {
        const double v = x.at(r, f);
        if (std::isnan(v) || v < thr) {
          gl += g[r];
          hl += h[r];
        } else {
          gr += g[r];
          hr += h[r];
        }
      }
      const double gain = 0.5 * (gl * gl / (hl + lambda) + gr * gr / (hr + lambda) -
                                 (gl + gr) * (gl + gr) / (hl + hr + lambda)) -
                          gamma;
      if (gain > 0 && (!best || gain > best->gain)) best = SplitCandidate{f, thr, gain};
    }
  }
  return best;
}

// Fraction of (positive, negative) pairs ordered correctly, ties 1/2.
inline double pair_count_auroc(const std::vector<double>& s, const std::vector<double>& y) {
  double num = 0, den = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[i] != 1.0 || y[j] != 0.0) continue;
      den += 1;
      num += s[i] > s[j] ? 1.0 : (s[i] == s[j] ? 0.5 : 0.0);
    }
  }
  return num / den;
}

// Maximum relative error between analytic and central-difference gradients
// over every parameter of the model, |a-n| / max(|a|, |n|, 1e-5).
inline double gradcheck(DanTcModel model, const std::vector<TcExample>& batch, double step = 1e-6) {
  DanGradients grads(model);
  tc_loss_and_gradient(model, batch, grads);
  const auto analytic = grads.buffers();
  auto params = model.parameters();
  double worst = 0.0;
  DanGradients scratch(model);
  for (std::size_t b = 0; b < params.size(); ++b) {
    for (std::size_t i = 0; i < params[b].size(); ++i) {
      const double keep = params[b][i];
      params[b][i] = keep + step;
      const double up = tc_loss_and_gradient(model, batch, scratch);
      params[b][i] = keep - step;
      const double down = tc_loss_and_gradient(model, batch, scratch);
      params[b][i] = keep;
      const double numeric = (up - down) / (2.0 * step);
      const double a = analytic[b][i];
      const double denom = std::max({std::abs(a), std::abs(numeric), 1e-5});
      worst = std::max(worst, std::abs(a - numeric) / denom);
    }
  }
  return worst;
}

inline TcHyper tiny_hyper(std::uint64_t seed) {
  TcHyper h;
  h.seed = seed;
  h.embedding_dim = 4;
  h.hidden1 = 5;
  h.hidden2 = 4;
  h.mlp_width = 6;
  h.buckets = 3;
  h.dropout = 0.0;
  return h;
}

// Random small model plus a batch over its vocabulary (and a few OOV words).
inline std::pair<DanTcModel, std::vector<TcExample>> random_gradcheck_case(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::string> vocab{"alpha", "beta", "gamma", "delta", "eps"};
  auto model = make_dan_model(vocab, tiny_hyper(seed));
  // Perturb biases away from zero so no relu sits on its kink.
  for (auto& l : model.layers()) {
    for (auto& b : l.b) b = rng.uniform(-0.3, 0.3);
  }
  std::vector<std::string> pool = vocab;
  pool.push_back("oov1");
  pool.push_back("oov2");
  std::vector<TcExample> batch;
  for (int i = 0; i < 6; ++i) {
    TcExample ex;
    const auto n = 1 + rng.below(5);
    for (std::size_t t = 0; t < n; ++t) ex.tokens.push_back(rng.pick(pool));
    ex.gold = template_from_index(rng.below(kNumTemplates));
    batch.push_back(ex);
  }
  return {std::move(model), std::move(batch)};
}

// Straight-line composition of the sentence-level definition: classify each
// sentence, expand to (template, parameter) candidates, keep the strongest
// TC evidence per pair, then score and sort every candidate and cut to k.
inline std::vector<RankedQuestion> oracle_generate(const JobPosting& job, const SqgModels& m) {
  struct Seen {
    double tc = -1.0;
    double linker = 0.0;
    std::size_t first = 0;
  };
  std::map<ScreeningQuestion, Seen> best;
  std::size_t order = 0;
  for (const auto& s : split_sentences(job.body)) {
    const Tokens tokens = tokenize(s.text);
    const auto p = tc_probabilities(m.generator.tc(), tokens);
    std::size_t top = 0;
    for (std::size_t c = 1; c < p.size(); ++c) {
      if (p[c] > p[top]) top = c;
    }
    if (top == 0 || !(p[top] - p[0] > m.generator.null_margin())) continue;
    const TemplateId t = template_from_index(top);
    std::vector<std::pair<std::optional<std::string>, double>> params;
    if (!takes_parameter(t)) {
      params.push_back({std::nullopt, 1.0});
    } else {
      for (const auto& e : m.generator.extractor().extract(tokens, t)) params.push_back({e.entity_id, e.score});
    }
    for (const auto& [param, linker] : params) {
      auto [it, fresh] = best.try_emplace(ScreeningQuestion{t, param});
      if (fresh) it->second.first = order++;
      if (p[top] > it->second.tc) {
        it->second.tc = p[top];
        it->second.linker = linker;
      }
    }
  }
  std::vector<RankedQuestion> all;
  for (const auto& [q, seen] : best) {
    std::size_t rank = 1;
    for (const auto& [q2, other] : best) rank += other.tc > seen.tc ? 1 : 0;
    const Candidate c{q, seen.tc, rank, seen.linker};
    const double margin = gbdt_predict(m.ensemble, assemble_features(job, c, m.pmi, m.schema));
    all.push_back({q, sigmoid(margin), margin});
  }
  std::sort(all.begin(), all.end(), [](const RankedQuestion& a, const RankedQuestion& b) {
    if (a.margin != b.margin) return a.margin > b.margin;
    if (a.question.tmpl != b.question.tmpl) return index_of(a.question.tmpl) < index_of(b.question.tmpl);
    if (a.question.parameter.has_value() != b.question.parameter.has_value()) return !a.question.parameter.has_value();
    return a.question.parameter.value_or("") < b.question.parameter.value_or("");
  });
  if (all.size() > m.k) all.resize(m.k);
  return all;
}

// A scaled-down corpus with every model trained on it: small DAN, mention
// scorer and pairwise ranker. Seconds to build, real enough for end-to-end
// checks.
struct SmallWorld {
  Settings settings;
  CorpusBundle corpus;
  std::shared_ptr<SqgModels> models;
};

inline SmallWorld small_world(std::uint64_t seed) {
  SmallWorld w;
  w.settings = load_settings({});
  w.settings.reseed(seed);
  auto& s = w.settings;
  s.synth.sentences_per_template = {120, 20, 10};
  s.synth.jobs = {150, 200, 10};
  s.tc.embedding_dim = 16;
  s.tc.hidden1 = s.tc.hidden2 = s.tc.mlp_width = 16;
  s.tc.buckets = 256;
  s.tc.max_epochs = 40;
  s.tc.batch_size = 64;
  s.tc.learning_rate = 1e-2;
  s.tc.dropout = 0.1;
  s.scorer_sentences_per_template = 60;
  s.scorer.epochs = 60;
  s.ranker.trees = 30;
  s.ranker.max_depth = 3;
  w.corpus = gen_synthetic_corpus(s.synth);
  auto tc = std::make_shared<const DanTcModel>(tc_train(tc_examples(w.corpus.sentences.train), s.tc).model);
  auto tax = std::make_shared<const Taxonomy>(w.corpus.taxonomy);
  auto sf = train_scorer(*tc, *tax, s, w.corpus.sentences.train);
  CandidateGenerator gen(tc, tax, sf.scorer, sf.frequency, s.null_margin);
  const auto schema = rank_schema(s, *tax);
  auto rf = train_ranker(w.corpus.jobs.train, w.corpus.feedback.train, gen, schema, s);
  w.models = std::make_shared<SqgModels>(SqgModels{std::move(gen), std::move(rf.ensemble), std::move(rf.pmi),
                                                   std::move(rf.schema), s.k});
  return w;
}

}  // namespace sqgen::testing
