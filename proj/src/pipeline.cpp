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

#include "sqgen/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "sqgen/error.hpp"
#include "sqgen/text.hpp"

namespace sqgen {

CandidateGenerator::CandidateGenerator(std::shared_ptr<const DanTcModel> tc,
                                       std::shared_ptr<const Taxonomy> taxonomy, MentionScorer scorer,
                                       MentionFrequency freq, double null_margin)
    : tc_(std::move(tc)),
      taxonomy_(std::move(taxonomy)),
      extractor_((tc_ && taxonomy_) ? ParameterExtractor(*taxonomy_, tc_->embeddings(), std::move(scorer), std::move(freq))
                                    : throw InvalidArgument("candidate generator needs a TC model and a taxonomy")),
      null_margin_(null_margin) {
  if (!(null_margin >= 0.0)) throw InvalidArgument("null_margin must be >= 0");
}

std::vector<Candidate> CandidateGenerator::candidates(const JobPosting& job) const {
  std::vector<Candidate> out;
  std::map<ScreeningQuestion, std::size_t> index;
  auto offer = [&](ScreeningQuestion q, double tc_score, double linker) {
    const auto [it, fresh] = index.try_emplace(q, out.size());
    if (fresh) {
      out.push_back({std::move(q), tc_score, 1, linker});
    } else if (tc_score > out[it->second].tc_score) {
      out[it->second].tc_score = tc_score;
      out[it->second].linker_score = linker;
    }
  };
  for (const auto& s : split_sentences(job.body, job.id)) {
    const auto p = tc_probabilities(*tc_, s.tokens);
    const auto top = argmax(p);
    if (top == index_of(TemplateId::kNull)) continue;
    if (!(p[top] - p[index_of(TemplateId::kNull)] > null_margin_)) continue;
    const TemplateId t = template_from_index(top);
    if (!takes_parameter(t)) {
      offer({t, std::nullopt}, p[top], 1.0);
      continue;
    }
    for (const auto& e : extractor_.extract(s.tokens, t)) offer({t, e.entity_id}, p[top], e.score);
  }
  for (auto& c : out) {
    c.tc_rank = 1 + static_cast<std::size_t>(std::count_if(
                        out.begin(), out.end(), [&](const Candidate& o) { return o.tc_score > c.tc_score; }));
  }
  return out;
}

std::vector<RankedQuestion> generate_questions(const JobPosting& job, const SqgModels& models) {
  const auto cands = models.generator.candidates(job);
  return rank_questions(job, cands, models.ensemble, models.pmi, models.schema, models.k);
}

std::vector<RankingGroup> feedback_groups(std::span<const JobPosting> jobs,
                                          std::span<const FeedbackTriple> feedback,
                                          const CandidateGenerator& generator) {
  std::unordered_map<std::string, std::size_t> job_index;
  for (std::size_t i = 0; i < jobs.size(); ++i) job_index.emplace(jobs[i].id, i);
  std::vector<std::vector<FeedbackTriple>> per_job(jobs.size());
  for (const auto& t : dedup_feedback(feedback)) {
    const auto it = job_index.find(t.job_id);
    if (it == job_index.end()) throw InvalidArgument("feedback for unknown job '" + t.job_id + "'");
    per_job[it->second].push_back(t);
  }
  std::vector<RankingGroup> groups;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (per_job[i].empty()) continue;
    const auto cands = generator.candidates(jobs[i]);
    RankingGroup g;
    g.job = &jobs[i];
    for (const auto& t : per_job[i]) {
      const auto q = t.question();
      const auto it = std::find_if(cands.begin(), cands.end(), [&](const Candidate& c) { return c.question == q; });
      g.candidates.push_back(it != cands.end() ? *it : Candidate{q, 0.0, cands.size() + 1, 0.0});
      g.labels.push_back(t.label == FeedbackLabel::kAccepted ? 1.0 : 0.0);
    }
    groups.push_back(std::move(g));
  }
  return groups;
}

LatencyStats measure_latency(const DanTcModel& tc, std::span<const std::string> sentences,
                             std::size_t repetitions) {
  if (sentences.empty()) throw InvalidArgument("measure_latency: no sentences");
  if (repetitions == 0) throw InvalidArgument("measure_latency: repetitions must be >= 1");
  using Clock = std::chrono::steady_clock;
  std::vector<double> ms;
  ms.reserve(sentences.size() * repetitions);
  volatile std::size_t sink = 0;
  for (std::size_t r = 0; r < repetitions; ++r) {
    for (const auto& s : sentences) {
      const auto t0 = Clock::now();
      sink = sink + index_of(tc_predict(tc, tokenize(s)));
      const auto t1 = Clock::now();
      ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
  }
  LatencyStats st;
  st.samples = ms.size();
  st.mean_ms = std::accumulate(ms.begin(), ms.end(), 0.0) / static_cast<double>(ms.size());
  std::sort(ms.begin(), ms.end());
  auto rank = [&](double q) {
    const auto n = static_cast<double>(ms.size());
    const auto idx = static_cast<std::size_t>(std::max(1.0, std::ceil(q * n)));
    return ms[idx - 1];
  };
  st.p50_ms = rank(0.50);
  st.p95_ms = rank(0.95);
  return st;
}

}  // namespace sqgen
