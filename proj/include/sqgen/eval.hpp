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

#include <array>
#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "sqgen/gbdt.hpp"
#include "sqgen/ranker.hpp"
#include "sqgen/template_id.hpp"

namespace sqgen {

// Labels are 0 or 1 throughout; anything else throws InvalidArgument.

// Mann-Whitney with midranks, so tied scores count 1/2 per pair. Throws
// InvalidArgument unless both classes are present.
double auroc(std::span<const double> scores, std::span<const double> labels);

// Average precision: sum over score thresholds of (R_n - R_{n-1}) * P_n.
// Throws InvalidArgument without positives.
double auprc(std::span<const double> scores, std::span<const double> labels);

struct ScoredItem {
  double score = 0.0;
  double relevance = 0.0;
};
using ScoredGroup = std::vector<ScoredItem>;

// Per-job groups are ranked by score descending; equal scores keep input
// order. Every function below throws InvalidArgument on an empty group or
// k == 0.
struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};
PrecisionRecall precision_recall_at_k(std::span<const ScoredItem> group, std::size_t k);
PrecisionRecall macro_precision_recall_at_k(std::span<const ScoredGroup> groups, std::size_t k);

// Binary gains, discount 1/log2(i+1) from rank 1, normalised by the ideal
// DCG@k; 0 when the group has no relevant item.
double ndcg_at_k(std::span<const ScoredItem> group, std::size_t k);
double mean_ndcg_at_k(std::span<const ScoredGroup> groups, std::size_t k);

struct ClassStats {
  std::size_t support = 0;    // gold count
  std::size_t predicted = 0;  // predicted count
  std::size_t correct = 0;
  std::optional<double> precision;  // absent without predictions
  std::optional<double> recall;     // absent without support
};

struct ClassificationReport {
  std::size_t total = 0;
  double accuracy = 0.0;
  std::array<ClassStats, kNumTemplates> classes{};
};

// Throws ShapeMismatch on unequal lengths and InvalidArgument when empty.
ClassificationReport classification_report(std::span<const TemplateId> gold,
                                           std::span<const TemplateId> predicted);
std::string format_report(const ClassificationReport& r);
std::string report_json(const ClassificationReport& r);

struct RankingMetrics {
  std::size_t groups = 0;
  double auroc = 0.0;
  double p1 = 0.0, r1 = 0.0, ndcg1 = 0.0;
  double p3 = 0.0, r3 = 0.0, ndcg3 = 0.0;
};

// Scores each group's candidates with the ensemble margin. Groups without a
// relevant item are left out; AUROC pools the remaining items.
RankingMetrics evaluate_ranker(const GbdtEnsemble& ensemble, std::span<const RankingGroup> groups,
                               const PmiTable& table, const RankSchema& schema);

// Throws InvalidArgument naming an unknown group.
std::set<FeatureGroup> parse_groups(std::span<const std::string> names);

struct AblationRow {
  std::string name;  // "baseline" or "-job,-interaction" style
  std::set<FeatureGroup> dropped;
  RankingMetrics metrics;
};

// Retrains once per variant with identical params on the same groups. The
// schema's own dropped set is ignored; each variant supplies its own.
std::vector<AblationRow> ablation_run(std::span<const std::set<FeatureGroup>> variants,
                                      std::span<const RankingGroup> train, std::span<const RankingGroup> test,
                                      const PmiTable& table, const RankSchema& schema, const GbdtParams& params);

std::string format_ranking_table(std::span<const AblationRow> rows);
std::string ranking_json(std::span<const AblationRow> rows);

}  // namespace sqgen
