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
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "sqgen/corpus.hpp"
#include "sqgen/gbdt.hpp"

namespace sqgen {

inline constexpr double kPmiClamp = 20.0;
inline constexpr double kDefaultPmiAlpha = 0.5;

// A (feature, value) event on either the job or the question side.
struct CategoricalValue {
  std::string feature;
  std::string value;
};

// Question-side categoricals entering the PMI block.
inline constexpr std::string_view kTemplateFeature = "template";
inline constexpr std::string_view kParameterFeature = "parameter";
// Value used for the parameter categorical of parameter-free templates.
inline constexpr std::string_view kNoParameter = "-";

// log((joint+a)/(n+a*v)) - log((cj+a)/(n+a*vj)) - log((cq+a)/(n+a*vq)),
// clamped to [-20, 20]. Undefined cases (a zero marginal with a = 0) give 0.
double smoothed_pmi(double joint, double cj, double cq, double n, double alpha, double v, double vj,
                    double vq);

// Event counts over accepted feedback. Marginals are keyed by feature then
// value; joint counts by (job feature, job value, question feature,
// question value). supports holds each feature's value-set size, used as
// the smoothing support.
struct PmiTable {
  double alpha = kDefaultPmiAlpha;
  double total = 0.0;
  std::set<std::string> job_features;
  std::set<std::string> question_features;
  std::map<std::string, std::size_t> supports;
  std::map<std::string, std::map<std::string, double>> marginals;
  std::map<std::tuple<std::string, std::string, std::string, std::string>, double> joint;

  double marginal(const CategoricalValue& v) const;
  bool operator==(const PmiTable&) const = default;
};

// Symmetric in its arguments; one must be a job feature and the other a
// question feature. Unseen values use the pure smoothing counts. Throws
// InvalidArgument when the pair does not span both sides.
double pmi(const PmiTable& table, const CategoricalValue& a, const CategoricalValue& b);

enum class FeatureGroup { kJob, kQuestion, kInteraction };

std::string_view group_name(FeatureGroup g);
std::optional<FeatureGroup> parse_group(std::string_view name);

// Column layout of a rank feature vector: one-hot job values, then the
// five question features (template index, hashed parameter bucket,
// tc_score, tc_rank, linker_score), then one PMI value per
// (question categorical, job categorical) pair. Dropped groups emit no
// columns.
struct RankSchema {
  JobFeatureSchema job = default_job_schema();
  std::size_t parameter_buckets = 1024;
  std::size_t parameter_support = 202;  // parameter values incl. none
  std::set<FeatureGroup> dropped;

  // Throws InvalidArgument when every group is dropped.
  void validate() const;
  std::size_t arity() const;
  std::vector<std::string> column_names() const;
  bool operator==(const RankSchema&) const = default;
};

inline constexpr std::size_t kQuestionFeatureCount = 5;

// Counts accepted triples only; rejected ones are ignored. Throws
// InvalidArgument for a triple naming an unknown job or a job missing a
// schema feature.
PmiTable build_pmi_table(std::span<const FeedbackTriple> triples, std::span<const JobPosting> jobs,
                         const RankSchema& schema, double alpha = kDefaultPmiAlpha);

// A question proposed for a job together with the signals that produced it.
struct Candidate {
  ScreeningQuestion question;
  double tc_score = 0.0;
  std::size_t tc_rank = 1;
  double linker_score = 1.0;
  bool operator==(const Candidate&) const = default;
};

// Throws InvalidArgument naming the first schema feature the job lacks, or
// a value outside the feature's vocabulary.
std::vector<double> assemble_features(const JobPosting& job, const Candidate& candidate,
                                      const PmiTable& table, const RankSchema& schema);

struct RankedQuestion {
  ScreeningQuestion question;
  double score = 0.0;   // sigmoid(margin)
  double margin = 0.0;
  bool operator==(const RankedQuestion&) const = default;
};

// Orders by margin descending, ties by (template index, parameter with none
// first), and keeps the first k.
std::vector<RankedQuestion> rank_questions(const JobPosting& job, std::span<const Candidate> candidates,
                                           const GbdtEnsemble& ensemble, const PmiTable& table,
                                           const RankSchema& schema, std::size_t k);

// Stable order used by rank_questions; exposed for oracles.
bool ranked_before(const RankedQuestion& a, const RankedQuestion& b);

// Labelled candidates for one job: the unit of pairwise training and of
// per-job evaluation. labels[i] is 1 for accepted, 0 for rejected.
struct RankingGroup {
  const JobPosting* job = nullptr;
  std::vector<Candidate> candidates;
  std::vector<double> labels;
};

// Rows in group order with group_sizes filled in. Empty groups are skipped.
GbdtDataset ranking_dataset(std::span<const RankingGroup> groups, const PmiTable& table,
                            const RankSchema& schema);

}  // namespace sqgen
