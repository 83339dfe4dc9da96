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

#include "sqgen/ranker.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "sqgen/error.hpp"
#include "sqgen/linear.hpp"
#include "sqgen/text.hpp"

namespace sqgen {
namespace {

std::string question_value(const ScreeningQuestion& q, std::string_view feature) {
  if (feature == kTemplateFeature) return std::string(template_name(q.tmpl));
  return q.parameter ? *q.parameter : std::string(kNoParameter);
}

const std::string& job_value(const JobPosting& job, const std::string& feature) {
  const auto it = job.features.find(feature);
  if (it == job.features.end()) throw InvalidArgument(feature);
  return it->second;
}

const std::vector<std::string>& question_categoricals() {
  static const std::vector<std::string> names{std::string(kTemplateFeature), std::string(kParameterFeature)};
  return names;
}

}  // namespace

double smoothed_pmi(double joint, double cj, double cq, double n, double alpha, double v, double vj,
                    double vq) {
  if (alpha == 0.0 && (n <= 0.0 || cj <= 0.0 || cq <= 0.0)) return 0.0;
  // One log of a product ratio: with integer counts an independent pair
  // gives exactly 1, hence exactly 0.
  const double num = (joint + alpha) * (n + alpha * vj) * (n + alpha * vq);
  const double den = (n + alpha * v) * (cj + alpha) * (cq + alpha);
  const double value = std::log(num / den);
  if (std::isnan(value)) return 0.0;
  return std::clamp(value, -kPmiClamp, kPmiClamp);
}

double PmiTable::marginal(const CategoricalValue& v) const {
  const auto f = marginals.find(v.feature);
  if (f == marginals.end()) return 0.0;
  const auto it = f->second.find(v.value);
  return it == f->second.end() ? 0.0 : it->second;
}

double pmi(const PmiTable& table, const CategoricalValue& a, const CategoricalValue& b) {
  const CategoricalValue* j = &a;
  const CategoricalValue* q = &b;
  if (table.job_features.count(b.feature) && table.question_features.count(a.feature)) std::swap(j, q);
  if (!table.job_features.count(j->feature) || !table.question_features.count(q->feature)) {
    throw InvalidArgument("pmi: expected one job and one question feature, got '" + a.feature + "' and '" +
                          b.feature + "'");
  }
  const auto it = table.joint.find({j->feature, j->value, q->feature, q->value});
  const double joint = it == table.joint.end() ? 0.0 : it->second;
  const auto support = [&](const std::string& f) {
    const auto s = table.supports.find(f);
    return s == table.supports.end() ? 1.0 : static_cast<double>(s->second);
  };
  const double vj = support(j->feature);
  const double vq = support(q->feature);
  return smoothed_pmi(joint, table.marginal(*j), table.marginal(*q), table.total, table.alpha, vj * vq, vj, vq);
}

std::string_view group_name(FeatureGroup g) {
  switch (g) {
    case FeatureGroup::kJob: return "job";
    case FeatureGroup::kQuestion: return "question";
    case FeatureGroup::kInteraction: return "interaction";
  }
  return "?";
}

std::optional<FeatureGroup> parse_group(std::string_view name) {
  for (auto g : {FeatureGroup::kJob, FeatureGroup::kQuestion, FeatureGroup::kInteraction}) {
    if (group_name(g) == name) return g;
  }
  return std::nullopt;
}

void RankSchema::validate() const {
  if (dropped.size() >= 3) throw InvalidArgument("rank schema: every feature group dropped, no columns left");
  if (job.features.empty()) throw InvalidArgument("rank schema: empty job schema");
  if (parameter_buckets == 0) throw InvalidArgument("rank schema: parameter_buckets must be positive");
}

std::vector<std::string> RankSchema::column_names() const {
  std::vector<std::string> out;
  if (!dropped.count(FeatureGroup::kJob)) {
    for (const auto& f : job.features) {
      for (const auto& v : f.values) out.push_back(f.name + "=" + v);
    }
  }
  if (!dropped.count(FeatureGroup::kQuestion)) {
    for (const char* n : {"template_index", "parameter_bucket", "tc_score", "tc_rank", "linker_score"}) out.push_back(n);
  }
  if (!dropped.count(FeatureGroup::kInteraction)) {
    for (const auto& q : question_categoricals()) {
      for (const auto& f : job.features) out.push_back("pmi(" + q + "," + f.name + ")");
    }
  }
  return out;
}

std::size_t RankSchema::arity() const {
  std::size_t n = 0;
  if (!dropped.count(FeatureGroup::kJob)) {
    for (const auto& f : job.features) n += f.values.size();
  }
  if (!dropped.count(FeatureGroup::kQuestion)) n += kQuestionFeatureCount;
  if (!dropped.count(FeatureGroup::kInteraction)) n += question_categoricals().size() * job.features.size();
  return n;
}

PmiTable build_pmi_table(std::span<const FeedbackTriple> triples, std::span<const JobPosting> jobs,
                         const RankSchema& schema, double alpha) {
  if (!(alpha >= 0.0)) throw InvalidArgument("pmi alpha must be >= 0");
  PmiTable t;
  t.alpha = alpha;
  for (const auto& f : schema.job.features) {
    t.job_features.insert(f.name);
    t.supports[f.name] = f.values.size();
  }
  t.question_features.insert(std::string(kTemplateFeature));
  t.question_features.insert(std::string(kParameterFeature));
  t.supports[std::string(kTemplateFeature)] = kNumTemplates - 1;
  t.supports[std::string(kParameterFeature)] = schema.parameter_support;

  std::unordered_map<std::string, const JobPosting*> by_id;
  for (const auto& j : jobs) by_id.emplace(j.id, &j);
  for (const auto& tr : triples) {
    const auto it = by_id.find(tr.job_id);
    if (it == by_id.end()) throw InvalidArgument("pmi: unknown job id '" + tr.job_id + "'");
    if (tr.label != FeedbackLabel::kAccepted) continue;
    const JobPosting& job = *it->second;
    const auto q = tr.question();
    t.total += 1.0;
    for (const auto& qf : question_categoricals()) t.marginals[qf][question_value(q, qf)] += 1.0;
    for (const auto& f : schema.job.features) {
      const auto& jv = job_value(job, f.name);
      t.marginals[f.name][jv] += 1.0;
      for (const auto& qf : question_categoricals()) t.joint[{f.name, jv, qf, question_value(q, qf)}] += 1.0;
    }
  }
  return t;
}

std::vector<double> assemble_features(const JobPosting& job, const Candidate& candidate,
                                      const PmiTable& table, const RankSchema& schema) {
  schema.validate();
  std::vector<double> x;
  x.reserve(schema.arity());
  if (!schema.dropped.count(FeatureGroup::kJob)) {
    for (const auto& f : schema.job.features) {
      const auto& v = job_value(job, f.name);
      const auto pos = std::find(f.values.begin(), f.values.end(), v);
      if (pos == f.values.end()) throw InvalidArgument(f.name + ": unknown value '" + v + "'");
      for (const auto& fv : f.values) x.push_back(fv == v ? 1.0 : 0.0);
    }
  } else {
    for (const auto& f : schema.job.features) job_value(job, f.name);
  }
  const auto& q = candidate.question;
  if (!schema.dropped.count(FeatureGroup::kQuestion)) {
    x.push_back(static_cast<double>(index_of(q.tmpl)));
    x.push_back(q.parameter ? static_cast<double>(fnv1a64(*q.parameter) % schema.parameter_buckets) : -1.0);
    x.push_back(candidate.tc_score);
    x.push_back(static_cast<double>(candidate.tc_rank));
    x.push_back(candidate.linker_score);
  }
  if (!schema.dropped.count(FeatureGroup::kInteraction)) {
    for (const auto& qf : question_categoricals()) {
      const CategoricalValue qv{qf, question_value(q, qf)};
      for (const auto& f : schema.job.features) x.push_back(pmi(table, CategoricalValue{f.name, job_value(job, f.name)}, qv));
    }
  }
  return x;
}

bool ranked_before(const RankedQuestion& a, const RankedQuestion& b) {
  if (a.margin != b.margin) return a.margin > b.margin;
  return a.question < b.question;
}

std::vector<RankedQuestion> rank_questions(const JobPosting& job, std::span<const Candidate> candidates,
                                           const GbdtEnsemble& ensemble, const PmiTable& table,
                                           const RankSchema& schema, std::size_t k) {
  if (k == 0) return {};
  std::vector<RankedQuestion> out;
  out.reserve(candidates.size());
  for (const auto& c : candidates) {
    const double m = gbdt_predict(ensemble, assemble_features(job, c, table, schema));
    out.push_back({c.question, sigmoid(m), m});
  }
  std::sort(out.begin(), out.end(), ranked_before);
  if (out.size() > k) out.resize(k);
  return out;
}

GbdtDataset ranking_dataset(std::span<const RankingGroup> groups, const PmiTable& table,
                            const RankSchema& schema) {
  schema.validate();
  GbdtDataset d;
  std::vector<std::vector<double>> rows;
  for (const auto& g : groups) {
    if (g.candidates.empty()) continue;
    if (g.job == nullptr) throw InvalidArgument("ranking group without a job");
    if (g.labels.size() != g.candidates.size()) throw ShapeMismatch("ranking group label count");
    for (std::size_t i = 0; i < g.candidates.size(); ++i) {
      rows.push_back(assemble_features(*g.job, g.candidates[i], table, schema));
      d.labels.push_back(g.labels[i]);
    }
    d.group_sizes.push_back(g.candidates.size());
  }
  d.x = FeatureMatrix::from_rows(rows);
  if (rows.empty()) d.x.cols = schema.arity();
  return d;
}

}  // namespace sqgen
