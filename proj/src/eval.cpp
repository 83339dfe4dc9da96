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

#include "sqgen/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "json.hpp"
#include "sqgen/error.hpp"

namespace sqgen {
namespace {

void check_binary(std::span<const double> scores, std::span<const double> labels) {
  if (scores.size() != labels.size()) throw ShapeMismatch("scores and labels differ in length");
  for (double y : labels) {
    if (y != 0.0 && y != 1.0) throw InvalidArgument("labels must be 0 or 1");
  }
}

// Indices by score descending, ties in input order.
std::vector<std::size_t> ranking(std::span<const ScoredItem> group) {
  std::vector<std::size_t> order(group.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return group[a].score > group[b].score; });
  return order;
}

void check_group(std::span<const ScoredItem> group, std::size_t k) {
  if (group.empty()) throw InvalidArgument("empty ranking group");
  if (k == 0) throw InvalidArgument("k must be >= 1");
}

std::string fmt(const char* f, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string variant_name(const std::set<FeatureGroup>& dropped) {
  if (dropped.empty()) return "baseline";
  std::string s;
  for (auto g : dropped) {
    if (!s.empty()) s += ",";
    s += "-";
    s += group_name(g);
  }
  return s;
}

}  // namespace

double auroc(std::span<const double> scores, std::span<const double> labels) {
  check_binary(scores, labels);
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double pos = 0.0, neg = 0.0, rank_sum = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    double block_pos = 0.0;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) block_pos += labels[order[j++]];
    // midrank of positions i+1 .. j
    const double mid = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    rank_sum += block_pos * mid;
    pos += block_pos;
    neg += static_cast<double>(j - i) - block_pos;
    i = j;
  }
  if (pos == 0.0 || neg == 0.0) throw InvalidArgument("auroc needs both classes");
  return (rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg);
}

double auprc(std::span<const double> scores, std::span<const double> labels) {
  check_binary(scores, labels);
  const double total_pos = std::accumulate(labels.begin(), labels.end(), 0.0);
  if (total_pos == 0.0) throw InvalidArgument("auprc needs at least one positive");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  double tp = 0.0, seen = 0.0, prev_recall = 0.0, area = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) {
      tp += labels[order[j++]];
      seen += 1.0;
    }
    const double recall = tp / total_pos;
    area += (recall - prev_recall) * (tp / seen);
    prev_recall = recall;
    i = j;
  }
  return area;
}

PrecisionRecall precision_recall_at_k(std::span<const ScoredItem> group, std::size_t k) {
  check_group(group, k);
  const auto order = ranking(group);
  double relevant = 0.0, hits = 0.0;
  for (const auto& it : group) relevant += it.relevance;
  for (std::size_t i = 0; i < std::min(k, order.size()); ++i) hits += group[order[i]].relevance;
  return {hits / static_cast<double>(k), relevant > 0.0 ? hits / relevant : 0.0};
}

PrecisionRecall macro_precision_recall_at_k(std::span<const ScoredGroup> groups, std::size_t k) {
  if (groups.empty()) return {};
  PrecisionRecall sum;
  for (const auto& g : groups) {
    const auto pr = precision_recall_at_k(g, k);
    sum.precision += pr.precision;
    sum.recall += pr.recall;
  }
  const auto n = static_cast<double>(groups.size());
  return {sum.precision / n, sum.recall / n};
}

double ndcg_at_k(std::span<const ScoredItem> group, std::size_t k) {
  check_group(group, k);
  const auto order = ranking(group);
  const std::size_t cut = std::min(k, group.size());
  double dcg = 0.0;
  for (std::size_t i = 0; i < cut; ++i) dcg += group[order[i]].relevance / std::log2(static_cast<double>(i) + 2.0);
  std::vector<double> rel;
  for (const auto& it : group) rel.push_back(it.relevance);
  std::sort(rel.begin(), rel.end(), std::greater<>());
  double ideal = 0.0;
  for (std::size_t i = 0; i < cut; ++i) ideal += rel[i] / std::log2(static_cast<double>(i) + 2.0);
  return ideal > 0.0 ? dcg / ideal : 0.0;
}

double mean_ndcg_at_k(std::span<const ScoredGroup> groups, std::size_t k) {
  if (groups.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& g : groups) sum += ndcg_at_k(g, k);
  return sum / static_cast<double>(groups.size());
}

ClassificationReport classification_report(std::span<const TemplateId> gold,
                                           std::span<const TemplateId> predicted) {
  if (gold.size() != predicted.size()) throw ShapeMismatch("gold and predicted differ in length");
  if (gold.empty()) throw InvalidArgument("empty classification run");
  ClassificationReport r;
  r.total = gold.size();
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    auto& g = r.classes[index_of(gold[i])];
    ++g.support;
    ++r.classes[index_of(predicted[i])].predicted;
    if (gold[i] == predicted[i]) {
      ++g.correct;
      ++correct;
    }
  }
  r.accuracy = static_cast<double>(correct) / static_cast<double>(r.total);
  for (auto& c : r.classes) {
    if (c.predicted > 0) c.precision = static_cast<double>(c.correct) / static_cast<double>(c.predicted);
    if (c.support > 0) c.recall = static_cast<double>(c.correct) / static_cast<double>(c.support);
  }
  return r;
}

std::string format_report(const ClassificationReport& r) {
  auto cell = [](const std::optional<double>& v) { return v ? fmt("%9.4f", *v) : std::string("        -"); };
  std::string out = fmt("overall accuracy %.4f", r.accuracy) + " (" + std::to_string(r.total) + " sentences)\n";
  out += "template        support  precision    recall\n";
  for (auto t : kAllTemplates) {
    const auto& c = r.classes[index_of(t)];
    std::string name(template_name(t));
    name.resize(14, ' ');
    char sup[16];
    std::snprintf(sup, sizeof sup, "%9zu", c.support);
    out += name + sup + "  " + cell(c.precision) + " " + cell(c.recall) + "\n";
  }
  return out;
}

std::string report_json(const ClassificationReport& r) {
  nlohmann::json j;
  j["accuracy"] = r.accuracy;
  j["total"] = r.total;
  for (auto t : kAllTemplates) {
    const auto& c = r.classes[index_of(t)];
    nlohmann::json cj;
    cj["support"] = c.support;
    cj["predicted"] = c.predicted;
    cj["precision"] = c.precision ? nlohmann::json(*c.precision) : nlohmann::json(nullptr);
    cj["recall"] = c.recall ? nlohmann::json(*c.recall) : nlohmann::json(nullptr);
    j["classes"][std::string(template_name(t))] = cj;
  }
  return j.dump();
}

RankingMetrics evaluate_ranker(const GbdtEnsemble& ensemble, std::span<const RankingGroup> groups,
                               const PmiTable& table, const RankSchema& schema) {
  std::vector<ScoredGroup> scored;
  std::vector<double> all_scores, all_labels;
  for (const auto& g : groups) {
    if (std::find(g.labels.begin(), g.labels.end(), 1.0) == g.labels.end()) continue;
    ScoredGroup sg;
    for (std::size_t i = 0; i < g.candidates.size(); ++i) {
      const double m = gbdt_predict(ensemble, assemble_features(*g.job, g.candidates[i], table, schema));
      sg.push_back({m, g.labels[i]});
      all_scores.push_back(m);
      all_labels.push_back(g.labels[i]);
    }
    scored.push_back(std::move(sg));
  }
  RankingMetrics m;
  m.groups = scored.size();
  if (scored.empty()) return m;
  const bool both = std::find(all_labels.begin(), all_labels.end(), 0.0) != all_labels.end();
  m.auroc = both ? auroc(all_scores, all_labels) : std::nan("");
  const auto pr1 = macro_precision_recall_at_k(scored, 1);
  const auto pr3 = macro_precision_recall_at_k(scored, 3);
  m.p1 = pr1.precision;
  m.r1 = pr1.recall;
  m.p3 = pr3.precision;
  m.r3 = pr3.recall;
  m.ndcg1 = mean_ndcg_at_k(scored, 1);
  m.ndcg3 = mean_ndcg_at_k(scored, 3);
  return m;
}

std::set<FeatureGroup> parse_groups(std::span<const std::string> names) {
  std::set<FeatureGroup> out;
  for (const auto& n : names) {
    const auto g = parse_group(n);
    if (!g) throw InvalidArgument("unknown feature group '" + n + "' (expected job, question or interaction)");
    out.insert(*g);
  }
  return out;
}

std::vector<AblationRow> ablation_run(std::span<const std::set<FeatureGroup>> variants,
                                      std::span<const RankingGroup> train, std::span<const RankingGroup> test,
                                      const PmiTable& table, const RankSchema& schema, const GbdtParams& params) {
  std::vector<AblationRow> rows;
  for (const auto& dropped : variants) {
    RankSchema s = schema;
    s.dropped = dropped;
    s.validate();
    const auto data = ranking_dataset(train, table, s);
    const auto ens = gbdt_train(data, params);
    rows.push_back({variant_name(dropped), dropped, evaluate_ranker(ens, test, table, s)});
  }
  return rows;
}

std::string format_ranking_table(std::span<const AblationRow> rows) {
  std::string out = "variant                     groups   AUROC    P@1    R@1 NDCG@1    P@3    R@3 NDCG@3\n";
  for (const auto& r : rows) {
    std::string name = r.name;
    name.resize(std::max<std::size_t>(name.size(), 26), ' ');
    char buf[160];
    const auto& m = r.metrics;
    std::snprintf(buf, sizeof buf, "%s %7zu %7.4f %6.4f %6.4f %6.4f %6.4f %6.4f %6.4f\n", name.c_str(), m.groups,
                  m.auroc, m.p1, m.r1, m.ndcg1, m.p3, m.r3, m.ndcg3);
    out += buf;
  }
  return out;
}

std::string ranking_json(std::span<const AblationRow> rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    const auto& m = r.metrics;
    std::vector<std::string> dropped;
    for (auto g : r.dropped) dropped.emplace_back(group_name(g));
    arr.push_back({{"variant", r.name}, {"dropped", dropped}, {"groups", m.groups}, {"auroc", m.auroc},
                   {"p@1", m.p1},       {"r@1", m.r1},        {"ndcg@1", m.ndcg1},  {"p@3", m.p3},
                   {"r@3", m.r3},       {"ndcg@3", m.ndcg3}});
  }
  return arr.dump();
}

}  // namespace sqgen
