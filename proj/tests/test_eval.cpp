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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "sqgen/error.hpp"
#include "sqgen/eval.hpp"
#include "sqgen/rng.hpp"
#include "support.hpp"

using namespace sqgen;

namespace {

// Definition-level average precision: walk the distinct thresholds from
// high to low, counting afresh at each one.
double oracle_ap(const std::vector<double>& s, const std::vector<double>& y) {
  std::vector<double> th = s;
  std::sort(th.rbegin(), th.rend());
  th.erase(std::unique(th.begin(), th.end()), th.end());
  const double pos = static_cast<double>(std::count(y.begin(), y.end(), 1.0));
  double ap = 0.0, prev_r = 0.0;
  for (double t : th) {
    double tp = 0, n = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] >= t) {
        n += 1;
        tp += y[i];
      }
    }
    const double r = tp / pos;
    ap += (r - prev_r) * (tp / n);
    prev_r = r;
  }
  return ap;
}

ScoredGroup group_of(const std::vector<double>& scores, const std::vector<double>& rel) {
  ScoredGroup g;
  for (std::size_t i = 0; i < scores.size(); ++i) g.push_back({scores[i], rel[i]});
  return g;
}

JobPosting job_with(std::string id, std::string industry) {
  JobPosting j;
  j.id = std::move(id);
  for (const auto& f : default_job_schema().features) j.features[f.name] = f.values.front();
  j.features["industry"] = std::move(industry);
  return j;
}

// Acceptance driven by (industry, template) only, so PMI carries signal.
struct RankingWorld {
  std::vector<JobPosting> jobs;
  std::vector<RankingGroup> train, test;
  PmiTable table;
  RankSchema schema;

  RankingWorld() {
    Rng rng(17);
    const auto industries = default_job_schema().features.front().values;
    for (int i = 0; i < 240; ++i) jobs.push_back(job_with("j" + std::to_string(i), rng.pick(industries)));
    std::vector<FeedbackTriple> fb;
    std::vector<RankingGroup> all;
    for (const auto& j : jobs) {
      RankingGroup g;
      g.job = &j;
      for (std::size_t t = 1; t < kNumTemplates; ++t) {
        const auto tmpl = template_from_index(t);
        const bool like = (fnv1a64(j.features.at("industry") + template_name(tmpl).data()) % 3) == 0;
        const double y = rng.bernoulli(like ? 0.9 : 0.1) ? 1.0 : 0.0;
        g.candidates.push_back({{tmpl, std::nullopt}, rng.uniform(), 1, 1.0});
        g.labels.push_back(y);
        if (&j - jobs.data() < 180) {
          fb.push_back({j.id, tmpl, std::nullopt, y == 1.0 ? FeedbackLabel::kAccepted : FeedbackLabel::kRejected, 0});
        }
      }
      (&j - jobs.data() < 180 ? train : test).push_back(std::move(g));
    }
    table = build_pmi_table(fb, jobs, schema, 0.5);
  }
};

}  // namespace

TEST_CASE("auroc examples") {
  CHECK(auroc(std::vector<double>{0.9, 0.8, 0.2, 0.1}, std::vector<double>{1, 1, 0, 0}) == 1.0);
  CHECK(auroc(std::vector<double>{0.1, 0.2, 0.8, 0.9}, std::vector<double>{1, 1, 0, 0}) == 0.0);
  CHECK(auroc(std::vector<double>{0.5, 0.5, 0.5, 0.5}, std::vector<double>{1, 0, 1, 0}) == 0.5);
  CHECK_THROWS_AS(auroc(std::vector<double>{0.1, 0.2}, std::vector<double>{1, 1}), InvalidArgument);
  CHECK_THROWS_AS(auroc(std::vector<double>{0.1, 0.2}, std::vector<double>{1, 2}), InvalidArgument);
}

TEST_CASE("auroc matches pair counting") {
  Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(40);
    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng.below(6));  // coarse, so ties are common
      y[i] = rng.bernoulli(0.4) ? 1.0 : 0.0;
    }
    y[0] = 1.0;
    y[1] = 0.0;
    CHECK(auroc(s, y) == doctest::Approx(testing::pair_count_auroc(s, y)).epsilon(1e-12));
  }
}

TEST_CASE("auprc") {
  CHECK(auprc(std::vector<double>{0.9, 0.8, 0.1}, std::vector<double>{1, 1, 0}) == 1.0);
  const std::size_t n = 10;
  std::vector<double> s(n), y(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) s[i] = static_cast<double>(n - i);
  y.back() = 1.0;
  CHECK(auprc(s, y) == doctest::Approx(1.0 / n));
  CHECK_THROWS_AS(auprc(s, std::vector<double>(n, 0.0)), InvalidArgument);

  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + rng.below(30);
    std::vector<double> a(m), b(m);
    for (std::size_t i = 0; i < m; ++i) {
      a[i] = static_cast<double>(rng.below(5));
      b[i] = rng.bernoulli(0.5) ? 1.0 : 0.0;
    }
    b[0] = 1.0;
    CHECK(auprc(a, b) == doctest::Approx(oracle_ap(a, b)).epsilon(1e-12));
  }

  // Random scores: AP concentrates near the positive rate.
  std::vector<double> big(20000), lab(20000);
  for (std::size_t i = 0; i < big.size(); ++i) {
    big[i] = rng.uniform();
    lab[i] = rng.bernoulli(0.3) ? 1.0 : 0.0;
  }
  CHECK(auprc(big, lab) == doctest::Approx(0.3).epsilon(0.05));
}

TEST_CASE("precision and recall at k") {
  const auto g = group_of({0.9, 0.8, 0.7, 0.6}, {1, 0, 1, 0});
  auto pr = precision_recall_at_k(g, 1);
  CHECK(pr.precision == 1.0);
  CHECK(pr.recall == 0.5);
  pr = precision_recall_at_k(g, 3);
  CHECK(pr.precision == doctest::Approx(2.0 / 3.0));
  CHECK(pr.recall == 1.0);
  // k beyond the list divides by k.
  pr = precision_recall_at_k(g, 8);
  CHECK(pr.precision == doctest::Approx(0.25));
  // Ties keep input order.
  CHECK(precision_recall_at_k(group_of({0.5, 0.5}, {0, 1}), 1).precision == 0.0);
  CHECK(precision_recall_at_k(group_of({0.5, 0.5}, {1, 0}), 1).precision == 1.0);
  const std::vector<ScoredGroup> groups{group_of({1, 0}, {1, 0}), group_of({1, 0}, {0, 1})};
  CHECK(macro_precision_recall_at_k(groups, 1).precision == 0.5);
  CHECK_THROWS_AS(precision_recall_at_k(ScoredGroup{}, 1), InvalidArgument);
  CHECK_THROWS_AS(precision_recall_at_k(g, 0), InvalidArgument);
}

TEST_CASE("ndcg") {
  CHECK(ndcg_at_k(group_of({3, 2, 1}, {1, 1, 0}), 3) == doctest::Approx(1.0));
  CHECK(ndcg_at_k(group_of({2, 1}, {0, 1}), 2) == doctest::Approx(0.6309297535714575).epsilon(1e-12));
  CHECK(ndcg_at_k(group_of({2, 1}, {0, 0}), 2) == 0.0);
  CHECK(ndcg_at_k(group_of({2, 1}, {0, 1}), 1) == 0.0);
  const std::vector<ScoredGroup> groups{group_of({2, 1}, {1, 0}), group_of({2, 1}, {0, 1})};
  CHECK(mean_ndcg_at_k(groups, 1) == doctest::Approx(0.5));
  CHECK_THROWS_AS(ndcg_at_k(ScoredGroup{}, 1), InvalidArgument);
  CHECK_THROWS_AS(ndcg_at_k(groups[0], 0), InvalidArgument);
}

TEST_CASE("metrics are invariant under monotone score transforms") {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 3 + rng.below(12);
    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = rng.normal();
      y[i] = rng.bernoulli(0.5) ? 1.0 : 0.0;
    }
    y[0] = 1.0;
    y[1] = 0.0;
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i) t[i] = std::exp(2.0 * s[i]) + 3.0;
    CHECK(auroc(s, y) == auroc(t, y));
    CHECK(auprc(s, y) == doctest::Approx(auprc(t, y)));
    const auto gs = group_of(s, y), gt = group_of(t, y);
    for (std::size_t k : {1, 3, 5}) {
      CHECK(ndcg_at_k(gs, k) == ndcg_at_k(gt, k));
      CHECK(precision_recall_at_k(gs, k).recall == precision_recall_at_k(gt, k).recall);
    }
  }
}

TEST_CASE("classification report") {
  const std::vector<TemplateId> gold{TemplateId::kWorkAuth, TemplateId::kWorkAuth, TemplateId::kTools};
  const std::vector<TemplateId> pred{TemplateId::kWorkAuth, TemplateId::kTools, TemplateId::kTools};
  const auto r = classification_report(gold, pred);
  CHECK(r.total == 3);
  CHECK(r.accuracy == doctest::Approx(2.0 / 3.0));
  const auto& a = r.classes[index_of(TemplateId::kWorkAuth)];
  CHECK(a.support == 2);
  CHECK(a.predicted == 1);
  CHECK(*a.precision == 1.0);
  CHECK(*a.recall == 0.5);
  const auto& b = r.classes[index_of(TemplateId::kTools)];
  CHECK(*b.precision == 0.5);
  CHECK(*b.recall == 1.0);
  const auto& none = r.classes[index_of(TemplateId::kLanguage)];
  CHECK_FALSE(none.precision.has_value());
  CHECK_FALSE(none.recall.has_value());
  CHECK(format_report(r).find("-") != std::string::npos);
  CHECK(report_json(r).find("\"accuracy\"") != std::string::npos);

  CHECK_THROWS_AS(classification_report(gold, std::vector<TemplateId>{TemplateId::kTools}), ShapeMismatch);
  CHECK_THROWS_AS(classification_report(std::vector<TemplateId>{}, std::vector<TemplateId>{}), InvalidArgument);
}

TEST_CASE("accuracy equals the support-weighted recall") {
  Rng rng(8);
  std::vector<TemplateId> gold, pred;
  for (int i = 0; i < 500; ++i) {
    gold.push_back(template_from_index(rng.below(kNumTemplates)));
    pred.push_back(rng.bernoulli(0.6) ? gold.back() : template_from_index(rng.below(kNumTemplates)));
  }
  const auto r = classification_report(gold, pred);
  double correct = 0;
  std::size_t support = 0, predicted = 0;
  for (const auto& c : r.classes) {
    correct += static_cast<double>(c.correct);
    support += c.support;
    predicted += c.predicted;
  }
  CHECK(support == 500);
  CHECK(predicted == 500);
  CHECK(r.accuracy == doctest::Approx(correct / 500.0));
}

TEST_CASE("evaluate_ranker skips groups without a relevant item") {
  RankingWorld w;
  GbdtEnsemble flat;
  flat.num_features = w.schema.arity();
  std::size_t with_positive = 0;
  for (const auto& g : w.test) with_positive += std::count(g.labels.begin(), g.labels.end(), 1.0) > 0 ? 1 : 0;
  const auto m = evaluate_ranker(flat, w.test, w.table, w.schema);
  CHECK(m.groups == with_positive);
  CHECK(m.auroc == 0.5);
}

TEST_CASE("ablation run") {
  RankingWorld w;
  GbdtParams p;
  p.objective = Objective::kPairwise;
  p.trees = 30;
  p.max_depth = 3;
  const std::vector<std::set<FeatureGroup>> variants{{}, {}, {FeatureGroup::kInteraction}};
  const auto rows = ablation_run(variants, w.train, w.test, w.table, w.schema, p);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].name == "baseline");
  CHECK(rows[2].name == "-interaction");
  // Identical variants train identical models.
  CHECK(rows[0].metrics.ndcg1 == rows[1].metrics.ndcg1);
  CHECK(rows[0].metrics.auroc == rows[1].metrics.auroc);
  // The interaction block is the only carrier of the (industry, template) signal.
  CHECK(rows[0].metrics.ndcg1 > rows[2].metrics.ndcg1);
  CHECK(format_ranking_table(rows).find("-interaction") != std::string::npos);
  CHECK(ranking_json(rows).find("\"ndcg@1\"") != std::string::npos);

  const std::vector<std::set<FeatureGroup>> all_dropped{
      {FeatureGroup::kJob, FeatureGroup::kQuestion, FeatureGroup::kInteraction}};
  CHECK_THROWS_AS(ablation_run(all_dropped, w.train, w.test, w.table, w.schema, p), InvalidArgument);
  const std::vector<std::string> bad{"job", "pmi"};
  CHECK_THROWS_AS(parse_groups(bad), InvalidArgument);
  const std::vector<std::string> good{"job", "interaction"};
  CHECK(parse_groups(good) == std::set<FeatureGroup>{FeatureGroup::kJob, FeatureGroup::kInteraction});
}
