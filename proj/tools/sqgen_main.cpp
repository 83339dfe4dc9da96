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

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sqgen/error.hpp"
#include "sqgen/eval.hpp"
#include "sqgen/model_io.hpp"
#include "sqgen/pipeline.hpp"
#include "sqgen/rng.hpp"
#include "sqgen/service.hpp"
#include "sqgen/taxonomy.hpp"
#include "sqgen/text.hpp"
#include "sqgen/workflow.hpp"

namespace fs = std::filesystem;
using namespace sqgen;

namespace {

// Options shared by every subcommand.
struct Common {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string data = "corpus";
  std::string bundle = "bundle";
};

Settings settings_for(const Common& c) {
  Settings s = load_settings(c.config);
  if (c.seed_set) s.reseed(c.seed);
  return s;
}

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config, "JSON settings file (default: $SQGEN_CONFIG)");
  cmd->add_option_function<std::uint64_t>(
      "--seed", [&c](std::uint64_t v) { c.seed = v, c.seed_set = true; }, "Random seed");
}

fs::path split_file(const fs::path& dir, const char* kind, const char* split) {
  return dir / (std::string(kind) + "_" + split + ".jsonl");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::shared_ptr<const DanTcModel> load_tc(const fs::path& bundle) {
  return std::make_shared<const DanTcModel>(deserialize_tc(read_text_file(BundlePaths(bundle).tc)));
}

std::shared_ptr<const Taxonomy> load_bundle_taxonomy(const fs::path& bundle) {
  return std::make_shared<const Taxonomy>(load_taxonomy(BundlePaths(bundle).taxonomy));
}

CandidateGenerator load_generator(const fs::path& bundle, const Settings& s) {
  auto sc = deserialize_scorer(read_text_file(BundlePaths(bundle).scorer));
  return CandidateGenerator(load_tc(bundle), load_bundle_taxonomy(bundle), std::move(sc.scorer),
                            std::move(sc.frequency), s.null_margin);
}

int gen_corpus(const Common& c) {
  Settings s = settings_for(c);
  const auto b = gen_synthetic_corpus(s.synth);
  const fs::path dir(c.data);
  fs::create_directories(dir);
  const std::pair<const char*, int> splits[] = {{"train", 0}, {"test", 1}, {"validation", 2}};
  for (const auto& [name, i] : splits) {
    const auto& sent = i == 0 ? b.sentences.train : i == 1 ? b.sentences.test : b.sentences.validation;
    const auto& jobs = i == 0 ? b.jobs.train : i == 1 ? b.jobs.test : b.jobs.validation;
    const auto& fb = i == 0 ? b.feedback.train : i == 1 ? b.feedback.test : b.feedback.validation;
    write_dataset<LabeledSentence>(sent, split_file(dir, "sentences", name));
    write_dataset<JobPosting>(jobs, split_file(dir, "jobs", name));
    write_dataset<FeedbackTriple>(fb, split_file(dir, "feedback", name));
    std::printf("%-10s sentences %6zu  jobs %5zu  feedback %5zu\n", name, sent.size(), jobs.size(), fb.size());
  }
  save_taxonomy(b.taxonomy, dir / "taxonomy.tsv");
  std::printf("wrote %s\n", dir.string().c_str());
  return 0;
}

int train_tc(const Common& c) {
  Settings s = settings_for(c);
  const auto train = load_dataset<LabeledSentence>(split_file(c.data, "sentences", "train"));
  const auto t0 = std::chrono::steady_clock::now();
  const auto res = tc_train(tc_examples(train), s.tc);
  const BundlePaths p(c.bundle);
  write_text_file(p.tc, serialize_tc(res.model));
  const fs::path tax = fs::path(c.data) / "taxonomy.tsv";
  write_text_file(p.taxonomy, read_text_file(fs::exists(tax) ? tax : default_taxonomy_path()));
  std::printf("trained DAN on %zu sentences in %.1fs, final loss %.5f -> %s\n", train.size(), seconds_since(t0),
              res.epoch_losses.empty() ? 0.0 : res.epoch_losses.back(), p.tc.string().c_str());
  return 0;
}

int train_scorer_cmd(const Common& c) {
  Settings s = settings_for(c);
  const auto tc = load_tc(c.bundle);
  const auto tax = load_bundle_taxonomy(c.bundle);
  s.synth.taxonomy = *tax;
  const auto train = load_dataset<LabeledSentence>(split_file(c.data, "sentences", "train"));
  const auto sf = train_scorer(*tc, *tax, s, train);
  write_text_file(BundlePaths(c.bundle).scorer, serialize_scorer(sf));
  std::printf("trained mention scorer (threshold %.2f) -> %s\n", sf.scorer.threshold,
              BundlePaths(c.bundle).scorer.string().c_str());
  return 0;
}

int train_ranker_cmd(const Common& c, const std::string& jobs_file, const std::string& feedback_file) {
  Settings s = settings_for(c);
  const auto jobs = load_dataset<JobPosting>(jobs_file.empty() ? split_file(c.data, "jobs", "train") : fs::path(jobs_file));
  const auto fb =
      load_dataset<FeedbackTriple>(feedback_file.empty() ? split_file(c.data, "feedback", "train") : fs::path(feedback_file));
  const auto gen = load_generator(c.bundle, s);
  const auto schema = rank_schema(s, gen.taxonomy());
  const auto t0 = std::chrono::steady_clock::now();
  const auto rf = train_ranker(jobs, fb, gen, schema, s);
  write_text_file(BundlePaths(c.bundle).ranker, serialize_ranker(rf));
  std::printf("trained %s ranker: %zu trees, %zu features, %zu feedback rows (%zu after dedup) in %.1fs\n",
              std::string(objective_name(s.ranker.objective)).c_str(), rf.ensemble.trees.size(), schema.arity(),
              fb.size(), dedup_feedback(fb).size(), seconds_since(t0));
  return 0;
}

int eval_tc(const Common& c, bool json_out, bool baseline) {
  Settings s = settings_for(c);
  const auto tc = load_tc(c.bundle);
  const auto test = load_dataset<LabeledSentence>(split_file(c.data, "sentences", "test"));
  std::vector<TemplateId> gold, pred;
  for (const auto& x : test) {
    gold.push_back(x.gold);
    pred.push_back(tc_predict(*tc, tokenize(x.text)));
  }
  const auto rep = classification_report(gold, pred);
  std::optional<ClassificationReport> bow_rep;
  if (baseline) {
    const auto train = load_dataset<LabeledSentence>(split_file(c.data, "sentences", "train"));
    const auto bow = train_bow(tc_examples(train), s.bow);
    std::vector<TemplateId> bp;
    for (const auto& x : test) bp.push_back(bow.predict(tokenize(x.text)));
    bow_rep = classification_report(gold, bp);
  }
  if (json_out) {
    nlohmann::json j;
    j["dan"] = nlohmann::json::parse(report_json(rep));
    if (bow_rep) j["bow"] = nlohmann::json::parse(report_json(*bow_rep));
    std::cout << j.dump() << "\n";
  } else {
    std::cout << "DAN\n" << format_report(rep);
    if (bow_rep) std::cout << "\nBOW logistic baseline\n" << format_report(*bow_rep);
  }
  return 0;
}

struct RankerEvalData {
  std::vector<JobPosting> train_jobs, test_jobs;
  std::vector<FeedbackTriple> train_fb, test_fb;
};

RankerEvalData load_ranker_data(const Common& c) {
  RankerEvalData d;
  d.train_jobs = load_dataset<JobPosting>(split_file(c.data, "jobs", "train"));
  d.test_jobs = load_dataset<JobPosting>(split_file(c.data, "jobs", "test"));
  d.train_fb = load_dataset<FeedbackTriple>(split_file(c.data, "feedback", "train"));
  d.test_fb = load_dataset<FeedbackTriple>(split_file(c.data, "feedback", "test"));
  return d;
}

int eval_ranker(const Common& c, bool json_out) {
  Settings s = settings_for(c);
  const auto gen = load_generator(c.bundle, s);
  const auto rf = deserialize_ranker(read_text_file(BundlePaths(c.bundle).ranker));
  const auto d = load_ranker_data(c);
  const auto groups = feedback_groups(d.test_jobs, d.test_fb, gen);
  std::vector<AblationRow> rows{{"bundle", rf.schema.dropped, evaluate_ranker(rf.ensemble, groups, rf.pmi, rf.schema)}};
  std::cout << (json_out ? ranking_json(rows) + "\n" : format_ranking_table(rows));
  return 0;
}

int ablate(const Common& c, const std::vector<std::string>& variant_specs, bool json_out) {
  Settings s = settings_for(c);
  const auto gen = load_generator(c.bundle, s);
  const auto d = load_ranker_data(c);
  const auto schema = rank_schema(s, gen.taxonomy());
  const auto pmi = build_pmi_table(dedup_feedback(d.train_fb), d.train_jobs, schema, s.pmi_alpha);
  const auto train = feedback_groups(d.train_jobs, d.train_fb, gen);
  const auto test = feedback_groups(d.test_jobs, d.test_fb, gen);
  std::vector<std::set<FeatureGroup>> variants{{}};
  if (variant_specs.empty()) {
    for (auto g : {FeatureGroup::kJob, FeatureGroup::kQuestion, FeatureGroup::kInteraction}) variants.push_back({g});
  }
  for (const auto& spec : variant_specs) {
    std::vector<std::string> names;
    std::stringstream ss(spec);
    for (std::string part; std::getline(ss, part, ',');) {
      if (!part.empty()) names.push_back(part);
    }
    variants.push_back(parse_groups(names));
  }
  const auto rows = ablation_run(variants, train, test, pmi, schema, s.ranker);
  std::cout << (json_out ? ranking_json(rows) + "\n" : format_ranking_table(rows));
  return 0;
}

int sweep(const Common& c, const std::string& param, const std::vector<double>& values) {
  Settings base = settings_for(c);
  const auto train = tc_examples(load_dataset<LabeledSentence>(split_file(c.data, "sentences", "train")));
  const auto test = tc_examples(load_dataset<LabeledSentence>(split_file(c.data, "sentences", "test")));
  std::printf("%-14s %10s %9s %8s\n", "param", "value", "accuracy", "seconds");
  for (double v : values) {
    Settings s = base;
    if (param == "learning_rate") {
      s.tc.learning_rate = v;
    } else if (param == "batch_size") {
      s.tc.batch_size = static_cast<std::size_t>(v);
    } else if (param == "dropout") {
      s.tc.dropout = v;
    } else if (param == "epochs") {
      s.tc.max_epochs = static_cast<std::size_t>(v);
    } else if (param == "mlp_depth") {
      s.tc.mlp_depth = static_cast<std::size_t>(v);
    } else if (param == "embedding_dim") {
      s.tc.embedding_dim = static_cast<std::size_t>(v);
    } else {
      throw InvalidArgument("sweep: unknown parameter '" + param + "'");
    }
    const auto t0 = std::chrono::steady_clock::now();
    const auto res = tc_train(train, s.tc);
    std::size_t ok = 0;
    for (const auto& e : test) ok += tc_predict(res.model, e.tokens) == e.gold ? 1 : 0;
    std::printf("%-14s %10g %9.4f %8.1f\n", param.c_str(), v, static_cast<double>(ok) / static_cast<double>(test.size()),
                seconds_since(t0));
    std::fflush(stdout);
  }
  return 0;
}

int suggest_batch(const Common& c, const std::string& jobs_file, const std::string& out_file) {
  Settings s = settings_for(c);
  const auto models = load_bundle(c.bundle, s.k, s.null_margin);
  const auto jobs = load_dataset<JobPosting>(jobs_file);
  std::ostringstream out;
  for (const auto& job : jobs) {
    nlohmann::json qs = nlohmann::json::array();
    for (const auto& r : generate_questions(job, models)) {
      qs.push_back({{"template", template_name(r.question.tmpl)},
                    {"parameter", r.question.parameter ? nlohmann::json(*r.question.parameter) : nlohmann::json(nullptr)},
                    {"score", r.score}});
    }
    out << nlohmann::json{{"job_id", job.id}, {"questions", qs}}.dump() << "\n";
  }
  if (out_file.empty() || out_file == "-") {
    std::cout << out.str();
  } else {
    write_text_file(out_file, out.str());
    std::printf("wrote suggestions for %zu jobs to %s\n", jobs.size(), out_file.c_str());
  }
  return 0;
}

int bench_latency(const Common& c, std::size_t reps, std::size_t limit, bool synthetic) {
  Settings s = settings_for(c);
  std::shared_ptr<const DanTcModel> tc;
  std::vector<std::string> sentences;
  if (synthetic) {
    // Random DAN over a 50k vocabulary, timed on random 32-token sentences.
    Rng rng(s.seed);
    std::vector<std::string> vocab;
    for (std::size_t i = 0; i < 50000; ++i) vocab.push_back("w" + std::to_string(i));
    tc = std::make_shared<const DanTcModel>(make_dan_model(vocab, s.tc));
    for (std::size_t i = 0; i < limit; ++i) {
      std::string line;
      for (int t = 0; t < 32; ++t) line += (t ? " " : "") + vocab[rng.below(vocab.size())];
      sentences.push_back(line);
    }
  } else {
    tc = load_tc(c.bundle);
    for (const auto& x : load_dataset<LabeledSentence>(split_file(c.data, "sentences", "test"))) {
      if (sentences.size() >= limit) break;
      sentences.push_back(x.text);
    }
  }
  const auto st = measure_latency(*tc, sentences, reps);
  std::printf("TC inference over %zu samples (d=%zu): mean %.4f ms  p50 %.4f ms  p95 %.4f ms\n", st.samples,
              tc->embeddings().dim(), st.mean_ms, st.p50_ms, st.p95_ms);
  return 0;
}

int serve_cmd(const Common& c, const std::string& jobs_file, const std::string& feedback_file) {
  Settings s = settings_for(c);
  auto models = load_bundle(c.bundle, s.k, s.null_margin);
  auto jobs = load_dataset<JobPosting>(jobs_file.empty() ? split_file(c.data, "jobs", "test") : fs::path(jobs_file));
  SqgService service(std::move(models), std::move(jobs),
                     feedback_file.empty() ? fs::path(c.data) / "feedback_live.jsonl" : fs::path(feedback_file));
  std::printf("serving on http://%s:%d (feedback log %s)\n", s.host.c_str(), s.port,
              service.store().path().string().c_str());
  std::fflush(stdout);
  serve(service, s.host, s.port);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sqgen: screening question generation"};
  app.require_subcommand(1);
  Common c;
  if (const char* env = std::getenv("SQGEN_CONFIG")) c.config = env;

  auto* gen = app.add_subcommand("gen-corpus", "Generate the synthetic corpus");
  auto* ttc = app.add_subcommand("train-tc", "Train the DAN template classifier");
  auto* tsc = app.add_subcommand("train-scorer", "Train the mention scorer");
  auto* trk = app.add_subcommand("train-ranker", "Train the question ranker from feedback");
  auto* etc = app.add_subcommand("eval-tc", "Evaluate template classification on the test split");
  auto* erk = app.add_subcommand("eval-ranker", "Evaluate the bundled ranker on test feedback");
  auto* abl = app.add_subcommand("ablate", "Ranker feature-group ablation");
  auto* swp = app.add_subcommand("sweep", "TC hyper-parameter sensitivity grid");
  auto* sug = app.add_subcommand("suggest", "Suggest questions for a jobs file");
  auto* lat = app.add_subcommand("bench-latency", "Time TC inference per sentence");
  auto* srv = app.add_subcommand("serve", "Run the HTTP suggestion and feedback service");

  for (auto* cmd : {gen, ttc, tsc, trk, etc, erk, abl, swp, sug, lat, srv}) {
    add_common(cmd, c);
    cmd->add_option("--data", c.data, "Corpus directory")->capture_default_str();
    if (cmd != gen) cmd->add_option("--bundle", c.bundle, "Model bundle directory")->capture_default_str();
  }

  std::string jobs_file, feedback_file, out_file, param;
  bool json_out = false, baseline = false, synthetic = false;
  std::vector<std::string> variants;
  std::vector<double> values;
  std::size_t reps = 3, limit = 1000;
  trk->add_option("--jobs", jobs_file, "Jobs file (default: <data>/jobs_train.jsonl)");
  trk->add_option("--feedback", feedback_file, "Feedback file (default: <data>/feedback_train.jsonl)");
  for (auto* cmd : {etc, erk, abl}) cmd->add_flag("--json", json_out, "Machine-readable output");
  etc->add_flag("--baseline", baseline, "Also train and report the BOW logistic baseline");
  abl->add_option("--variant", variants, "Comma-separated groups to drop (job, question, interaction); repeatable");
  swp->add_option("--param", param, "learning_rate | batch_size | dropout | epochs | mlp_depth | embedding_dim")
      ->required();
  swp->add_option("--values", values, "Grid values")->required();
  sug->add_option("--jobs", jobs_file, "Jobs file")->required();
  sug->add_option("--out", out_file, "Output file (default: stdout)");
  lat->add_option("--reps", reps, "Passes over the sentences")->capture_default_str();
  lat->add_option("--sentences", limit, "Number of sentences")->capture_default_str();
  lat->add_flag("--synthetic", synthetic, "Random 50k-vocabulary model and 32-token sentences");
  srv->add_option("--jobs", jobs_file, "Jobs to review (default: <data>/jobs_test.jsonl)");
  srv->add_option("--feedback", feedback_file, "Append-only feedback log (default: <data>/feedback_live.jsonl)");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*gen) return gen_corpus(c);
    if (*ttc) return train_tc(c);
    if (*tsc) return train_scorer_cmd(c);
    if (*trk) return train_ranker_cmd(c, jobs_file, feedback_file);
    if (*etc) return eval_tc(c, json_out, baseline);
    if (*erk) return eval_ranker(c, json_out);
    if (*abl) return ablate(c, variants, json_out);
    if (*swp) return sweep(c, param, values);
    if (*sug) return suggest_batch(c, jobs_file, out_file);
    if (*lat) return bench_latency(c, reps, limit, synthetic);
    if (*srv) return serve_cmd(c, jobs_file, feedback_file);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "sqgen: %s\n", e.what());
    return 1;
  }
  return 0;
}
