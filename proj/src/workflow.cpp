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

#include "sqgen/workflow.hpp"

#include "json.hpp"
#include "sqgen/error.hpp"
#include "sqgen/matcher.hpp"
#include "sqgen/taxonomy.hpp"
#include "sqgen/text.hpp"

#ifndef SQGEN_DATA_DIR
#define SQGEN_DATA_DIR "data"
#endif

namespace sqgen {
namespace {

using nlohmann::json;

// Reads obj[key] into out when present; records the key as consumed.
class Reader {
 public:
  Reader(const json& obj, std::string scope) : obj_(obj), scope_(std::move(scope)) {
    if (!obj.is_object()) throw InvalidArgument("config: '" + scope_ + "' must be an object");
  }
  template <typename T>
  void get(const char* key, T& out) {
    seen_.push_back(key);
    if (!obj_.contains(key)) return;
    try {
      out = obj_.at(key).get<T>();
    } catch (const json::exception&) {
      throw InvalidArgument("config: '" + scope_ + "." + key + "' has the wrong type");
    }
  }
  const json* sub(const char* key) {
    seen_.push_back(key);
    return obj_.contains(key) ? &obj_.at(key) : nullptr;
  }
  void finish() const {
    for (const auto& [k, v] : obj_.items()) {
      if (std::find(seen_.begin(), seen_.end(), k) == seen_.end()) {
        throw InvalidArgument("config: unknown key '" + (scope_.empty() ? k : scope_ + "." + k) + "'");
      }
    }
  }

 private:
  const json& obj_;
  std::string scope_;
  std::vector<std::string> seen_;
};

void read_linear(const json& j, const std::string& scope, LinearHyper& h) {
  Reader r(j, scope);
  r.get("learning_rate", h.learning_rate);
  r.get("epochs", h.epochs);
  r.get("batch_size", h.batch_size);
  r.get("l2", h.l2);
  r.finish();
}

}  // namespace

void Settings::reseed(std::uint64_t s) {
  seed = s;
  synth.seed = s;
  tc.seed = s;
  bow.seed = s;
  scorer.seed = s;
  ranker.seed = s;
}

std::filesystem::path default_taxonomy_path() { return std::filesystem::path(SQGEN_DATA_DIR) / "taxonomy.tsv"; }

void apply_settings(Settings& s, std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config: invalid JSON: ") + e.what());
  }
  Reader r(root, "");
  if (root.contains("seed")) s.reseed(root.at("seed").get<std::uint64_t>());
  r.sub("seed");
  std::string tax;
  r.get("taxonomy", tax);
  if (!tax.empty()) s.taxonomy_path = tax;
  if (const auto* j = r.sub("synth")) {
    Reader q(*j, "synth");
    std::vector<std::size_t> v;
    q.get("sentences_per_template", v);
    if (!v.empty()) {
      if (v.size() != 3) throw InvalidArgument("config: synth.sentences_per_template needs [train, test, validation]");
      s.synth.sentences_per_template = {v[0], v[1], v[2]};
    }
    v.clear();
    q.get("jobs", v);
    if (!v.empty()) {
      if (v.size() != 3) throw InvalidArgument("config: synth.jobs needs [train, test, validation]");
      s.synth.jobs = {v[0], v[1], v[2]};
    }
    q.get("compositional_share", s.synth.compositional_share);
    q.get("min_question_sentences", s.synth.min_question_sentences);
    q.get("max_question_sentences", s.synth.max_question_sentences);
    q.get("min_filler_sentences", s.synth.min_filler_sentences);
    q.get("max_filler_sentences", s.synth.max_filler_sentences);
    q.finish();
  }
  if (const auto* j = r.sub("tc")) {
    Reader q(*j, "tc");
    q.get("learning_rate", s.tc.learning_rate);
    q.get("batch_size", s.tc.batch_size);
    q.get("dropout", s.tc.dropout);
    q.get("epochs", s.tc.max_epochs);
    q.get("mlp_depth", s.tc.mlp_depth);
    q.get("embedding_dim", s.tc.embedding_dim);
    q.get("hidden1", s.tc.hidden1);
    q.get("hidden2", s.tc.hidden2);
    q.get("mlp_width", s.tc.mlp_width);
    q.get("buckets", s.tc.buckets);
    q.get("max_tokens", s.tc.max_tokens);
    q.get("min_count", s.tc.min_count);
    q.get("class_weights", s.tc.class_weights);
    q.finish();
  }
  if (const auto* j = r.sub("bow")) read_linear(*j, "bow", s.bow);
  if (const auto* j = r.sub("scorer")) {
    json rest = *j;
    Reader q(rest, "scorer");
    q.get("threshold", s.scorer_threshold);
    q.get("sentences_per_template", s.scorer_sentences_per_template);
    rest.erase("threshold");
    rest.erase("sentences_per_template");
    read_linear(rest, "scorer", s.scorer);
  }
  if (const auto* j = r.sub("ranker")) {
    Reader q(*j, "ranker");
    q.get("trees", s.ranker.trees);
    q.get("max_depth", s.ranker.max_depth);
    q.get("learning_rate", s.ranker.learning_rate);
    q.get("gamma", s.ranker.gamma);
    q.get("lambda", s.ranker.lambda);
    q.get("min_leaf", s.ranker.min_leaf);
    q.get("base_margin", s.ranker.base_margin);
    std::string obj;
    q.get("objective", obj);
    if (!obj.empty()) {
      const auto o = parse_objective(obj);
      if (!o) throw InvalidArgument("config: ranker.objective must be pointwise or pairwise");
      s.ranker.objective = *o;
    }
    q.get("pmi_alpha", s.pmi_alpha);
    q.get("parameter_buckets", s.parameter_buckets);
    q.finish();
  }
  if (const auto* j = r.sub("pipeline")) {
    Reader q(*j, "pipeline");
    q.get("k", s.k);
    q.get("null_margin", s.null_margin);
    q.finish();
  }
  if (const auto* j = r.sub("serve")) {
    Reader q(*j, "serve");
    q.get("host", s.host);
    q.get("port", s.port);
    q.finish();
  }
  r.finish();
  s.tc.validate();
  s.ranker.validate();
}

Settings load_settings(const std::filesystem::path& config_path) {
  Settings s;
  if (!config_path.empty()) apply_settings(s, read_text_file(config_path));
  s.synth.taxonomy = load_taxonomy(s.taxonomy_path.empty() ? default_taxonomy_path() : s.taxonomy_path);
  return s;
}

std::vector<TcExample> tc_examples(std::span<const LabeledSentence> sentences) {
  std::vector<TcExample> out;
  out.reserve(sentences.size());
  for (const auto& s : sentences) out.push_back({tokenize(s.text), s.gold});
  return out;
}

ScorerFile train_scorer(const DanTcModel& tc, const Taxonomy& taxonomy, const Settings& s,
                        std::span<const LabeledSentence> extra) {
  SynthConfig cfg = s.synth;
  cfg.taxonomy = taxonomy;
  const auto sentences = gen_mention_sentences(cfg, s.scorer_sentences_per_template, s.seed ^ 0x5c0e5c0eULL);
  const SurfaceMatcher matcher(taxonomy);
  std::vector<Tokens> toks;
  for (const auto& x : sentences) toks.push_back(tokenize(x.text));
  for (const auto& x : extra) toks.push_back(tokenize(x.text));
  ScorerFile out;
  out.frequency = count_mentions(matcher, toks);
  const auto examples = mention_examples(sentences, taxonomy, matcher, tc.embeddings(), out.frequency);
  out.scorer = train_mention_scorer(examples, s.scorer, s.scorer_threshold);
  return out;
}

RankSchema rank_schema(const Settings& s, const Taxonomy& taxonomy) {
  RankSchema r;
  r.job = s.synth.job_schema;
  r.parameter_buckets = s.parameter_buckets;
  r.parameter_support = taxonomy.size() + 1;
  return r;
}

RankerFile train_ranker(std::span<const JobPosting> jobs, std::span<const FeedbackTriple> feedback,
                        const CandidateGenerator& generator, const RankSchema& schema, const Settings& s) {
  RankerFile out;
  out.schema = schema;
  out.pmi = build_pmi_table(dedup_feedback(feedback), jobs, schema, s.pmi_alpha);
  const auto groups = feedback_groups(jobs, feedback, generator);
  const auto data = ranking_dataset(groups, out.pmi, schema);
  if (data.x.rows == 0) throw InvalidArgument("train_ranker: no feedback to train on");
  out.ensemble = gbdt_train(data, s.ranker);
  return out;
}

}  // namespace sqgen
