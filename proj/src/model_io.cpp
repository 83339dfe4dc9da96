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

#include "sqgen/model_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sqgen/error.hpp"
#include "sqgen/taxonomy.hpp"

namespace sqgen {
namespace {

using nlohmann::json;

json header(std::string_view kind) {
  return json{{"format", "sqgen"}, {"kind", kind}, {"version", kModelFormatVersion}};
}

json parse_checked(std::string_view text, std::string_view kind) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw FormatError(std::string(kind) + ": not valid JSON: " + e.what());
  }
  if (!j.is_object() || j.value("format", "") != "sqgen") throw FormatError(std::string(kind) + ": not a sqgen model file");
  if (j.value("kind", "") != kind) {
    throw FormatError("expected model kind '" + std::string(kind) + "', found '" + j.value("kind", "") + "'");
  }
  const int v = j.value("version", -1);
  if (v != kModelFormatVersion) {
    throw FormatError(std::string(kind) + ": unsupported version " + std::to_string(v) + " (expected " +
                      std::to_string(kModelFormatVersion) + ")");
  }
  return j;
}

// Field access that reports the missing key instead of a bare json error.
template <typename T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError(std::string("field '") + key + "' has the wrong type");
  }
}

json dense_json(const Dense& d) { return {{"in", d.in}, {"out", d.out}, {"w", d.w}, {"b", d.b}}; }

Dense dense_from(const json& j) {
  Dense d(field<std::size_t>(j, "in"), field<std::size_t>(j, "out"));
  d.w = field<std::vector<double>>(j, "w");
  d.b = field<std::vector<double>>(j, "b");
  if (d.w.size() != d.in * d.out || d.b.size() != d.out) throw FormatError("dense layer shape mismatch");
  return d;
}

json params_json(const GbdtParams& p) {
  return {{"trees", p.trees},           {"max_depth", p.max_depth}, {"learning_rate", p.learning_rate},
          {"gamma", p.gamma},           {"lambda", p.lambda},       {"min_leaf", p.min_leaf},
          {"base_margin", p.base_margin}, {"objective", objective_name(p.objective)}, {"seed", p.seed}};
}

GbdtParams params_from(const json& j) {
  GbdtParams p;
  p.trees = field<std::size_t>(j, "trees");
  p.max_depth = field<std::size_t>(j, "max_depth");
  p.learning_rate = field<double>(j, "learning_rate");
  p.gamma = field<double>(j, "gamma");
  p.lambda = field<double>(j, "lambda");
  p.min_leaf = field<std::size_t>(j, "min_leaf");
  p.base_margin = field<double>(j, "base_margin");
  const auto obj = parse_objective(field<std::string>(j, "objective"));
  if (!obj) throw FormatError("unknown objective");
  p.objective = *obj;
  p.seed = field<std::uint64_t>(j, "seed");
  return p;
}

json ensemble_json(const GbdtEnsemble& e) {
  json trees = json::array();
  for (const auto& t : e.trees) {
    json nodes = json::array();
    for (const auto& n : t.nodes) {
      if (n.is_leaf()) {
        nodes.push_back({{"leaf", n.weight}});
      } else {
        nodes.push_back({{"feature", n.feature}, {"threshold", n.threshold}, {"left", n.left}, {"right", n.right},
                         {"gain", n.gain}});
      }
    }
    trees.push_back(nodes);
  }
  return {{"base_margin", e.base_margin}, {"num_features", e.num_features}, {"params", params_json(e.params)},
          {"trees", trees}};
}

GbdtEnsemble ensemble_from(const json& j) {
  GbdtEnsemble e;
  e.base_margin = field<double>(j, "base_margin");
  e.num_features = field<std::size_t>(j, "num_features");
  e.params = params_from(j.at("params"));
  for (const auto& tj : field<json>(j, "trees")) {
    Tree t;
    for (const auto& nj : tj) {
      TreeNode n;
      if (nj.contains("leaf")) {
        n.weight = field<double>(nj, "leaf");
      } else {
        n.feature = field<int>(nj, "feature");
        n.threshold = field<double>(nj, "threshold");
        n.left = field<int>(nj, "left");
        n.right = field<int>(nj, "right");
        n.gain = field<double>(nj, "gain");
      }
      t.nodes.push_back(n);
    }
    const auto count = static_cast<int>(t.nodes.size());
    for (const auto& n : t.nodes) {
      if (n.is_leaf()) continue;
      if (n.left <= 0 || n.left >= count || n.right <= 0 || n.right >= count ||
          static_cast<std::size_t>(n.feature) >= e.num_features) {
        throw FormatError("tree node references out of range");
      }
    }
    e.trees.push_back(std::move(t));
  }
  return e;
}

json schema_json(const RankSchema& s) {
  json feats = json::array();
  for (const auto& f : s.job.features) feats.push_back({{"name", f.name}, {"values", f.values}});
  std::vector<std::string> dropped;
  for (auto g : s.dropped) dropped.emplace_back(group_name(g));
  return {{"job_features", feats},
          {"parameter_buckets", s.parameter_buckets},
          {"parameter_support", s.parameter_support},
          {"dropped", dropped},
          {"columns", s.column_names()}};
}

RankSchema schema_from(const json& j) {
  RankSchema s;
  s.job.features.clear();
  for (const auto& f : field<json>(j, "job_features")) {
    s.job.features.push_back({field<std::string>(f, "name"), field<std::vector<std::string>>(f, "values")});
  }
  s.parameter_buckets = field<std::size_t>(j, "parameter_buckets");
  s.parameter_support = field<std::size_t>(j, "parameter_support");
  for (const auto& g : field<std::vector<std::string>>(j, "dropped")) {
    const auto fg = parse_group(g);
    if (!fg) throw FormatError("unknown feature group '" + g + "'");
    s.dropped.insert(*fg);
  }
  return s;
}

json pmi_json(const PmiTable& t) {
  json joint = json::array();
  for (const auto& [k, c] : t.joint) {
    joint.push_back({std::get<0>(k), std::get<1>(k), std::get<2>(k), std::get<3>(k), c});
  }
  return {{"alpha", t.alpha},         {"total", t.total},           {"job_features", t.job_features},
          {"question_features", t.question_features}, {"supports", t.supports}, {"marginals", t.marginals},
          {"joint", joint}};
}

PmiTable pmi_from(const json& j) {
  PmiTable t;
  t.alpha = field<double>(j, "alpha");
  t.total = field<double>(j, "total");
  t.job_features = field<std::set<std::string>>(j, "job_features");
  t.question_features = field<std::set<std::string>>(j, "question_features");
  t.supports = field<std::map<std::string, std::size_t>>(j, "supports");
  t.marginals = field<std::map<std::string, std::map<std::string, double>>>(j, "marginals");
  for (const auto& e : field<json>(j, "joint")) {
    if (!e.is_array() || e.size() != 5) throw FormatError("pmi joint entry must have 5 elements");
    t.joint[{e[0].get<std::string>(), e[1].get<std::string>(), e[2].get<std::string>(), e[3].get<std::string>()}] =
        e[4].get<double>();
  }
  return t;
}

}  // namespace

std::string serialize_tc(const DanTcModel& model) {
  json j = header("dan-tc");
  const auto& emb = model.embeddings();
  j["hash"] = EmbeddingTable::kHashName;
  j["dim"] = emb.dim();
  j["buckets"] = emb.buckets();
  j["vocab"] = emb.vocab();
  j["embeddings"] = emb.data();
  j["dropout"] = model.dropout();
  j["max_tokens"] = model.max_tokens();
  json layers = json::array();
  for (const auto& l : model.layers()) layers.push_back(dense_json(l));
  j["layers"] = layers;
  return j.dump();
}

DanTcModel deserialize_tc(std::string_view text) {
  const json j = parse_checked(text, "dan-tc");
  if (field<std::string>(j, "hash") != EmbeddingTable::kHashName) throw FormatError("unsupported OOV hash");
  EmbeddingTable emb(field<std::vector<std::string>>(j, "vocab"), field<std::size_t>(j, "dim"),
                     field<std::size_t>(j, "buckets"));
  auto data = field<std::vector<double>>(j, "embeddings");
  if (data.size() != emb.data().size()) throw FormatError("embedding table shape mismatch");
  emb.data() = std::move(data);
  std::vector<Dense> layers;
  for (const auto& l : field<json>(j, "layers")) layers.push_back(dense_from(l));
  try {
    return DanTcModel(std::move(emb), std::move(layers), field<double>(j, "dropout"),
                      field<std::size_t>(j, "max_tokens"));
  } catch (const FormatError&) {
    throw;
  } catch (const Error& e) {
    throw FormatError(std::string("dan-tc: ") + e.what());
  }
}

std::string serialize_scorer(const ScorerFile& s) {
  json j = header("mention-scorer");
  j["weights"] = s.scorer.weights;
  j["bias"] = s.scorer.bias;
  j["threshold"] = s.scorer.threshold;
  j["frequency"] = s.frequency;
  return j.dump();
}

ScorerFile deserialize_scorer(std::string_view text) {
  const json j = parse_checked(text, "mention-scorer");
  ScorerFile s;
  s.scorer.weights = field<std::vector<double>>(j, "weights");
  if (s.scorer.weights.size() != MentionFeatures::kCount) throw FormatError("mention scorer weight count");
  s.scorer.bias = field<double>(j, "bias");
  s.scorer.threshold = field<double>(j, "threshold");
  s.frequency = field<MentionFrequency>(j, "frequency");
  return s;
}

std::string serialize_ranker(const RankerFile& r) {
  json j = header("ranker");
  j["ensemble"] = ensemble_json(r.ensemble);
  j["schema"] = schema_json(r.schema);
  j["pmi"] = pmi_json(r.pmi);
  return j.dump();
}

RankerFile deserialize_ranker(std::string_view text) {
  const json j = parse_checked(text, "ranker");
  RankerFile r;
  try {
    r.ensemble = ensemble_from(field<json>(j, "ensemble"));
    r.schema = schema_from(field<json>(j, "schema"));
    r.pmi = pmi_from(field<json>(j, "pmi"));
  } catch (const json::exception& e) {
    throw FormatError(std::string("ranker: ") + e.what());
  }
  if (r.schema.arity() != r.ensemble.num_features) {
    throw FormatError("ranker: schema arity " + std::to_string(r.schema.arity()) + " differs from ensemble arity " +
                      std::to_string(r.ensemble.num_features));
  }
  return r;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

BundlePaths::BundlePaths(const std::filesystem::path& dir)
    : tc(dir / "tc.json"), scorer(dir / "scorer.json"), ranker(dir / "ranker.json"), taxonomy(dir / "taxonomy.tsv") {}

SqgModels load_bundle(const std::filesystem::path& dir, std::size_t k, double null_margin) {
  const BundlePaths p(dir);
  auto tc = std::make_shared<const DanTcModel>(deserialize_tc(read_text_file(p.tc)));
  auto tax = std::make_shared<const Taxonomy>(load_taxonomy(p.taxonomy));
  auto sc = deserialize_scorer(read_text_file(p.scorer));
  auto rk = deserialize_ranker(read_text_file(p.ranker));
  return SqgModels{CandidateGenerator(tc, tax, std::move(sc.scorer), std::move(sc.frequency), null_margin),
                   std::move(rk.ensemble), std::move(rk.pmi), std::move(rk.schema), k};
}

}  // namespace sqgen
