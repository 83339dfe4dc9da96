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

#include "sqgen/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include "json.hpp"

#include "sqgen/error.hpp"

namespace sqgen {
namespace {

using nlohmann::json;

const json& require(const json& j, const char* field) {
  const auto it = j.find(field);
  if (it == j.end()) throw InvalidArgument(std::string("missing field '") + field + "'");
  return *it;
}

std::string require_string(const json& j, const char* field) {
  const auto& v = require(j, field);
  if (!v.is_string()) throw InvalidArgument(std::string("field '") + field + "' must be a string");
  return v.get<std::string>();
}

TemplateId require_template(const json& j) {
  const auto name = require_string(j, "template");
  const auto t = parse_template(name);
  if (!t) throw InvalidArgument("unknown template '" + name + "'");
  return *t;
}

template <typename Record>
Record from_json(const json& j);

template <>
JobPosting from_json<JobPosting>(const json& j) {
  JobPosting r;
  r.id = require_string(j, "id");
  if (r.id.empty()) throw InvalidArgument("job id is empty");
  r.title = require_string(j, "title");
  r.body = require_string(j, "body");
  const auto& f = require(j, "features");
  if (!f.is_object()) throw InvalidArgument("field 'features' must be an object");
  for (const auto& [k, v] : f.items()) {
    if (!v.is_string()) throw InvalidArgument("job feature '" + k + "' must be a string");
    r.features.emplace(k, v.get<std::string>());
  }
  return r;
}

template <>
LabeledSentence from_json<LabeledSentence>(const json& j) {
  LabeledSentence r;
  r.text = require_string(j, "text");
  if (r.text.empty()) throw InvalidArgument("sentence text is empty");
  r.gold = require_template(j);
  return r;
}

template <>
FeedbackTriple from_json<FeedbackTriple>(const json& j) {
  FeedbackTriple r;
  r.job_id = require_string(j, "job_id");
  r.tmpl = require_template(j);
  if (r.tmpl == TemplateId::kNull) throw InvalidArgument("feedback cannot use the NULL template");
  const auto& p = require(j, "parameter");
  if (p.is_string()) {
    r.parameter = p.get<std::string>();
  } else if (!p.is_null()) {
    throw InvalidArgument("field 'parameter' must be a string or null");
  }
  const auto label = require_string(j, "label");
  if (label == "accepted") {
    r.label = FeedbackLabel::kAccepted;
  } else if (label == "rejected") {
    r.label = FeedbackLabel::kRejected;
  } else {
    throw InvalidArgument("label must be 'accepted' or 'rejected'");
  }
  const auto& ts = require(j, "timestamp");
  if (!ts.is_number_integer()) throw InvalidArgument("field 'timestamp' must be an integer");
  r.timestamp = ts.get<std::int64_t>();
  return r;
}

json to_json(const JobPosting& r) {
  json f = json::object();
  for (const auto& [k, v] : r.features) f[k] = v;
  return json{{"id", r.id}, {"title", r.title}, {"body", r.body}, {"features", f}};
}

json to_json(const LabeledSentence& r) {
  return json{{"text", r.text}, {"template", template_name(r.gold)}};
}

json to_json(const FeedbackTriple& r) {
  return json{{"job_id", r.job_id},
              {"template", template_name(r.tmpl)},
              {"parameter", r.parameter ? json(*r.parameter) : json(nullptr)},
              {"label", label_name(r.label)},
              {"timestamp", r.timestamp}};
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

const JobFeatureSpec* JobFeatureSchema::find(std::string_view name) const {
  for (const auto& f : features) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

std::vector<std::string> JobFeatureSchema::names() const {
  std::vector<std::string> out;
  for (const auto& f : features) out.push_back(f.name);
  return out;
}

JobFeatureSchema default_job_schema() {
  return {{
      {"industry",
       {"software", "finance", "healthcare", "retail", "manufacturing", "education", "government",
        "logistics", "hospitality", "energy", "media", "telecom", "construction", "legal",
        "nonprofit", "consulting"}},
      {"company_size", {"1-10", "11-50", "51-200", "201-1000", "1001-5000", "5001+"}},
      {"seniority", {"intern", "entry", "associate", "mid_senior", "director", "executive"}},
      {"function",
       {"engineering", "sales", "marketing", "operations", "finance", "hr", "it", "design",
        "healthcare_services", "support", "legal", "research"}},
      {"region", {"northeast", "southeast", "midwest", "southwest", "west", "remote"}},
      {"employment_status", {"full_time", "part_time", "contract", "temporary", "internship"}},
      {"experience_level", {"0-1", "1-3", "3-5", "5-10", "10+"}},
      {"title_group",
       {"developer", "analyst", "manager", "nurse", "driver", "accountant", "designer",
        "technician", "teacher", "representative", "engineer", "specialist"}},
  }};
}

void validate_jobs(std::span<const JobPosting> jobs, const JobFeatureSchema& schema) {
  std::set<std::string_view> seen;
  for (const auto& j : jobs) {
    if (j.id.empty()) throw InvalidArgument("job with empty id");
    if (!seen.insert(j.id).second) throw InvalidArgument("duplicate job id " + j.id);
    for (const auto& [name, value] : j.features) {
      if (schema.find(name) == nullptr) {
        throw InvalidArgument("job " + j.id + " has undeclared feature '" + name + "'");
      }
    }
  }
}

std::vector<FeedbackTriple> dedup_feedback(std::span<const FeedbackTriple> triples) {
  using Key = std::tuple<std::string, int, std::optional<std::string>>;
  std::map<Key, std::size_t> last;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const auto& t = triples[i];
    last[Key{t.job_id, static_cast<int>(t.tmpl), t.parameter}] = i;
  }
  std::vector<std::size_t> keep;
  keep.reserve(last.size());
  for (const auto& [k, i] : last) keep.push_back(i);
  std::sort(keep.begin(), keep.end());
  std::vector<FeedbackTriple> out;
  out.reserve(keep.size());
  for (auto i : keep) out.push_back(triples[i]);
  return out;
}

std::string_view label_name(FeedbackLabel label) {
  return label == FeedbackLabel::kAccepted ? "accepted" : "rejected";
}

namespace {

std::string dump_record(const nlohmann::json& j) {
  try {
    return j.dump();
  } catch (const nlohmann::json::type_error&) {
    throw InvalidArgument("record text is not valid UTF-8");
  }
}

}  // namespace

std::string format_record(const JobPosting& r) { return dump_record(to_json(r)); }
std::string format_record(const LabeledSentence& r) { return dump_record(to_json(r)); }
std::string format_record(const FeedbackTriple& r) { return dump_record(to_json(r)); }

template <typename Record>
std::vector<Record> parse_dataset(std::string_view text) {
  std::vector<Record> out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  std::set<std::string> job_ids;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    try {
      const auto j = json::parse(line);
      if (!j.is_object()) throw InvalidArgument("record must be a JSON object");
      out.push_back(from_json<Record>(j));
    } catch (const json::exception& e) {
      throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
    } catch (const InvalidArgument& e) {
      throw ParseError(line_no, e.what());
    }
    if constexpr (std::is_same_v<Record, JobPosting>) {
      if (!job_ids.insert(out.back().id).second) throw ParseError(line_no, "duplicate job id " + out.back().id);
    }
  }
  return out;
}

template <typename Record>
std::string format_dataset(std::span<const Record> records) {
  std::string out;
  for (const auto& r : records) {
    out += format_record(r);
    out += '\n';
  }
  return out;
}

template <typename Record>
std::vector<Record> load_dataset(const std::filesystem::path& path) {
  return parse_dataset<Record>(read_file(path));
}

template <typename Record>
void write_dataset(std::span<const Record> records, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << format_dataset(records);
  if (!out) throw IoError("write failed for " + path.string());
}

void append_record(const FeedbackTriple& r, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) throw IoError("cannot append to " + path.string());
  out << format_record(r) << '\n';
  out.flush();
  if (!out) throw IoError("append failed for " + path.string());
}

template std::vector<JobPosting> parse_dataset<JobPosting>(std::string_view);
template std::vector<LabeledSentence> parse_dataset<LabeledSentence>(std::string_view);
template std::vector<FeedbackTriple> parse_dataset<FeedbackTriple>(std::string_view);
template std::string format_dataset<JobPosting>(std::span<const JobPosting>);
template std::string format_dataset<LabeledSentence>(std::span<const LabeledSentence>);
template std::string format_dataset<FeedbackTriple>(std::span<const FeedbackTriple>);
template std::vector<JobPosting> load_dataset<JobPosting>(const std::filesystem::path&);
template std::vector<LabeledSentence> load_dataset<LabeledSentence>(const std::filesystem::path&);
template std::vector<FeedbackTriple> load_dataset<FeedbackTriple>(const std::filesystem::path&);
template void write_dataset<JobPosting>(std::span<const JobPosting>, const std::filesystem::path&);
template void write_dataset<LabeledSentence>(std::span<const LabeledSentence>, const std::filesystem::path&);
template void write_dataset<FeedbackTriple>(std::span<const FeedbackTriple>, const std::filesystem::path&);

}  // namespace sqgen
