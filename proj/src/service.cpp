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

#include "sqgen/service.hpp"

#include <chrono>

#include "httplib.h"
#include "json.hpp"
#include "sqgen/error.hpp"
#include "sqgen/param_extract.hpp"

namespace sqgen {
namespace {

using nlohmann::json;

HttpReply error_reply(int status, const std::string& message) { return {status, json{{"error", message}}.dump(-1, ' ', false, json::error_handler_t::replace)}; }

std::set<std::string> job_ids(const std::vector<JobPosting>& jobs) {
  std::set<std::string> ids;
  for (const auto& j : jobs) ids.insert(j.id);
  return ids;
}

json question_json(const RankedQuestion& r) {
  return {{"template", template_name(r.question.tmpl)},
          {"parameter", r.question.parameter ? json(*r.question.parameter) : json(nullptr)},
          {"score", r.score}};
}

std::string decision_name(const std::optional<FeedbackLabel>& d) {
  return d ? std::string(label_name(*d)) : std::string("undecided");
}

std::string excerpt(const std::string& body) {
  constexpr std::size_t kMax = 160;
  if (body.size() <= kMax) return body;
  std::size_t cut = kMax;
  while (cut > 0 && (static_cast<unsigned char>(body[cut]) & 0xC0) == 0x80) --cut;
  return body.substr(0, cut) + "...";
}

}  // namespace

FeedbackStore::FeedbackStore(std::filesystem::path path, std::set<std::string> known_jobs,
                             const Taxonomy& taxonomy)
    : path_(std::move(path)), known_jobs_(std::move(known_jobs)), taxonomy_(&taxonomy) {
  if (std::filesystem::exists(path_)) log_ = load_dataset<FeedbackTriple>(path_);
  for (const auto& t : log_) latest_[{t.job_id, t.question()}] = t.label;
}

std::size_t FeedbackStore::record(const FeedbackTriple& triple) {
  if (!known_jobs_.count(triple.job_id)) throw InvalidArgument("unknown job id '" + triple.job_id + "'");
  if (triple.tmpl == TemplateId::kNull) throw InvalidArgument("template NULL cannot be a screening question");
  if (!is_valid_question(triple.question(), *taxonomy_)) {
    throw InvalidArgument("parameter does not fit template " + std::string(template_name(triple.tmpl)));
  }
  std::lock_guard lock(mu_);
  append_record(triple, path_);
  log_.push_back(triple);
  latest_[{triple.job_id, triple.question()}] = triple.label;
  return log_.size() - 1;
}

std::size_t FeedbackStore::rows() const {
  std::lock_guard lock(mu_);
  return log_.size();
}

std::vector<FeedbackTriple> FeedbackStore::deduped() const {
  std::lock_guard lock(mu_);
  return dedup_feedback(log_);
}

std::optional<FeedbackLabel> FeedbackStore::decision(const std::string& job_id, const ScreeningQuestion& q) const {
  std::lock_guard lock(mu_);
  const auto it = latest_.find({job_id, q});
  if (it == latest_.end()) return std::nullopt;
  return it->second;
}

SqgService::SqgService(SqgModels models, std::vector<JobPosting> jobs, std::filesystem::path feedback_path)
    : models_(std::move(models)),
      jobs_(std::move(jobs)),
      store_(std::move(feedback_path), job_ids(jobs_), models_.generator.taxonomy()) {
  for (std::size_t i = 0; i < jobs_.size(); ++i) {
    if (!job_index_.emplace(jobs_[i].id, i).second) throw InvalidArgument("duplicate job id '" + jobs_[i].id + "'");
    suggestions_.push_back(generate_questions(jobs_[i], models_));
  }
}

HttpReply SqgService::health() const {
  return {200, json{{"status", "ok"}, {"jobs", jobs_.size()}, {"k", models_.k}}.dump(-1, ' ', false, json::error_handler_t::replace)};
}

HttpReply SqgService::suggest(std::string_view body) const {
  json req;
  try {
    req = json::parse(body);
  } catch (const json::exception&) {
    return error_reply(400, "request body is not valid JSON");
  }
  if (!req.is_object() || !req.contains("body") || !req.at("body").is_string()) {
    return error_reply(400, "job document needs a string 'body'");
  }
  JobPosting job;
  job.id = req.value("id", "");
  job.title = req.value("title", "");
  job.body = req.at("body").get<std::string>();
  if (req.contains("features")) {
    if (!req.at("features").is_object()) return error_reply(400, "'features' must be an object of strings");
    for (const auto& [k, v] : req.at("features").items()) {
      if (!v.is_string()) return error_reply(400, "feature '" + k + "' must be a string");
      job.features[k] = v.get<std::string>();
    }
  }
  try {
    const auto ranked = generate_questions(job, models_);
    json qs = json::array();
    for (const auto& r : ranked) qs.push_back(question_json(r));
    return {200, json{{"job_id", job.id}, {"questions", qs}}.dump(-1, ' ', false, json::error_handler_t::replace)};
  } catch (const InvalidArgument& e) {
    return error_reply(400, std::string("job is missing or has an invalid feature: ") + e.what());
  }
}

HttpReply SqgService::feedback(std::string_view body) {
  json req;
  try {
    req = json::parse(body);
  } catch (const json::exception&) {
    return error_reply(400, "request body is not valid JSON");
  }
  if (!req.is_object()) return error_reply(400, "feedback must be a JSON object");
  FeedbackTriple t;
  if (!req.contains("job_id") || !req.at("job_id").is_string()) return error_reply(400, "missing 'job_id'");
  t.job_id = req.at("job_id").get<std::string>();
  if (!req.contains("template") || !req.at("template").is_string()) return error_reply(400, "missing 'template'");
  const auto tmpl = parse_template(req.at("template").get<std::string>());
  if (!tmpl) return error_reply(400, "unknown template '" + req.at("template").get<std::string>() + "'");
  t.tmpl = *tmpl;
  if (req.contains("parameter") && !req.at("parameter").is_null()) {
    if (!req.at("parameter").is_string()) return error_reply(400, "'parameter' must be a string or null");
    t.parameter = req.at("parameter").get<std::string>();
  }
  const std::string label = req.value("label", "");
  if (label == "accepted") {
    t.label = FeedbackLabel::kAccepted;
  } else if (label == "rejected") {
    t.label = FeedbackLabel::kRejected;
  } else {
    return error_reply(400, "'label' must be accepted or rejected");
  }
  if (req.contains("timestamp")) {
    if (!req.at("timestamp").is_number_integer()) return error_reply(400, "'timestamp' must be an integer");
    t.timestamp = req.at("timestamp").get<std::int64_t>();
  } else {
    t.timestamp = std::chrono::duration_cast<std::chrono::seconds>(
                      std::chrono::system_clock::now().time_since_epoch())
                      .count();
  }
  try {
    const auto offset = store_.record(t);
    return {200, json{{"offset", offset}}.dump(-1, ' ', false, json::error_handler_t::replace)};
  } catch (const InvalidArgument& e) {
    return error_reply(400, e.what());
  } catch (const Error& e) {
    return error_reply(500, std::string("feedback not stored: ") + e.what());
  }
}

HttpReply SqgService::pending() const {
  json rows = json::array();
  // Most recently posted first: later lines of the jobs file are newer.
  for (std::size_t i = jobs_.size(); i-- > 0;) {
    std::size_t undecided = 0;
    for (const auto& r : suggestions_[i]) undecided += store_.decision(jobs_[i].id, r.question) ? 0 : 1;
    if (undecided == 0) continue;
    rows.push_back({{"id", jobs_[i].id},
                    {"title", jobs_[i].title},
                    {"excerpt", excerpt(jobs_[i].body)},
                    {"suggestions", suggestions_[i].size()},
                    {"undecided", undecided}});
  }
  return {200, json{{"jobs", rows}}.dump(-1, ' ', false, json::error_handler_t::replace)};
}

HttpReply SqgService::job_suggestions(const std::string& job_id) const {
  const auto it = job_index_.find(job_id);
  if (it == job_index_.end()) return error_reply(404, "unknown job id '" + job_id + "'");
  const auto& job = jobs_[it->second];
  json qs = json::array();
  for (const auto& r : suggestions_[it->second]) {
    auto q = question_json(r);
    q["decision"] = decision_name(store_.decision(job.id, r.question));
    qs.push_back(q);
  }
  return {200, json{{"job_id", job.id}, {"title", job.title}, {"body", job.body}, {"questions", qs}}.dump(-1, ' ', false, json::error_handler_t::replace)};
}

void SqgService::mount(httplib::Server& server) {
  auto send = [](httplib::Response& res, const HttpReply& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  server.Get("/health", [this, send](const httplib::Request&, httplib::Response& res) { send(res, health()); });
  server.Post("/suggest",
              [this, send](const httplib::Request& req, httplib::Response& res) { send(res, suggest(req.body)); });
  server.Post("/feedback",
              [this, send](const httplib::Request& req, httplib::Response& res) { send(res, feedback(req.body)); });
  server.Get("/jobs/pending", [this, send](const httplib::Request&, httplib::Response& res) { send(res, pending()); });
  server.Get(R"(/jobs/([^/]+)/suggestions)", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, job_suggestions(req.matches[1]));
  });
}

void serve(SqgService& service, const std::string& host, int port) {
  httplib::Server server;
  service.mount(server);
  if (!server.bind_to_port(host, port)) throw IoError("cannot bind " + host + ":" + std::to_string(port));
  server.listen_after_bind();
}

}  // namespace sqgen
