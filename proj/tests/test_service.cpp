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

#include <filesystem>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "sqgen/service.hpp"
#include "support.hpp"

using namespace sqgen;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const testing::SmallWorld& world() {
  static const auto w = testing::small_world(5);
  return w;
}

std::vector<JobPosting> service_jobs() {
  const auto& jobs = world().corpus.jobs.test;
  return {jobs.begin(), jobs.begin() + 12};
}

fs::path fresh_log(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "sqgen_service_test";
  fs::create_directories(dir);
  const auto p = dir / (name + ".jsonl");
  fs::remove(p);
  return p;
}

// Runs a service on an ephemeral port for the lifetime of the object.
class LiveServer {
 public:
  explicit LiveServer(SqgService& service) {
    service.mount(server_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    REQUIRE(port_ > 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~LiveServer() {
    server_.stop();
    thread_.join();
  }
  httplib::Client client() const { return httplib::Client("127.0.0.1", port_); }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

json job_document(const JobPosting& j) {
  json f = json::object();
  for (const auto& [k, v] : j.features) f[k] = v;
  return {{"id", j.id}, {"title", j.title}, {"body", j.body}, {"features", f}};
}

json feedback_body(const std::string& job, const std::string& tmpl, const json& param, const std::string& label,
                   int ts) {
  return {{"job_id", job}, {"template", tmpl}, {"parameter", param}, {"label", label}, {"timestamp", ts}};
}

// First parameterised suggestion of some job, as (job id, question).
std::pair<std::string, RankedQuestion> some_suggestion(const SqgService& svc) {
  for (const auto& j : service_jobs()) {
    const auto r = json::parse(svc.job_suggestions(j.id).body);
    if (!r["questions"].empty()) {
      const auto& q = r["questions"][0];
      RankedQuestion rq;
      rq.question.tmpl = *parse_template(q["template"].get<std::string>());
      if (!q["parameter"].is_null()) rq.question.parameter = q["parameter"].get<std::string>();
      return {j.id, rq};
    }
  }
  FAIL("no job has suggestions");
  return {};
}

json param_json(const ScreeningQuestion& q) { return q.parameter ? json(*q.parameter) : json(nullptr); }

}  // namespace

TEST_CASE("health and suggest over http") {
  const auto log = fresh_log("suggest");
  SqgService svc(*world().models, service_jobs(), log);
  LiveServer live(svc);
  auto cli = live.client();

  auto h = cli.Get("/health");
  REQUIRE(h);
  CHECK(h->status == 200);
  CHECK(json::parse(h->body)["status"] == "ok");

  const auto doc = job_document(service_jobs()[0]).dump();
  auto a = cli.Post("/suggest", doc, "application/json");
  auto b = cli.Post("/suggest", doc, "application/json");
  REQUIRE(a);
  REQUIRE(b);
  CHECK(a->status == 200);
  CHECK(a->body == b->body);
  const auto r = json::parse(a->body);
  CHECK(r["questions"].size() <= world().models->k);
  const auto direct = generate_questions(service_jobs()[0], *world().models);
  REQUIRE(r["questions"].size() == direct.size());
  for (std::size_t i = 0; i < direct.size(); ++i) {
    CHECK(r["questions"][i]["template"] == std::string(template_name(direct[i].question.tmpl)));
    CHECK(r["questions"][i]["score"].get<double>() == doctest::Approx(direct[i].score));
  }
  // Suggest is read-only.
  CHECK_FALSE(fs::exists(log));
  CHECK(svc.store().rows() == 0);
}

TEST_CASE("suggest validation") {
  SqgService svc(*world().models, service_jobs(), fresh_log("suggest_bad"));
  LiveServer live(svc);
  auto cli = live.client();
  auto bad = cli.Post("/suggest", "{nope", "application/json");
  REQUIRE(bad);
  CHECK(bad->status == 400);
  auto doc = job_document(service_jobs()[0]);
  doc["features"].erase("seniority");
  auto missing = cli.Post("/suggest", doc.dump(), "application/json");
  REQUIRE(missing);
  CHECK(missing->status == 400);
  CHECK(json::parse(missing->body)["error"].get<std::string>().find("seniority") != std::string::npos);
  auto no_body = cli.Post("/suggest", R"({"id":"x"})", "application/json");
  CHECK(no_body->status == 400);
}

TEST_CASE("feedback validation persists nothing on error") {
  const auto log = fresh_log("feedback_bad");
  SqgService svc(*world().models, service_jobs(), log);
  LiveServer live(svc);
  auto cli = live.client();
  const auto job = service_jobs()[0].id;
  const json bad[] = {
      feedback_body(job, "Pizza", nullptr, "accepted", 1),
      feedback_body(job, "NULL", nullptr, "accepted", 1),
      feedback_body(job, "Tools", nullptr, "accepted", 1),
      feedback_body(job, "Tools", "spanish", "accepted", 1),
      feedback_body(job, "WorkAuth", nullptr, "maybe", 1),
      feedback_body("no-such-job", "WorkAuth", nullptr, "accepted", 1),
  };
  for (const auto& b : bad) {
    auto r = cli.Post("/feedback", b.dump(), "application/json");
    REQUIRE(r);
    CHECK(r->status == 400);
    CHECK(json::parse(r->body).contains("error"));
  }
  CHECK(svc.store().rows() == 0);
  CHECK((!fs::exists(log) || fs::file_size(log) == 0));
}

TEST_CASE("feedback dedup, decisions, pending and restart") {
  const auto log = fresh_log("feedback");
  const auto jobs = service_jobs();
  std::string job;
  ScreeningQuestion q;
  std::size_t pending_before = 0;
  {
    SqgService svc(*world().models, jobs, log);
    LiveServer live(svc);
    auto cli = live.client();
    const auto [jid, rq] = some_suggestion(svc);
    job = jid;
    q = rq.question;

    pending_before = json::parse(cli.Get("/jobs/pending")->body)["jobs"].size();
    REQUIRE(pending_before > 0);

    const auto tmpl = std::string(template_name(q.tmpl));
    auto r1 = cli.Post("/feedback", feedback_body(job, tmpl, param_json(q), "rejected", 10).dump(), "application/json");
    auto r2 = cli.Post("/feedback", feedback_body(job, tmpl, param_json(q), "accepted", 11).dump(), "application/json");
    REQUIRE(r1);
    REQUIRE(r2);
    CHECK(json::parse(r1->body)["offset"] == 0);
    CHECK(json::parse(r2->body)["offset"] == 1);
    CHECK(svc.store().rows() == 2);
    CHECK(svc.store().deduped().size() == 1);
    CHECK(svc.store().decision(job, q) == FeedbackLabel::kAccepted);

    auto s = cli.Get(("/jobs/" + job + "/suggestions").c_str());
    REQUIRE(s);
    CHECK(s->status == 200);
    CHECK(json::parse(s->body)["questions"][0]["decision"] == "accepted");

    auto missing = cli.Get("/jobs/nope/suggestions");
    REQUIRE(missing);
    CHECK(missing->status == 404);

    // Pending lists later jobs first.
    const auto pend = json::parse(cli.Get("/jobs/pending")->body)["jobs"];
    std::vector<std::size_t> order;
    for (const auto& p : pend) {
      for (std::size_t i = 0; i < jobs.size(); ++i) {
        if (jobs[i].id == p["id"]) order.push_back(i);
      }
    }
    CHECK(std::is_sorted(order.rbegin(), order.rend()));
  }
  // A new service over the same log sees the acknowledged decisions.
  SqgService again(*world().models, jobs, log);
  CHECK(again.store().rows() == 2);
  CHECK(again.store().decision(job, q) == FeedbackLabel::kAccepted);
  const auto loaded = load_dataset<FeedbackTriple>(log);
  REQUIRE(loaded.size() == 2);
  CHECK(loaded[1].label == FeedbackLabel::kAccepted);
  CHECK(loaded[1].timestamp == 11);
}

TEST_CASE("concurrent feedback is serialised") {
  const auto log = fresh_log("concurrent");
  SqgService svc(*world().models, service_jobs(), log);
  LiveServer live(svc);
  const auto job = service_jobs()[0].id;
  std::vector<std::thread> threads;
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([&, t] {
      auto cli = live.client();
      for (int i = 0; i < 10; ++i) {
        const auto b = feedback_body(job, i % 2 ? "WorkAuth" : "Sponsorship", nullptr, "rejected", t * 100 + i);
        cli.Post("/feedback", b.dump(), "application/json");
      }
    });
  }
  for (auto& th : threads) th.join();
  CHECK(svc.store().rows() == 40);
  CHECK(load_dataset<FeedbackTriple>(log).size() == 40);
  CHECK(svc.store().deduped().size() == 2);
}
