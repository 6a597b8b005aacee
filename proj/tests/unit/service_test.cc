// Copyright 2026 The rulebridge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <fstream>

#include "doctest.h"
#include "rulebridge/service.h"
#include "test_support.h"

namespace rb = rulebridge;
using nlohmann::json;
using rbtest::fixture;

namespace {

rb::EngineConfig fixture_config() {
  rb::EngineConfig cfg;
  cfg.recipes = fixture("recipes.csv");
  cfg.ontology = fixture("ontology.owl");
  cfg.vectors = fixture("vectors.txt");
  return cfg;
}

struct Harness {
  rb::Engine engine;
  rb::Api api;
  explicit Harness(rb::EngineConfig cfg = fixture_config()) : engine(std::move(cfg)), api(engine) {}

  rb::ApiResponse call(const std::string &method, const std::string &path,
                       const std::string &body = "",
                       std::map<std::string, std::string> query = {}) {
    rb::ApiRequest req;
    req.method = method;
    req.path = path;
    req.body = body;
    req.query = std::move(query);
    if (!engine.config().token.empty()) req.authorization = "Bearer " + engine.config().token;
    return api.handle(req);
  }
};

std::string code_of(const rb::ApiResponse &r) { return r.body["error"]["code"].get<std::string>(); }

void check_envelope(const rb::ApiResponse &r) {
  REQUIRE(r.body.contains("error"));
  const auto &codes = rb::api_error_codes();
  CHECK(std::find(codes.begin(), codes.end(), code_of(r)) != codes.end());
  CHECK(r.body["error"]["message"].is_string());
}

}  // namespace

TEST_SUITE("service") {
  TEST_CASE("health and catalog") {
    Harness h;
    auto health = h.call("GET", "/api/health");
    CHECK(health.status == 200);
    CHECK(health.body["status"] == "ok");
    CHECK(health.body["entailment_backend"] == "proxy");

    auto cat = h.call("GET", "/api/catalog/trigger");
    CHECK(cat.status == 200);
    CHECK(cat.body["count"] == h.engine.catalog().triggers.size());
    CHECK(cat.body["terms"][0]["name"] == "AC turned off");
    auto onto = h.call("GET", "/api/catalog/action", "", {{"source", "ontology"}});
    CHECK(onto.body["count"] == h.engine.ontology().actions.size());

    auto bad = h.call("GET", "/api/catalog/widget");
    CHECK(bad.status == 400);
    CHECK(code_of(bad) == "invalid-kind");
    check_envelope(bad);
    CHECK(h.call("GET", "/api/catalog/trigger", "", {{"source", "x"}}).status == 400);
  }

  TEST_CASE("translate") {
    Harness h;
    auto r = h.call("POST", "/api/translate", R"({"name": "A C turned off", "kind": "trigger"})");
    REQUIRE(r.status == 200);
    CHECK(r.body["method"] == "combined");
    CHECK(r.body["candidates"][0]["eupont_hypothesis"] == "Device Turned Off");
    CHECK(r.body["candidates"][0]["rank"] == 1);

    auto top1 = h.call("POST", "/api/translate",
                       R"({"name": "A C turned off", "kind": "trigger", "method": "entailment", "top": 1})");
    CHECK(top1.body["candidates"].size() == 1);

    auto bad_kind = h.call("POST", "/api/translate", R"({"name": "x", "kind": "both"})");
    CHECK(bad_kind.status == 400);
    CHECK(code_of(bad_kind) == "invalid-kind");
    auto no_kind = h.call("POST", "/api/translate", R"({"name": "x"})");
    CHECK(code_of(no_kind) == "invalid-kind");
    auto bad_method =
        h.call("POST", "/api/translate", R"({"name": "x", "kind": "trigger", "method": "bert"})");
    CHECK(bad_method.status == 400);
    CHECK(code_of(bad_method) == "invalid-method");
    auto bad_top =
        h.call("POST", "/api/translate", R"({"name": "x", "kind": "trigger", "top": -1})");
    CHECK(code_of(bad_top) == "invalid-request");
    auto bad_body = h.call("POST", "/api/translate", "[1,2");
    CHECK(code_of(bad_body) == "invalid-request");
    auto empty = h.call("POST", "/api/translate", R"({"name": "///", "kind": "trigger"})");
    CHECK(empty.status == 400);
    check_envelope(empty);
  }

  TEST_CASE("reviews pin the chosen term") {
    Harness h;
    auto posted = h.call("POST", "/api/reviews",
                         R"({"source_name": "A/C turned off", "kind": "trigger",
                             "verdict": "chosen", "candidate": "Device",
                             "accuracy": "accurate", "reviewer": "ann"})");
    REQUIRE(posted.status == 201);
    CHECK(posted.body["source_name"] == "AC turned off");
    auto r = h.call("POST", "/api/translate", R"({"name": "AC turned off", "kind": "trigger"})");
    CHECK(r.body["candidates"][0]["eupont_hypothesis"] == "Device");
    CHECK(r.body["candidates"][0]["pinned_by_review"] == true);

    auto listed = h.call("GET", "/api/reviews", "", {{"kind", "trigger"}});
    CHECK(listed.body["count"] == 1);
    CHECK(h.call("GET", "/api/reviews", "", {{"kind", "action"}}).body["count"] == 0);

    auto none = h.call("POST", "/api/reviews",
                       R"({"source_name": "AC turned off", "kind": "trigger", "verdict": "none"})");
    CHECK(none.status == 201);
    auto after = h.call("POST", "/api/translate", R"({"name": "AC turned off", "kind": "trigger"})");
    CHECK(after.body["no_result"] == true);
    CHECK(after.body["candidates"].empty());
    CHECK_FALSE(after.body["advisory_candidates"].empty());

    auto unknown = h.call("POST", "/api/reviews",
                          R"({"source_name": "x", "kind": "trigger", "verdict": "chosen",
                              "candidate": "Not A Term"})");
    CHECK(unknown.status == 400);
    auto bad_kind = h.call("POST", "/api/reviews", R"({"source_name": "x", "kind": "?"})");
    CHECK(code_of(bad_kind) == "invalid-kind");
  }

  TEST_CASE("rules: create, read, conflict, list") {
    Harness h;
    CHECK(h.call("GET", "/api/rules/missing").status == 404);
    auto doc = json::parse(rb::to_json(rbtest::sample_rule("r 1")).dump());
    doc.erase("id");
    auto created = h.call("PUT", "/api/rules/r%201", doc.dump());
    REQUIRE(created.status == 201);
    CHECK(created.body["revision"] == 1);
    CHECK(created.body["id"] == "r 1");
    CHECK(h.call("GET", "/api/rules/r%201").body["revision"] == 1);

    auto stale = h.call("PUT", "/api/rules/r%201", doc.dump());
    CHECK(stale.status == 409);
    CHECK(code_of(stale) == "conflict");
    CHECK(stale.body["error"]["detail"]["current_revision"] == 1);

    doc["revision"] = 1;
    CHECK(h.call("PUT", "/api/rules/r%201", doc.dump()).status == 200);
    doc["id"] = "other";
    CHECK(h.call("PUT", "/api/rules/r%201", doc.dump()).status == 400);

    CHECK(h.call("GET", "/api/rules").body["count"] == 1);
    CHECK(h.call("GET", "/api/rules", "", {{"platform", "zapier"}}).body["count"] == 0);
    CHECK(code_of(h.call("GET", "/api/rules", "", {{"method", "x"}})) == "invalid-method");
  }

  TEST_CASE("routing and auth") {
    auto cfg = fixture_config();
    cfg.token = "s3cret";
    Harness h(cfg);
    rb::ApiRequest anon;
    anon.method = "GET";
    anon.path = "/api/health";
    CHECK(h.api.handle(anon).status == 200);
    anon.path = "/api/catalog/trigger";
    auto denied = h.api.handle(anon);
    CHECK(denied.status == 401);
    CHECK(code_of(denied) == "unauthorized");
    anon.authorization = "Bearer wrong";
    CHECK(h.api.handle(anon).status == 401);
    CHECK(h.call("GET", "/api/catalog/trigger").status == 200);

    auto nf = h.call("GET", "/api/nothing");
    CHECK(nf.status == 404);
    CHECK(code_of(nf) == "not-found");
    auto mna = h.call("DELETE", "/api/rules/x");
    CHECK(mna.status == 405);
    CHECK(code_of(mna) == "method-not-allowed");
    CHECK(h.call("POST", "/api/health").status == 405);
  }

  TEST_CASE("library errors map onto the closed code set") {
    using K = rb::ErrorKind;
    CHECK(rb::api_error_from(rb::Error(K::kInvalidInput, "x")).status == 400);
    CHECK(rb::api_error_from(rb::Error(K::kParse, "x")).code == "invalid-request");
    CHECK(rb::api_error_from(rb::Error(K::kNotFound, "x")).status == 404);
    CHECK(rb::api_error_from(rb::Error(K::kConflict, "x")).status == 409);
    auto unavailable = rb::api_error_from(rb::Error(K::kUnavailable, "x"));
    CHECK(unavailable.status == 503);
    CHECK(unavailable.code == "scorer-unavailable");
    CHECK(rb::api_error_from(rb::Error(K::kIo, "x")).code == "internal");
  }

  TEST_CASE("scorer outage surfaces as 503") {
    rbtest::FakeEntailmentServer server;
    server.set_mode(rbtest::FakeEntailmentServer::Mode::kServerError);
    auto cfg = fixture_config();
    cfg.pipeline.entailment_backend = rb::EntailmentBackend::kRemote;
    cfg.remote_entailment.endpoint = server.url();
    cfg.remote_entailment.retries = 0;
    cfg.entailment_fallback = false;
    Harness h(cfg);
    auto r = h.call("POST", "/api/translate", R"({"name": "AC turned off", "kind": "trigger"})");
    CHECK(r.status == 503);
    CHECK(code_of(r) == "scorer-unavailable");
  }

  TEST_CASE("over a real socket with the UI mount") {
    rbtest::TempDir ui;
    {
      std::ofstream index(ui / "index.html");
      index << "<html>review</html>";
    }
    auto cfg = fixture_config();
    cfg.token = "tok";
    cfg.ui_dir = ui.path();
    rb::Engine engine(cfg);
    rb::Api api(engine);
    rbtest::ServerThread srv;
    rb::mount(srv.server(), api);
    srv.start();

    httplib::Client client(srv.url());
    auto health = client.Get("/api/health");
    REQUIRE(health);
    CHECK(health->status == 200);
    CHECK(health->get_header_value("Content-Type") == "application/json");

    auto page = client.Get("/ui/index.html");
    REQUIRE(page);
    CHECK(page->status == 200);
    CHECK(page->body == "<html>review</html>");

    httplib::Headers auth = {{"Authorization", "Bearer tok"}};
    auto tr = client.Post("/api/translate", auth,
                          R"({"name": "A C turned off", "kind": "trigger"})", "application/json");
    REQUIRE(tr);
    CHECK(tr->status == 200);
    CHECK(json::parse(tr->body)["candidates"][0]["eupont_hypothesis"] == "Device Turned Off");

    auto filtered = client.Get("/api/results?kind=trigger", auth);
    REQUIRE(filtered);
    CHECK(filtered->status == 200);
    CHECK(json::parse(filtered->body)["count"] == 0);

    auto denied = client.Get("/api/rules");
    REQUIRE(denied);
    CHECK(denied->status == 401);
  }

  TEST_CASE("missing UI directory fails at mount time") {
    auto cfg = fixture_config();
    cfg.ui_dir = "/nonexistent/ui";
    rb::Engine engine(cfg);
    rb::Api api(engine);
    httplib::Server server;
    CHECK_THROWS_AS(rb::mount(server, api), rb::Error);
  }
}
