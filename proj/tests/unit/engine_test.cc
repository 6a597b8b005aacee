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

#include <fstream>

#include "doctest.h"
#include "rulebridge/engine.h"
#include "test_support.h"

namespace rb = rulebridge;
using rbtest::fixture;
using rbtest::TempDir;

namespace {

std::optional<std::string> no_env(const std::string &) { return std::nullopt; }

void write(const std::filesystem::path &path, const std::string &text) {
  std::ofstream out(path);
  out << text;
}

rb::EngineConfig fixture_config() {
  rb::EngineConfig cfg;
  cfg.recipes = fixture("recipes.csv");
  cfg.ontology = fixture("ontology.owl");
  cfg.vectors = fixture("vectors.txt");
  return cfg;
}

}  // namespace

TEST_SUITE("engine") {
  TEST_CASE("defaults without a config file") {
    auto cfg = rb::load_config({}, no_env);
    CHECK(cfg.pipeline.threshold == 0.55);
    CHECK(cfg.pipeline.top_n == 5);
    CHECK(cfg.pipeline.method == rb::Method::kCombined);
    CHECK(cfg.token.empty());
  }

  TEST_CASE("INI values, relative paths and environment overrides") {
    TempDir dir;
    write(dir / "rb.ini",
          "[corpus]\nrecipes = data/recipes.csv\nontology = /abs/onto.owl\n"
          "[pipeline]\nthreshold = 0.6\ntop_n = 3\nmethod = embedding\n"
          "[service]\nport = 9000\ntoken = abc\n");
    std::map<std::string, std::string> env = {{"RULEBRIDGE_PIPELINE_THRESHOLD", "0.7"},
                                              {"RULEBRIDGE_SERVICE_PORT", "9100"}};
    auto lookup = [&env](const std::string &name) -> std::optional<std::string> {
      auto it = env.find(name);
      if (it == env.end()) return std::nullopt;
      return it->second;
    };
    auto cfg = rb::load_config(dir / "rb.ini", lookup);
    CHECK(cfg.recipes == dir.path() / "data/recipes.csv");
    CHECK(cfg.ontology == "/abs/onto.owl");
    CHECK(cfg.pipeline.threshold == 0.7);
    CHECK(cfg.pipeline.top_n == 3);
    CHECK(cfg.pipeline.method == rb::Method::kEmbedding);
    CHECK(cfg.port == 9100);
    CHECK(cfg.token == "abc");
  }

  TEST_CASE("bad configuration is rejected") {
    TempDir dir;
    write(dir / "unknown.ini", "[pipeline]\ncolour = red\n");
    CHECK_THROWS_WITH_AS(rb::load_config(dir / "unknown.ini", no_env),
                         doctest::Contains("unknown config key"), rb::Error);
    write(dir / "nan.ini", "[pipeline]\nthreshold = high\n");
    CHECK_THROWS_AS(rb::load_config(dir / "nan.ini", no_env), rb::Error);
    write(dir / "range.ini", "[pipeline]\nthreshold = 1.5\n");
    CHECK_THROWS_AS(rb::load_config(dir / "range.ini", no_env), rb::Error);
    write(dir / "broken.ini", "[pipeline\n");
    CHECK_THROWS_AS(rb::load_config(dir / "broken.ini", no_env), rb::Error);
    CHECK_THROWS_AS(rb::load_config(dir / "missing.ini", no_env), rb::Error);
    auto bad_env = [](const std::string &name) -> std::optional<std::string> {
      if (name == "RULEBRIDGE_PIPELINE_TOP_N") return "many";
      return std::nullopt;
    };
    CHECK_THROWS_AS(rb::load_config({}, bad_env), rb::Error);
  }

  TEST_CASE("every key is settable") {
    for (const auto &key : rb::config_keys()) {
      rb::EngineConfig cfg;
      std::string value = "1";
      if (key == "corpus.recipes_format") value = "csv";
      if (key == "corpus.ontology_format") value = "xml";
      if (key == "pipeline.method") value = "combined";
      if (key == "entailment.backend") value = "proxy";
      if (key == "entailment.fallback" || key == "corpus.split_camel_case") value = "true";
      INFO(key);
      CHECK_NOTHROW(rb::set_config_value(&cfg, key, value, {}));
    }
  }

  TEST_CASE("engine loads the fixture corpus and cleans names") {
    rb::Engine engine(fixture_config());
    auto s = engine.summary();
    CHECK(s.triggers == engine.catalog().triggers.size());
    CHECK(s.ontology_triggers > 0);
    CHECK(s.vectors > 0);
    auto a = engine.translate("A/C turned off", rb::TermKind::kTrigger, rb::Method::kCombined);
    auto b = engine.translate("AC  turned off", rb::TermKind::kTrigger, rb::Method::kCombined);
    CHECK(a == b);
    CHECK(a.source_name == "AC turned off");
    CHECK_THROWS_AS(engine.translate("///", rb::TermKind::kTrigger, rb::Method::kCombined),
                    rb::Error);
    auto batch = engine.translate_all(rb::Method::kEmbedding);
    CHECK(batch.results.size() == s.triggers + s.actions);
  }

  TEST_CASE("engine load failures") {
    auto cfg = fixture_config();
    cfg.ontology.clear();
    CHECK_THROWS_WITH_AS(rb::Engine{cfg}, doctest::Contains("no ontology configured"),
                         rb::Error);
    cfg = fixture_config();
    cfg.vectors = fixture("nope.txt");
    CHECK_THROWS_AS(rb::Engine{cfg}, rb::Error);
  }

  TEST_CASE("persisted results and store are loaded from disk") {
    TempDir dir;
    {
      rb::Engine engine(fixture_config());
      auto batch = engine.translate_all(rb::Method::kCombined);
      write(dir / "results.jsonl", rb::canonical_jsonl(batch.results));
    }
    auto cfg = fixture_config();
    cfg.results = dir / "results.jsonl";
    cfg.store = dir / "store.jsonl";
    {
      rb::Engine engine(cfg);
      CHECK(engine.persisted_results().size() ==
            engine.catalog().triggers.size() + engine.catalog().actions.size());
      engine.store().put_rule(rbtest::sample_rule("kept"));
    }
    rb::Engine reopened(cfg);
    CHECK(reopened.store().find_rule("kept"));
  }

  TEST_CASE("entailment backend selection") {
    rb::EngineConfig cfg;
    auto proxy = rb::make_entailment_scorer(cfg);
    CHECK(proxy->entail("ac turned off", "device turned off") ==
          rb::proxy_entailment("ac turned off", "device turned off"));

    rbtest::FakeEntailmentServer server;
    server.set_mode(rbtest::FakeEntailmentServer::Mode::kFixed);
    server.set_fixed({70.0, 10.0, 20.0});
    cfg.pipeline.entailment_backend = rb::EntailmentBackend::kRemote;
    cfg.remote_entailment.endpoint = server.url();
    CHECK(rb::make_entailment_scorer(cfg)->entail("a", "b") == rb::EntailmentTriple{70, 10, 20});

    server.set_mode(rbtest::FakeEntailmentServer::Mode::kServerError);
    cfg.remote_entailment.retries = 0;
    CHECK(rb::make_entailment_scorer(cfg)->entail("a b", "a") ==
          rb::proxy_entailment("a b", "a"));
    cfg.entailment_fallback = false;
    CHECK_THROWS_AS(rb::make_entailment_scorer(cfg)->entail("a", "b"), rb::Error);
  }
}
