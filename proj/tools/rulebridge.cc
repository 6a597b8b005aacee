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

// Command-line front end. Exit status: 0 success, 1 data error, 2 usage error.

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "rulebridge/catalog.h"
#include "rulebridge/engine.h"
#include "rulebridge/evaluation.h"
#include "rulebridge/rulestore.h"
#include "rulebridge/service.h"

namespace rb = rulebridge;

namespace {

constexpr int kDataError = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Options shared by every subcommand that loads corpora.
struct CorpusOptions {
  std::string config;
  std::string catalog;
  std::string recipes;
  std::string ontology;
  std::string vectors;
  std::string store;
  std::string results;
  std::string backend;
  std::string endpoint;
  std::optional<double> threshold;
  std::optional<std::size_t> top;
  std::size_t workers = 0;

  void attach(CLI::App *app) {
    app->add_option("--config", config, "INI config file");
    app->add_option("--catalog", catalog, "prepared catalog JSON");
    app->add_option("--recipes", recipes, "raw recipe CSV");
    app->add_option("--ontology", ontology, "ontology XML or prepared JSON");
    app->add_option("--vectors", vectors, "word vector text file");
    app->add_option("--store", store, "rule/review store log");
    app->add_option("--results", results, "persisted batch results (JSON lines)");
    app->add_option("--backend", backend, "entailment backend: proxy or remote");
    app->add_option("--endpoint", endpoint, "remote entailment endpoint");
    app->add_option("--threshold", threshold, "embedding threshold (0..1)");
    app->add_option("--top", top, "candidates to show");
    app->add_option("--workers", workers, "batch worker threads");
  }

  rb::EngineConfig load() const {
    rb::EngineConfig cfg = rb::load_config(config);
    auto set = [&](const char *key, const std::string &value) {
      if (!value.empty()) rb::set_config_value(&cfg, key, value, {});
    };
    set("corpus.catalog", catalog);
    set("corpus.recipes", recipes);
    set("corpus.ontology", ontology);
    set("corpus.vectors", vectors);
    set("store.path", store);
    set("store.results", results);
    set("entailment.backend", backend);
    set("entailment.endpoint", endpoint);
    if (threshold) cfg.pipeline.threshold = *threshold;
    if (top) {
      if (*top == 0) throw UsageError("--top must be at least 1");
      cfg.pipeline.top_n = *top;
    }
    if (workers > 0) cfg.workers = workers;
    try {
      cfg.pipeline.validate();
    } catch (const rb::Error &e) {
      throw UsageError(e.what());
    }
    return cfg;
  }
};

rb::TermKind kind_arg(const std::string &text) {
  auto kind = rb::parse_term_kind(text);
  if (!kind) throw UsageError("--kind must be 'trigger' or 'action'");
  return *kind;
}

rb::Method method_arg(const std::string &text) {
  auto method = rb::parse_method(text);
  if (!method) throw UsageError("--method must be embedding, entailment or combined");
  return *method;
}

std::vector<rb::Method> methods_arg(const std::string &text) {
  if (text == "all") return {std::begin(rb::kAllMethods), std::end(rb::kAllMethods)};
  std::vector<rb::Method> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(method_arg(item));
  if (out.empty()) throw UsageError("--methods is empty");
  return out;
}

std::string fmt(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(2) << v;
  return out.str();
}

void print_listing(const rb::TranslationResult &r, std::size_t top, std::ostream &out) {
  if (r.no_result) {
    out << "No Result";
    if (!r.diagnostic.empty()) out << " (" << r.diagnostic << ")";
    out << "\n";
    return;
  }
  for (const auto &c : r.top(top)) {
    out << c.rank << ". " << c.candidate_name;
    std::vector<std::string> parts;
    if (c.combined_pct) parts.push_back("combined " + fmt(*c.combined_pct));
    if (c.embedding_pct) parts.push_back("embedding " + fmt(*c.embedding_pct));
    if (c.entailment) parts.push_back("entailment " + fmt(c.entailment->entailment));
    if (c.pinned_by_review) parts.push_back("reviewed");
    out << "  (";
    for (std::size_t i = 0; i < parts.size(); ++i) out << (i ? ", " : "") << parts[i];
    out << ")\n";
  }
}

void write_text(const std::string &path, const std::string &text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw rb::Error(rb::ErrorKind::kIo, "cannot write " + path);
  out << text;
  if (!out) throw rb::Error(rb::ErrorKind::kIo, "write failed: " + path);
}

int cmd_prepare(const std::string &recipes, const std::string &ontology,
                const std::string &out_dir, bool json) {
  rb::RecipeFormatConfig fmt_cfg;
  if (recipes.ends_with(".jsonl")) fmt_cfg.format = rb::RecipeFormat::kJsonLines;
  rb::RawRecipeSet raw = rb::load_recipes(recipes, fmt_cfg);
  rb::PreparedCatalog prepared = rb::clean_and_split(raw);
  std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  rb::save_json(dir / "catalog.json", rb::to_json(prepared.catalog));
  rb::save_json(dir / "dropped.json", rb::to_json(prepared.dropped));
  if (!ontology.empty()) {
    rb::OntologyCatalog onto =
        rb::load_ontology(ontology, rb::guess_ontology_format(ontology));
    rb::save_json(dir / "ontology.json", rb::to_json(onto));
  }
  rb::DatasetStats stats = rb::dataset_stats(raw, prepared.catalog);
  if (json)
    std::cout << rb::to_json(stats).dump(2) << "\n";
  else
    std::cout << rb::format_stats(stats) << "wrote " << dir.string() << "\n";
  return 0;
}

int cmd_stats(const std::string &recipes, bool json) {
  rb::RecipeFormatConfig fmt_cfg;
  if (recipes.ends_with(".jsonl")) fmt_cfg.format = rb::RecipeFormat::kJsonLines;
  rb::RawRecipeSet raw = rb::load_recipes(recipes, fmt_cfg);
  rb::DatasetStats stats = rb::dataset_stats(raw, rb::clean_and_split(raw).catalog);
  std::cout << (json ? rb::to_json(stats).dump(2) + "\n" : rb::format_stats(stats));
  return 0;
}

struct TranslateArgs {
  std::string name;
  std::string kind;
  std::string method = "combined";
  bool all = false;
  bool json = false;
  bool paper_compat = false;
  bool no_reviews = false;
  std::string out;
};

int cmd_translate(const CorpusOptions &opts, const TranslateArgs &a) {
  rb::EngineConfig cfg = opts.load();
  rb::Method method = method_arg(a.method);
  std::size_t top = cfg.pipeline.top_n;
  if (a.all == !a.name.empty()) throw UsageError("give either --name or --all");
  if (a.paper_compat && a.all) throw UsageError("--paper-compat needs --name");
  if (!a.all && a.kind.empty()) throw UsageError("--kind is required with --name");
  std::optional<rb::TermKind> kind;
  if (!a.all) kind = kind_arg(a.kind);
  rb::Engine engine(cfg);

  if (!a.all) {
    rb::TranslationResult r = engine.translate(a.name, *kind, method, !a.no_reviews);
    std::ostringstream out;
    if (a.paper_compat)
      out << rb::paper_compat(r, top).dump(2) << "\n";
    else if (a.json)
      out << rb::to_json(r, top).dump(2) << "\n";
    else
      print_listing(r, top, out);
    write_text(a.out, out.str());
    return 0;
  }

  rb::BatchOutput batch = engine.translate_all(method);
  write_text(a.out, rb::canonical_jsonl(batch.results));
  for (const auto &e : batch.errors)
    std::cerr << "error: " << rb::to_string(e.kind) << " '" << e.source_name
              << "': " << e.message << "\n";
  std::cerr << batch.results.size() << " terms translated, " << batch.errors.size()
            << " failed\n";
  return batch.errors.empty() ? 0 : kDataError;
}

int cmd_evaluate(const CorpusOptions &opts, const std::string &annotations_path,
                 const std::string &methods_text, bool json) {
  rb::EngineConfig cfg = opts.load();
  std::vector<rb::Method> methods = methods_arg(methods_text);
  rb::Engine engine(cfg);
  std::vector<rb::AnnotationRecord> annotations = rb::load_annotations(annotations_path);
  rb::validate_annotations(annotations, engine.ontology());

  nlohmann::ordered_json report = nlohmann::ordered_json::object();
  std::ostringstream text;
  for (rb::TermKind kind : rb::kAllKinds) {
    std::vector<rb::AnnotationRecord> subset;
    for (const auto &a : annotations)
      if (a.kind == kind) subset.push_back(a);
    if (subset.empty()) continue;
    std::vector<rb::MethodSummary> summaries;
    for (rb::Method m : methods) {
      std::vector<rb::TranslationResult> results;
      for (const auto &a : subset)
        results.push_back(engine.translate(a.source_name, kind, m, false));
      summaries.push_back(rb::score_method(results, subset));
      summaries.back().method = m;
    }
    nlohmann::ordered_json entry;
    entry["summaries"] = nlohmann::ordered_json::array();
    for (const auto &s : summaries) entry["summaries"].push_back(rb::to_json(s));
    text << (kind == rb::TermKind::kTrigger ? "Triggers" : "Actions") << " ("
         << summaries.front().considered() << " annotated, "
         << summaries.front().ambiguous_excluded << " ambiguous excluded)\n"
         << rb::format_summary_table(summaries);
    if (summaries.size() >= 2) {
      std::vector<rb::MethodSummary> ranked = rb::compare_methods(summaries);
      std::string order;
      entry["ranking"] = nlohmann::ordered_json::array();
      for (std::size_t i = 0; i < ranked.size(); ++i) {
        order += (i ? " > " : "") + std::string(rb::to_string(ranked[i].method));
        entry["ranking"].push_back(rb::to_string(ranked[i].method));
      }
      text << "ranking: " << order << "\n";
    }
    text << "\n";
    report[std::string(rb::to_string(kind))] = std::move(entry);
  }
  std::cout << (json ? report.dump(2) + "\n" : text.str());
  return 0;
}

int cmd_sample(const CorpusOptions &opts, const std::string &kind, std::size_t n,
               std::uint64_t seed, bool json) {
  rb::EngineConfig cfg = opts.load();
  rb::TermKind k = kind_arg(kind);
  rb::ProprietaryCatalog catalog;
  if (!cfg.catalog.empty())
    catalog = rb::catalog_from_json(rb::load_json(cfg.catalog));
  else if (!cfg.recipes.empty())
    catalog = rb::clean_and_split(rb::load_recipes(cfg.recipes, cfg.recipe_format)).catalog;
  else
    throw UsageError("sample needs --catalog or --recipes");
  auto sample = rb::sample_for_annotation(catalog, k, n, seed);
  if (json) {
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const auto &t : sample) out.push_back(t.name);
    std::cout << out.dump(2) << "\n";
  } else {
    for (const auto &t : sample) std::cout << t.name << "\n";
  }
  return 0;
}

int cmd_sync(const CorpusOptions &opts, const std::string &url, const std::string &token) {
  rb::EngineConfig cfg = opts.load();
  if (!url.empty()) cfg.container.url = url;
  if (!token.empty()) cfg.container.token = token;
  if (cfg.container.url.empty()) throw UsageError("sync needs --remote-url or remote.url");
  if (cfg.store.empty()) throw UsageError("sync needs --store or store.path");
  rb::RuleStore store(cfg.store);
  rb::HttpContainer container(cfg.container);
  rb::SyncReport report = rb::sync_remote(store, container);
  std::cout << rb::to_json(report).dump(2) << "\n";
  return report.complete() ? 0 : kDataError;
}

struct ReviewArgs {
  std::string name;
  std::string kind;
  std::string choose;
  bool none = false;
  std::string accuracy;
  std::string method;
  std::string reviewer;
};

int cmd_review(const CorpusOptions &opts, const ReviewArgs &a) {
  if (a.none == !a.choose.empty()) throw UsageError("give either --choose or --none");
  rb::EngineConfig cfg = opts.load();
  if (cfg.store.empty()) throw UsageError("review needs --store or store.path");
  rb::ReviewRecord r;
  r.source_name = rb::clean_name(a.name);
  if (r.source_name.empty()) throw UsageError("--name is empty");
  r.kind = kind_arg(a.kind);
  if (!a.choose.empty()) r.chosen = a.choose;
  if (!a.accuracy.empty()) {
    r.accuracy = rb::parse_accuracy(a.accuracy);
    if (!r.accuracy)
      throw UsageError("--accuracy must be not_at_all, low, accurate or very_accurate");
  }
  if (!a.method.empty()) r.method = method_arg(a.method);
  r.reviewer = a.reviewer;
  rb::Engine engine(cfg);
  if (r.chosen && !engine.ontology().contains(*r.chosen, r.kind))
    throw rb::Error(rb::ErrorKind::kInvalidInput,
                    "'" + *r.chosen + "' is not an ontology " +
                        std::string(rb::to_string(r.kind)));
  std::cout << rb::to_json(engine.store().record_review(r)).dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"rulebridge: translate trigger/action names into ontology terms"};
  app.require_subcommand(1);

  CorpusOptions corpus;
  bool json = false;

  std::string recipes, ontology, out_dir = "prepared";
  auto *prepare = app.add_subcommand("prepare", "clean the recipe corpus into catalog files");
  prepare->add_option("--recipes", recipes, "raw recipe CSV or JSON lines")->required();
  prepare->add_option("--ontology", ontology, "ontology XML");
  prepare->add_option("--out-dir", out_dir, "output directory");
  prepare->add_flag("--json", json, "JSON output");

  auto *stats = app.add_subcommand("stats", "dataset statistics");
  stats->add_option("--recipes", recipes, "raw recipe CSV or JSON lines")->required();
  stats->add_flag("--json", json, "JSON output");

  TranslateArgs targs;
  auto *translate = app.add_subcommand("translate", "translate one term or the whole catalog");
  corpus.attach(translate);
  translate->add_option("--name", targs.name, "proprietary trigger/action name");
  translate->add_option("--kind", targs.kind, "trigger or action");
  translate->add_option("--method", targs.method, "embedding, entailment or combined");
  translate->add_flag("--all", targs.all, "translate every catalog term (JSON lines)");
  translate->add_flag("--json", targs.json, "JSON output");
  translate->add_flag("--paper-compat", targs.paper_compat, "legacy listing shape");
  translate->add_flag("--no-reviews", targs.no_reviews, "ignore stored review overrides");
  translate->add_option("--out", targs.out, "output file");

  std::string annotations, methods = "all";
  auto *evaluate = app.add_subcommand("evaluate", "score methods against annotations");
  corpus.attach(evaluate);
  evaluate->add_option("--annotations", annotations, "annotation JSON lines")->required();
  evaluate->add_option("--methods", methods, "'all' or a comma-separated list");
  evaluate->add_flag("--json", json, "JSON output");

  std::string sample_kind;
  std::size_t sample_n = 0;
  std::uint64_t seed = 0;
  auto *sample = app.add_subcommand("sample", "seeded random sample for annotation");
  corpus.attach(sample);
  sample->add_option("--kind", sample_kind, "trigger or action")->required();
  sample->add_option("-n,--count", sample_n, "sample size")->required();
  sample->add_option("--seed", seed, "random seed")->required();
  sample->add_flag("--json", json, "JSON output");

  std::string remote_url, remote_token;
  auto *sync = app.add_subcommand("sync", "reconcile the store with a remote container");
  corpus.attach(sync);
  sync->add_option("--remote-url", remote_url, "container base URL");
  sync->add_option("--remote-token", remote_token, "bearer token");

  std::string host, token, ui_dir;
  int port = 0;
  auto *serve = app.add_subcommand("serve", "run the HTTP API");
  corpus.attach(serve);
  serve->add_option("--host", host, "listen address");
  serve->add_option("--port", port, "listen port");
  serve->add_option("--token", token, "shared bearer token");
  serve->add_option("--ui-dir", ui_dir, "review UI bundle directory");

  ReviewArgs rargs;
  auto *review = app.add_subcommand("review", "record a review decision");
  corpus.attach(review);
  review->add_option("--name", rargs.name, "proprietary name")->required();
  review->add_option("--kind", rargs.kind, "trigger or action")->required();
  review->add_option("--choose", rargs.choose, "chosen ontology term");
  review->add_flag("--none", rargs.none, "no ontology term is suitable");
  review->add_option("--accuracy", rargs.accuracy,
                     "not_at_all, low, accurate or very_accurate");
  review->add_option("--method", rargs.method, "method that surfaced the choice");
  review->add_option("--reviewer", rargs.reviewer, "reviewer name");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*prepare) return cmd_prepare(recipes, ontology, out_dir, json);
    if (*stats) return cmd_stats(recipes, json);
    if (*translate) return cmd_translate(corpus, targs);
    if (*evaluate) return cmd_evaluate(corpus, annotations, methods, json);
    if (*sample) return cmd_sample(corpus, sample_kind, sample_n, seed, json);
    if (*sync) return cmd_sync(corpus, remote_url, remote_token);
    if (*review) return cmd_review(corpus, rargs);
    if (*serve) {
      rb::EngineConfig cfg = corpus.load();
      if (!host.empty()) cfg.host = host;
      if (port > 0) cfg.port = port;
      if (!token.empty()) cfg.token = token;
      if (!ui_dir.empty()) cfg.ui_dir = ui_dir;
      rb::Engine engine(cfg);
      rb::serve(engine);
      return 0;
    }
  } catch (const UsageError &e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const rb::Error &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsageError;
}
