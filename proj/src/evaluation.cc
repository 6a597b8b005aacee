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

#include "rulebridge/evaluation.h"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace rulebridge {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string method_title(Method m) {
  switch (m) {
    case Method::kEmbedding:
      return "Embedding";
    case Method::kEntailment:
      return "Entailment";
    case Method::kCombined:
      return "Combined";
  }
  return "?";
}

// Uniform draw from [0, bound) by rejection; mt19937_64 output is fixed by
// the standard, unlike std::uniform_int_distribution.
std::uint64_t bounded(std::mt19937_64 &gen, std::uint64_t bound) {
  std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                        std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = gen();
  } while (x >= limit);
  return x % bound;
}

KindStats kind_stats(const std::vector<CatalogTerm> &terms) {
  KindStats s;
  s.distinct = terms.size();
  for (const auto &t : terms) {
    s.total_usage += t.usage_count;
    if (t.usage_count == 1)
      ++s.once_only;
    else
      ++s.duplicates;
  }
  return s;
}

}  // namespace

std::vector<AnnotationRecord> parse_annotations(std::istream &in) {
  std::vector<AnnotationRecord> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fail = [&](const std::string &why) {
      return Error(ErrorKind::kParse,
                   "annotation line " + std::to_string(line_no) + ": " + why);
    };
    json doc = json::parse(line, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) throw fail("not a JSON object");
    AnnotationRecord r;
    r.source_name = doc.value("name", "");
    if (r.source_name.empty()) throw fail("missing name");
    auto kind = parse_term_kind(doc.value("kind", ""));
    if (!kind) throw fail("kind must be trigger or action");
    r.kind = *kind;
    std::string label = doc.value("label", "");
    if (label == "best_match") {
      r.label = GoldLabel::kBestMatch;
      r.best_match = doc.value("match", "");
      if (r.best_match.empty()) throw fail("best_match needs a match");
    } else if (label == "ambiguous") {
      r.label = GoldLabel::kAmbiguous;
    } else if (label == "none") {
      r.label = GoldLabel::kNone;
    } else {
      throw fail("label must be best_match, ambiguous or none");
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<AnnotationRecord> load_annotations(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "missing file: " + path.string());
  return parse_annotations(in);
}

void validate_annotations(std::span<const AnnotationRecord> annotations,
                          const OntologyCatalog &ontology) {
  for (const auto &a : annotations)
    if (a.label == GoldLabel::kBestMatch && !ontology.contains(a.best_match, a.kind))
      throw Error(ErrorKind::kInvalidInput,
                  "annotation for '" + a.source_name + "' names unknown " +
                      std::string(to_string(a.kind)) + " '" + a.best_match + "'");
}

MethodSummary score_method(std::span<const TranslationResult> results,
                           std::span<const AnnotationRecord> annotations,
                           std::size_t cutoff) {
  std::map<std::pair<std::string, TermKind>, const TranslationResult *> index;
  for (const auto &r : results) index.emplace(std::make_pair(r.source_name, r.kind), &r);

  MethodSummary summary;
  if (!results.empty()) summary.method = results.front().method;
  for (const auto &a : annotations) {
    auto it = index.find({a.source_name, a.kind});
    if (it == index.end())
      throw Error(ErrorKind::kNotFound,
                  "annotation references unknown source term '" + a.source_name + "'");
    if (a.label == GoldLabel::kAmbiguous) {
      ++summary.ambiguous_excluded;
      continue;
    }
    if (a.label == GoldLabel::kNone) {
      ++summary.no_result;
      continue;
    }
    std::size_t rank = 0;
    std::span<const ScoredCandidate> shown = it->second->top(cutoff);
    for (std::size_t i = 0; i < shown.size(); ++i) {
      if (shown[i].candidate_name == a.best_match) {
        rank = i + 1;
        break;
      }
    }
    if (rank == 1)
      ++summary.first_result;
    else if (rank >= 2)
      ++summary.top_five;
    else
      ++summary.no_result;
  }
  return summary;
}

std::vector<MethodSummary> compare_methods(std::vector<MethodSummary> summaries) {
  if (summaries.size() < 2)
    throw Error(ErrorKind::kInvalidInput, "compare_methods needs at least two summaries");
  for (const auto &s : summaries)
    if (s.considered() != summaries.front().considered())
      throw Error(ErrorKind::kInvalidInput,
                  "summaries cover different annotation totals (" +
                      std::to_string(s.considered()) + " vs " +
                      std::to_string(summaries.front().considered()) + ")");
  std::stable_sort(summaries.begin(), summaries.end(),
                   [](const MethodSummary &a, const MethodSummary &b) {
                     if (a.found() != b.found()) return a.found() > b.found();
                     if (a.first_result != b.first_result)
                       return a.first_result > b.first_result;
                     return a.no_result < b.no_result;
                   });
  return summaries;
}

std::vector<CatalogTerm> sample_for_annotation(const ProprietaryCatalog &catalog,
                                               TermKind kind, std::size_t n,
                                               std::uint64_t seed) {
  const auto &terms = catalog.terms(kind);
  if (n > terms.size())
    throw Error(ErrorKind::kInvalidInput,
                "sample size " + std::to_string(n) + " exceeds " +
                    std::to_string(terms.size()) + " " +
                    std::string(to_string(kind)) + "s");
  std::vector<std::size_t> order(terms.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 gen(seed);
  // Partial Fisher-Yates: the first n slots are the sample.
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t j = i + static_cast<std::size_t>(bounded(gen, order.size() - i));
    std::swap(order[i], order[j]);
  }
  std::vector<CatalogTerm> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(terms[order[i]]);
  return out;
}

DatasetStats dataset_stats(const RawRecipeSet &raw, const ProprietaryCatalog &catalog) {
  DatasetStats stats;
  stats.total_recipes = raw.size();
  stats.triggers = kind_stats(catalog.triggers);
  stats.actions = kind_stats(catalog.actions);
  std::set<std::string> raw_triggers, raw_actions;
  for (const auto &row : raw.rows) {
    raw_triggers.insert(row.trigger);
    raw_actions.insert(row.action);
    if (clean_name(row.trigger).empty()) ++stats.triggers.dropped;
    if (clean_name(row.action).empty()) ++stats.actions.dropped;
  }
  stats.triggers.distinct_raw = raw_triggers.size();
  stats.actions.distinct_raw = raw_actions.size();
  return stats;
}

ordered_json to_json(const MethodSummary &s) {
  ordered_json out;
  out["method"] = to_string(s.method);
  out["first_result"] = s.first_result;
  out["top_five"] = s.top_five;
  out["no_result"] = s.no_result;
  out["ambiguous_excluded"] = s.ambiguous_excluded;
  return out;
}

ordered_json to_json(const DatasetStats &stats) {
  auto kind = [](const KindStats &k) {
    ordered_json out;
    out["distinct"] = k.distinct;
    out["once_only"] = k.once_only;
    out["duplicates"] = k.duplicates;
    out["distinct_before_cleaning"] = k.distinct_raw;
    out["dropped_rows"] = k.dropped;
    out["total_usage"] = k.total_usage;
    return out;
  };
  ordered_json out;
  out["total_recipes"] = stats.total_recipes;
  out["triggers"] = kind(stats.triggers);
  out["actions"] = kind(stats.actions);
  return out;
}

std::string format_summary_table(std::span<const MethodSummary> summaries) {
  const std::vector<std::string> header = {"Approach", "First Result",
                                           "Top Five Result", "No result"};
  std::vector<std::vector<std::string>> rows;
  for (const auto &s : summaries)
    rows.push_back({method_title(s.method), std::to_string(s.first_result),
                    std::to_string(s.top_five), std::to_string(s.no_result)});
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto &r : rows) width[c] = std::max(width[c], r[c].size());
  }
  std::ostringstream out;
  auto line = [&](const std::vector<std::string> &cells) {
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c > 0) out << "  ";
      if (c == 0)
        out << std::left << std::setw(static_cast<int>(width[c])) << cells[c];
      else
        out << std::right << std::setw(static_cast<int>(width[c])) << cells[c];
    }
    out << '\n';
  };
  line(header);
  std::size_t total = std::accumulate(width.begin(), width.end(), std::size_t{0}) +
                      2 * (width.size() - 1);
  out << std::string(total, '-') << '\n';
  for (const auto &r : rows) line(r);
  return out.str();
}

std::string format_stats(const DatasetStats &stats) {
  std::ostringstream out;
  out << "total recipes:        " << stats.total_recipes << '\n';
  auto kind = [&](const char *name, const KindStats &k) {
    out << name << ":\n"
        << "  distinct:           " << k.distinct << '\n'
        << "  once only:          " << k.once_only << '\n'
        << "  duplicates:         " << k.duplicates << '\n'
        << "  distinct (raw):     " << k.distinct_raw << '\n'
        << "  dropped rows:       " << k.dropped << '\n';
  };
  kind("triggers", stats.triggers);
  kind("actions", stats.actions);
  return out.str();
}

}  // namespace rulebridge
