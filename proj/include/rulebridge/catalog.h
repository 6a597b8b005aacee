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

// Ingestion of the two corpora a translation run works on: the proprietary
// recipe dataset (trigger/action names with usage counts) and the high-level
// ontology term lists.

#ifndef RULEBRIDGE_CATALOG_H_
#define RULEBRIDGE_CATALOG_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "rulebridge/types.h"

namespace rulebridge {

struct RecipeRow {
  std::string trigger;
  std::string action;
};

struct RawRecipeSet {
  std::vector<RecipeRow> rows;
  std::string source_label;

  std::size_t size() const { return rows.size(); }
};

enum class RecipeFormat {
  kDelimited,  // header row required
  kJsonLines,  // one JSON object per line
};

struct RecipeFormatConfig {
  RecipeFormat format = RecipeFormat::kDelimited;
  char delimiter = ',';
  std::string trigger_column = "triggerName";
  std::string action_column = "actionName";
};

RawRecipeSet load_recipes(const std::filesystem::path &path,
                          const RecipeFormatConfig &config);
RawRecipeSet parse_recipes(std::istream &in, const RecipeFormatConfig &config);

struct CatalogTerm {
  std::string name;
  TermKind kind = TermKind::kTrigger;
  std::uint64_t usage_count = 0;

  bool operator==(const CatalogTerm &) const = default;
};

struct ProprietaryCatalog {
  std::vector<CatalogTerm> triggers;
  std::vector<CatalogTerm> actions;
  std::string source_label;

  const std::vector<CatalogTerm> &terms(TermKind kind) const {
    return kind == TermKind::kTrigger ? triggers : actions;
  }
  const CatalogTerm *find(std::string_view name, TermKind kind) const;

  bool operator==(const ProprietaryCatalog &) const = default;
};

struct DroppedName {
  std::size_t row = 0;  // zero-based data row
  TermKind kind = TermKind::kTrigger;
  std::string raw;
};

struct PreparedCatalog {
  ProprietaryCatalog catalog;
  std::vector<DroppedName> dropped;
};

// Removes forward slashes, collapses whitespace runs, trims, and applies NFC.
std::string clean_name(std::string_view raw);

// Deduplicates cleaned names into per-kind lists in first-occurrence order.
// Throws kInvalidInput when the input is empty or nothing survives cleaning.
PreparedCatalog clean_and_split(const RawRecipeSet &raw);

// Expands a catalog back into rows (each name repeated usage_count times).
RawRecipeSet render_rows(const ProprietaryCatalog &catalog);

struct OntologyTerm {
  std::string name;
  TermKind kind = TermKind::kTrigger;
  std::string raw_id;

  bool operator==(const OntologyTerm &) const = default;
};

struct OntologyCatalog {
  std::vector<OntologyTerm> triggers;
  std::vector<OntologyTerm> actions;

  const std::vector<OntologyTerm> &terms(TermKind kind) const {
    return kind == TermKind::kTrigger ? triggers : actions;
  }
  bool contains(std::string_view name, TermKind kind) const;
};

enum class OntologyFormat { kOntologyXml, kPreparedJson };

struct OntologyConfig {
  bool split_camel_case = true;
  std::string trigger_root = "Trigger";
  std::string action_root = "Action";
};

// "SensedAirPressureDecreased" -> "Sensed Air Pressure Decreased". Acronym
// runs stay together: "ReceivedFromDIY" -> "Received From DIY".
std::string split_camel_case(std::string_view identifier);

// Strips any trailing "Trigger"/"Action" suffix, then optionally splits camel
// case and normalizes whitespace. May return an empty string.
std::string ontology_display_name(std::string_view raw_id, bool split_camel);

OntologyCatalog load_ontology(const std::filesystem::path &path,
                              OntologyFormat format,
                              const OntologyConfig &config = {});
OntologyCatalog parse_ontology_xml(std::istream &in,
                                   const OntologyConfig &config = {});
OntologyCatalog parse_ontology_json(const nlohmann::json &doc,
                                    const OntologyConfig &config = {});

nlohmann::json to_json(const ProprietaryCatalog &catalog);
ProprietaryCatalog catalog_from_json(const nlohmann::json &doc);
nlohmann::json to_json(const OntologyCatalog &catalog);
nlohmann::json to_json(const std::vector<DroppedName> &dropped);

void save_json(const std::filesystem::path &path, const nlohmann::json &doc);
nlohmann::json load_json(const std::filesystem::path &path);

}  // namespace rulebridge

#endif  // RULEBRIDGE_CATALOG_H_
