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

#include "rulebridge/catalog.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <unicode/normalizer2.h>
#include <unicode/unistr.h>

namespace rulebridge {

namespace {

using nlohmann::json;
namespace pt = boost::property_tree;

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending = false;
  for (char c : s) {
    if (is_space(c)) {
      pending = !out.empty();
      continue;
    }
    if (pending) out.push_back(' ');
    pending = false;
    out.push_back(c);
  }
  return out;
}

std::string nfc(std::string_view s) {
  bool ascii = std::all_of(s.begin(), s.end(), [](char c) {
    return static_cast<unsigned char>(c) < 0x80;
  });
  if (ascii) return std::string(s);
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2 *norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) return std::string(s);
  icu::UnicodeString text = icu::UnicodeString::fromUTF8(
      icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  icu::UnicodeString normalized = norm->normalize(text, status);
  if (U_FAILURE(status)) return std::string(s);
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

// RFC 4180 style record splitter: quoted fields may contain the delimiter,
// doubled quotes, and newlines.
class DelimitedReader {
 public:
  DelimitedReader(std::string text, char delimiter)
      : text_(std::move(text)), delimiter_(delimiter) {
    if (text_.rfind("\xEF\xBB\xBF", 0) == 0) pos_ = 3;
  }

  bool next(std::vector<std::string> *fields) {
    fields->clear();
    if (pos_ >= text_.size()) return false;
    std::string field;
    bool quoted = false;
    while (pos_ < text_.size()) {
      char c = text_[pos_++];
      if (quoted) {
        if (c == '"') {
          if (pos_ < text_.size() && text_[pos_] == '"') {
            field.push_back('"');
            ++pos_;
          } else {
            quoted = false;
          }
        } else {
          field.push_back(c);
        }
      } else if (c == '"' && trim(field).empty()) {
        field.clear();
        quoted = true;
      } else if (c == delimiter_) {
        fields->push_back(std::move(field));
        field.clear();
      } else if (c == '\n' || c == '\r') {
        if (c == '\r' && pos_ < text_.size() && text_[pos_] == '\n') ++pos_;
        break;
      } else {
        field.push_back(c);
      }
    }
    fields->push_back(std::move(field));
    return true;
  }

 private:
  std::string text_;
  char delimiter_;
  std::size_t pos_ = 0;
};

bool blank_record(const std::vector<std::string> &fields) {
  return std::all_of(fields.begin(), fields.end(),
                     [](const std::string &f) { return trim(f).empty(); });
}

RawRecipeSet parse_delimited(std::istream &in, const RecipeFormatConfig &config) {
  std::stringstream buffer;
  buffer << in.rdbuf();
  DelimitedReader reader(buffer.str(), config.delimiter);

  std::vector<std::string> header;
  if (!reader.next(&header) || blank_record(header))
    throw Error(ErrorKind::kParse, "missing header row");
  int trigger_col = -1, action_col = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    std::string name = trim(header[i]);
    if (name == config.trigger_column) trigger_col = static_cast<int>(i);
    if (name == config.action_column) action_col = static_cast<int>(i);
  }
  if (trigger_col < 0)
    throw Error(ErrorKind::kParse,
                "missing mandatory column: " + config.trigger_column);
  if (action_col < 0)
    throw Error(ErrorKind::kParse,
                "missing mandatory column: " + config.action_column);

  RawRecipeSet out;
  std::vector<std::string> fields;
  std::size_t line = 1;
  while (reader.next(&fields)) {
    ++line;
    if (blank_record(fields)) continue;
    std::size_t needed = static_cast<std::size_t>(std::max(trigger_col, action_col));
    if (fields.size() <= needed)
      throw Error(ErrorKind::kParse,
                  "record " + std::to_string(line) + " has too few fields");
    out.rows.push_back({fields[trigger_col], fields[action_col]});
  }
  return out;
}

std::string field_text(const json &record, const std::string &key,
                       std::size_t line) {
  auto it = record.find(key);
  if (it == record.end())
    throw Error(ErrorKind::kParse, "missing mandatory column: " + key +
                                       " (line " + std::to_string(line) + ")");
  if (it->is_string()) return it->get<std::string>();
  if (it->is_null()) return {};
  return it->dump();
}

RawRecipeSet parse_json_lines(std::istream &in, const RecipeFormatConfig &config) {
  RawRecipeSet out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (trim(text).empty()) continue;
    json record = json::parse(text, nullptr, false);
    if (record.is_discarded() || !record.is_object())
      throw Error(ErrorKind::kParse,
                  "line " + std::to_string(line) + " is not a JSON object");
    out.rows.push_back({field_text(record, config.trigger_column, line),
                        field_text(record, config.action_column, line)});
  }
  return out;
}

// Last path component of an IRI, or the identifier itself.
std::string local_name(std::string_view iri) {
  std::size_t cut = iri.find_last_of("#/");
  if (cut != std::string_view::npos) iri.remove_prefix(cut + 1);
  return std::string(iri);
}

bool has_suffix(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

// Matches "rdf:about", "about", "x:about".
bool name_is(std::string_view tag, std::string_view local) {
  if (tag == local) return true;
  return tag.size() > local.size() && has_suffix(tag, local) &&
         tag[tag.size() - local.size() - 1] == ':';
}

std::optional<std::string> attribute(const pt::ptree &node,
                                     std::string_view local) {
  auto attrs = node.get_child_optional("<xmlattr>");
  if (!attrs) return std::nullopt;
  for (const auto &[key, value] : *attrs)
    if (name_is(key, local)) return value.data();
  return std::nullopt;
}

struct ClassGraph {
  std::vector<std::string> order;  // document order of first mention
  std::set<std::string> seen;
  std::map<std::string, std::vector<std::string>> children;

  void note(const std::string &id) {
    if (seen.insert(id).second) order.push_back(id);
  }
};

void collect_classes(const pt::ptree &tree, ClassGraph *graph) {
  for (const auto &[tag, node] : tree) {
    if (tag == "<xmlattr>" || tag == "<xmlcomment>") continue;
    std::optional<std::string> subject = attribute(node, "about");
    if (!subject) subject = attribute(node, "ID");
    bool is_class = has_suffix(tag, "Class");
    if (subject) {
      std::string id = local_name(*subject);
      bool declared = is_class;
      for (const auto &[child_tag, child] : node) {
        if (!name_is(child_tag, "subClassOf")) continue;
        if (auto parent = attribute(child, "resource")) {
          graph->children[local_name(*parent)].push_back(id);
          declared = true;
        }
      }
      if (declared) graph->note(id);
    }
    collect_classes(node, graph);
  }
}

std::vector<OntologyTerm> descendants(const ClassGraph &graph,
                                      const std::string &root, TermKind kind,
                                      const OntologyConfig &config) {
  std::set<std::string> reached;
  std::vector<std::string> frontier{root};
  while (!frontier.empty()) {
    std::string id = frontier.back();
    frontier.pop_back();
    auto it = graph.children.find(id);
    if (it == graph.children.end()) continue;
    for (const auto &child : it->second)
      if (child != root && reached.insert(child).second)
        frontier.push_back(child);
  }
  std::vector<OntologyTerm> out;
  std::set<std::string> names;
  for (const auto &id : graph.order) {
    if (!reached.count(id)) continue;
    std::string name = ontology_display_name(id, config.split_camel_case);
    if (name.empty() || !names.insert(name).second) continue;
    out.push_back({name, kind, id});
  }
  return out;
}

std::vector<OntologyTerm> terms_from_json(const json &list, TermKind kind,
                                          const OntologyConfig &config) {
  std::vector<OntologyTerm> out;
  std::set<std::string> names;
  if (!list.is_array())
    throw Error(ErrorKind::kParse, std::string(to_string(kind)) +
                                       " term list must be an array");
  for (const auto &item : list) {
    // Either a bare name or {"name", "raw_id"} as written by to_json().
    std::string label, raw;
    if (item.is_string()) {
      label = raw = item.get<std::string>();
    } else if (item.is_object() && item.contains("name") &&
               item["name"].is_string()) {
      label = item["name"].get<std::string>();
      raw = item.value("raw_id", label);
    } else {
      throw Error(ErrorKind::kParse, "ontology term must be a string or object");
    }
    std::string name = ontology_display_name(label, config.split_camel_case);
    if (name.empty() || !names.insert(name).second) continue;
    out.push_back({name, kind, raw});
  }
  return out;
}

void require_terms(const OntologyCatalog &catalog) {
  if (catalog.triggers.empty())
    throw Error(ErrorKind::kInvalidInput, "ontology has no trigger terms");
  if (catalog.actions.empty())
    throw Error(ErrorKind::kInvalidInput, "ontology has no action terms");
}

}  // namespace

RawRecipeSet parse_recipes(std::istream &in, const RecipeFormatConfig &config) {
  RawRecipeSet out = config.format == RecipeFormat::kDelimited
                         ? parse_delimited(in, config)
                         : parse_json_lines(in, config);
  if (out.rows.empty()) throw Error(ErrorKind::kInvalidInput, "zero rows");
  return out;
}

RawRecipeSet load_recipes(const std::filesystem::path &path,
                          const RecipeFormatConfig &config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "missing file: " + path.string());
  RawRecipeSet out = parse_recipes(in, config);
  out.source_label = path.stem().string();
  return out;
}

const CatalogTerm *ProprietaryCatalog::find(std::string_view name,
                                            TermKind kind) const {
  for (const auto &term : terms(kind))
    if (term.name == name) return &term;
  return nullptr;
}

std::string clean_name(std::string_view raw) {
  std::string without_slash;
  without_slash.reserve(raw.size());
  for (char c : raw)
    if (c != '/') without_slash.push_back(c);
  return nfc(collapse_whitespace(without_slash));
}

PreparedCatalog clean_and_split(const RawRecipeSet &raw) {
  if (raw.rows.empty()) throw Error(ErrorKind::kInvalidInput, "zero rows");
  PreparedCatalog out;
  out.catalog.source_label = raw.source_label;
  std::unordered_map<std::string, std::size_t> index[2];

  auto add = [&](std::size_t row, TermKind kind, const std::string &value) {
    std::string name = clean_name(value);
    if (name.empty()) {
      out.dropped.push_back({row, kind, value});
      return;
    }
    auto &list = kind == TermKind::kTrigger ? out.catalog.triggers
                                            : out.catalog.actions;
    auto &slot = index[kind == TermKind::kTrigger ? 0 : 1];
    auto [it, inserted] = slot.emplace(name, list.size());
    if (inserted)
      list.push_back({name, kind, 1});
    else
      ++list[it->second].usage_count;
  };

  for (std::size_t i = 0; i < raw.rows.size(); ++i) {
    add(i, TermKind::kTrigger, raw.rows[i].trigger);
    add(i, TermKind::kAction, raw.rows[i].action);
  }
  if (out.catalog.triggers.empty() && out.catalog.actions.empty())
    throw Error(ErrorKind::kInvalidInput, "all names empty after cleaning");
  return out;
}

RawRecipeSet render_rows(const ProprietaryCatalog &catalog) {
  std::vector<std::string> triggers, actions;
  for (const auto &t : catalog.triggers)
    triggers.insert(triggers.end(), t.usage_count, t.name);
  for (const auto &a : catalog.actions)
    actions.insert(actions.end(), a.usage_count, a.name);
  RawRecipeSet out;
  out.source_label = catalog.source_label;
  std::size_t n = std::max(triggers.size(), actions.size());
  for (std::size_t i = 0; i < n; ++i)
    out.rows.push_back({i < triggers.size() ? triggers[i] : std::string(),
                        i < actions.size() ? actions[i] : std::string()});
  return out;
}

bool OntologyCatalog::contains(std::string_view name, TermKind kind) const {
  const auto &list = terms(kind);
  return std::any_of(list.begin(), list.end(),
                     [&](const OntologyTerm &t) { return t.name == name; });
}

std::string split_camel_case(std::string_view id) {
  auto upper = [](char c) { return c >= 'A' && c <= 'Z'; };
  auto lower = [](char c) { return c >= 'a' && c <= 'z'; };
  auto digit = [](char c) { return c >= '0' && c <= '9'; };
  std::string out;
  for (std::size_t i = 0; i < id.size(); ++i) {
    char c = id[i];
    if (c == '_' || c == '-') {
      out.push_back(' ');
      continue;
    }
    if (i > 0 && upper(c)) {
      char prev = id[i - 1];
      bool next_lower = i + 1 < id.size() && lower(id[i + 1]);
      if (lower(prev) || digit(prev) || (upper(prev) && next_lower))
        out.push_back(' ');
    }
    out.push_back(c);
  }
  return out;
}

std::string ontology_display_name(std::string_view raw_id, bool split_camel) {
  std::string name = trim(raw_id);
  for (;;) {
    std::string_view view = name;
    std::size_t cut = 0;
    if (has_suffix(view, "Trigger"))
      cut = 7;
    else if (has_suffix(view, "Action"))
      cut = 6;
    if (cut == 0) break;
    name = trim(view.substr(0, view.size() - cut));
  }
  if (split_camel) name = split_camel_case(name);
  return nfc(collapse_whitespace(name));
}

OntologyCatalog parse_ontology_xml(std::istream &in,
                                   const OntologyConfig &config) {
  pt::ptree tree;
  try {
    pt::read_xml(in, tree);
  } catch (const pt::xml_parser_error &e) {
    throw Error(ErrorKind::kParse, std::string("unparseable ontology: ") + e.what());
  }
  ClassGraph graph;
  collect_classes(tree, &graph);
  OntologyCatalog out;
  out.triggers = descendants(graph, config.trigger_root, TermKind::kTrigger, config);
  out.actions = descendants(graph, config.action_root, TermKind::kAction, config);
  require_terms(out);
  return out;
}

OntologyCatalog parse_ontology_json(const json &doc, const OntologyConfig &config) {
  if (!doc.is_object() || !doc.contains("triggers") || !doc.contains("actions"))
    throw Error(ErrorKind::kParse,
                "prepared ontology needs \"triggers\" and \"actions\" lists");
  OntologyCatalog out;
  out.triggers = terms_from_json(doc["triggers"], TermKind::kTrigger, config);
  out.actions = terms_from_json(doc["actions"], TermKind::kAction, config);
  require_terms(out);
  return out;
}

OntologyCatalog load_ontology(const std::filesystem::path &path,
                              OntologyFormat format,
                              const OntologyConfig &config) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "missing file: " + path.string());
  if (format == OntologyFormat::kOntologyXml) return parse_ontology_xml(in, config);
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded())
    throw Error(ErrorKind::kParse, "unparseable ontology: " + path.string());
  return parse_ontology_json(doc, config);
}

json to_json(const ProprietaryCatalog &catalog) {
  auto terms = [](const std::vector<CatalogTerm> &list) {
    json out = json::array();
    for (const auto &t : list)
      out.push_back({{"name", t.name},
                     {"kind", std::string(to_string(t.kind))},
                     {"usage_count", t.usage_count}});
    return out;
  };
  return {{"source_label", catalog.source_label},
          {"triggers", terms(catalog.triggers)},
          {"actions", terms(catalog.actions)}};
}

ProprietaryCatalog catalog_from_json(const json &doc) {
  ProprietaryCatalog out;
  out.source_label = doc.value("source_label", "");
  for (TermKind kind : kAllKinds) {
    auto &list = kind == TermKind::kTrigger ? out.triggers : out.actions;
    const char *key = kind == TermKind::kTrigger ? "triggers" : "actions";
    if (!doc.contains(key)) continue;
    for (const auto &item : doc[key]) {
      CatalogTerm term;
      term.name = item.at("name").get<std::string>();
      term.kind = kind;
      term.usage_count = item.value("usage_count", std::uint64_t{1});
      list.push_back(std::move(term));
    }
  }
  return out;
}

json to_json(const OntologyCatalog &catalog) {
  auto terms = [](const std::vector<OntologyTerm> &list) {
    json out = json::array();
    for (const auto &t : list)
      out.push_back({{"name", t.name}, {"raw_id", t.raw_id}});
    return out;
  };
  return {{"triggers", terms(catalog.triggers)},
          {"actions", terms(catalog.actions)}};
}

json to_json(const std::vector<DroppedName> &dropped) {
  json out = json::array();
  for (const auto &d : dropped)
    out.push_back({{"row", d.row},
                   {"kind", std::string(to_string(d.kind))},
                   {"raw", d.raw}});
  return out;
}

void save_json(const std::filesystem::path &path, const json &doc) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

json load_json(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "missing file: " + path.string());
  json doc = json::parse(in, nullptr, false);
  if (doc.is_discarded())
    throw Error(ErrorKind::kParse, "unparseable JSON: " + path.string());
  return doc;
}

}  // namespace rulebridge
