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

#include "rulebridge/embedvec.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rulebridge/types.h"

namespace rulebridge {

namespace {

bool word_byte(unsigned char c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') ||
         (c >= 'A' && c <= 'Z') || c >= 0x80;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char &c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

std::vector<std::string> split_fields(const std::string &line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string field;
  while (in >> field) out.push_back(std::move(field));
  return out;
}

bool parse_double(const std::string &text, double *value) {
  char *end = nullptr;
  *value = std::strtod(text.c_str(), &end);
  return end != text.c_str() && *end == '\0';
}

bool parse_count(const std::string &text, std::size_t *value) {
  if (text.empty()) return false;
  for (char c : text)
    if (c < '0' || c > '9') return false;
  *value = std::stoull(text);
  return true;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    if (word_byte(static_cast<unsigned char>(c))) {
      current.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
    } else if (!current.empty()) {
      out.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

VectorStore::VectorStore(std::size_t dimension) : dimension_(dimension) {
  if (dimension == 0)
    throw Error(ErrorKind::kInvalidInput, "vector dimension must be positive");
}

bool VectorStore::add(std::string_view token, std::vector<double> vector) {
  if (vector.size() != dimension_)
    throw Error(ErrorKind::kInvalidInput,
                "vector for '" + std::string(token) + "' has " +
                    std::to_string(vector.size()) + " components, expected " +
                    std::to_string(dimension_));
  return entries_.emplace(lower(token), std::move(vector)).second;
}

const std::vector<double> *VectorStore::find(std::string_view token) const {
  auto it = entries_.find(lower(token));
  return it == entries_.end() ? nullptr : &it->second;
}

VectorStore VectorStore::parse(std::istream &in) {
  std::string line;
  std::vector<std::string> fields;
  std::size_t line_no = 0;
  // Skip leading blank lines.
  while (std::getline(in, line)) {
    ++line_no;
    fields = split_fields(line);
    if (!fields.empty()) break;
  }
  if (fields.empty()) throw Error(ErrorKind::kParse, "empty vector file");

  std::size_t count = 0, dim = 0;
  bool header = fields.size() == 2 && parse_count(fields[0], &count) &&
                parse_count(fields[1], &dim);
  if (!header) dim = fields.size() - 1;
  if (dim == 0) throw Error(ErrorKind::kParse, "vector file has no components");

  VectorStore store(dim);
  auto consume = [&](const std::vector<std::string> &f) {
    if (f.size() != dim + 1)
      throw Error(ErrorKind::kParse, "line " + std::to_string(line_no) + ": expected " +
                                         std::to_string(dim) + " components");
    std::vector<double> v(dim);
    for (std::size_t i = 0; i < dim; ++i)
      if (!parse_double(f[i + 1], &v[i]))
        throw Error(ErrorKind::kParse,
                    "line " + std::to_string(line_no) + ": bad number '" + f[i + 1] + "'");
    store.add(f[0], std::move(v));
  };
  if (!header) consume(fields);
  while (std::getline(in, line)) {
    ++line_no;
    fields = split_fields(line);
    if (!fields.empty()) consume(fields);
  }
  return store;
}

VectorStore VectorStore::load(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "missing file: " + path.string());
  return parse(in);
}

DocVector embed(std::string_view text, const VectorStore &store) {
  DocVector doc;
  doc.vector.assign(store.dimension(), 0.0);
  // Summing in sorted order makes the result depend only on the token
  // multiset, bit for bit.
  std::vector<std::string> tokens = tokenize(text);
  std::sort(tokens.begin(), tokens.end());
  for (const auto &token : tokens) {
    ++doc.total_tokens;
    const std::vector<double> *v = store.find(token);
    if (v == nullptr) continue;
    ++doc.covered_tokens;
    for (std::size_t i = 0; i < v->size(); ++i) doc.vector[i] += (*v)[i];
  }
  if (doc.covered_tokens > 0)
    for (double &x : doc.vector) x /= static_cast<double>(doc.covered_tokens);
  return doc;
}

Cosine cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw Error(ErrorKind::kInvalidInput, "cosine: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return {0.0, true};
  double value = dot / (std::sqrt(na) * std::sqrt(nb));
  return {std::clamp(value, -1.0, 1.0), false};
}

Cosine cosine(const DocVector &a, const DocVector &b) {
  return cosine(std::span<const double>(a.vector), std::span<const double>(b.vector));
}

}  // namespace rulebridge
