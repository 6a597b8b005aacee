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

// Word vectors and mean-of-word-vectors document embedding.

#ifndef RULEBRIDGE_EMBEDVEC_H_
#define RULEBRIDGE_EMBEDVEC_H_

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace rulebridge {

// Lowercases and splits on every non-alphanumeric byte. Bytes >= 0x80 count
// as word characters so UTF-8 letters stay inside their token. Stopwords are
// kept.
std::vector<std::string> tokenize(std::string_view text);

// Immutable after loading; lookups are case-insensitive.
class VectorStore {
 public:
  explicit VectorStore(std::size_t dimension);

  // Text format: one "token v1 ... vN" per line, optional "count dim" header.
  static VectorStore load(const std::filesystem::path &path);
  static VectorStore parse(std::istream &in);

  // Returns false (and keeps the existing entry) for a duplicate key.
  bool add(std::string_view token, std::vector<double> vector);

  const std::vector<double> *find(std::string_view token) const;
  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::size_t dimension_;
  std::unordered_map<std::string, std::vector<double>> entries_;
};

struct DocVector {
  std::vector<double> vector;
  std::size_t covered_tokens = 0;
  std::size_t total_tokens = 0;

  bool degenerate() const { return covered_tokens == 0; }
};

// Arithmetic mean of the in-vocabulary token vectors. Out-of-vocabulary
// tokens count toward total_tokens only.
DocVector embed(std::string_view text, const VectorStore &store);

struct Cosine {
  double value = 0.0;
  bool degenerate = false;  // either side had zero norm
};

// Throws kInvalidInput on a dimension mismatch.
Cosine cosine(std::span<const double> a, std::span<const double> b);
Cosine cosine(const DocVector &a, const DocVector &b);

}  // namespace rulebridge

#endif  // RULEBRIDGE_EMBEDVEC_H_
