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

#ifndef RULEBRIDGE_TYPES_H_
#define RULEBRIDGE_TYPES_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rulebridge {

// Failure classes shared by every module. The service layer maps these onto
// its published error codes.
enum class ErrorKind {
  kInvalidInput,
  kNotFound,
  kConflict,
  kUnavailable,
  kIo,
  kParse,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

enum class TermKind { kTrigger, kAction };

inline constexpr TermKind kAllKinds[] = {TermKind::kTrigger, TermKind::kAction};

std::string_view to_string(TermKind kind);
std::optional<TermKind> parse_term_kind(std::string_view text);

// Translation strategies. Legacy names ("spacy", "allennlp") are accepted on
// input for compatibility with older result files.
enum class Method { kEmbedding, kEntailment, kCombined };

inline constexpr Method kAllMethods[] = {Method::kEmbedding, Method::kEntailment,
                                         Method::kCombined};

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view text);

}  // namespace rulebridge

#endif  // RULEBRIDGE_TYPES_H_
