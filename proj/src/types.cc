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

#include "rulebridge/types.h"

namespace rulebridge {

std::string_view to_string(TermKind kind) {
  return kind == TermKind::kTrigger ? "trigger" : "action";
}

std::optional<TermKind> parse_term_kind(std::string_view text) {
  if (text == "trigger") return TermKind::kTrigger;
  if (text == "action") return TermKind::kAction;
  return std::nullopt;
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::kEmbedding:
      return "embedding";
    case Method::kEntailment:
      return "entailment";
    case Method::kCombined:
      return "combined";
  }
  return "combined";
}

std::optional<Method> parse_method(std::string_view text) {
  if (text == "embedding" || text == "spacy") return Method::kEmbedding;
  if (text == "entailment" || text == "allennlp") return Method::kEntailment;
  if (text == "combined") return Method::kCombined;
  return std::nullopt;
}

}  // namespace rulebridge
