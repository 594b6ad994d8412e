// Copyright 2026 The tagrefine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tagrefine/label.hpp"

#include "tagrefine/error.hpp"

namespace tagrefine {

namespace {

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

char AsciiLower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

}  // namespace

std::string CanonicalLabelText(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (IsSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(AsciiLower(c));
  }
  return out;
}

Label::Label(std::string_view text) : text_(CanonicalLabelText(text)) {
  if (text_.empty()) throw ContractViolation("empty label");
}

std::optional<Label> Label::Parse(std::string_view text) {
  if (CanonicalLabelText(text).empty()) return std::nullopt;
  return Label(text);
}

const char* LabelSpaceName(LabelSpace space) {
  switch (space) {
    case LabelSpace::kConcrete: return "CL";
    case LabelSpace::kExtended: return "XL";
    case LabelSpace::kAbstract: return "AL";
  }
  return "?";
}

std::optional<LabelSpace> ParseLabelSpace(std::string_view name) {
  if (name == "CL") return LabelSpace::kConcrete;
  if (name == "XL") return LabelSpace::kExtended;
  if (name == "AL") return LabelSpace::kAbstract;
  return std::nullopt;
}

}  // namespace tagrefine
