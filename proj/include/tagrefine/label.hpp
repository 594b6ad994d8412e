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

#ifndef TAGREFINE_LABEL_HPP_
#define TAGREFINE_LABEL_HPP_

#include <compare>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace tagrefine {

// Canonical label text: ASCII-lowercased, trimmed, internal whitespace runs
// collapsed to one space. Never empty.
class Label {
 public:
  // Throws ContractViolation when text is blank.
  explicit Label(std::string_view text);

  // Returns nullopt instead of throwing on blank input.
  static std::optional<Label> Parse(std::string_view text);

  const std::string& str() const { return text_; }

  friend bool operator==(const Label&, const Label&) = default;
  friend auto operator<=>(const Label&, const Label&) = default;

 private:
  std::string text_;
};

std::string CanonicalLabelText(std::string_view text);

// CL: concrete detector classes, XL: generalizations, AL: abstract concepts.
enum class LabelSpace { kConcrete, kExtended, kAbstract };

const char* LabelSpaceName(LabelSpace space);
std::optional<LabelSpace> ParseLabelSpace(std::string_view name);

}  // namespace tagrefine

template <>
struct std::hash<tagrefine::Label> {
  std::size_t operator()(const tagrefine::Label& l) const noexcept {
    return std::hash<std::string>{}(l.str());
  }
};

#endif  // TAGREFINE_LABEL_HPP_
