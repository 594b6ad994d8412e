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

#ifndef TAGREFINE_SRC_TEXT_READER_HPP_
#define TAGREFINE_SRC_TEXT_READER_HPP_

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tagrefine::internal {

// Line iterator over a text file. Strips a trailing '\r'; skips blank lines
// and '#' comments unless raw is set.
class LineReader {
 public:
  // Throws IoError when the file cannot be opened.
  explicit LineReader(const std::string& path, bool raw = false);

  bool Next(std::string_view* line);
  std::size_t line_number() const { return line_number_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::string buffer_;
  std::size_t line_number_ = 0;
  bool raw_;
};

std::vector<std::string_view> SplitTabs(std::string_view line);
std::vector<std::string_view> SplitWhitespace(std::string_view line);
std::string_view Trim(std::string_view s);

// Whole-field parses; nullopt on trailing garbage or overflow.
std::optional<double> ParseDouble(std::string_view s);
std::optional<std::int64_t> ParseInt(std::string_view s);

// Throws IoError when path is not a readable file.
void RequireReadable(const std::string& path);

}  // namespace tagrefine::internal

#endif  // TAGREFINE_SRC_TEXT_READER_HPP_
