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

#ifndef TAGREFINE_ERROR_HPP_
#define TAGREFINE_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tagrefine {

// Base of every exception thrown by the library. The C API maps each
// subclass onto one status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A knowledge or input file could not be opened.
class IoError : public Error {
 public:
  explicit IoError(const std::string& path)
      : Error("cannot open '" + path + "'"), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Malformed content. line is 1-based; 0 when the error is not tied to a line.
class LoadError : public Error {
 public:
  LoadError(const std::string& path, std::size_t line, const std::string& what)
      : Error(path + (line ? ":" + std::to_string(line) : std::string()) +
              ": " + what),
        path_(path),
        line_(line) {}
  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// A caller broke a documented precondition.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

// Input too large for an exhaustive routine.
class SizeError : public Error {
 public:
  using Error::Error;
};

// Two inputs that must describe the same images do not.
class MismatchError : public Error {
 public:
  using Error::Error;
};

}  // namespace tagrefine

#endif  // TAGREFINE_ERROR_HPP_
