// Copyright 2026 The invsim Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace invsim {

// Base for every error the library raises. `code()` is a stable,
// machine-readable tag used by the CLI's error line.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

// Inconsistent shapes, negative orders, invalid task parameters.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& message) : Error("config", message) {}
};

// Malformed input files. Row and column are 1-based; 0 means "not applicable".
class DataError : public Error {
 public:
  DataError(const std::string& message, long row = 0, std::string column = {})
      : Error("data", message), row_(row), column_(std::move(column)) {}
  long row() const { return row_; }
  const std::string& column() const { return column_; }

 private:
  long row_;
  std::string column_;
};

class UnknownTaskError : public Error {
 public:
  explicit UnknownTaskError(const std::string& message) : Error("unknown_task", message) {}
};

// Misuse of an episode, e.g. stepping after it finished.
class EpisodeError : public Error {
 public:
  explicit EpisodeError(const std::string& message) : Error("episode", message) {}
};

}  // namespace invsim
