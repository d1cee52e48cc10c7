// Copyright 2026 The seloc Authors
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
#include <utility>

#include "json.hpp"

namespace seloc {

/// Base of every domain failure raised by the library.
///
/// `code()` is the machine-readable error name (e.g. "SyntaxError",
/// "UnknownDeviceError") that surfaces unchanged in the HTTP error envelope
/// and in CLI diagnostics; `details()` carries optional structured context.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message,
        nlohmann::json details = nullptr)
      : std::runtime_error(message),
        code_(std::move(code)),
        details_(std::move(details)) {}

  const std::string& code() const noexcept { return code_; }
  const nlohmann::json& details() const noexcept { return details_; }

 private:
  std::string code_;
  nlohmann::json details_;
};

/// Parse failure with a 1-based source position.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, std::size_t line, std::size_t column,
              std::string token)
      : Error("SyntaxError",
              message + " at line " + std::to_string(line) + ", column " +
                  std::to_string(column) +
                  (token.empty() ? std::string() : " near '" + token + "'"),
              {{"line", line}, {"column", column}, {"token", token}}),
        line_(line),
        column_(column),
        token_(std::move(token)) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& token() const noexcept { return token_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string token_;
};

}  // namespace seloc
