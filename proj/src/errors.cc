// Copyright 2026 The mbst Authors
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

#include "mbst/errors.h"

namespace mbst {
namespace {

std::string SyntaxMessage(int line, int column,
                          const std::vector<std::string>& expected,
                          const std::string& found) {
  std::string msg = "syntax error at line " + std::to_string(line) +
                    ", column " + std::to_string(column) + ": expected ";
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i) msg += i + 1 == expected.size() ? " or " : ", ";
    msg += expected[i];
  }
  return msg + ", found '" + found + "'";
}

}  // namespace

SyntaxError::SyntaxError(int line, int column,
                         std::vector<std::string> expected, std::string found)
    : Error(SyntaxMessage(line, column, expected, found)),
      line_(line),
      column_(column),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

SemanticError::SemanticError(int line, std::string rule, std::string subject,
                             const std::string& message)
    : Error("semantic error at line " + std::to_string(line) + ": " + message),
      line_(line),
      rule_(std::move(rule)),
      subject_(std::move(subject)) {}

}  // namespace mbst
