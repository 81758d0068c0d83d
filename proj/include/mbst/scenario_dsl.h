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

#ifndef MBST_SCENARIO_DSL_H_
#define MBST_SCENARIO_DSL_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "mbst/scenario.h"

namespace mbst {

// Parses the line-oriented scenario DSL (`.scn`). The grammar is documented
// in docs/scenario-dsl.md. Returns a model that passes validate_model.
//
// Throws SyntaxError (with line, column and the expected tokens) or
// SemanticError (undeclared lifeline, duplicate id, malformed guard, or any
// other validation rule; the error names the offending id and rule).
ScenarioModel parse_scenario(std::string_view text);

// Canonical text: annotations sorted by key, two-space indentation inside
// fragments, every optional clause in a fixed order. parse_scenario of the
// result is structurally equal to the input.
std::string serialize_scenario(const ScenarioModel& model);

// Reads and parses a file; a missing file raises ConfigError.
ScenarioModel load_scenario_file(const std::filesystem::path& path);

}  // namespace mbst

#endif  // MBST_SCENARIO_DSL_H_
