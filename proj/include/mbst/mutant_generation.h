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

#ifndef MBST_MUTANT_GENERATION_H_
#define MBST_MUTANT_GENERATION_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "mbst/fuzz_operators.h"
#include "mbst/invalid_catalog.h"
#include "mbst/scenario.h"

namespace mbst {

struct GenerationConfig {
  std::vector<FuzzOperatorKind> operators = all_operator_kinds();
  int max_order = 2;
  std::size_t budget = 1000;
  std::uint64_t seed = 0;
  bool dedup = true;
  // Threads used to compute candidates; output order does not depend on it.
  int workers = 1;
  InvalidValueCatalog catalog = InvalidValueCatalog::Default();
};

// Throws ConfigError for budget 0, max_order 0, workers < 1 or an empty
// operator set.
void validate_config(const GenerationConfig& cfg);

struct MutantRecord {
  std::string mutant_id;
  std::vector<Mutation> mutations;
  ScenarioModel model;
  std::string digest;

  int order() const { return static_cast<int>(mutations.size()); }
};

using MutantSink = std::function<void(const MutantRecord&)>;

// Order 1 is emitted exhaustively in enumeration order (operators in config
// order, then loci) and cut off at the budget. Each higher order composes
// one more mutation onto every record emitted at the order below; if those
// candidates exceed the remaining budget a uniform sample is drawn with
// `seed` and emitted in candidate order.
//
// Throws BudgetZeroAfterDedup when candidates exist but every one repeats
// the base model or an earlier mutant.
void generate_mutants(const ScenarioModel& base, const GenerationConfig& cfg,
                      const MutantSink& sink);
std::vector<MutantRecord> generate_mutants(const ScenarioModel& base,
                                           const GenerationConfig& cfg);

// Writes mutants/<mutant_id>.scn for every record plus manifest.json under
// `dir`. The manifest is byte-stable for a given input.
void write_corpus(const std::filesystem::path& dir, const ScenarioModel& base,
                  const GenerationConfig& cfg,
                  const std::vector<MutantRecord>& records);

// Re-reads a corpus written by write_corpus. Mutation lists come from the
// manifest and models from the .scn files.
std::vector<MutantRecord> read_corpus(const std::filesystem::path& dir);

}  // namespace mbst

#endif  // MBST_MUTANT_GENERATION_H_
