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

#ifndef MBST_FUZZ_OPERATORS_H_
#define MBST_FUZZ_OPERATORS_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mbst/invalid_catalog.h"
#include "mbst/scenario.h"

namespace mbst {

// Declaration order is the default composition order.
enum class FuzzOperatorKind {
  kMoveMessage,
  kRemoveMessage,
  kRepeatMessage,
  kInsertMessage,
  kChangeMessageType,
  kNegateConstraint,
  kFuzzParameter,
};

std::string_view to_string(FuzzOperatorKind kind);
// Accepts the canonical names (MOVE_MESSAGE) and the short forms used on the
// command line (move, remove, repeat, insert, change, negate, fuzz).
std::optional<FuzzOperatorKind> operator_kind_from_string(std::string_view s);
const std::vector<FuzzOperatorKind>& all_operator_kinds();

// A slot in a sequence: `scope` is "" for the top level or an operand scope
// id ("loop1/0"); `index` is the insertion index into that sequence.
struct Position {
  std::string scope;
  std::size_t index = 0;

  friend bool operator==(const Position&, const Position&) = default;
};

// Index refers to the sequence after the moved message was taken out.
struct MoveDetail {
  Position target;
  friend bool operator==(const MoveDetail&, const MoveDetail&) = default;
};

struct RepeatDetail {
  int copies = 1;
  friend bool operator==(const RepeatDetail&, const RepeatDetail&) = default;
};

// The mutation locus names the template message that is re-sent.
struct InsertDetail {
  Position target;
  friend bool operator==(const InsertDetail&, const InsertDetail&) = default;
};

struct ChangeDetail {
  std::string signature;
  friend bool operator==(const ChangeDetail&, const ChangeDetail&) = default;
};

// Index into the catalog list for the parameter's type tag.
struct FuzzDetail {
  std::size_t selector = 0;
  friend bool operator==(const FuzzDetail&, const FuzzDetail&) = default;
};

using MutationDetail = std::variant<std::monostate, MoveDetail, RepeatDetail,
                                    InsertDetail, ChangeDetail, FuzzDetail>;

// One operator application at one locus. Loci are message ids, operand
// scope ids ("loop1/0") for NEGATE_CONSTRAINT, and "<message>.<param>" for
// FUZZ_PARAMETER.
struct Mutation {
  FuzzOperatorKind kind = FuzzOperatorKind::kRemoveMessage;
  std::string locus;
  MutationDetail detail;

  // Audit form, e.g. "MOVE_MESSAGE m5 to=top:2". parse() inverts it and
  // throws std::invalid_argument on malformed text.
  std::string to_string() const;
  static Mutation parse(std::string_view text);

  // Id of the model element the locus sits on.
  std::string element_id() const;

  friend bool operator==(const Mutation&, const Mutation&) = default;
};

// Every applicable single mutation of `kind`, in document order of loci and
// then detail order. MOVE omits identity placements, CHANGE omits the
// current signature, REPEAT uses one copy.
std::vector<Mutation> enumerate_applications(
    const ScenarioModel& model, FuzzOperatorKind kind,
    const InvalidValueCatalog& catalog = InvalidValueCatalog::Default());

// Returns the mutant; `model` is not modified. Emptied operands are dropped,
// an ALT left with one operand becomes an OPT and a fragment left without
// operands disappears, so mutants always pass validate_model.
//
// Throws LocusNotFound when the locus is absent and IncompatibleDetail when
// the detail does not fit the kind or the model.
ScenarioModel apply_mutation(
    const ScenarioModel& model, const Mutation& mutation,
    const InvalidValueCatalog& catalog = InvalidValueCatalog::Default());

}  // namespace mbst

#endif  // MBST_FUZZ_OPERATORS_H_
