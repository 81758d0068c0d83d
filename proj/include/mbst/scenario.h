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

#ifndef MBST_SCENARIO_H_
#define MBST_SCENARIO_H_

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mbst/guard.h"
#include "mbst/value_domain.h"

namespace mbst {

enum class LifelineRole { kTester, kSut, kOther };

enum class TypeTag {
  kInt,
  kString,
  kAmount,
  kAccountNational,
  kAccountInternational,
  kTan,
};

enum class FragmentKind { kLoop, kAlt, kOpt };

std::string_view to_string(LifelineRole role);
std::string_view to_string(TypeTag tag);
std::string_view to_string(FragmentKind kind);
std::optional<LifelineRole> lifeline_role_from_string(std::string_view s);
std::optional<TypeTag> type_tag_from_string(std::string_view s);

struct Lifeline {
  std::string id;
  LifelineRole role = LifelineRole::kOther;

  friend bool operator==(const Lifeline&, const Lifeline&) = default;
};

struct Param {
  std::string name;
  TypeTag type = TypeTag::kString;
  ValueDomain domain;
  // Set by FUZZ_PARAMETER: the invalid value to send instead of valid data.
  std::optional<std::string> fuzz_value;

  friend bool operator==(const Param&, const Param&) = default;
};

struct Message {
  std::string id;
  int seq_no = 1;  // display only
  std::string sender;
  std::string receiver;
  std::string signature;
  std::vector<Param> params;
  std::vector<std::string> sets_flags;  // sorted, unique
  Guard requires_flags;

  friend bool operator==(const Message&, const Message&) = default;
};

struct InteractionConstraint {
  int min_iter = 0;
  std::optional<int> max_iter;  // nullopt means unbounded
  Guard guard;
  bool negated = false;

  friend bool operator==(const InteractionConstraint&,
                         const InteractionConstraint&) = default;
};

struct Element;

struct Operand {
  InteractionConstraint constraint;
  std::vector<Element> body;

  friend bool operator==(const Operand&, const Operand&);
};

struct CombinedFragment {
  std::string id;
  FragmentKind kind = FragmentKind::kOpt;
  std::vector<Operand> operands;

  friend bool operator==(const CombinedFragment&, const CombinedFragment&);
};

struct Element {
  std::variant<Message, CombinedFragment> node;

  Element() = default;
  Element(Message m) : node(std::move(m)) {}            // NOLINT
  Element(CombinedFragment f) : node(std::move(f)) {}   // NOLINT

  bool is_message() const { return node.index() == 0; }
  const Message& message() const { return std::get<Message>(node); }
  Message& message() { return std::get<Message>(node); }
  const CombinedFragment& fragment() const {
    return std::get<CombinedFragment>(node);
  }
  CombinedFragment& fragment() { return std::get<CombinedFragment>(node); }
  const std::string& id() const;

  friend bool operator==(const Element&, const Element&) = default;
};

// Annotation key marking a model produced by mutation; its value is the
// base scenario name.
inline constexpr std::string_view kMutantOfAnnotation = "mutant-of";
// Prefix of annotation keys linking an element to risk-graph node ids
// (`risk-link:<element-id>` = comma-separated node ids).
inline constexpr std::string_view kRiskLinkPrefix = "risk-link:";
// Prefix of annotation keys naming vulnerabilities a test of the element
// may reveal, whether or not the risk graph already contains them.
inline constexpr std::string_view kRiskVulnPrefix = "risk-vuln:";

struct ScenarioModel {
  std::string name;
  std::vector<Lifeline> lifelines;
  std::vector<Element> body;
  std::map<std::string, std::string> annotations;

  const Lifeline* find_lifeline(std::string_view id) const;
  bool is_mutant() const {
    return annotations.count(std::string(kMutantOfAnnotation)) != 0;
  }

  friend bool operator==(const ScenarioModel&, const ScenarioModel&) = default;
};

// Scope id of an operand: "<fragment-id>/<operand-index>". The top-level
// sequence has the empty scope id.
std::string operand_scope_id(std::string_view fragment_id,
                             std::size_t operand_index);

// Pre-order walks in document order.
void for_each_message(const ScenarioModel& model,
                      const std::function<void(const Message&)>& fn);
void for_each_fragment(const ScenarioModel& model,
                       const std::function<void(const CombinedFragment&)>& fn);
std::size_t count_messages(const ScenarioModel& model);

// Distinct message signatures in first-occurrence document order.
std::vector<std::string> distinct_signatures(const ScenarioModel& model);

struct Violation {
  std::string element_id;
  std::string rule;
  std::string message;

  friend bool operator==(const Violation&, const Violation&) = default;
};

// Rule names reported by validate_model.
namespace rules {
inline constexpr std::string_view kSutCount = "SUT_COUNT";
inline constexpr std::string_view kUndeclaredLifeline = "UNDECLARED_LIFELINE";
inline constexpr std::string_view kDuplicateId = "DUPLICATE_ID";
inline constexpr std::string_view kSelfSend = "SELF_SEND";
inline constexpr std::string_view kSeqOrder = "SEQ_ORDER";
inline constexpr std::string_view kSeqPositive = "SEQ_POSITIVE";
inline constexpr std::string_view kOperandCount = "OPERAND_COUNT";
inline constexpr std::string_view kEmptyOperand = "EMPTY_OPERAND";
inline constexpr std::string_view kBounds = "BOUNDS";
inline constexpr std::string_view kIterOnNonLoop = "ITER_ON_NON_LOOP";
inline constexpr std::string_view kEmptyDomain = "EMPTY_DOMAIN";
inline constexpr std::string_view kDuplicateParam = "DUPLICATE_PARAM";
}  // namespace rules

// Empty result iff every model invariant holds. Mutants (models carrying
// the mutant-of annotation) skip the SEQ_ORDER check.
std::vector<Violation> validate_model(const ScenarioModel& model);

// Digest of the model's shape: lifelines, and for every element its kind,
// signature, endpoints, parameters, flags and constraints, in order.
// Element ids, display numbers and annotations do not contribute, so
// mutants reached through different operator paths collapse.
std::string canonical_hash(const ScenarioModel& model);

// The id-free text the digest is computed over. Exposed for diagnostics.
std::string canonical_shape(const ScenarioModel& model);

}  // namespace mbst

#endif  // MBST_SCENARIO_H_
