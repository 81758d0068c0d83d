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

#ifndef MBST_TRACE_EXPANSION_H_
#define MBST_TRACE_EXPANSION_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mbst/invalid_catalog.h"
#include "mbst/scenario.h"

namespace mbst {

enum class Direction { kToSut, kFromSut };

std::string_view to_string(Direction d);

struct EventArg {
  std::string name;
  TypeTag type = TypeTag::kString;
  ValueDomain domain;
  std::optional<std::string> fuzz_value;
  std::optional<std::string> value;  // set by assign_test_data

  friend bool operator==(const EventArg&, const EventArg&) = default;
};

// A FROM_SUT event is an expectation on the SUT's previous response, not a
// stimulus.
struct MessageEvent {
  std::string source_id;  // id of the message it was expanded from
  std::string signature;
  Direction direction = Direction::kToSut;
  std::vector<EventArg> args;

  friend bool operator==(const MessageEvent&, const MessageEvent&) = default;
};

// "flag `flag` set by event `event_index` has value `value`".
struct OutcomeConstraint {
  std::size_t event_index = 0;
  std::string flag;
  bool value = true;

  friend bool operator==(const OutcomeConstraint&,
                         const OutcomeConstraint&) = default;
};

inline constexpr std::string_view kBaselineOrigin = "baseline";

struct Trace {
  std::string trace_id;
  std::string origin = std::string(kBaselineOrigin);
  // Ids of the messages the path sends and of the fragments whose body it
  // enters.
  std::vector<std::string> elements;
  std::vector<MessageEvent> events;
  std::vector<OutcomeConstraint> constraints;

  bool is_baseline() const { return origin == kBaselineOrigin; }
  // Number of constraints on `flag` with the given value.
  std::size_t count_constraints(std::string_view flag, bool value) const;

  friend bool operator==(const Trace&, const Trace&) = default;
};

enum class AltPolicy { kAllBranches, kFirst };

std::string_view to_string(AltPolicy p);
std::optional<AltPolicy> alt_policy_from_string(std::string_view s);

struct ExpansionConfig {
  int loop_unroll_cap = 3;
  AltPolicy alt_policy = AltPolicy::kAllBranches;
  std::size_t max_traces_per_model = 64;
};

struct ExpansionResult {
  std::vector<Trace> traces;
  // More paths existed than max_traces_per_model; the first ones were kept.
  bool overflow = false;
};

// Depth-first expansion. Loops unroll from min_iter up to
// min(max_iter, max(min_iter, cap)); a negated loop takes the counts outside
// its bounds (up to cap beyond max_iter) and requires the complemented guard
// before every iteration. Flags that no event sets read as false; flag
// values the guards leave open default to true. Trace ids are
// "<origin>-t<NNN>".
//
// Throws ConfigError when cfg is invalid.
ExpansionResult expand_traces(const ScenarioModel& model,
                              const ExpansionConfig& cfg,
                              std::string_view origin = kBaselineOrigin);

enum class DataMode { kValidOnly, kApplyFuzzParams };

// Fills every TO_SUT argument. An event whose flag is constrained false gets
// catalog values that violate each parameter's domain; everything else is
// sampled from its domain. The generator is seeded from the trace id.
//
// Throws UnsatisfiableConstraint for a flag constrained both ways on one
// event, or when no catalog entry can make a parameter invalid.
Trace assign_test_data(const Trace& trace, const InvalidValueCatalog& catalog,
                       DataMode mode);

// Line-oriented trace file; see docs/trace-format.md.
std::string serialize_trace(const Trace& trace);
Trace parse_trace(std::string_view text);

}  // namespace mbst

#endif  // MBST_TRACE_EXPANSION_H_
