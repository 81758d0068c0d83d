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


#include <gtest/gtest.h>

#include "mbst/errors.h"
#include "mbst/fuzz_operators.h"
#include "mbst/scenario_dsl.h"
#include "mbst/trace_expansion.h"
#include "oracles/test_data.h"

namespace mbst {
namespace {

const InvalidValueCatalog& Cat() { return InvalidValueCatalog::Default(); }

ScenarioModel LoopModel(int lo, const std::string& hi, bool negated,
                        const std::string& guard = "true") {
  return parse_scenario(
      "scenario Toy\n"
      "lifeline c TESTER\n"
      "lifeline s SUT\n"
      "msg a 1 c -> s start\n"
      "loop l1 " + std::to_string(lo) + ".." + hi + " [" + guard + "]" +
      (negated ? " negated" : "") + "\n"
      "  msg b 2 c -> s tick(n:INT=range(0,9))\n"
      "end\n"
      "msg z 3 c -> s stop\n");
}

std::size_t Ticks(const Trace& t) {
  std::size_t n = 0;
  for (const MessageEvent& e : t.events) n += e.signature == "tick";
  return n;
}

std::vector<std::size_t> TickCounts(const ExpansionResult& r) {
  std::vector<std::size_t> out;
  for (const Trace& t : r.traces) out.push_back(Ticks(t));
  return out;
}

TEST(ExpandTraces, TransferBaselinePaths) {
  auto r = expand_traces(testdata::transfer(), ExpansionConfig{});
  ASSERT_EQ(r.traces.size(), 6u);
  EXPECT_FALSE(r.overflow);
  std::size_t happy = 0, retry1 = 0, retry2 = 0;
  for (const Trace& t : r.traces) {
    EXPECT_TRUE(t.is_baseline());
    EXPECT_EQ(t.count_constraints("tan_valid", true), 1u) << t.trace_id;
    std::size_t bad = t.count_constraints("tan_valid", false);
    happy += bad == 0;
    retry1 += bad == 1;
    retry2 += bad == 2;
    // The valid TAN is the last event.
    ASSERT_FALSE(t.constraints.empty());
    EXPECT_EQ(t.constraints.back().event_index, t.events.size() - 1);
    EXPECT_TRUE(t.constraints.back().value);
  }
  EXPECT_EQ(happy, 2u);
  EXPECT_EQ(retry1, 2u);
  EXPECT_EQ(retry2, 2u);
  EXPECT_EQ(r.traces[0].trace_id, "baseline-t001");
}

TEST(ExpandTraces, NegatedTanLoopHasTwoValidTans) {
  ScenarioModel m = apply_mutation(testdata::transfer(),
                                   Mutation::parse("NEGATE_CONSTRAINT loop1/0"));
  auto r = expand_traces(m, ExpansionConfig{}, "mut");
  ASSERT_FALSE(r.traces.empty());
  for (const Trace& t : r.traces) {
    std::size_t valid = 0;
    for (const OutcomeConstraint& c : t.constraints) {
      valid += c.flag == "tan_valid" && c.value;
      ASSERT_LT(c.event_index, t.events.size());
      EXPECT_EQ(t.events[c.event_index].signature, "sendTAN");
    }
    EXPECT_GE(valid, 2u) << t.trace_id;
    EXPECT_EQ(t.origin, "mut");
  }
}

TEST(ExpandTraces, NoFragmentsIsIdentity) {
  ScenarioModel m = parse_scenario(
      "scenario Flat\n"
      "lifeline c TESTER\n"
      "lifeline s SUT\n"
      "msg a 1 c -> s one\n"
      "msg b 2 s -> c two\n"
      "msg d 3 c -> s three(x:INT=range(1,2))\n");
  auto r = expand_traces(m, ExpansionConfig{});
  ASSERT_EQ(r.traces.size(), 1u);
  const Trace& t = r.traces[0];
  ASSERT_EQ(t.events.size(), 3u);
  EXPECT_EQ(t.events[0].signature, "one");
  EXPECT_EQ(t.events[1].direction, Direction::kFromSut);
  EXPECT_EQ(t.events[2].args.size(), 1u);
  EXPECT_TRUE(t.constraints.empty());
  EXPECT_EQ(t.elements, (std::vector<std::string>{"a", "b", "d"}));
}

TEST(ExpandTraces, EmptyModelHasOneEmptyTrace) {
  auto r = expand_traces(
      load_scenario_file(testdata::path("scenarios/empty.scn")), ExpansionConfig{});
  ASSERT_EQ(r.traces.size(), 1u);
  EXPECT_TRUE(r.traces[0].events.empty());
}

// Independent count: iteration numbers 0..k that the cap admits.
std::size_t PathOracle(int k, int cap) {
  std::size_t n = 0;
  for (int i = 0; i <= k; ++i) n += i <= cap;
  return n;
}

TEST(ExpandTraces, LoopCountLaw) {
  for (int k = 0; k <= 6; ++k) {
    for (int cap = 1; cap <= 5; ++cap) {
      ExpansionConfig cfg;
      cfg.loop_unroll_cap = cap;
      auto r = expand_traces(LoopModel(0, std::to_string(k), false), cfg);
      EXPECT_EQ(r.traces.size(), PathOracle(k, cap)) << k << " " << cap;
      EXPECT_EQ(r.traces.size(), static_cast<std::size_t>(std::min(k, cap) + 1));
    }
  }
}

TEST(ExpandTraces, LoopBoundsAndUnbounded) {
  ExpansionConfig cfg;
  cfg.loop_unroll_cap = 3;
  EXPECT_EQ(TickCounts(expand_traces(LoopModel(1, "2", false), cfg)),
            (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(TickCounts(expand_traces(LoopModel(0, "*", false), cfg)),
            (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_EQ(TickCounts(expand_traces(LoopModel(5, "*", false), cfg)),
            (std::vector<std::size_t>{5}));
}

TEST(ExpandTraces, NegatedLoopCountsComplement) {
  ExpansionConfig cfg;
  cfg.loop_unroll_cap = 3;
  EXPECT_EQ(TickCounts(expand_traces(LoopModel(0, "2", true), cfg)),
            (std::vector<std::size_t>{3, 4, 5}));
  EXPECT_EQ(TickCounts(expand_traces(LoopModel(2, "3", true), cfg)),
            (std::vector<std::size_t>{0, 1, 4, 5, 6}));
  // Nothing lies outside 0..*: the guard-true loop is skipped.
  EXPECT_EQ(TickCounts(expand_traces(LoopModel(0, "*", true), cfg)),
            (std::vector<std::size_t>{0}));
}

TEST(ExpandTraces, AltPolicies) {
  ScenarioModel m = testdata::transfer();
  ExpansionConfig first;
  first.alt_policy = AltPolicy::kFirst;
  auto r = expand_traces(m, first);
  EXPECT_EQ(r.traces.size(), 3u);
  for (const Trace& t : r.traces) {
    for (const MessageEvent& e : t.events) {
      EXPECT_NE(e.signature, "sendInternationalAccount");
    }
  }
  EXPECT_EQ(alt_policy_from_string("FIRST"), AltPolicy::kFirst);
  EXPECT_EQ(alt_policy_from_string("all"), AltPolicy::kAllBranches);
  EXPECT_FALSE(alt_policy_from_string("some"));
}

TEST(ExpandTraces, TruncationIsPrefixAndFlagged) {
  ScenarioModel m = testdata::transfer();
  auto full = expand_traces(m, ExpansionConfig{});
  ExpansionConfig small;
  small.max_traces_per_model = 4;
  auto cut = expand_traces(m, small);
  EXPECT_TRUE(cut.overflow);
  ASSERT_EQ(cut.traces.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(cut.traces[i], full.traces[i]);
}

TEST(ExpandTraces, Deterministic) {
  ScenarioModel m = testdata::transfer();
  EXPECT_EQ(expand_traces(m, {}).traces, expand_traces(m, {}).traces);
}

TEST(ExpandTraces, RejectsBadConfig) {
  ExpansionConfig c;
  c.loop_unroll_cap = 0;
  EXPECT_THROW(expand_traces(testdata::transfer(), c), ConfigError);
  c = {};
  c.max_traces_per_model = 0;
  EXPECT_THROW(expand_traces(testdata::transfer(), c), ConfigError);
}

TEST(AssignTestData, ValidOnlyStaysInDomains) {
  auto r = expand_traces(testdata::transfer(), {});
  for (const Trace& raw : r.traces) {
    Trace t = assign_test_data(raw, Cat(), DataMode::kValidOnly);
    for (std::size_t i = 0; i < t.events.size(); ++i) {
      bool invalid = false;
      for (const OutcomeConstraint& c : t.constraints) {
        invalid |= c.event_index == i && !c.value;
      }
      for (const EventArg& a : t.events[i].args) {
        ASSERT_TRUE(a.value);
        if (invalid) {
          EXPECT_FALSE(a.domain.contains(*a.value)) << t.trace_id;
          const auto& e = Cat().entries(a.type);
          EXPECT_NE(std::find(e.begin(), e.end(), *a.value), e.end());
        } else {
          EXPECT_TRUE(a.domain.contains(*a.value)) << t.trace_id;
        }
      }
    }
    EXPECT_EQ(assign_test_data(raw, Cat(), DataMode::kValidOnly), t);
  }
}

TEST(AssignTestData, ContradictionIsUnsatisfiable) {
  Trace t = expand_traces(testdata::transfer(), {}).traces[0];
  OutcomeConstraint c = t.constraints.back();
  c.value = !c.value;
  t.constraints.push_back(c);
  EXPECT_THROW(assign_test_data(t, Cat(), DataMode::kValidOnly),
               UnsatisfiableConstraint);
}

TEST(AssignTestData, FuzzValuesOnlyWhenAsked) {
  ScenarioModel m = apply_mutation(
      testdata::transfer(), Mutation::parse("FUZZ_PARAMETER m2.amount value=0"));
  Trace raw = expand_traces(m, {}, "fz").traces[0];
  Trace plain = assign_test_data(raw, Cat(), DataMode::kValidOnly);
  Trace fuzzed = assign_test_data(raw, Cat(), DataMode::kApplyFuzzParams);
  const EventArg& p = plain.events[1].args[1];
  const EventArg& f = fuzzed.events[1].args[1];
  ASSERT_EQ(f.name, "amount");
  EXPECT_TRUE(p.domain.contains(*p.value));
  EXPECT_EQ(*f.value, Cat().entries(TypeTag::kAmount)[0]);
}

TEST(TraceText, RoundTrip) {
  ScenarioModel m = apply_mutation(testdata::transfer(),
                                   Mutation::parse("NEGATE_CONSTRAINT loop1/0"));
  for (const Trace& raw : expand_traces(m, {}, "x-o1-00001").traces) {
    Trace t = assign_test_data(raw, Cat(), DataMode::kApplyFuzzParams);
    EXPECT_EQ(parse_trace(serialize_trace(t)), t);
    EXPECT_EQ(parse_trace(serialize_trace(raw)), raw);
  }
  EXPECT_THROW(parse_trace("event SIDEWAYS m1 x\n"), ConfigError);
}

}  // namespace
}  // namespace mbst
