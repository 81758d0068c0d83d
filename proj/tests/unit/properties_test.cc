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


// Randomized property checks. Every generator is seeded, so failures
// reproduce.

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "mbst/errors.h"
#include "mbst/fuzz_operators.h"
#include "mbst/mutant_generation.h"
#include "mbst/pipeline.h"
#include "mbst/prioritization.h"
#include "mbst/risk_model.h"
#include "mbst/scenario_dsl.h"
#include "mbst/sut_harness.h"
#include "mbst/trace_expansion.h"
#include "oracles/cover_oracle.h"
#include "oracles/model_oracles.h"
#include "oracles/risk_oracle.h"
#include "oracles/test_data.h"

namespace mbst {
namespace {

using Rng = std::mt19937_64;

std::size_t Pick(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

bool Coin(Rng& rng, double p = 0.5) {
  return std::bernoulli_distribution(p)(rng);
}

// --- scenario models -----------------------------------------------------------

Guard RandomGuard(Rng& rng, int depth) {
  static const char* kFlags[] = {"a", "b", "c"};
  if (depth == 0 || Coin(rng, 0.4)) {
    if (Coin(rng, 0.15)) return Guard::True();
    return Guard::Flag(kFlags[Pick(rng, 3)]);
  }
  switch (Pick(rng, 3)) {
    case 0:
      return Guard::Not(RandomGuard(rng, depth - 1));
    case 1:
      return Guard::And(RandomGuard(rng, depth - 1), RandomGuard(rng, depth - 1));
    default:
      return Guard::Or(RandomGuard(rng, depth - 1), RandomGuard(rng, depth - 1));
  }
}

struct ModelGen {
  Rng rng;
  int next_msg = 0;
  int next_frag = 0;

  explicit ModelGen(std::uint64_t seed) : rng(seed) {}

  Message RandomMessage() {
    static const char* kSigs[] = {"hello", "auth", "order", "pay", "ack"};
    static const std::pair<TypeTag, const char*> kParams[] = {
        {TypeTag::kInt, "range(0,99)"},
        {TypeTag::kTan, "pattern(999999)"},
        {TypeTag::kString, "text(1,8)"},
        {TypeTag::kAmount, "range(1,500)"},
        {TypeTag::kString, "enum(X|Y)"},
    };
    Message m;
    ++next_msg;
    m.id = "m" + std::to_string(next_msg);
    m.seq_no = next_msg;
    bool to_sut = Coin(rng, 0.75);
    m.sender = to_sut ? "tester" : "sut";
    m.receiver = to_sut ? "sut" : "tester";
    m.signature = kSigs[Pick(rng, 5)];
    std::size_t np = Pick(rng, 3);
    for (std::size_t i = 0; i < np; ++i) {
      const auto& [tag, dom] = kParams[Pick(rng, 5)];
      m.params.push_back({"p" + std::to_string(i), tag, ValueDomain::Parse(dom), std::nullopt});
    }
    if (Coin(rng, 0.3)) m.sets_flags = {Coin(rng) ? "a" : "b"};
    if (Coin(rng, 0.15)) m.requires_flags = RandomGuard(rng, 1);
    return m;
  }

  std::vector<Element> Body(int depth, std::size_t min_len, std::size_t max_len) {
    std::vector<Element> body;
    std::size_t n = min_len + Pick(rng, max_len - min_len + 1);
    for (std::size_t i = 0; i < n; ++i) {
      if (depth > 0 && Coin(rng, 0.3)) {
        body.push_back(Fragment(depth - 1));
      } else {
        body.push_back(RandomMessage());
      }
    }
    return body;
  }

  CombinedFragment Fragment(int depth) {
    CombinedFragment f;
    f.id = "f" + std::to_string(++next_frag);
    f.kind = static_cast<FragmentKind>(Pick(rng, 3));
    std::size_t operands = f.kind == FragmentKind::kAlt ? 2 + Pick(rng, 2) : 1;
    for (std::size_t k = 0; k < operands; ++k) {
      Operand op;
      op.constraint.guard = Coin(rng, 0.3) ? Guard::True() : RandomGuard(rng, 2);
      if (f.kind == FragmentKind::kLoop) {
        op.constraint.min_iter = static_cast<int>(Pick(rng, 2));
        if (Coin(rng, 0.8)) op.constraint.max_iter = op.constraint.min_iter + static_cast<int>(Pick(rng, 3));
      }
      op.body = Body(depth, 1, 2);
      f.operands.push_back(std::move(op));
    }
    return f;
  }

  ScenarioModel Model() {
    next_msg = 0;
    next_frag = 0;
    ScenarioModel m;
    m.name = "Gen";
    m.lifelines = {{"tester", LifelineRole::kTester}, {"sut", LifelineRole::kSut}};
    m.body = Body(2, 0, 5);
    if (Coin(rng, 0.3)) m.annotations["note"] = "generated";
    return m;
  }
};

constexpr int kModels = 150;

TEST(ModelProperties, RoundTripAndValidity) {
  ModelGen gen(1);
  std::size_t messages = 0, fragments = 0;
  for (int i = 0; i < kModels; ++i) {
    ScenarioModel m = gen.Model();
    messages += count_messages(m);
    fragments += static_cast<std::size_t>(gen.next_frag);
    SCOPED_TRACE(serialize_scenario(m));
    ASSERT_TRUE(validate_model(m).empty());
    ScenarioModel back = parse_scenario(serialize_scenario(m));
    EXPECT_EQ(back, m);
    EXPECT_EQ(canonical_hash(back), canonical_hash(m));
  }
  EXPECT_GT(messages, 3u * kModels);
  EXPECT_GT(fragments, 1u * kModels / 2);
}

TEST(OperatorProperties, LawsOnRandomModels) {
  ModelGen gen(2);
  const auto& cat = InvalidValueCatalog::Default();
  for (int i = 0; i < kModels; ++i) {
    ScenarioModel m = gen.Model();
    const std::string base = canonical_hash(m);
    auto counts = oracle::count_applications(m, cat);
    for (FuzzOperatorKind k : all_operator_kinds()) {
      auto muts = enumerate_applications(m, k);
      ASSERT_EQ(muts.size(), counts[k]) << to_string(k) << "\n" << serialize_scenario(m);
      for (const Mutation& mu : muts) {
        ScenarioModel out = apply_mutation(m, mu);
        ASSERT_TRUE(oracle::single_edit(m, out))
            << mu.to_string() << "\n" << serialize_scenario(m);
        ASSERT_TRUE(validate_model(out).empty()) << mu.to_string();
        ASSERT_EQ(parse_scenario(serialize_scenario(out)), out) << mu.to_string();
        if (oracle::shape_equal(m, out)) {
          EXPECT_EQ(canonical_hash(out), base);
        } else {
          EXPECT_NE(canonical_hash(out), base) << mu.to_string();
        }
      }
    }
  }
}

// Digest equality must coincide with structural equality.
TEST(HashProperties, DigestsAgreeWithStructuralEquality) {
  ScenarioModel base = testdata::transfer();
  GenerationConfig cfg;
  cfg.max_order = 2;
  cfg.budget = 1500;
  cfg.dedup = false;
  cfg.seed = 5;
  auto recs = generate_mutants(base, cfg);
  ASSERT_GE(recs.size(), 1000u);
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < recs.size(); ++i) groups[recs[i].digest].push_back(i);
  EXPECT_LT(groups.size(), recs.size());
  std::vector<std::size_t> reps;
  for (const auto& [d, members] : groups) {
    for (std::size_t j : members) {
      EXPECT_TRUE(oracle::shape_equal(recs[members[0]].model, recs[j].model))
          << recs[j].mutant_id;
    }
    reps.push_back(members[0]);
  }
  for (std::size_t a = 0; a < reps.size(); ++a) {
    for (std::size_t b = a + 1; b < reps.size(); ++b) {
      ASSERT_FALSE(oracle::shape_equal(recs[reps[a]].model, recs[reps[b]].model))
          << recs[reps[a]].mutant_id << " vs " << recs[reps[b]].mutant_id;
    }
  }
}

TEST(ExpansionProperties, WellFormedAndDeterministic) {
  ModelGen gen(3);
  const auto& cat = InvalidValueCatalog::Default();
  for (int i = 0; i < kModels; ++i) {
    ScenarioModel m = gen.Model();
    ExpansionConfig cfg;
    cfg.loop_unroll_cap = 1 + static_cast<int>(i % 3);
    cfg.max_traces_per_model = 40;
    auto r = expand_traces(m, cfg);
    EXPECT_EQ(r.traces, expand_traces(m, cfg).traces);
    EXPECT_LE(r.traces.size(), cfg.max_traces_per_model);
    std::set<std::string> sigs;
    for_each_message(m, [&](const Message& msg) { sigs.insert(msg.signature); });
    std::set<std::string> ids;
    for (const Trace& t : r.traces) {
      EXPECT_TRUE(ids.insert(t.trace_id).second);
      for (const MessageEvent& e : t.events) EXPECT_TRUE(sigs.count(e.signature));
      for (const OutcomeConstraint& c : t.constraints) {
        EXPECT_LT(c.event_index, t.events.size());
      }
      try {
        Trace d = assign_test_data(t, cat, DataMode::kValidOnly);
        for (const MessageEvent& e : d.events) {
          if (e.direction != Direction::kToSut) continue;
          for (const EventArg& a : e.args) EXPECT_TRUE(a.value.has_value());
        }
        EXPECT_EQ(parse_trace(serialize_trace(d)), d);
      } catch (const UnsatisfiableConstraint&) {
      }
    }
  }
}

TEST(ExpansionProperties, BaselineSoundness) {
  const auto& cat = InvalidValueCatalog::Default();
  std::size_t ran = 0;
  for (int cap = 1; cap <= 4; ++cap) {
    ExpansionConfig cfg;
    cfg.loop_unroll_cap = cap;
    for (const Trace& raw : expand_traces(testdata::transfer(), cfg).traces) {
      Trace t = assign_test_data(raw, cat, DataMode::kValidOnly);
      InProcessAdapter a(SutVariant::kReference);
      Verdict v = run_trace(a, t, {}, nullptr);
      EXPECT_EQ(v.kind, VerdictKind::kPass) << t.trace_id << ": " << v.justification;
      ++ran;
    }
  }
  EXPECT_GE(ran, 20u);
}

// --- risk graphs -----------------------------------------------------------------

RiskGraph RandomDag(Rng& rng, ScaleMode mode) {
  RiskGraph g;
  g.scale.mode = mode;
  auto prob = [&] { return std::uniform_real_distribution<double>(0.05, 1.0)(rng); };
  std::size_t threats = 1 + Pick(rng, 2);
  std::size_t scenarios = 1 + Pick(rng, 6 - threats - 1 - 1 + 1);
  scenarios = std::min<std::size_t>(scenarios, 6 - threats - 1);
  std::vector<std::string> t, s;
  for (std::size_t i = 0; i < threats; ++i) {
    t.push_back("T" + std::to_string(i));
    double l = mode == ScaleMode::kProbability ? prob() : 1 + 20 * prob();
    g.nodes.push_back({t.back(), RiskNodeKind::kThreat, "", l, true, ""});
  }
  for (std::size_t i = 0; i < scenarios; ++i) {
    s.push_back("S" + std::to_string(i));
    g.nodes.push_back({s.back(), RiskNodeKind::kThreatScenario, "", std::nullopt, false, ""});
  }
  g.nodes.push_back({"I", RiskNodeKind::kUnwantedIncident, "", std::nullopt, false, ""});
  int e = 0;
  auto edge = [&](const std::string& from, const std::string& to, RiskEdgeKind k) {
    g.edges.push_back({"e" + std::to_string(++e), from, to, k, prob(), std::nullopt, {}, ""});
  };
  for (std::size_t i = 0; i < scenarios; ++i) {
    edge(t[Pick(rng, threats)], s[i], RiskEdgeKind::kInitiates);
    for (std::size_t j = 0; j < i; ++j) {
      if (Coin(rng, 0.4)) edge(s[j], s[i], RiskEdgeKind::kLeadsTo);
    }
    for (const std::string& th : t) {
      if (Coin(rng, 0.3)) edge(th, s[i], RiskEdgeKind::kInitiates);
    }
  }
  edge(s.back(), "I", RiskEdgeKind::kLeadsTo);
  for (std::size_t i = 0; i + 1 < scenarios; ++i) {
    if (Coin(rng, 0.5)) edge(s[i], "I", RiskEdgeKind::kLeadsTo);
  }
  // Remove parallel duplicates so every edge is a distinct relation.
  std::set<std::pair<std::string, std::string>> seen;
  std::vector<RiskEdge> unique;
  for (const RiskEdge& x : g.edges) {
    if (seen.insert({x.from, x.to}).second) unique.push_back(x);
  }
  g.edges = unique;
  return g;
}

TEST(RiskProperties, PropagationMatchesBruteForce) {
  Rng rng(4);
  for (int i = 0; i < 300; ++i) {
    ScaleMode mode = i % 2 ? ScaleMode::kFrequency : ScaleMode::kProbability;
    RiskGraph g = RandomDag(rng, mode);
    ASSERT_LE(g.nodes.size(), 6u);
    ASSERT_NO_THROW(validate_risk_graph(g));
    RiskGraph p = propagate_likelihoods(g);
    for (const RiskNode& n : p.nodes) {
      auto want = oracle::brute_likelihood(g, n.id);
      ASSERT_TRUE(want) << n.id;
      ASSERT_TRUE(n.likelihood) << n.id;
      EXPECT_NEAR(*n.likelihood, *want, 1e-9) << n.id;
      if (mode == ScaleMode::kProbability) {
        EXPECT_GE(*n.likelihood, 0.0);
        EXPECT_LE(*n.likelihood, 1.0);
      } else {
        EXPECT_NEAR(*n.likelihood, oracle::path_sum(g, n.id), 1e-9);
        EXPECT_GE(*n.likelihood, 0.0);
      }
    }
    RiskGraph shuffled = g;
    std::shuffle(shuffled.nodes.begin(), shuffled.nodes.end(), rng);
    std::shuffle(shuffled.edges.begin(), shuffled.edges.end(), rng);
    RiskGraph q = propagate_likelihoods(shuffled);
    for (const RiskNode& n : p.nodes) {
      EXPECT_NEAR(*q.find_node(n.id)->likelihood, *n.likelihood, 1e-12);
    }
  }
}

TEST(RiskProperties, UpdatesAreMonotone) {
  Rng rng(8);
  RiskGraph g = propagate_likelihoods(
      load_risk_model(testdata::path("risk/transfer_risk.yaml")));
  std::vector<std::string> ids;
  for (const RiskNode& n : g.nodes) ids.push_back(n.id);
  for (int i = 0; i < 100; ++i) {
    RunReport rep;
    std::size_t n = Pick(rng, 6);
    for (std::size_t k = 0; k < n; ++k) {
      TraceResult r;
      r.trace_id = "t" + std::to_string(k);
      r.verdict.kind = static_cast<VerdictKind>(Pick(rng, 4));
      for (int l = 0; l < 2; ++l) r.risk_links.push_back(ids[Pick(rng, ids.size())]);
      if (Coin(rng, 0.3)) r.vuln_hints.push_back("hint" + std::to_string(Pick(rng, 3)));
      rep.results.push_back(r);
    }
    UpdateResult u = update_from_results(g, rep);
    for (const RiskNode& node : g.nodes) ASSERT_NE(u.graph.find_node(node.id), nullptr);
    for (const RiskEdge& e : g.edges) {
      const RiskEdge* f = u.graph.find_edge(e.id);
      ASSERT_NE(f, nullptr);
      EXPECT_EQ(f->likelihood, e.likelihood);
      EXPECT_EQ(f->consequence, e.consequence);
    }
    if (rep.results.empty()) {
      EXPECT_TRUE(u.changes.empty());
    }
    for (const ChangeEntry& c : u.changes) EXPECT_FALSE(c.trace_ids.empty());
  }
}

// --- selection -------------------------------------------------------------------

struct Instance {
  std::vector<LinkedTest> tests;
  std::vector<TestObjective> objectives;
};

Instance RandomInstance(Rng& rng, std::size_t max_tests = 10) {
  Instance in;
  std::size_t m = 1 + Pick(rng, 8);
  for (std::size_t j = 0; j < m; ++j) {
    TestObjective o;
    o.target = "r" + std::to_string(j);
    o.id = "obj-" + o.target;
    o.weight = 0.5 * static_cast<double>(Pick(rng, 11));
    in.objectives.push_back(o);
  }
  std::size_t n = 1 + Pick(rng, max_tests);
  for (std::size_t i = 0; i < n; ++i) {
    LinkedTest t;
    t.trace_id = "t" + std::to_string(100 + Pick(rng, 900)) + "-" + std::to_string(i);
    for (std::size_t j = 0; j < m; ++j) {
      if (Coin(rng, 0.35)) t.objective_ids.push_back(in.objectives[j].id);
    }
    if (t.objective_ids.empty()) t.objective_ids.push_back(std::string(kUnlinkedObjective));
    in.tests.push_back(t);
  }
  return in;
}

std::vector<std::string> Order(const std::vector<LinkedTest>& v) {
  std::vector<std::string> out;
  for (const auto& t : v) out.push_back(t.trace_id);
  return out;
}

TEST(SelectionProperties, GreedyWithinBoundOfOptimum) {
  Rng rng(6);
  const double bound = 1 - 1 / std::exp(1.0);
  for (int i = 0; i < 300; ++i) {
    Instance in = RandomInstance(rng);
    auto w = oracle::weight_map(in.objectives);
    for (std::size_t b = 1; b <= in.tests.size(); ++b) {
      SelectionConfig cfg;
      cfg.budget = b;
      double greedy = oracle::covered_weight(select_tests(in.tests, in.objectives, cfg), w);
      double best = oracle::exhaustive_optimum(in.tests, w, b);
      EXPECT_GE(greedy + 1e-9, bound * best) << "instance " << i << " budget " << b;
      EXPECT_LE(greedy, best + 1e-9);
    }
  }
}

TEST(SelectionProperties, ScaleInvariance) {
  Rng rng(9);
  for (int i = 0; i < 200; ++i) {
    Instance in = RandomInstance(rng);
    Instance scaled = in;
    for (auto& o : scaled.objectives) o.weight *= 7.3;
    for (auto s : {SelectionStrategy::kGreedyWeightedCover, SelectionStrategy::kWeightDesc}) {
      SelectionConfig cfg;
      cfg.strategy = s;
      cfg.budget = 1 + Pick(rng, in.tests.size());
      EXPECT_EQ(Order(select_tests(in.tests, in.objectives, cfg)),
                Order(select_tests(scaled.tests, scaled.objectives, cfg)))
          << "instance " << i;
    }
  }
}

TEST(SelectionProperties, BudgetMonotonicity) {
  Rng rng(10);
  for (int i = 0; i < 100; ++i) {
    Instance in = RandomInstance(rng, 14);
    for (auto s : {SelectionStrategy::kGreedyWeightedCover, SelectionStrategy::kWeightDesc}) {
      SelectionConfig cfg;
      cfg.strategy = s;
      std::vector<std::string> prev;
      for (std::size_t b = 1; b <= in.tests.size() + 1; ++b) {
        cfg.budget = b;
        auto cur = Order(select_tests(in.tests, in.objectives, cfg));
        EXPECT_LE(cur.size(), b);
        ASSERT_GE(cur.size(), prev.size());
        EXPECT_TRUE(std::equal(prev.begin(), prev.end(), cur.begin()))
            << "instance " << i << " budget " << b;
        prev = cur;
      }
      EXPECT_EQ(prev.size(), in.tests.size());
    }
  }
}

TEST(SelectionProperties, Deterministic) {
  Rng rng(12);
  for (int i = 0; i < 50; ++i) {
    Instance in = RandomInstance(rng);
    Instance rev = in;
    std::reverse(rev.tests.begin(), rev.tests.end());
    SelectionConfig cfg;
    EXPECT_EQ(Order(select_tests(in.tests, in.objectives, cfg)),
              Order(select_tests(rev.tests, rev.objectives, cfg)));
  }
}

// --- harness -------------------------------------------------------------------

TEST(HarnessProperties, EveryVulnIsSoundAndReferenceIsClean) {
  ScenarioModel base = testdata::transfer();
  GenerationConfig g;
  g.budget = 300;
  g.seed = 17;
  std::ostringstream warn;
  auto traces = expand_corpus(base, generate_mutants(base, g), {},
                              InvalidValueCatalog::Default(), warn);
  RunReport ref = run_campaign(traces, make_adapter_factory("builtin:reference"), {});
  EXPECT_EQ(ref.count(VerdictKind::kVuln), 0u);
  for (const char* v : {"builtin:v1", "builtin:v2"}) {
    RunReport rep = run_campaign(traces, make_adapter_factory(v), {});
    for (const TraceResult& r : rep.results) {
      if (r.verdict.kind != VerdictKind::kVuln) continue;
      EXPECT_FALSE(r.origin == std::string(kBaselineOrigin)) << r.trace_id;
      EXPECT_TRUE(vuln_is_sound(r)) << v << " " << r.trace_id;
    }
  }
}

TEST(GuardProperties, RandomGuardsRoundTrip) {
  Rng rng(13);
  for (int i = 0; i < 500; ++i) {
    Guard g = RandomGuard(rng, 4);
    EXPECT_EQ(parse_guard(g.to_string()), g) << g.to_string();
  }
}

}  // namespace
}  // namespace mbst
