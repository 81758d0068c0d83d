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


// Acceptance suite. Prints one PASS or FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <cmath>
#include <exception>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

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

namespace fs = std::filesystem;

// Collects failure reasons for one criterion.
struct Check {
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

using Criterion = std::function<void(Check&)>;

void GoldenMutants(Check& c) {
  ScenarioModel base = testdata::transfer();
  const std::pair<const char*, const char*> golden[] = {
      {"MOVE_MESSAGE m5 to=top:2", "transfer_move_m5.scn"},
      {"NEGATE_CONSTRAINT loop1/0", "transfer_negate_loop1.scn"},
  };
  for (const auto& [mutation, file] : golden) {
    ScenarioModel m = apply_mutation(base, Mutation::parse(mutation));
    c.expect(serialize_scenario(m) == testdata::golden(file),
             std::string(mutation) + " differs from " + file);
  }

  GenerationConfig g;
  g.operators = {FuzzOperatorKind::kNegateConstraint};
  g.max_order = 1;
  auto recs = generate_mutants(base, g);
  std::map<std::string, const MutantRecord*> negated_loop;
  for (const MutantRecord& r : recs) {
    if (r.mutations[0].locus == "loop1/0") negated_loop[r.mutant_id] = &r;
  }
  c.expect(negated_loop.size() == 1, "expected one loop negation mutant");
  std::ostringstream warn;
  std::size_t seen = 0;
  for (const Trace& t : expand_corpus(base, recs, {}, InvalidValueCatalog::Default(), warn)) {
    if (!negated_loop.count(t.origin)) continue;
    ++seen;
    c.expect(t.count_constraints("tan_valid", true) >= 2,
             t.trace_id + " has fewer than two valid TANs");
  }
  c.expect(seen > 0, "loop negation produced no traces");
}

void OperatorCounts(Check& c) {
  const auto& cat = InvalidValueCatalog::Default();
  std::size_t models = 0;
  for (const fs::path& p : testdata::scenario_files()) {
    ScenarioModel m = load_scenario_file(p);
    if (count_messages(m) > 7) continue;
    ++models;
    const std::string name = p.filename().string();
    auto expected = oracle::count_applications(m, cat);
    std::size_t pairs = 0;
    for (FuzzOperatorKind k : all_operator_kinds()) {
      auto got = enumerate_applications(m, k);
      c.expect(got.size() == expected[k],
               name + " " + std::string(to_string(k)) + ": " +
                   std::to_string(got.size()) + " vs oracle " +
                   std::to_string(expected[k]));
      for (const Mutation& mu : got) {
        pairs += oracle::total(oracle::count_applications(apply_mutation(m, mu), cat));
      }
    }
    GenerationConfig g;
    g.max_order = 2;
    g.budget = 100000000;
    g.dedup = false;
    std::size_t first = 0, second = 0;
    generate_mutants(m, g, [&](const MutantRecord& r) {
      (r.order() == 1 ? first : second)++;
    });
    c.expect(first == oracle::total(expected), name + ": order-1 total");
    c.expect(second == pairs, name + ": order-2 total " + std::to_string(second) +
                                  " vs oracle " + std::to_string(pairs));
    if (name == "transfer_order.scn") {
      c.expect(second == 47008, "transfer order-2 total " + std::to_string(second));
    }
  }
  c.expect(models >= 2, "too few bundled models");
}

std::vector<Trace> CampaignCorpus() {
  ScenarioModel base = testdata::transfer();
  GenerationConfig g;
  g.max_order = 2;
  g.budget = 500;
  g.seed = 42;
  std::ostringstream warn;
  return expand_corpus(base, generate_mutants(base, g), {},
                       InvalidValueCatalog::Default(), warn);
}

void FindsSeededFlaws(Check& c) {
  std::vector<Trace> traces = CampaignCorpus();
  for (const auto& [spec, want_vuln] :
       {std::pair{"builtin:reference", false}, {"builtin:v1", true}, {"builtin:v2", true}}) {
    CampaignConfig cfg;
    cfg.workers = 4;
    RunReport rep = run_campaign(traces, make_adapter_factory(spec), cfg);
    std::size_t vulns = rep.count(VerdictKind::kVuln);
    c.expect(rep.results.size() == traces.size(), std::string(spec) + ": missing results");
    c.expect(want_vuln ? vulns >= 1 : vulns == 0,
             std::string(spec) + ": " + std::to_string(vulns) + " VULN verdicts");
    for (const TraceResult& r : rep.results) {
      if (want_vuln) continue;
      c.expect(r.verdict.kind != VerdictKind::kError,
               std::string(spec) + ": ERROR on " + r.trace_id);
    }
  }
}

void BaselinesPass(Check& c) {
  std::size_t n = 0;
  for (const fs::path& p : testdata::scenario_files()) {
    ScenarioModel m = load_scenario_file(p);
    if (m.name != "TransferOrder") continue;
    for (const Trace& raw : expand_traces(m, {}).traces) {
      Trace t = assign_test_data(raw, InvalidValueCatalog::Default(), DataMode::kValidOnly);
      InProcessAdapter a(SutVariant::kReference);
      Verdict v = run_trace(a, t, {}, nullptr);
      ++n;
      c.expect(v.kind == VerdictKind::kPass, t.trace_id + ": " + v.justification);
    }
  }
  c.expect(n > 0, "no baseline traces");
}

void RiskPropagation(Check& c) {
  std::size_t graphs = 0;
  for (const fs::path& p : testdata::risk_files()) {
    if (p.filename() == "cycle.yaml") continue;
    RiskGraph raw = load_risk_model(p);
    if (raw.nodes.size() > 6) continue;
    ++graphs;
    RiskGraph g = propagate_likelihoods(raw);
    for (const RiskNode& n : g.nodes) {
      auto want = oracle::brute_likelihood(raw, n.id);
      if (!want) continue;
      c.expect(n.likelihood && std::abs(*n.likelihood - *want) <= 1e-9,
               p.filename().string() + " node " + n.id);
    }
  }
  c.expect(graphs >= 3, "too few small risk graphs");
  RiskGraph two = propagate_likelihoods(load_risk_model(testdata::path("risk/two_path.yaml")));
  const RiskNode* inc = two.find_node("I");
  c.expect(inc && inc->likelihood && std::abs(*inc->likelihood - 0.58) <= 1e-9,
           "two-path incident likelihood is not 0.58");
  bool cycle = false;
  try {
    propagate_likelihoods(load_risk_model(testdata::path("risk/cycle.yaml")));
  } catch (const CycleError&) {
    cycle = true;
  }
  c.expect(cycle, "cycle not rejected");
}

void SelectionProperties(Check& c) {
  std::mt19937_64 rng(2026);
  auto pick = [&](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };
  const double bound = 1 - 1 / std::exp(1.0);
  auto ids = [](const std::vector<LinkedTest>& v) {
    std::vector<std::string> out;
    for (const auto& t : v) out.push_back(t.trace_id);
    return out;
  };
  for (int i = 0; i < 100; ++i) {
    std::vector<TestObjective> objs;
    std::size_t m = 1 + pick(8);
    for (std::size_t j = 0; j < m; ++j) {
      TestObjective o;
      o.target = "r" + std::to_string(j);
      o.id = "obj-" + o.target;
      o.weight = 0.5 * static_cast<double>(pick(11));
      objs.push_back(o);
    }
    std::vector<LinkedTest> tests;
    std::size_t n = 1 + pick(10);
    for (std::size_t k = 0; k < n; ++k) {
      LinkedTest t;
      t.trace_id = "t" + std::to_string(k);
      for (const auto& o : objs) {
        if (pick(3) == 0) t.objective_ids.push_back(o.id);
      }
      if (t.objective_ids.empty()) t.objective_ids.push_back(std::string(kUnlinkedObjective));
      tests.push_back(t);
    }
    auto scaled = objs;
    for (auto& o : scaled) o.weight *= 7.3;
    auto w = oracle::weight_map(objs);
    const std::string tag = "instance " + std::to_string(i);
    for (auto s : {SelectionStrategy::kGreedyWeightedCover, SelectionStrategy::kWeightDesc}) {
      std::vector<std::string> prev;
      for (std::size_t b = 1; b <= n; ++b) {
        SelectionConfig cfg;
        cfg.strategy = s;
        cfg.budget = b;
        auto sel = select_tests(tests, objs, cfg);
        auto cur = ids(sel);
        c.expect(cur.size() == b, tag + ": budget not filled");
        c.expect(std::equal(prev.begin(), prev.end(), cur.begin()),
                 tag + ": not a prefix at budget " + std::to_string(b));
        c.expect(cur == ids(select_tests(tests, scaled, cfg)), tag + ": scale changed order");
        if (s == SelectionStrategy::kGreedyWeightedCover) {
          double got = oracle::covered_weight(sel, w);
          c.expect(got + 1e-9 >= bound * oracle::exhaustive_optimum(tests, w, b),
                   tag + ": greedy below bound at budget " + std::to_string(b));
        }
        prev = cur;
      }
    }
  }
}

bool SameRoundTrip(const RiskGraph& a, const RiskGraph& b) {
  return write_risk_model(a) == write_risk_model(b);
}

void RoundTripAndDeterminism(Check& c) {
  for (const fs::path& p : testdata::scenario_files()) {
    ScenarioModel m = load_scenario_file(p);
    c.expect(parse_scenario(serialize_scenario(m)) == m, p.filename().string());
  }
  for (const auto& e : fs::directory_iterator(testdata::path("golden"))) {
    std::string text = testdata::golden(e.path().filename().string());
    c.expect(serialize_scenario(parse_scenario(text)) == text, e.path().filename().string());
  }
  auto cat = InvalidValueCatalog::Load(testdata::path("catalog.yaml"));
  c.expect(InvalidValueCatalog::Parse(cat.to_yaml()).to_yaml() == cat.to_yaml(), "catalog");
  for (const fs::path& p : testdata::risk_files()) {
    if (p.filename() == "cycle.yaml") continue;
    RiskGraph g = load_risk_model(p);
    c.expect(SameRoundTrip(parse_risk_model(write_risk_model(g)), g), p.filename().string());
  }

  std::string manifest[2], selection[2];
  for (int run = 0; run < 2; ++run) {
    fs::path out = testdata::scratch("accept-" + std::to_string(run));
    PipelineConfig cfg;
    cfg.scenario = testdata::path("scenarios/transfer_order.scn");
    cfg.risk_model = testdata::path("risk/transfer_risk.yaml");
    cfg.out_dir = out;
    cfg.generation.budget = 200;
    cfg.generation.seed = 7;
    cfg.generation.workers = run == 0 ? 1 : 4;
    cfg.selection.budget = 25;
    cfg.run_workers = run == 0 ? 1 : 4;
    std::ostringstream err;
    int code = run_pipeline(cfg, err);
    c.expect(code == kExitOk, "pipeline exit " + std::to_string(code) + ": " + err.str());
    manifest[run] = testdata::slurp(out / "manifest.json");
    selection[run] = testdata::slurp(out / "selection.tsv");
    fs::remove_all(out);
  }
  c.expect(!manifest[0].empty() && manifest[0] == manifest[1], "manifest.json differs");
  c.expect(!selection[0].empty() && selection[0] == selection[1], "selection.tsv differs");
}

}  // namespace
}  // namespace mbst

int main() {
  using mbst::Check;
  const std::vector<std::pair<const char*, mbst::Criterion>> criteria = {
      {"golden-mutants", mbst::GoldenMutants},
      {"operator-counts", mbst::OperatorCounts},
      {"seeded-flaws-found", mbst::FindsSeededFlaws},
      {"baselines-pass", mbst::BaselinesPass},
      {"risk-propagation", mbst::RiskPropagation},
      {"selection-properties", mbst::SelectionProperties},
      {"round-trip-determinism", mbst::RoundTripAndDeterminism},
  };
  int failed = 0;
  int n = 0;
  for (const auto& [name, run] : criteria) {
    ++n;
    Check c;
    try {
      run(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    std::cout << (c.failures.empty() ? "PASS " : "FAIL ") << n << " " << name << "\n";
    for (std::size_t i = 0; i < c.failures.size() && i < 5; ++i) {
      std::cout << "    " << c.failures[i] << "\n";
    }
    if (c.failures.size() > 5) {
      std::cout << "    ... " << c.failures.size() - 5 << " more\n";
    }
    failed += !c.failures.empty();
  }
  std::cout << (n - failed) << "/" << n << " criteria passed\n";
  return failed == 0 ? 0 : 1;
}
