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

#ifndef MBST_PRIORITIZATION_H_
#define MBST_PRIORITIZATION_H_

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mbst/risk_model.h"
#include "mbst/trace_expansion.h"

namespace mbst {

enum class ObjectiveKind {
  kIncident,
  kThreatScenario,
  kVulnerability,
  kTreatment,
  kUnlinked,
};

std::string_view to_string(ObjectiveKind k);

inline constexpr std::string_view kUnlinkedObjective = "unlinked";

struct TestObjective {
  std::string id;  // "obj-<target>"
  ObjectiveKind kind = ObjectiveKind::kIncident;
  std::string target;
  double weight = 0;
  std::string description;
};

// One objective per incident, threat scenario, vulnerability and treatment,
// weighted by the largest risk value among the incidents reachable from the
// target, sorted by (weight desc, id). `graph` must already be propagated.
std::vector<TestObjective> derive_objectives(const RiskGraph& graph);

struct LinkedTest {
  std::string trace_id;
  std::string origin;
  std::vector<std::string> objective_ids;  // never empty
  // Risk element ids named by the annotations of the elements the trace
  // exercises, and vulnerability hints from the same elements.
  std::vector<std::string> risk_links;
  std::vector<std::string> vuln_hints;
};

// Risk element ids the trace exercises, in first-seen order.
std::vector<std::string> trace_risk_links(
    const Trace& trace, const std::map<std::string, std::string>& annotations);
std::vector<std::string> trace_vuln_hints(
    const Trace& trace, const std::map<std::string, std::string>& annotations);

// Throws UnknownRiskId when a risk-link annotation names an id that is not
// in `graph`. Traces without links get the "unlinked" objective. With no
// graph every test is unlinked but still carries its annotation links.
std::vector<LinkedTest> link_tests(
    const std::vector<Trace>& tests, const std::vector<TestObjective>& objectives,
    const std::map<std::string, std::string>& annotations,
    const RiskGraph* graph);

enum class SelectionStrategy { kGreedyWeightedCover, kWeightDesc };

std::string_view to_string(SelectionStrategy s);
std::optional<SelectionStrategy> selection_strategy_from_string(
    std::string_view s);

struct SelectionConfig {
  std::size_t budget = std::numeric_limits<std::size_t>::max();
  SelectionStrategy strategy = SelectionStrategy::kGreedyWeightedCover;
};

// Gains within a relative 1e-9 count as ties; ties go to the lower trace id.
// Greedy keeps picking zero-gain tests in trace id order until the budget
// is spent.
std::vector<LinkedTest> select_tests(const std::vector<LinkedTest>& tests,
                                     const std::vector<TestObjective>& objectives,
                                     const SelectionConfig& cfg);

// Largest weight among the test's objectives (0 for unlinked).
double test_weight(const LinkedTest& test,
                   const std::vector<TestObjective>& objectives);

struct CoverageRow {
  std::string objective_id;
  std::string target;
  ObjectiveKind kind = ObjectiveKind::kIncident;
  double weight = 0;
  std::size_t tests = 0;
  bool covered() const { return tests > 0; }
};

struct RiskCoverage {
  std::vector<CoverageRow> rows;
  std::size_t unlinked_tests = 0;
  // Covered share of the total objective weight; the share of covered
  // objectives when every weight is zero.
  double coverage = 0;
};

RiskCoverage coverage_report(const std::vector<LinkedTest>& selected,
                             const std::vector<TestObjective>& objectives);

std::string coverage_to_json(const RiskCoverage& coverage);
// rank, trace id, origin, weight and objectives, one row per selected test.
std::string selection_to_tsv(const std::vector<LinkedTest>& selected,
                             const std::vector<TestObjective>& objectives);

}  // namespace mbst

#endif  // MBST_PRIORITIZATION_H_
