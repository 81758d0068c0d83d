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

#ifndef MBST_RISK_MODEL_H_
#define MBST_RISK_MODEL_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mbst/run_report.h"

namespace mbst {

enum class RiskNodeKind {
  kThreat,
  kThreatScenario,
  kVulnerability,
  kUnwantedIncident,
  kAsset,
  kTreatment,
};

enum class RiskEdgeKind { kInitiates, kLeadsTo, kImpacts, kTreats };

enum class ScaleMode { kFrequency, kProbability };

std::string_view to_string(RiskNodeKind k);
std::string_view to_string(RiskEdgeKind k);
std::string_view to_string(ScaleMode m);

struct LikelihoodLevel {
  std::string name;
  double value = 0;
};

struct LikelihoodScale {
  ScaleMode mode = ScaleMode::kProbability;
  std::vector<LikelihoodLevel> levels;  // strictly increasing values
};

struct RiskNode {
  std::string id;
  RiskNodeKind kind = RiskNodeKind::kThreat;
  std::string label;
  std::optional<double> likelihood;
  // True when the likelihood came from the document rather than
  // propagation.
  bool annotated = false;
  // "discovered"/"confirmed" for vulnerabilities, "affirmed"/"ineffective"
  // for treatments; empty otherwise.
  std::string status;
};

struct RiskEdge {
  std::string id;
  std::string from;
  // A node id, or an edge id for TREATS edges on a relation.
  std::string to;
  RiskEdgeKind kind = RiskEdgeKind::kLeadsTo;
  std::optional<double> likelihood;   // INITIATES and LEADS_TO
  std::optional<double> consequence;  // IMPACTS
  std::vector<std::string> vulnerabilities;
  std::string status;  // "affirmed" once test evidence backs it
};

struct Discrepancy {
  std::string node;
  double annotated = 0;
  double computed = 0;
};

struct RiskGraph {
  LikelihoodScale scale;
  std::vector<RiskNode> nodes;
  std::vector<RiskEdge> edges;
  // Filled by propagate_likelihoods.
  std::vector<Discrepancy> discrepancies;

  const RiskNode* find_node(std::string_view id) const;
  RiskNode* find_node(std::string_view id);
  const RiskEdge* find_edge(std::string_view id) const;
  // Element ids are node ids and edge ids.
  bool has_element(std::string_view id) const;
};

// Throws SchemaError, DanglingReference or CycleError.
RiskGraph parse_risk_model(std::string_view yaml);
RiskGraph load_risk_model(const std::filesystem::path& path);
void validate_risk_graph(const RiskGraph& graph);
std::string write_risk_model(const RiskGraph& graph);

// How contributions of several incoming relations merge at one node:
// 1 - prod(1 - c) for probabilities, the sum for frequencies.
double combine_contributions(ScaleMode mode, const std::vector<double>& c);

// Throws MissingAnnotation naming the node or edge that blocks the
// computation.
RiskGraph propagate_likelihoods(const RiskGraph& graph);

using RiskKey = std::pair<std::string, std::string>;  // (incident, asset)

// Throws MissingAnnotation for an incident without likelihood and
// MissingConsequence for an IMPACTS edge without consequence.
std::map<RiskKey, double> compute_risk_values(const RiskGraph& graph);

struct ChangeEntry {
  std::string action;  // add-vulnerability, confirm, ineffective, affirm
  std::string target;
  std::string detail;
  std::vector<std::string> trace_ids;

  std::string to_line() const;
};

using ChangeLog = std::vector<ChangeEntry>;

struct UpdateResult {
  RiskGraph graph;
  ChangeLog changes;
};

// Revises the graph from test evidence without deleting nodes or touching
// numeric values. A treatment is affirmed when at least `pass_threshold`
// tests linked to it (or to what it treats) ran and all passed.
//
// Throws UnknownLink when a result links an id the graph lacks.
UpdateResult update_from_results(const RiskGraph& graph,
                                 const RunReport& report,
                                 std::size_t pass_threshold = 1);

}  // namespace mbst

#endif  // MBST_RISK_MODEL_H_
