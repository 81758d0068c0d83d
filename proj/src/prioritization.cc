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

#include "mbst/prioritization.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "json.hpp"
#include "mbst/errors.h"
#include "mbst/scenario.h"
#include "mbst/text_util.h"

namespace mbst {
namespace {

constexpr double kTieTolerance = 1e-9;

bool IsFlow(RiskEdgeKind k) {
  return k == RiskEdgeKind::kInitiates || k == RiskEdgeKind::kLeadsTo;
}

double ReachableRisk(const RiskGraph& g, std::vector<std::string> start,
                     const std::map<std::string, double>& incident_risk) {
  std::set<std::string> seen(start.begin(), start.end());
  double best = 0;
  while (!start.empty()) {
    std::string n = start.back();
    start.pop_back();
    if (auto it = incident_risk.find(n); it != incident_risk.end()) {
      best = std::max(best, it->second);
    }
    for (const RiskEdge& e : g.edges) {
      if (IsFlow(e.kind) && e.from == n && seen.insert(e.to).second) {
        start.push_back(e.to);
      }
    }
  }
  return best;
}

// Start nodes whose downstream incidents weigh an element.
std::vector<std::string> StartsFor(const RiskGraph& g, const std::string& id) {
  if (const RiskEdge* e = g.find_edge(id)) return {e->to};
  const RiskNode* n = g.find_node(id);
  if (!n) return {};
  if (n->kind == RiskNodeKind::kVulnerability) {
    std::vector<std::string> out;
    for (const RiskEdge& e : g.edges) {
      if (std::find(e.vulnerabilities.begin(), e.vulnerabilities.end(), id) !=
          e.vulnerabilities.end()) {
        out.push_back(e.to);
      }
    }
    return out;
  }
  return {id};
}

std::vector<std::string> AnnotationIds(
    const Trace& trace, const std::map<std::string, std::string>& annotations,
    std::string_view prefix) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const std::string& el : trace.elements) {
    auto it = annotations.find(std::string(prefix) + el);
    if (it == annotations.end()) continue;
    for (const std::string& raw : split(it->second, ',')) {
      std::string id(trim(raw));
      if (!id.empty() && seen.insert(id).second) out.push_back(id);
    }
  }
  return out;
}

const TestObjective* FindObjective(const std::vector<TestObjective>& objs,
                                   std::string_view id) {
  for (const TestObjective& o : objs) {
    if (o.id == id) return &o;
  }
  return nullptr;
}

bool Tied(double a, double b) {
  return std::fabs(a - b) <= kTieTolerance * std::max(std::fabs(a), std::fabs(b));
}

std::string Number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string_view to_string(ObjectiveKind k) {
  switch (k) {
    case ObjectiveKind::kIncident:
      return "INCIDENT";
    case ObjectiveKind::kThreatScenario:
      return "THREAT_SCENARIO";
    case ObjectiveKind::kVulnerability:
      return "VULNERABILITY";
    case ObjectiveKind::kTreatment:
      return "TREATMENT";
    case ObjectiveKind::kUnlinked:
      return "UNLINKED";
  }
  return "UNLINKED";
}

std::string_view to_string(SelectionStrategy s) {
  return s == SelectionStrategy::kWeightDesc ? "WEIGHT_DESC"
                                             : "GREEDY_WEIGHTED_COVER";
}

std::optional<SelectionStrategy> selection_strategy_from_string(
    std::string_view s) {
  if (s == "GREEDY_WEIGHTED_COVER" || s == "greedy") {
    return SelectionStrategy::kGreedyWeightedCover;
  }
  if (s == "WEIGHT_DESC" || s == "weight") return SelectionStrategy::kWeightDesc;
  return std::nullopt;
}

std::vector<TestObjective> derive_objectives(const RiskGraph& graph) {
  std::map<std::string, double> incident_risk;
  for (const auto& [key, risk] : compute_risk_values(graph)) {
    double& r = incident_risk[key.first];
    r = std::max(r, risk);
  }
  std::vector<TestObjective> out;
  for (const RiskNode& n : graph.nodes) {
    TestObjective o;
    o.id = "obj-" + n.id;
    o.target = n.id;
    switch (n.kind) {
      case RiskNodeKind::kUnwantedIncident:
        o.kind = ObjectiveKind::kIncident;
        o.description = "Provoke incident: " + n.label;
        break;
      case RiskNodeKind::kThreatScenario:
        o.kind = ObjectiveKind::kThreatScenario;
        o.description = "Exercise threat scenario: " + n.label;
        break;
      case RiskNodeKind::kVulnerability:
        o.kind = ObjectiveKind::kVulnerability;
        o.description = "Elicit vulnerability: " + n.label;
        break;
      case RiskNodeKind::kTreatment:
        o.kind = ObjectiveKind::kTreatment;
        o.description = "Check treatment: " + n.label;
        break;
      default:
        continue;
    }
    if (n.kind == RiskNodeKind::kTreatment) {
      for (const RiskEdge& e : graph.edges) {
        if (e.kind != RiskEdgeKind::kTreats || e.from != n.id) continue;
        o.weight = std::max(
            o.weight, ReachableRisk(graph, StartsFor(graph, e.to), incident_risk));
      }
    } else {
      o.weight = ReachableRisk(graph, StartsFor(graph, n.id), incident_risk);
    }
    out.push_back(std::move(o));
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const TestObjective& a, const TestObjective& b) {
                     if (a.weight != b.weight) return a.weight > b.weight;
                     return a.id < b.id;
                   });
  return out;
}

std::vector<std::string> trace_risk_links(
    const Trace& trace, const std::map<std::string, std::string>& annotations) {
  return AnnotationIds(trace, annotations, kRiskLinkPrefix);
}

std::vector<std::string> trace_vuln_hints(
    const Trace& trace, const std::map<std::string, std::string>& annotations) {
  return AnnotationIds(trace, annotations, kRiskVulnPrefix);
}

std::vector<LinkedTest> link_tests(
    const std::vector<Trace>& tests, const std::vector<TestObjective>& objectives,
    const std::map<std::string, std::string>& annotations,
    const RiskGraph* graph) {
  if (graph) {
    for (const auto& [key, value] : annotations) {
      if (!starts_with(key, kRiskLinkPrefix)) continue;
      for (const std::string& raw : split(value, ',')) {
        std::string id(trim(raw));
        if (!id.empty() && !graph->has_element(id)) throw UnknownRiskId(id);
      }
    }
  }
  std::vector<LinkedTest> out;
  for (const Trace& t : tests) {
    LinkedTest lt;
    lt.trace_id = t.trace_id;
    lt.origin = t.origin;
    lt.risk_links = trace_risk_links(t, annotations);
    lt.vuln_hints = trace_vuln_hints(t, annotations);
    std::set<std::string> links(lt.risk_links.begin(), lt.risk_links.end());
    if (graph) {
      for (const TestObjective& o : objectives) {
        if (links.count(o.target)) lt.objective_ids.push_back(o.id);
      }
    }
    if (lt.objective_ids.empty()) {
      lt.objective_ids.push_back(std::string(kUnlinkedObjective));
    }
    out.push_back(std::move(lt));
  }
  return out;
}

double test_weight(const LinkedTest& test,
                   const std::vector<TestObjective>& objectives) {
  double w = 0;
  for (const std::string& id : test.objective_ids) {
    if (const TestObjective* o = FindObjective(objectives, id)) {
      w = std::max(w, o->weight);
    }
  }
  return w;
}

std::vector<LinkedTest> select_tests(const std::vector<LinkedTest>& tests,
                                     const std::vector<TestObjective>& objectives,
                                     const SelectionConfig& cfg) {
  std::vector<LinkedTest> pool = tests;
  std::sort(pool.begin(), pool.end(),
            [](const LinkedTest& a, const LinkedTest& b) {
              return a.trace_id < b.trace_id;
            });
  std::vector<LinkedTest> out;
  if (cfg.strategy == SelectionStrategy::kWeightDesc) {
    std::vector<double> w;
    for (const LinkedTest& t : pool) w.push_back(test_weight(t, objectives));
    std::vector<std::size_t> idx(pool.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      return w[a] > w[b];
    });
    for (std::size_t i : idx) {
      if (out.size() >= cfg.budget) break;
      out.push_back(pool[i]);
    }
    return out;
  }
  std::map<std::string, double> weight;
  for (const TestObjective& o : objectives) weight[o.id] = o.weight;
  std::set<std::string> covered;
  std::vector<bool> used(pool.size(), false);
  while (out.size() < cfg.budget && out.size() < pool.size()) {
    std::optional<std::size_t> best;
    double best_gain = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (used[i]) continue;
      double gain = 0;
      for (const std::string& id : pool[i].objective_ids) {
        if (covered.count(id)) continue;
        if (auto it = weight.find(id); it != weight.end()) gain += it->second;
      }
      if (!best || (gain > best_gain && !Tied(gain, best_gain))) {
        best = i;
        best_gain = gain;
      }
    }
    used[*best] = true;
    for (const std::string& id : pool[*best].objective_ids) covered.insert(id);
    out.push_back(pool[*best]);
  }
  return out;
}

RiskCoverage coverage_report(const std::vector<LinkedTest>& selected,
                             const std::vector<TestObjective>& objectives) {
  RiskCoverage cov;
  for (const TestObjective& o : objectives) {
    cov.rows.push_back({o.id, o.target, o.kind, o.weight, 0});
  }
  for (const LinkedTest& t : selected) {
    for (const std::string& id : t.objective_ids) {
      if (id == kUnlinkedObjective) {
        ++cov.unlinked_tests;
        continue;
      }
      for (CoverageRow& r : cov.rows) {
        if (r.objective_id == id) ++r.tests;
      }
    }
  }
  double total = 0;
  double hit = 0;
  std::size_t n_covered = 0;
  for (const CoverageRow& r : cov.rows) {
    total += r.weight;
    if (r.covered()) {
      hit += r.weight;
      ++n_covered;
    }
  }
  if (total > 0) {
    cov.coverage = hit / total;
  } else if (!cov.rows.empty()) {
    cov.coverage = static_cast<double>(n_covered) /
                   static_cast<double>(cov.rows.size());
  }
  return cov;
}

std::string coverage_to_json(const RiskCoverage& coverage) {
  nlohmann::ordered_json j;
  j["coverage"] = coverage.coverage;
  j["unlinked_tests"] = coverage.unlinked_tests;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const CoverageRow& r : coverage.rows) {
    rows.push_back({{"objective", r.objective_id},
                    {"target", r.target},
                    {"kind", to_string(r.kind)},
                    {"weight", r.weight},
                    {"tests", r.tests},
                    {"covered", r.covered()}});
  }
  j["objectives"] = rows;
  return j.dump(2) + "\n";
}

std::string selection_to_tsv(const std::vector<LinkedTest>& selected,
                             const std::vector<TestObjective>& objectives) {
  std::string s = "rank\ttrace_id\torigin\tweight\tobjectives\n";
  for (std::size_t i = 0; i < selected.size(); ++i) {
    const LinkedTest& t = selected[i];
    std::string objs;
    for (std::size_t k = 0; k < t.objective_ids.size(); ++k) {
      if (k) objs += ",";
      objs += t.objective_ids[k];
    }
    s += std::to_string(i + 1) + "\t" + t.trace_id + "\t" + t.origin + "\t" +
         Number(test_weight(t, objectives)) + "\t" + objs + "\n";
  }
  return s;
}

}  // namespace mbst
