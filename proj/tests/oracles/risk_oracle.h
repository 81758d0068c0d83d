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


// Brute-force likelihood oracle: plain recursion over incoming edges with
// no memoization and no topological sort.

#ifndef MBST_TESTS_ORACLES_RISK_ORACLE_H_
#define MBST_TESTS_ORACLES_RISK_ORACLE_H_

#include <optional>
#include <string>
#include <vector>

#include "mbst/risk_model.h"

namespace mbst::oracle {

// nullopt when nothing flows into an unannotated node.
inline std::optional<double> brute_likelihood(const RiskGraph& g,
                                              const std::string& id) {
  const RiskNode* n = g.find_node(id);
  if (n == nullptr) return std::nullopt;
  if (n->annotated && n->likelihood) return n->likelihood;
  std::vector<double> parts;
  for (const RiskEdge& e : g.edges) {
    if (e.to != id) continue;
    if (e.kind != RiskEdgeKind::kInitiates && e.kind != RiskEdgeKind::kLeadsTo) {
      continue;
    }
    std::optional<double> up = brute_likelihood(g, e.from);
    if (!up || !e.likelihood) continue;
    parts.push_back(*up * *e.likelihood);
  }
  if (parts.empty()) return std::nullopt;
  if (g.scale.mode == ScaleMode::kFrequency) {
    double sum = 0;
    for (double p : parts) sum += p;
    return sum;
  }
  double miss = 1;
  for (double p : parts) miss *= 1 - p;
  return 1 - miss;
}

// Sum over every source-to-node path of source likelihood times the edge
// product. Agrees with brute_likelihood in FREQUENCY mode only.
inline double path_sum(const RiskGraph& g, const std::string& id) {
  const RiskNode* n = g.find_node(id);
  if (n && n->annotated && n->likelihood) return *n->likelihood;
  double sum = 0;
  for (const RiskEdge& e : g.edges) {
    if (e.to != id || !e.likelihood) continue;
    if (e.kind != RiskEdgeKind::kInitiates && e.kind != RiskEdgeKind::kLeadsTo) {
      continue;
    }
    sum += path_sum(g, e.from) * *e.likelihood;
  }
  return sum;
}

}  // namespace mbst::oracle

#endif  // MBST_TESTS_ORACLES_RISK_ORACLE_H_
