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

#include "mbst/risk_model.h"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "mbst/errors.h"
#include "mbst/text_util.h"

namespace mbst {
namespace {

constexpr double kDiscrepancyTolerance = 1e-9;

constexpr std::pair<std::string_view, RiskNodeKind> kNodeKinds[] = {
    {"THREAT", RiskNodeKind::kThreat},
    {"THREAT_SCENARIO", RiskNodeKind::kThreatScenario},
    {"VULNERABILITY", RiskNodeKind::kVulnerability},
    {"UNWANTED_INCIDENT", RiskNodeKind::kUnwantedIncident},
    {"ASSET", RiskNodeKind::kAsset},
    {"TREATMENT", RiskNodeKind::kTreatment},
};

constexpr std::pair<std::string_view, RiskEdgeKind> kEdgeKinds[] = {
    {"INITIATES", RiskEdgeKind::kInitiates},
    {"LEADS_TO", RiskEdgeKind::kLeadsTo},
    {"IMPACTS", RiskEdgeKind::kImpacts},
    {"TREATS", RiskEdgeKind::kTreats},
};

bool IsFlow(RiskEdgeKind k) {
  return k == RiskEdgeKind::kInitiates || k == RiskEdgeKind::kLeadsTo;
}

std::string Mark(const YAML::Node& n) {
  const YAML::Mark m = n.Mark();
  if (m.is_null()) return "";
  return " (line " + std::to_string(m.line + 1) + ")";
}

std::string Scalar(const YAML::Node& parent, const char* key, bool required,
                   const std::string& where) {
  YAML::Node n = parent[key];
  if (!n) {
    if (required) throw SchemaError(where + " lacks '" + key + "'");
    return "";
  }
  if (!n.IsScalar()) {
    throw SchemaError(where + ": '" + key + "' must be a scalar" + Mark(n));
  }
  return n.Scalar();
}

std::optional<double> Number(const std::string& text) {
  if (text.empty()) return std::nullopt;
  try {
    std::size_t used = 0;
    double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

// Numeric literal or the name of a scale level.
std::optional<double> Likelihood(const YAML::Node& parent, const char* key,
                                 const LikelihoodScale& scale,
                                 const std::string& where) {
  std::string text = Scalar(parent, key, false, where);
  if (text.empty()) return std::nullopt;
  if (auto v = Number(text)) return v;
  for (const LikelihoodLevel& l : scale.levels) {
    if (l.name == text) return l.value;
  }
  throw SchemaError(where + ": '" + text +
                    "' is neither a number nor a scale level");
}

RiskNodeKind NodeKind(const std::string& s, const std::string& where) {
  for (const auto& [name, kind] : kNodeKinds) {
    if (name == s) return kind;
  }
  throw SchemaError(where + ": unknown node kind '" + s + "'");
}

RiskEdgeKind EdgeKind(const std::string& s, const std::string& where) {
  for (const auto& [name, kind] : kEdgeKinds) {
    if (name == s) return kind;
  }
  throw SchemaError(where + ": unknown edge kind '" + s + "'");
}

bool KindAllowed(RiskEdgeKind e, RiskNodeKind from, RiskNodeKind to) {
  switch (e) {
    case RiskEdgeKind::kInitiates:
      return from == RiskNodeKind::kThreat &&
             to == RiskNodeKind::kThreatScenario;
    case RiskEdgeKind::kLeadsTo:
      return from == RiskNodeKind::kThreatScenario &&
             (to == RiskNodeKind::kThreatScenario ||
              to == RiskNodeKind::kUnwantedIncident);
    case RiskEdgeKind::kImpacts:
      return from == RiskNodeKind::kUnwantedIncident &&
             to == RiskNodeKind::kAsset;
    case RiskEdgeKind::kTreats:
      return from == RiskNodeKind::kTreatment;
  }
  return false;
}

void CheckUnit(double v, const std::string& what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw SchemaError(what + " must be a probability in [0,1]");
  }
}

// Kahn order over INITIATES/LEADS_TO; ready nodes leave in document order.
std::vector<std::size_t> FlowOrder(const RiskGraph& g) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) index[g.nodes[i].id] = i;
  std::vector<int> indeg(g.nodes.size(), 0);
  std::vector<std::vector<std::size_t>> out(g.nodes.size());
  for (const RiskEdge& e : g.edges) {
    if (!IsFlow(e.kind)) continue;
    std::size_t a = index.at(e.from);
    std::size_t b = index.at(e.to);
    out[a].push_back(b);
    ++indeg[b];
  }
  std::set<std::size_t> ready;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (indeg[i] == 0) ready.insert(i);
  }
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    std::size_t n = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(n);
    for (std::size_t m : out[n]) {
      if (--indeg[m] == 0) ready.insert(m);
    }
  }
  if (order.size() != g.nodes.size()) {
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      if (indeg[i] > 0) {
        throw CycleError("leads-to cycle through '" + g.nodes[i].id + "'");
      }
    }
  }
  return order;
}

void AddUnique(std::vector<std::string>& v, const std::string& s) {
  if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
}

}  // namespace

std::string_view to_string(RiskNodeKind k) {
  for (const auto& [name, kind] : kNodeKinds) {
    if (kind == k) return name;
  }
  return "THREAT";
}

std::string_view to_string(RiskEdgeKind k) {
  for (const auto& [name, kind] : kEdgeKinds) {
    if (kind == k) return name;
  }
  return "LEADS_TO";
}

std::string_view to_string(ScaleMode m) {
  return m == ScaleMode::kFrequency ? "FREQUENCY" : "PROBABILITY";
}

const RiskNode* RiskGraph::find_node(std::string_view id) const {
  for (const RiskNode& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

RiskNode* RiskGraph::find_node(std::string_view id) {
  for (RiskNode& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

const RiskEdge* RiskGraph::find_edge(std::string_view id) const {
  for (const RiskEdge& e : edges) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

bool RiskGraph::has_element(std::string_view id) const {
  return find_node(id) != nullptr || find_edge(id) != nullptr;
}

RiskGraph parse_risk_model(std::string_view yaml) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml));
  } catch (const YAML::Exception& e) {
    throw SchemaError(std::string("malformed risk model: ") + e.what());
  }
  if (!root.IsMap()) throw SchemaError("risk model must be a mapping");
  RiskGraph g;
  try {
    if (YAML::Node scale = root["scale"]) {
      std::string mode = Scalar(scale, "mode", false, "scale");
      if (mode == "FREQUENCY") {
        g.scale.mode = ScaleMode::kFrequency;
      } else if (mode.empty() || mode == "PROBABILITY") {
        g.scale.mode = ScaleMode::kProbability;
      } else {
        throw SchemaError("scale: unknown mode '" + mode + "'");
      }
      if (YAML::Node levels = scale["levels"]) {
        if (!levels.IsSequence()) {
          throw SchemaError("scale: 'levels' must be a list" + Mark(levels));
        }
        for (const YAML::Node& l : levels) {
          std::string name = Scalar(l, "name", true, "scale level");
          auto v = Number(Scalar(l, "value", true, "scale level " + name));
          if (!v) throw SchemaError("scale level " + name + ": bad value");
          g.scale.levels.push_back({name, *v});
        }
      }
    }
    YAML::Node nodes = root["nodes"];
    if (!nodes || !nodes.IsSequence()) {
      throw SchemaError("risk model needs a 'nodes' list");
    }
    for (const YAML::Node& n : nodes) {
      if (!n.IsMap()) throw SchemaError("node entries must be mappings" + Mark(n));
      RiskNode node;
      node.id = Scalar(n, "id", true, "node" + Mark(n));
      std::string where = "node " + node.id;
      node.kind = NodeKind(Scalar(n, "kind", true, where), where);
      node.label = Scalar(n, "label", false, where);
      if (node.label.empty()) node.label = node.id;
      node.likelihood = Likelihood(n, "likelihood", g.scale, where);
      node.annotated = node.likelihood.has_value();
      node.status = Scalar(n, "status", false, where);
      g.nodes.push_back(std::move(node));
    }
    std::set<std::string> taken;
    for (const RiskNode& n : g.nodes) taken.insert(n.id);
    if (YAML::Node edges = root["edges"]) {
      if (!edges.IsSequence()) throw SchemaError("'edges' must be a list");
      for (const YAML::Node& e : edges) {
        if (!e.IsMap()) throw SchemaError("edge entries must be mappings" + Mark(e));
        RiskEdge edge;
        edge.id = Scalar(e, "id", false, "edge" + Mark(e));
        edge.from = Scalar(e, "from", true, "edge" + Mark(e));
        edge.to = Scalar(e, "to", true, "edge" + Mark(e));
        std::string where = "edge " + edge.from + "->" + edge.to;
        edge.kind = EdgeKind(Scalar(e, "kind", true, where), where);
        edge.likelihood = Likelihood(e, "likelihood", g.scale, where);
        if (std::string c = Scalar(e, "consequence", false, where); !c.empty()) {
          edge.consequence = Number(c);
          if (!edge.consequence) {
            throw SchemaError(where + ": consequence must be a number");
          }
        }
        if (YAML::Node vs = e["vulnerabilities"]) {
          if (!vs.IsSequence()) {
            throw SchemaError(where + ": 'vulnerabilities' must be a list");
          }
          for (const YAML::Node& v : vs) edge.vulnerabilities.push_back(v.Scalar());
        }
        edge.status = Scalar(e, "status", false, where);
        g.edges.push_back(std::move(edge));
      }
    }
    for (const RiskEdge& e : g.edges) {
      if (!e.id.empty()) taken.insert(e.id);
    }
    std::size_t next = 1;
    for (RiskEdge& e : g.edges) {
      if (!e.id.empty()) continue;
      while (taken.count("e" + std::to_string(next))) ++next;
      e.id = "e" + std::to_string(next++);
      taken.insert(e.id);
    }
  } catch (const YAML::Exception& e) {
    throw SchemaError(std::string("malformed risk model: ") + e.what());
  }
  validate_risk_graph(g);
  return g;
}

RiskGraph load_risk_model(const std::filesystem::path& path) {
  return parse_risk_model(read_file(path));
}

void validate_risk_graph(const RiskGraph& g) {
  const bool prob = g.scale.mode == ScaleMode::kProbability;
  for (std::size_t i = 0; i < g.scale.levels.size(); ++i) {
    const LikelihoodLevel& l = g.scale.levels[i];
    if (i > 0 && !(l.value > g.scale.levels[i - 1].value)) {
      throw SchemaError("scale level values must strictly increase at '" +
                        l.name + "'");
    }
    if (prob) CheckUnit(l.value, "scale level " + l.name);
  }
  std::set<std::string> ids;
  for (const RiskNode& n : g.nodes) {
    if (n.id.empty()) throw SchemaError("node with empty id");
    if (!ids.insert(n.id).second) {
      throw SchemaError("duplicate risk element id '" + n.id + "'");
    }
    if (n.likelihood) {
      if (n.kind != RiskNodeKind::kThreat &&
          n.kind != RiskNodeKind::kThreatScenario &&
          n.kind != RiskNodeKind::kUnwantedIncident) {
        throw SchemaError("node " + n.id + " of kind " +
                          std::string(to_string(n.kind)) +
                          " cannot carry a likelihood");
      }
      if (*n.likelihood < 0) {
        throw SchemaError("node " + n.id + " has a negative likelihood");
      }
      if (prob) CheckUnit(*n.likelihood, "likelihood of " + n.id);
    }
  }
  for (const RiskEdge& e : g.edges) {
    if (!ids.insert(e.id).second) {
      throw SchemaError("duplicate risk element id '" + e.id + "'");
    }
  }
  for (const RiskEdge& e : g.edges) {
    const RiskNode* from = g.find_node(e.from);
    if (!from) {
      throw DanglingReference("edge " + e.id + " starts at unknown node '" +
                              e.from + "'");
    }
    const RiskNode* to = g.find_node(e.to);
    if (!to && !(e.kind == RiskEdgeKind::kTreats && g.find_edge(e.to))) {
      throw DanglingReference("edge " + e.id + " ends at unknown element '" +
                              e.to + "'");
    }
    if (!KindAllowed(e.kind, from->kind,
                     to ? to->kind : RiskNodeKind::kTreatment)) {
      throw SchemaError("edge " + e.id + ": " +
                        std::string(to_string(e.kind)) + " cannot connect " +
                        std::string(to_string(from->kind)) + " to " +
                        (to ? std::string(to_string(to->kind)) : "a relation"));
    }
    if (e.likelihood) {
      if (!IsFlow(e.kind)) {
        throw SchemaError("edge " + e.id + ": only INITIATES and LEADS_TO "
                          "carry a likelihood");
      }
      CheckUnit(*e.likelihood, "conditional likelihood of " + e.id);
    }
    if (e.consequence) {
      if (e.kind != RiskEdgeKind::kImpacts) {
        throw SchemaError("edge " + e.id + ": only IMPACTS carries a "
                          "consequence");
      }
      if (*e.consequence < 0) {
        throw SchemaError("edge " + e.id + " has a negative consequence");
      }
    }
    for (const std::string& v : e.vulnerabilities) {
      const RiskNode* vn = g.find_node(v);
      if (!vn) {
        throw DanglingReference("edge " + e.id +
                                " names unknown vulnerability '" + v + "'");
      }
      if (vn->kind != RiskNodeKind::kVulnerability) {
        throw SchemaError("edge " + e.id + ": '" + v +
                          "' is not a VULNERABILITY");
      }
    }
  }
  FlowOrder(g);
}

std::string write_risk_model(const RiskGraph& g) {
  YAML::Emitter out;
  out << YAML::BeginMap;
  out << YAML::Key << "scale" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "mode" << YAML::Value << std::string(to_string(g.scale.mode));
  if (!g.scale.levels.empty()) {
    out << YAML::Key << "levels" << YAML::Value << YAML::BeginSeq;
    for (const LikelihoodLevel& l : g.scale.levels) {
      out << YAML::Flow << YAML::BeginMap << YAML::Key << "name" << YAML::Value
          << l.name << YAML::Key << "value" << YAML::Value << l.value
          << YAML::EndMap;
    }
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;
  out << YAML::Key << "nodes" << YAML::Value << YAML::BeginSeq;
  for (const RiskNode& n : g.nodes) {
    out << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << n.id;
    out << YAML::Key << "kind" << YAML::Value << std::string(to_string(n.kind));
    out << YAML::Key << "label" << YAML::Value << n.label;
    if (n.annotated && n.likelihood) {
      out << YAML::Key << "likelihood" << YAML::Value << *n.likelihood;
    }
    if (!n.status.empty()) out << YAML::Key << "status" << YAML::Value << n.status;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::Key << "edges" << YAML::Value << YAML::BeginSeq;
  for (const RiskEdge& e : g.edges) {
    out << YAML::BeginMap;
    out << YAML::Key << "id" << YAML::Value << e.id;
    out << YAML::Key << "from" << YAML::Value << e.from;
    out << YAML::Key << "to" << YAML::Value << e.to;
    out << YAML::Key << "kind" << YAML::Value << std::string(to_string(e.kind));
    if (e.likelihood) out << YAML::Key << "likelihood" << YAML::Value << *e.likelihood;
    if (e.consequence) {
      out << YAML::Key << "consequence" << YAML::Value << *e.consequence;
    }
    if (!e.vulnerabilities.empty()) {
      out << YAML::Key << "vulnerabilities" << YAML::Value << YAML::Flow
          << e.vulnerabilities;
    }
    if (!e.status.empty()) out << YAML::Key << "status" << YAML::Value << e.status;
    out << YAML::EndMap;
  }
  out << YAML::EndSeq;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

double combine_contributions(ScaleMode mode, const std::vector<double>& c) {
  if (mode == ScaleMode::kFrequency) {
    double sum = 0;
    for (double x : c) sum += x;
    return sum;
  }
  double none = 1;
  for (double x : c) none *= 1 - x;
  return 1 - none;
}

RiskGraph propagate_likelihoods(const RiskGraph& graph) {
  RiskGraph g = graph;
  g.discrepancies.clear();
  for (RiskNode& n : g.nodes) {
    if (!n.annotated) n.likelihood.reset();
  }
  for (std::size_t i : FlowOrder(g)) {
    RiskNode& node = g.nodes[i];
    std::vector<double> parts;
    bool complete = true;
    bool any = false;
    for (const RiskEdge& e : g.edges) {
      if (!IsFlow(e.kind) || e.to != node.id) continue;
      any = true;
      const RiskNode* up = g.find_node(e.from);
      if (!up->likelihood) {
        if (!node.annotated) throw MissingAnnotation(up->id);
        complete = false;
        continue;
      }
      if (!e.likelihood) {
        if (!node.annotated) throw MissingAnnotation(e.id);
        complete = false;
        continue;
      }
      parts.push_back(*up->likelihood * *e.likelihood);
    }
    if (!any || !complete) continue;
    double computed = combine_contributions(g.scale.mode, parts);
    if (node.annotated) {
      if (std::fabs(computed - *node.likelihood) > kDiscrepancyTolerance) {
        g.discrepancies.push_back({node.id, *node.likelihood, computed});
      }
    } else {
      node.likelihood = computed;
    }
  }
  return g;
}

std::map<RiskKey, double> compute_risk_values(const RiskGraph& g) {
  std::map<RiskKey, double> out;
  for (const RiskEdge& e : g.edges) {
    if (e.kind != RiskEdgeKind::kImpacts) continue;
    const RiskNode* incident = g.find_node(e.from);
    if (!incident->likelihood) throw MissingAnnotation(incident->id);
    if (!e.consequence) {
      throw MissingConsequence("IMPACTS edge " + e.id + " from " + e.from +
                               " to " + e.to + " has no consequence");
    }
    double risk = *incident->likelihood * *e.consequence;
    auto [it, fresh] = out.emplace(RiskKey{e.from, e.to}, risk);
    if (!fresh) it->second = std::max(it->second, risk);
  }
  return out;
}

std::string ChangeEntry::to_line() const {
  std::string s = action + " " + target;
  if (!detail.empty()) s += " " + detail;
  s += " traces=";
  for (std::size_t i = 0; i < trace_ids.size(); ++i) {
    if (i) s += ",";
    s += trace_ids[i];
  }
  return s;
}

UpdateResult update_from_results(const RiskGraph& graph,
                                 const RunReport& report,
                                 std::size_t pass_threshold) {
  UpdateResult res{graph, {}};
  RiskGraph& g = res.graph;
  for (const TraceResult& r : report.results) {
    for (const std::string& id : r.risk_links) {
      if (!g.has_element(id)) throw UnknownLink(id);
    }
  }

  // Vulnerability evidence, keyed by vulnerability id.
  struct Evidence {
    std::vector<std::string> traces;
    std::set<std::string> scenarios;
  };
  std::map<std::string, Evidence> vulns;
  for (const TraceResult& r : report.results) {
    if (r.verdict.kind != VerdictKind::kVuln) continue;
    std::set<std::string> scenarios;
    std::vector<std::string> named = r.vuln_hints;
    for (const std::string& id : r.risk_links) {
      const RiskNode* n = g.find_node(id);
      if (!n) continue;
      if (n->kind == RiskNodeKind::kThreatScenario) scenarios.insert(id);
      if (n->kind == RiskNodeKind::kVulnerability) named.push_back(id);
    }
    for (const std::string& v : named) {
      Evidence& ev = vulns[v];
      AddUnique(ev.traces, r.trace_id);
      ev.scenarios.insert(scenarios.begin(), scenarios.end());
    }
  }
  for (const auto& [id, ev] : vulns) {
    RiskNode* n = g.find_node(id);
    if (!n) {
      g.nodes.push_back({id, RiskNodeKind::kVulnerability, id, std::nullopt,
                         false, "discovered"});
      std::vector<std::string> attached;
      for (RiskEdge& e : g.edges) {
        if (IsFlow(e.kind) && ev.scenarios.count(e.to)) {
          AddUnique(e.vulnerabilities, id);
          attached.push_back(e.id);
        }
      }
      std::string detail = "status=discovered";
      if (!attached.empty()) {
        detail += " on=";
        for (std::size_t i = 0; i < attached.size(); ++i) {
          detail += (i ? "," : "") + attached[i];
        }
      }
      res.changes.push_back({"add-vulnerability", id, detail, ev.traces});
    } else if (n->kind == RiskNodeKind::kVulnerability &&
               n->status != "confirmed" && n->status != "discovered") {
      n->status = "confirmed";
      res.changes.push_back({"confirm", id, "status=confirmed", ev.traces});
    }
  }

  // Treatments: evidence on the treatment or on anything it treats.
  for (RiskNode& t : g.nodes) {
    if (t.kind != RiskNodeKind::kTreatment) continue;
    std::set<std::string> scope{t.id};
    for (const RiskEdge& e : g.edges) {
      if (e.kind != RiskEdgeKind::kTreats || e.from != t.id) continue;
      scope.insert(e.to);
      if (const RiskEdge* target = g.find_edge(e.to)) scope.insert(target->to);
    }
    std::vector<std::string> vuln_traces;
    std::vector<std::string> pass_traces;
    bool all_pass = true;
    for (const TraceResult& r : report.results) {
      bool linked = std::any_of(r.risk_links.begin(), r.risk_links.end(),
                                [&](const std::string& id) {
                                  return scope.count(id) != 0;
                                });
      if (!linked) continue;
      if (r.verdict.kind == VerdictKind::kVuln) vuln_traces.push_back(r.trace_id);
      if (r.verdict.kind == VerdictKind::kPass) {
        pass_traces.push_back(r.trace_id);
      } else {
        all_pass = false;
      }
    }
    if (!vuln_traces.empty()) {
      if (t.status != "ineffective") {
        t.status = "ineffective";
        res.changes.push_back(
            {"ineffective", t.id, "status=ineffective", vuln_traces});
      }
    } else if (all_pass && pass_traces.size() >= pass_threshold &&
               !pass_traces.empty() && t.status.empty()) {
      t.status = "affirmed";
      res.changes.push_back({"affirm", t.id, "status=affirmed", pass_traces});
    }
  }

  // Relations into scenarios and incidents whose linked tests all passed.
  for (const RiskNode& n : g.nodes) {
    if (n.kind != RiskNodeKind::kThreatScenario &&
        n.kind != RiskNodeKind::kUnwantedIncident) {
      continue;
    }
    std::vector<std::string> pass_traces;
    bool all_pass = true;
    for (const TraceResult& r : report.results) {
      if (std::find(r.risk_links.begin(), r.risk_links.end(), n.id) ==
          r.risk_links.end()) {
        continue;
      }
      if (r.verdict.kind == VerdictKind::kPass) {
        pass_traces.push_back(r.trace_id);
      } else {
        all_pass = false;
      }
    }
    if (!all_pass || pass_traces.empty() ||
        pass_traces.size() < pass_threshold) {
      continue;
    }
    for (RiskEdge& e : g.edges) {
      if (!IsFlow(e.kind) || e.to != n.id || !e.status.empty()) continue;
      e.status = "affirmed";
      std::ostringstream detail;
      detail << "likelihood=" << (e.likelihood ? *e.likelihood : 0.0)
             << " into=" << n.id;
      res.changes.push_back({"affirm", e.id, detail.str(), pass_traces});
    }
  }
  return res;
}

}  // namespace mbst
