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

#include "mbst/run_report.h"

#include <set>

#include "json.hpp"
#include "mbst/errors.h"

namespace mbst {
namespace {

using Json = nlohmann::ordered_json;

Json CountsJson(const std::map<std::string, std::map<std::string, std::size_t>>&
                    counts) {
  Json out = Json::object();
  for (const auto& [key, per] : counts) {
    Json row = Json::object();
    for (const auto& [v, n] : per) row[v] = n;
    out[key] = row;
  }
  return out;
}

std::string Tsv(std::string s) {
  for (char& c : s) {
    if (c == '\t' || c == '\n') c = ' ';
  }
  return s;
}

std::string Join(const std::vector<std::string>& v, std::string_view sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += v[i];
  }
  return s;
}

}  // namespace

std::string_view to_string(VerdictKind v) {
  switch (v) {
    case VerdictKind::kPass:
      return "PASS";
    case VerdictKind::kVuln:
      return "VULN";
    case VerdictKind::kInconclusive:
      return "INCONCLUSIVE";
    case VerdictKind::kError:
      return "ERROR";
  }
  return "ERROR";
}

std::optional<VerdictKind> verdict_from_string(std::string_view s) {
  for (VerdictKind v : {VerdictKind::kPass, VerdictKind::kVuln,
                        VerdictKind::kInconclusive, VerdictKind::kError}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

std::size_t RunReport::count(VerdictKind v) const {
  std::size_t n = 0;
  for (const TraceResult& r : results) n += r.verdict.kind == v;
  return n;
}

std::map<std::string, std::map<std::string, std::size_t>>
RunReport::by_operator() const {
  std::map<std::string, std::map<std::string, std::size_t>> out;
  for (const TraceResult& r : results) {
    std::set<std::string> kinds;
    for (const std::string& m : r.mutations) {
      kinds.insert(m.substr(0, m.find(' ')));
    }
    if (kinds.empty()) kinds.insert("BASELINE");
    for (const std::string& k : kinds) {
      ++out[k][std::string(to_string(r.verdict.kind))];
    }
  }
  return out;
}

std::map<std::string, std::map<std::string, std::size_t>>
RunReport::by_risk_node() const {
  std::map<std::string, std::map<std::string, std::size_t>> out;
  for (const TraceResult& r : results) {
    for (const std::string& id : r.risk_links) {
      ++out[id][std::string(to_string(r.verdict.kind))];
    }
  }
  return out;
}

const TraceResult* RunReport::find(std::string_view trace_id) const {
  for (const TraceResult& r : results) {
    if (r.trace_id == trace_id) return &r;
  }
  return nullptr;
}

std::string report_to_json(const RunReport& report) {
  Json j;
  j["campaign_id"] = report.campaign_id;
  j["adapter"] = report.adapter;
  j["stopped_early"] = report.stopped_early;
  j["transport_failures"] = report.transport_failures;
  j["wall_time_s"] = report.wall_time_s;
  Json totals = Json::object();
  for (VerdictKind v : {VerdictKind::kPass, VerdictKind::kVuln,
                        VerdictKind::kInconclusive, VerdictKind::kError}) {
    totals[std::string(to_string(v))] = report.count(v);
  }
  j["aggregates"] = {{"verdicts", totals},
                     {"by_operator", CountsJson(report.by_operator())},
                     {"by_risk_node", CountsJson(report.by_risk_node())}};
  Json traces = Json::array();
  for (const TraceResult& r : report.results) {
    Json log = Json::array();
    for (const Exchange& e : r.log) {
      log.push_back({{"event", e.event_index},
                     {"request", e.request},
                     {"response", e.response}});
    }
    Json t = {{"trace_id", r.trace_id},
              {"origin", r.origin},
              {"mutations", r.mutations},
              {"risk_links", r.risk_links},
              {"vuln_hints", r.vuln_hints},
              {"verdict", to_string(r.verdict.kind)},
              {"justification", r.verdict.justification}};
    t["event_index"] = r.verdict.event_index ? Json(*r.verdict.event_index)
                                             : Json(nullptr);
    t["log"] = log;
    traces.push_back(std::move(t));
  }
  j["traces"] = traces;
  return j.dump(2) + "\n";
}

RunReport report_from_json(std::string_view text) {
  RunReport report;
  try {
    Json j = Json::parse(text);
    report.campaign_id = j.at("campaign_id").get<std::string>();
    report.adapter = j.value("adapter", "");
    report.stopped_early = j.value("stopped_early", false);
    report.transport_failures = j.value("transport_failures", std::size_t{0});
    report.wall_time_s = j.value("wall_time_s", 0.0);
    for (const Json& t : j.at("traces")) {
      TraceResult r;
      r.trace_id = t.at("trace_id").get<std::string>();
      r.origin = t.at("origin").get<std::string>();
      r.mutations = t.value("mutations", std::vector<std::string>{});
      r.risk_links = t.value("risk_links", std::vector<std::string>{});
      r.vuln_hints = t.value("vuln_hints", std::vector<std::string>{});
      auto v = verdict_from_string(t.at("verdict").get<std::string>());
      if (!v) throw ConfigError("unknown verdict in report");
      r.verdict.kind = *v;
      r.verdict.justification = t.value("justification", "");
      if (t.contains("event_index") && !t["event_index"].is_null()) {
        r.verdict.event_index = t["event_index"].get<std::size_t>();
      }
      if (t.contains("log")) {
        for (const Json& e : t["log"]) {
          r.log.push_back({e.at("event").get<std::size_t>(),
                           e.at("request").get<std::string>(),
                           e.at("response").get<std::string>()});
        }
      }
      report.results.push_back(std::move(r));
    }
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
  return report;
}

std::string report_to_tsv(const RunReport& report) {
  std::string s =
      "trace_id\torigin\tverdict\tevent_index\tmutations\trisk_links\t"
      "justification\n";
  for (const TraceResult& r : report.results) {
    s += r.trace_id + "\t" + r.origin + "\t" +
         std::string(to_string(r.verdict.kind)) + "\t" +
         (r.verdict.event_index ? std::to_string(*r.verdict.event_index)
                                : std::string("-")) +
         "\t" + Tsv(Join(r.mutations, "; ")) + "\t" +
         Join(r.risk_links, ",") + "\t" + Tsv(r.verdict.justification) + "\n";
  }
  return s;
}

}  // namespace mbst
