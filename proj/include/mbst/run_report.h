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

#ifndef MBST_RUN_REPORT_H_
#define MBST_RUN_REPORT_H_

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mbst {

enum class VerdictKind { kPass, kVuln, kInconclusive, kError };

std::string_view to_string(VerdictKind v);
std::optional<VerdictKind> verdict_from_string(std::string_view s);

struct Verdict {
  VerdictKind kind = VerdictKind::kPass;
  std::string justification;
  // Index into the trace's events; set for VULN.
  std::optional<std::size_t> event_index;

  friend bool operator==(const Verdict&, const Verdict&) = default;
};

// One request/response pair in wire syntax.
struct Exchange {
  std::size_t event_index = 0;
  std::string request;
  std::string response;

  friend bool operator==(const Exchange&, const Exchange&) = default;
};

struct TraceResult {
  std::string trace_id;
  std::string origin;
  std::vector<std::string> mutations;  // audit form, empty for baselines
  std::vector<std::string> risk_links;
  std::vector<std::string> vuln_hints;
  Verdict verdict;
  std::vector<Exchange> log;

  friend bool operator==(const TraceResult&, const TraceResult&) = default;
};

struct RunReport {
  std::string campaign_id;
  std::string adapter;
  std::vector<TraceResult> results;
  bool stopped_early = false;
  std::size_t transport_failures = 0;
  double wall_time_s = 0;

  std::size_t count(VerdictKind v) const;
  std::map<std::string, std::map<std::string, std::size_t>> by_operator()
      const;
  std::map<std::string, std::map<std::string, std::size_t>> by_risk_node()
      const;
  const TraceResult* find(std::string_view trace_id) const;
};

// JSON document; see docs/report-format.md.
std::string report_to_json(const RunReport& report);
RunReport report_from_json(std::string_view text);
// One row per trace plus a header row.
std::string report_to_tsv(const RunReport& report);

}  // namespace mbst

#endif  // MBST_RUN_REPORT_H_
