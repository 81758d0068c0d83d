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

#ifndef MBST_PIPELINE_H_
#define MBST_PIPELINE_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mbst/mutant_generation.h"
#include "mbst/prioritization.h"
#include "mbst/risk_model.h"
#include "mbst/sut_harness.h"
#include "mbst/trace_expansion.h"

namespace mbst {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitTransport = 3;
inline constexpr int kExitVuln = 10;

enum class ReportFormat { kJson, kTsv };

struct PipelineConfig {
  std::filesystem::path scenario;
  std::optional<std::filesystem::path> risk_model;
  std::optional<std::filesystem::path> catalog;
  std::filesystem::path out_dir;
  GenerationConfig generation;
  ExpansionConfig expansion;
  SelectionConfig selection;
  std::string adapter = "builtin:reference";
  ReportFormat format = ReportFormat::kJson;
  bool stop_on_vuln = false;
  bool update_risk = false;
  int run_workers = 1;
  int timeout_ms = kDefaultTimeoutMs;
};

// Baseline traces of `base` followed by the traces of every mutant, with
// test data assigned. Mutant traces also list the element ids their
// mutations touch. Traces whose constraints cannot be met are dropped with
// a note on `warn`.
std::vector<Trace> expand_corpus(const ScenarioModel& base,
                                 const std::vector<MutantRecord>& mutants,
                                 const ExpansionConfig& cfg,
                                 const InvalidValueCatalog& catalog,
                                 std::ostream& warn);

void write_traces(const std::filesystem::path& dir,
                  const std::vector<Trace>& traces);
// Reads every *.trace file in `dir`, ordered by trace id.
std::vector<Trace> read_traces(const std::filesystem::path& dir);

// Trace ids in rank order from a selection.tsv.
std::vector<std::string> read_selection(const std::filesystem::path& path);

// Copies mutation lists, risk links and vulnerability hints into the
// report entries.
void annotate_report(RunReport& report, const std::vector<LinkedTest>& linked,
                     const std::vector<MutantRecord>& mutants);

// Runs every stage and writes the artifacts under cfg.out_dir:
// mutants/, manifest.json, traces/, selection.tsv, report.json or
// report.tsv, coverage.json, and with update_risk also changelog.txt and
// risk-updated.yaml. Returns one of the kExit* codes; diagnostics go to
// `err`.
int run_pipeline(const PipelineConfig& cfg, std::ostream& err);

}  // namespace mbst

#endif  // MBST_PIPELINE_H_
