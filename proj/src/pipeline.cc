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

#include "mbst/pipeline.h"

#include <algorithm>
#include <map>
#include <ostream>
#include <set>

#include "mbst/errors.h"
#include "mbst/scenario_dsl.h"
#include "mbst/text_util.h"

namespace fs = std::filesystem;

namespace mbst {
namespace {

void AddElements(Trace& t, const std::vector<Mutation>& mutations) {
  for (const Mutation& m : mutations) {
    std::string id = m.element_id();
    if (std::find(t.elements.begin(), t.elements.end(), id) ==
        t.elements.end()) {
      t.elements.push_back(id);
    }
  }
}

void ExpandOne(const ScenarioModel& model, std::string_view origin,
               const std::vector<Mutation>& mutations,
               const ExpansionConfig& cfg, const InvalidValueCatalog& catalog,
               std::ostream& warn, std::vector<Trace>& out) {
  ExpansionResult r = expand_traces(model, cfg, origin);
  if (r.overflow) {
    warn << "note: " << origin << " has more than " << cfg.max_traces_per_model
         << " paths; kept the first " << r.traces.size() << "\n";
  }
  for (Trace& t : r.traces) {
    AddElements(t, mutations);
    try {
      out.push_back(assign_test_data(t, catalog, DataMode::kApplyFuzzParams));
    } catch (const UnsatisfiableConstraint& e) {
      warn << "note: dropped " << t.trace_id << ": " << e.what() << "\n";
    }
  }
}

}  // namespace

std::vector<Trace> expand_corpus(const ScenarioModel& base,
                                 const std::vector<MutantRecord>& mutants,
                                 const ExpansionConfig& cfg,
                                 const InvalidValueCatalog& catalog,
                                 std::ostream& warn) {
  std::vector<Trace> out;
  ExpandOne(base, kBaselineOrigin, {}, cfg, catalog, warn, out);
  for (const MutantRecord& m : mutants) {
    ExpandOne(m.model, m.mutant_id, m.mutations, cfg, catalog, warn, out);
  }
  return out;
}

void write_traces(const fs::path& dir, const std::vector<Trace>& traces) {
  fs::create_directories(dir);
  for (const Trace& t : traces) {
    write_file(dir / (t.trace_id + ".trace"), serialize_trace(t));
  }
}

std::vector<Trace> read_traces(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw ConfigError("trace directory not found: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() == ".trace") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Trace> out;
  for (const fs::path& f : files) {
    try {
      out.push_back(parse_trace(read_file(f)));
    } catch (const ConfigError& e) {
      throw ConfigError(f.string() + ": " + e.what());
    }
  }
  return out;
}

std::vector<std::string> read_selection(const fs::path& path) {
  std::vector<std::string> ids;
  bool header = true;
  for (const std::string& line : split(read_file(path), '\n')) {
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cols = split(line, '\t');
    if (cols.size() >= 2) ids.push_back(cols[1]);
  }
  return ids;
}

void annotate_report(RunReport& report, const std::vector<LinkedTest>& linked,
                     const std::vector<MutantRecord>& mutants) {
  std::map<std::string, const LinkedTest*> by_trace;
  for (const LinkedTest& t : linked) by_trace[t.trace_id] = &t;
  std::map<std::string, const MutantRecord*> by_mutant;
  for (const MutantRecord& m : mutants) by_mutant[m.mutant_id] = &m;
  for (TraceResult& r : report.results) {
    if (auto it = by_trace.find(r.trace_id); it != by_trace.end()) {
      r.risk_links = it->second->risk_links;
      r.vuln_hints = it->second->vuln_hints;
    }
    if (auto it = by_mutant.find(r.origin); it != by_mutant.end()) {
      r.mutations.clear();
      for (const Mutation& m : it->second->mutations) {
        r.mutations.push_back(m.to_string());
      }
    }
  }
}

int run_pipeline(const PipelineConfig& cfg, std::ostream& err) {
  try {
    if (!fs::exists(cfg.scenario)) {
      throw ConfigError("scenario file not found: " + cfg.scenario.string());
    }
    ScenarioModel base = load_scenario_file(cfg.scenario);
    GenerationConfig gen = cfg.generation;
    if (cfg.catalog) gen.catalog = InvalidValueCatalog::Load(*cfg.catalog);
    std::optional<RiskGraph> graph;
    if (cfg.risk_model) {
      if (!fs::exists(*cfg.risk_model)) {
        throw ConfigError("risk model not found: " +
                          cfg.risk_model->string());
      }
      graph = propagate_likelihoods(load_risk_model(*cfg.risk_model));
      for (const Discrepancy& d : graph->discrepancies) {
        err << "note: " << d.node << " annotated " << d.annotated
            << " but propagation gives " << d.computed << "\n";
      }
    }
    AdapterFactory factory = make_adapter_factory(cfg.adapter, cfg.timeout_ms);

    fs::create_directories(cfg.out_dir);
    fs::remove_all(cfg.out_dir / "mutants");
    fs::remove_all(cfg.out_dir / "traces");

    std::vector<MutantRecord> mutants = generate_mutants(base, gen);
    write_corpus(cfg.out_dir, base, gen, mutants);

    std::vector<Trace> traces =
        expand_corpus(base, mutants, cfg.expansion, gen.catalog, err);
    write_traces(cfg.out_dir / "traces", traces);
    if (traces.empty()) {
      throw ConfigError("the scenario expands to no traces");
    }

    std::vector<TestObjective> objectives;
    if (graph) objectives = derive_objectives(*graph);
    std::vector<LinkedTest> linked = link_tests(
        traces, objectives, base.annotations, graph ? &*graph : nullptr);
    SelectionConfig sel = cfg.selection;
    if (!graph) sel.strategy = SelectionStrategy::kWeightDesc;
    std::vector<LinkedTest> selected = select_tests(linked, objectives, sel);
    write_file(cfg.out_dir / "selection.tsv",
               selection_to_tsv(selected, objectives));
    write_file(cfg.out_dir / "coverage.json",
               coverage_to_json(coverage_report(selected, objectives)));

    std::map<std::string, const Trace*> by_id;
    for (const Trace& t : traces) by_id[t.trace_id] = &t;
    std::vector<Trace> to_run;
    for (const LinkedTest& t : selected) to_run.push_back(*by_id.at(t.trace_id));

    CampaignConfig camp;
    camp.campaign_id = base.name + "-s" + std::to_string(gen.seed);
    camp.adapter_spec = cfg.adapter;
    camp.stop_on_vuln = cfg.stop_on_vuln;
    camp.workers = cfg.run_workers;
    RunReport report = run_campaign(to_run, factory, camp);
    annotate_report(report, linked, mutants);
    if (cfg.format == ReportFormat::kTsv) {
      write_file(cfg.out_dir / "report.tsv", report_to_tsv(report));
    } else {
      write_file(cfg.out_dir / "report.json", report_to_json(report));
    }

    if (cfg.update_risk && graph) {
      UpdateResult upd = update_from_results(*graph, report);
      std::string log;
      for (const ChangeEntry& c : upd.changes) log += c.to_line() + "\n";
      write_file(cfg.out_dir / "changelog.txt", log);
      write_file(cfg.out_dir / "risk-updated.yaml",
                 write_risk_model(upd.graph));
    } else if (cfg.update_risk) {
      err << "note: --update-risk needs a risk model; skipped\n";
    }

    const std::size_t vulns = report.count(VerdictKind::kVuln);
    err << report.results.size() << " traces run: "
        << report.count(VerdictKind::kPass) << " PASS, " << vulns << " VULN, "
        << report.count(VerdictKind::kInconclusive) << " INCONCLUSIVE, "
        << report.count(VerdictKind::kError) << " ERROR\n";
    if (report.transport_failures > 0) {
      err << "error: " << report.transport_failures
          << " traces hit transport failures\n";
      return kExitTransport;
    }
    return vulns > 0 ? kExitVuln : kExitOk;
  } catch (const AdapterFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitTransport;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace mbst
