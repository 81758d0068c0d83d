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

// mbst: command-line front end for the scenario fuzzing toolkit.

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mbst/errors.h"
#include "mbst/pipeline.h"
#include "mbst/scenario_dsl.h"
#include "mbst/text_util.h"

namespace fs = std::filesystem;
using namespace mbst;  // NOLINT

namespace {

struct Options {
  std::string scenario;
  std::string risk_model;
  std::string catalog;
  std::string corpus;
  std::string traces;
  std::string selection_file;
  std::string report_file;
  std::string out;
  std::string operators = "all";
  int max_order = 2;
  std::size_t budget = 1000;
  std::uint64_t seed = 0;
  bool no_dedup = false;
  int gen_workers = 1;
  int loop_cap = 3;
  std::string alt_policy = "ALL_BRANCHES";
  std::size_t max_traces = 64;
  std::string select = "GREEDY_WEIGHTED_COVER";
  std::size_t select_budget = 0;
  std::string adapter = "builtin:reference";
  bool stop_on_vuln = false;
  int run_workers = 1;
  int timeout_ms = kDefaultTimeoutMs;
  std::string format = "json";
  bool update_risk = false;
  bool print = false;
  std::string variant = "reference";
  int port = 0;
  bool stdio = false;
};

std::vector<FuzzOperatorKind> ParseOperators(const std::string& text) {
  if (text == "all") return all_operator_kinds();
  std::vector<FuzzOperatorKind> out;
  for (const std::string& raw : split(text, ',')) {
    std::string name(trim(raw));
    auto k = operator_kind_from_string(name);
    if (!k) throw ConfigError("unknown operator '" + name + "'");
    out.push_back(*k);
  }
  return out;
}

GenerationConfig GenConfig(const Options& o) {
  GenerationConfig g;
  g.operators = ParseOperators(o.operators);
  g.max_order = o.max_order;
  g.budget = o.budget;
  g.seed = o.seed;
  g.dedup = !o.no_dedup;
  g.workers = o.gen_workers;
  if (!o.catalog.empty()) g.catalog = InvalidValueCatalog::Load(o.catalog);
  validate_config(g);
  return g;
}

ExpansionConfig ExpConfig(const Options& o) {
  ExpansionConfig e;
  e.loop_unroll_cap = o.loop_cap;
  auto p = alt_policy_from_string(o.alt_policy);
  if (!p) throw ConfigError("unknown alt policy '" + o.alt_policy + "'");
  e.alt_policy = *p;
  e.max_traces_per_model = o.max_traces;
  return e;
}

SelectionConfig SelConfig(const Options& o) {
  SelectionConfig s;
  auto st = selection_strategy_from_string(o.select);
  if (!st) throw ConfigError("unknown selection strategy '" + o.select + "'");
  s.strategy = *st;
  if (o.select_budget > 0) s.budget = o.select_budget;
  return s;
}

ReportFormat Format(const Options& o) {
  if (o.format == "json") return ReportFormat::kJson;
  if (o.format == "tsv") return ReportFormat::kTsv;
  throw ConfigError("unknown report format '" + o.format + "'");
}

fs::path OutDir(const Options& o) {
  if (!o.out.empty()) return o.out;
  if (const char* env = std::getenv("MBST_OUT"); env && *env) return env;
  return "mbst-out";
}

ScenarioModel LoadScenario(const Options& o) {
  if (o.scenario.empty()) throw ConfigError("--scenario is required");
  if (!fs::exists(o.scenario)) {
    throw ConfigError("scenario file not found: " + o.scenario);
  }
  return load_scenario_file(o.scenario);
}

std::optional<RiskGraph> LoadRisk(const Options& o) {
  if (o.risk_model.empty()) return std::nullopt;
  if (!fs::exists(o.risk_model)) {
    throw ConfigError("risk model not found: " + o.risk_model);
  }
  return propagate_likelihoods(load_risk_model(o.risk_model));
}

int CmdParse(const Options& o) {
  ScenarioModel m = LoadScenario(o);
  std::size_t fragments = 0;
  for_each_fragment(m, [&](const CombinedFragment&) { ++fragments; });
  if (o.print) {
    std::cout << serialize_scenario(m);
  } else {
    std::cout << "ok " << m.name << " messages=" << count_messages(m)
              << " fragments=" << fragments << " digest=" << canonical_hash(m)
              << "\n";
  }
  return kExitOk;
}

int CmdMutate(const Options& o) {
  ScenarioModel base = LoadScenario(o);
  GenerationConfig g = GenConfig(o);
  std::vector<MutantRecord> records = generate_mutants(base, g);
  fs::path out = OutDir(o);
  fs::remove_all(out / "mutants");
  write_corpus(out, base, g, records);
  std::cerr << records.size() << " mutants written to " << out.string()
            << "\n";
  return kExitOk;
}

int CmdExpand(const Options& o) {
  ScenarioModel base = LoadScenario(o);
  std::vector<MutantRecord> mutants;
  if (!o.corpus.empty()) mutants = read_corpus(o.corpus);
  InvalidValueCatalog catalog = o.catalog.empty()
                                    ? InvalidValueCatalog::Default()
                                    : InvalidValueCatalog::Load(o.catalog);
  std::vector<Trace> traces =
      expand_corpus(base, mutants, ExpConfig(o), catalog, std::cerr);
  fs::path out = OutDir(o) / "traces";
  fs::remove_all(out);
  write_traces(out, traces);
  std::cerr << traces.size() << " traces written to " << out.string() << "\n";
  return kExitOk;
}

int CmdPrioritize(const Options& o) {
  ScenarioModel base = LoadScenario(o);
  if (o.traces.empty()) throw ConfigError("--traces is required");
  std::vector<Trace> traces = read_traces(o.traces);
  std::optional<RiskGraph> graph = LoadRisk(o);
  std::vector<TestObjective> objectives;
  if (graph) objectives = derive_objectives(*graph);
  std::vector<LinkedTest> linked = link_tests(
      traces, objectives, base.annotations, graph ? &*graph : nullptr);
  SelectionConfig sel = SelConfig(o);
  if (!graph) sel.strategy = SelectionStrategy::kWeightDesc;
  std::vector<LinkedTest> selected = select_tests(linked, objectives, sel);
  fs::path out = OutDir(o);
  write_file(out / "selection.tsv", selection_to_tsv(selected, objectives));
  write_file(out / "coverage.json",
             coverage_to_json(coverage_report(selected, objectives)));
  std::cerr << selected.size() << " of " << linked.size()
            << " tests selected\n";
  return kExitOk;
}

int CmdRun(const Options& o) {
  if (o.traces.empty()) throw ConfigError("--traces is required");
  std::vector<Trace> traces = read_traces(o.traces);
  if (!o.selection_file.empty()) {
    std::map<std::string, const Trace*> by_id;
    for (const Trace& t : traces) by_id[t.trace_id] = &t;
    std::vector<Trace> ordered;
    for (const std::string& id : read_selection(o.selection_file)) {
      auto it = by_id.find(id);
      if (it == by_id.end()) {
        throw ConfigError("selection names unknown trace " + id);
      }
      ordered.push_back(*it->second);
    }
    traces = std::move(ordered);
  }
  AdapterFactory factory = make_adapter_factory(o.adapter, o.timeout_ms);
  CampaignConfig camp;
  camp.campaign_id = "run";
  camp.adapter_spec = o.adapter;
  camp.stop_on_vuln = o.stop_on_vuln;
  camp.workers = o.run_workers;
  RunReport report = run_campaign(traces, factory, camp);
  std::vector<MutantRecord> mutants;
  if (!o.corpus.empty()) mutants = read_corpus(o.corpus);
  std::vector<LinkedTest> linked;
  if (!o.scenario.empty()) {
    ScenarioModel base = LoadScenario(o);
    linked = link_tests(traces, {}, base.annotations, nullptr);
  }
  annotate_report(report, linked, mutants);
  fs::path out = OutDir(o);
  if (Format(o) == ReportFormat::kTsv) {
    write_file(out / "report.tsv", report_to_tsv(report));
  } else {
    write_file(out / "report.json", report_to_json(report));
  }
  std::cerr << report.results.size() << " traces run, "
            << report.count(VerdictKind::kVuln) << " VULN\n";
  if (report.transport_failures > 0) return kExitTransport;
  return report.count(VerdictKind::kVuln) > 0 ? kExitVuln : kExitOk;
}

int CmdReport(const Options& o) {
  if (o.report_file.empty()) throw ConfigError("--report is required");
  RunReport report = report_from_json(read_file(o.report_file));
  if (o.format == "tsv") {
    std::cout << report_to_tsv(report);
  } else {
    Format(o);
    for (VerdictKind v : {VerdictKind::kPass, VerdictKind::kVuln,
                          VerdictKind::kInconclusive, VerdictKind::kError}) {
      std::cout << to_string(v) << "\t" << report.count(v) << "\n";
    }
    for (const TraceResult& r : report.results) {
      if (r.verdict.kind != VerdictKind::kVuln) continue;
      std::cout << "VULN " << r.trace_id;
      for (const std::string& m : r.mutations) std::cout << " [" << m << "]";
      std::cout << "\n";
    }
  }
  if (o.update_risk) {
    std::optional<RiskGraph> graph = LoadRisk(o);
    if (!graph) throw ConfigError("--update-risk needs --risk-model");
    UpdateResult upd = update_from_results(*graph, report);
    std::string log;
    for (const ChangeEntry& c : upd.changes) log += c.to_line() + "\n";
    fs::path out = OutDir(o);
    write_file(out / "changelog.txt", log);
    write_file(out / "risk-updated.yaml", write_risk_model(upd.graph));
  }
  return kExitOk;
}

int CmdPipeline(const Options& o) {
  PipelineConfig c;
  if (o.scenario.empty()) throw ConfigError("--scenario is required");
  c.scenario = o.scenario;
  if (!o.risk_model.empty()) c.risk_model = o.risk_model;
  if (!o.catalog.empty()) c.catalog = o.catalog;
  c.out_dir = OutDir(o);
  c.generation = GenConfig(o);
  c.expansion = ExpConfig(o);
  c.selection = SelConfig(o);
  c.adapter = o.adapter;
  c.format = Format(o);
  c.stop_on_vuln = o.stop_on_vuln;
  c.update_risk = o.update_risk;
  c.run_workers = o.run_workers;
  c.timeout_ms = o.timeout_ms;
  return run_pipeline(c, std::cerr);
}

int CmdServe(const Options& o) {
  auto v = sut_variant_from_string(o.variant);
  if (!v) throw ConfigError("unknown variant '" + o.variant + "'");
  if (o.stdio) {
    serve_stream(*v, 0, 1);
    return kExitOk;
  }
  if (o.port < 0 || o.port > 65535) throw ConfigError("bad port");
  TcpServer server(*v, static_cast<std::uint16_t>(o.port));
  std::cout << "listening on 127.0.0.1:" << server.port() << std::endl;
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);
  int sig = 0;
  sigwait(&set, &sig);
  server.stop();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Model-based security testing: mutate scenario models, "
               "expand traces, run them against a SUT and report by risk."};
  app.require_subcommand(1);
  Options o;

  auto scenario = [&](CLI::App* c) {
    c->add_option("--scenario", o.scenario, "Scenario DSL file (.scn)");
  };
  auto out = [&](CLI::App* c) {
    c->add_option("--out", o.out, "Output directory (default $MBST_OUT)");
  };
  auto gen = [&](CLI::App* c) {
    c->add_option("--operators", o.operators,
                  "Comma-separated operators or 'all'");
    c->add_option("--max-order", o.max_order, "Mutations composed per mutant");
    c->add_option("--budget", o.budget, "Maximum number of mutants");
    c->add_option("--seed", o.seed, "Seed for sampling");
    c->add_flag("--no-dedup", o.no_dedup, "Keep structurally equal mutants");
    c->add_option("--gen-workers", o.gen_workers, "Generation threads");
    c->add_option("--catalog", o.catalog, "Invalid-value catalog (YAML)");
  };
  auto exp = [&](CLI::App* c) {
    c->add_option("--loop-cap", o.loop_cap, "Loop unroll cap");
    c->add_option("--alt-policy", o.alt_policy, "ALL_BRANCHES or FIRST");
    c->add_option("--max-traces", o.max_traces, "Trace cap per model");
  };
  auto sel = [&](CLI::App* c) {
    c->add_option("--risk-model", o.risk_model, "Risk model (YAML)");
    c->add_option("--select", o.select, "GREEDY_WEIGHTED_COVER or WEIGHT_DESC");
    c->add_option("--select-budget", o.select_budget,
                  "Maximum tests to select (0 = all)");
  };
  auto run = [&](CLI::App* c) {
    c->add_option("--adapter", o.adapter,
                  "builtin:reference|v1|v2, tcp:<host>:<port>, stdio:<cmd>");
    c->add_flag("--stop-on-vuln", o.stop_on_vuln, "Stop at the first VULN");
    c->add_option("--workers", o.run_workers, "Parallel SUT instances");
    c->add_option("--timeout-ms", o.timeout_ms, "Per-message timeout");
    c->add_option("--format", o.format, "Report format: json or tsv");
  };

  CLI::App* parse = app.add_subcommand("parse", "Validate a scenario file");
  scenario(parse);
  parse->add_flag("--print", o.print, "Print the canonical form");

  CLI::App* mutate = app.add_subcommand("mutate", "Write a mutant corpus");
  scenario(mutate);
  gen(mutate);
  out(mutate);

  CLI::App* expand = app.add_subcommand("expand", "Expand models into traces");
  scenario(expand);
  expand->add_option("--corpus", o.corpus, "Corpus directory from 'mutate'");
  expand->add_option("--catalog", o.catalog, "Invalid-value catalog (YAML)");
  exp(expand);
  out(expand);

  CLI::App* prioritize =
      app.add_subcommand("prioritize", "Link traces to risks and select");
  scenario(prioritize);
  prioritize->add_option("--traces", o.traces, "Trace directory");
  sel(prioritize);
  out(prioritize);

  CLI::App* runcmd = app.add_subcommand("run", "Run traces against a SUT");
  runcmd->add_option("--traces", o.traces, "Trace directory");
  runcmd->add_option("--selection", o.selection_file, "selection.tsv order");
  runcmd->add_option("--corpus", o.corpus, "Corpus directory for provenance");
  scenario(runcmd);
  run(runcmd);
  out(runcmd);

  CLI::App* report = app.add_subcommand("report", "Summarize a run report");
  report->add_option("--report", o.report_file, "report.json");
  report->add_option("--format", o.format, "Output: json summary or tsv");
  report->add_option("--risk-model", o.risk_model, "Risk model (YAML)");
  report->add_flag("--update-risk", o.update_risk,
                   "Write changelog.txt and risk-updated.yaml");
  out(report);

  CLI::App* pipeline = app.add_subcommand("pipeline", "Run every stage");
  scenario(pipeline);
  gen(pipeline);
  exp(pipeline);
  sel(pipeline);
  run(pipeline);
  pipeline->add_flag("--update-risk", o.update_risk,
                     "Revise the risk model from the results");
  out(pipeline);

  CLI::App* serve = app.add_subcommand("serve", "Serve a built-in SUT");
  serve->add_option("--variant", o.variant, "reference, v1 or v2");
  serve->add_option("--port", o.port, "TCP port (0 = ephemeral)");
  serve->add_flag("--stdio", o.stdio, "Speak over stdin/stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*parse) return CmdParse(o);
    if (*mutate) return CmdMutate(o);
    if (*expand) return CmdExpand(o);
    if (*prioritize) return CmdPrioritize(o);
    if (*runcmd) return CmdRun(o);
    if (*report) return CmdReport(o);
    if (*pipeline) return CmdPipeline(o);
    if (*serve) return CmdServe(o);
  } catch (const AdapterFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitTransport;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
