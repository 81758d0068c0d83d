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


#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <cstdlib>

#include "mbst/run_report.h"
#include "oracles/test_data.h"

namespace mbst {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = -1;
  std::string output;  // stdout and stderr together
};

CliRun Cli(const std::string& args, const std::string& env = "") {
  std::string cmd = env + " " + MBST_CLI_PATH + " " + args + " 2>&1";
  CliRun r;
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.output.append(buf.data(), n);
  int status = ::pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string Data(const std::string& rel) { return testdata::path(rel).string(); }

const std::string kTransfer = "--scenario " + Data("scenarios/transfer_order.scn");
const std::string kRisk = "--risk-model " + Data("risk/transfer_risk.yaml");

TEST(Cli, MissingScenarioIsConfigError) {
  CliRun r = Cli("pipeline --scenario /no/such/file.scn --out " +
              testdata::scratch("missing").string());
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("/no/such/file.scn"), std::string::npos) << r.output;
  EXPECT_EQ(Cli("parse --scenario /no/such/file.scn").code, 2);
}

TEST(Cli, BadArgumentsAreConfigErrors) {
  auto out = testdata::scratch("badargs").string();
  EXPECT_EQ(Cli("pipeline " + kTransfer + " --budget 0 --out " + out).code, 2);
  EXPECT_EQ(Cli("pipeline " + kTransfer + " --operators SHUFFLE --out " + out).code, 2);
  EXPECT_EQ(Cli("pipeline " + kTransfer + " --adapter smoke:signals --out " + out).code, 2);
  EXPECT_EQ(Cli("pipeline " + kTransfer + " --select random --out " + out).code, 2);
  EXPECT_EQ(Cli("pipeline --frobnicate").code, 2);
  EXPECT_EQ(Cli("").code, 2);
}

TEST(Cli, ParsePrintsSummary) {
  CliRun r = Cli("parse " + kTransfer);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.output.find("messages=7"), std::string::npos) << r.output;
  CliRun p = Cli("parse --print " + kTransfer);
  EXPECT_NE(p.output.find("scenario TransferOrder"), std::string::npos);
}

TEST(Cli, PipelineAgainstV1FindsBypass) {
  auto out = testdata::scratch("v1");
  CliRun r = Cli("pipeline " + kTransfer + " " + kRisk +
              " --budget 200 --seed 42 --adapter builtin:v1 --out " + out.string());
  ASSERT_EQ(r.code, 10) << r.output;
  for (const char* f : {"manifest.json", "selection.tsv", "report.json",
                        "coverage.json"}) {
    EXPECT_TRUE(fs::exists(out / f)) << f;
  }
  RunReport rep = report_from_json(testdata::slurp(out / "report.json"));
  std::size_t bypass = 0;
  for (const TraceResult& t : rep.results) {
    if (t.verdict.kind != VerdictKind::kVuln) continue;
    EXPECT_FALSE(t.mutations.empty()) << t.trace_id;
    EXPECT_TRUE(fs::exists(out / "traces" / (t.trace_id + ".trace"))) << t.trace_id;
    EXPECT_TRUE(fs::exists(out / "mutants" / (t.origin + ".scn"))) << t.origin;
    bypass += std::count(t.risk_links.begin(), t.risk_links.end(), "tan-bypass");
  }
  EXPECT_GT(bypass, 0u);
  fs::remove_all(out);
}

TEST(Cli, PipelineAgainstReferenceIsClean) {
  auto out = testdata::scratch("ref");
  CliRun r = Cli("pipeline " + kTransfer + " " + kRisk +
              " --budget 200 --seed 42 --adapter builtin:reference --update-risk --out " +
              out.string());
  EXPECT_EQ(r.code, 0) << r.output;
  EXPECT_TRUE(fs::exists(out / "changelog.txt"));
  EXPECT_TRUE(fs::exists(out / "risk-updated.yaml"));
  fs::remove_all(out);
}

TEST(Cli, TransportFailureExitCode) {
  auto out = testdata::scratch("tcp");
  CliRun r = Cli("pipeline " + kTransfer +
              " --budget 5 --adapter tcp:127.0.0.1:1 --timeout-ms 500 --out " +
              out.string());
  EXPECT_EQ(r.code, 3) << r.output;
  fs::remove_all(out);
}

TEST(Cli, OutputDirFromEnvironment) {
  auto out = testdata::scratch("env");
  CliRun r = Cli("mutate " + kTransfer + " --budget 10", "MBST_OUT=" + out.string());
  EXPECT_EQ(r.code, 0) << r.output;
  EXPECT_TRUE(fs::exists(out / "manifest.json"));
  fs::remove_all(out);
}

TEST(Cli, StagesChainLikePipeline) {
  auto staged = testdata::scratch("staged");
  auto whole = testdata::scratch("whole");
  const std::string gen = " --budget 60 --seed 9";
  const std::string o = " --out " + staged.string();
  ASSERT_EQ(Cli("mutate " + kTransfer + gen + o).code, 0);
  ASSERT_EQ(Cli("expand " + kTransfer + " --corpus " + staged.string() + o).code, 0);
  ASSERT_EQ(Cli("prioritize " + kTransfer + " " + kRisk + " --traces " +
                (staged / "traces").string() + o).code, 0);
  CliRun run = Cli("run " + kTransfer + " --traces " + (staged / "traces").string() +
                " --selection " + (staged / "selection.tsv").string() +
                " --corpus " + staged.string() + " --adapter builtin:v1" + o);
  EXPECT_EQ(run.code, 10) << run.output;
  CliRun rep = Cli("report --report " + (staged / "report.json").string() +
                " --format tsv " + kRisk + o);
  EXPECT_EQ(rep.code, 0) << rep.output;
  EXPECT_EQ(rep.output.rfind("trace_id\torigin\tverdict", 0), 0u);

  ASSERT_EQ(Cli("pipeline " + kTransfer + " " + kRisk + gen +
                " --adapter builtin:v1 --out " + whole.string()).code, 10);
  EXPECT_EQ(testdata::slurp(staged / "manifest.json"),
            testdata::slurp(whole / "manifest.json"));
  EXPECT_EQ(testdata::slurp(staged / "selection.tsv"),
            testdata::slurp(whole / "selection.tsv"));
  RunReport a = report_from_json(testdata::slurp(staged / "report.json"));
  RunReport b = report_from_json(testdata::slurp(whole / "report.json"));
  EXPECT_EQ(a.results, b.results);
  fs::remove_all(staged);
  fs::remove_all(whole);
}

TEST(Cli, WithoutRiskModelEverythingRuns) {
  auto out = testdata::scratch("norisk");
  CliRun r = Cli("pipeline " + kTransfer + " --budget 30 --adapter builtin:reference --out " +
              out.string());
  EXPECT_EQ(r.code, 0) << r.output;
  std::string sel = testdata::slurp(out / "selection.tsv");
  EXPECT_NE(sel.find("unlinked"), std::string::npos);
  fs::remove_all(out);
}

TEST(Cli, ServeOverStdio) {
  CliRun r = Cli("serve --stdio --variant reference < /dev/null");
  EXPECT_EQ(r.code, 0) << r.output;
  std::string cmd = std::string("printf 'MSG selectOrderType type=NATIONAL\\nBYE\\n' | ") +
                    MBST_CLI_PATH + " serve --stdio";
  FILE* p = ::popen(cmd.c_str(), "r");
  ASSERT_NE(p, nullptr);
  char line[256] = {0};
  ASSERT_NE(std::fgets(line, sizeof line, p), nullptr);
  EXPECT_STREQ(line, "OK order_type_set\n");
  ::pclose(p);
}

}  // namespace
}  // namespace mbst
