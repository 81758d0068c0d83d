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


#ifndef MBST_TESTS_ORACLES_TEST_DATA_H_
#define MBST_TESTS_ORACLES_TEST_DATA_H_

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mbst/scenario_dsl.h"

namespace mbst::testdata {

inline std::filesystem::path data_dir() { return MBST_DATA_DIR; }

inline std::filesystem::path path(const std::string& rel) {
  return data_dir() / rel;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Golden file contents with the leading comment block removed.
inline std::string golden(const std::string& name) {
  std::string text = slurp(path("golden/" + name));
  std::size_t pos = 0;
  while (pos < text.size() && (text[pos] == '#' || text[pos] == '\n')) {
    pos = text.find('\n', pos);
    if (pos == std::string::npos) return "";
    ++pos;
  }
  return text.substr(pos);
}

inline ScenarioModel transfer() {
  return load_scenario_file(path("scenarios/transfer_order.scn"));
}

// Every bundled scenario, sorted by file name.
inline std::vector<std::filesystem::path> scenario_files() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(path("scenarios"))) {
    if (e.path().extension() == ".scn") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<std::filesystem::path> risk_files() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(path("risk"))) {
    if (e.path().extension() == ".yaml") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

// Scratch directory under the system temp dir, emptied on creation.
inline std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() /
           ("mbst-test-" + std::to_string(::getpid()) + "-" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace mbst::testdata

#endif  // MBST_TESTS_ORACLES_TEST_DATA_H_
