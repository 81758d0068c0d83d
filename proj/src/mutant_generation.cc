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

#include "mbst/mutant_generation.h"

#include <algorithm>
#include <cstdio>
#include <random>
#include <thread>
#include <unordered_set>

#include "json.hpp"
#include "mbst/errors.h"
#include "mbst/scenario_dsl.h"
#include "mbst/text_util.h"

namespace mbst {
namespace {

using Json = nlohmann::ordered_json;

struct Candidate {
  std::vector<Mutation> mutations;
  ScenarioModel model;
  std::string digest;
};

struct Parent {
  std::vector<Mutation> mutations;
  ScenarioModel model;
};

std::vector<Candidate> ExtendParent(const Parent& parent,
                                    const GenerationConfig& cfg) {
  std::vector<Candidate> out;
  for (FuzzOperatorKind kind : cfg.operators) {
    for (Mutation& m : enumerate_applications(parent.model, kind, cfg.catalog)) {
      Candidate c;
      c.model = apply_mutation(parent.model, m, cfg.catalog);
      c.digest = canonical_hash(c.model);
      c.mutations = parent.mutations;
      c.mutations.push_back(std::move(m));
      out.push_back(std::move(c));
    }
  }
  return out;
}

// Candidate lists for parents[begin, end), computed on up to cfg.workers
// threads and returned in parent order.
std::vector<std::vector<Candidate>> ExtendBatch(
    const std::vector<Parent>& parents, std::size_t begin, std::size_t end,
    const GenerationConfig& cfg) {
  std::vector<std::vector<Candidate>> out(end - begin);
  if (cfg.workers <= 1 || end - begin <= 1) {
    for (std::size_t i = begin; i < end; ++i) {
      out[i - begin] = ExtendParent(parents[i], cfg);
    }
    return out;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(end - begin);
  for (std::size_t i = begin; i < end; ++i) {
    threads.emplace_back([&, i] {
      try {
        out[i - begin] = ExtendParent(parents[i], cfg);
      } catch (...) {
        errors[i - begin] = std::current_exception();
      }
    });
  }
  for (std::thread& t : threads) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

std::string MutantId(const std::string& base, int order, std::size_t counter) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%05zu", counter);
  return base + "-o" + std::to_string(order) + "-" + buf;
}

}  // namespace

void validate_config(const GenerationConfig& cfg) {
  if (cfg.budget < 1) throw ConfigError("budget must be at least 1");
  if (cfg.max_order < 1) throw ConfigError("max order must be at least 1");
  if (cfg.workers < 1) throw ConfigError("workers must be at least 1");
  if (cfg.operators.empty()) throw ConfigError("no fuzzing operators selected");
}

void generate_mutants(const ScenarioModel& base, const GenerationConfig& cfg,
                      const MutantSink& sink) {
  validate_config(cfg);
  std::unordered_set<std::string> seen;
  if (cfg.dedup) seen.insert(canonical_hash(base));

  std::vector<Parent> parents{{{}, base}};
  std::size_t emitted = 0;
  std::size_t raw_candidates = 0;
  const std::size_t batch = static_cast<std::size_t>(cfg.workers);

  for (int order = 1; order <= cfg.max_order && emitted < cfg.budget; ++order) {
    const std::size_t remaining = cfg.budget - emitted;
    std::mt19937_64 rng(cfg.seed ^ static_cast<std::uint64_t>(order));
    // Reservoir of (candidate index, candidate). At order 1 the reservoir
    // simply fills up and is never replaced.
    std::vector<std::pair<std::size_t, Candidate>> reservoir;
    std::size_t index = 0;
    bool full = false;

    for (std::size_t b = 0; b < parents.size() && !full; b += batch) {
      auto lists =
          ExtendBatch(parents, b, std::min(parents.size(), b + batch), cfg);
      for (auto& list : lists) {
        for (Candidate& c : list) {
          ++raw_candidates;
          if (cfg.dedup && !seen.insert(c.digest).second) continue;
          if (reservoir.size() < remaining) {
            reservoir.emplace_back(index, std::move(c));
          } else if (order == 1) {
            full = true;
            break;
          } else {
            std::size_t j = rng() % (index + 1);
            if (j < remaining) reservoir[j] = {index, std::move(c)};
          }
          ++index;
        }
        if (full) break;
      }
    }

    std::sort(reservoir.begin(), reservoir.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Parent> next;
    std::size_t counter = 0;
    for (auto& [idx, c] : reservoir) {
      MutantRecord rec{MutantId(base.name, order, ++counter),
                       std::move(c.mutations), std::move(c.model),
                       std::move(c.digest)};
      sink(rec);
      ++emitted;
      if (order < cfg.max_order) {
        next.push_back({std::move(rec.mutations), std::move(rec.model)});
      }
    }
    parents = std::move(next);
    if (parents.empty()) break;
  }

  if (raw_candidates > 0 && emitted == 0) {
    throw BudgetZeroAfterDedup(
        "every candidate mutant of '" + base.name +
        "' duplicates the base model or an earlier mutant");
  }
}

std::vector<MutantRecord> generate_mutants(const ScenarioModel& base,
                                           const GenerationConfig& cfg) {
  std::vector<MutantRecord> out;
  generate_mutants(base, cfg,
                   [&](const MutantRecord& r) { out.push_back(r); });
  return out;
}

void write_corpus(const std::filesystem::path& dir, const ScenarioModel& base,
                  const GenerationConfig& cfg,
                  const std::vector<MutantRecord>& records) {
  Json manifest;
  manifest["base"] = base.name;
  manifest["base_digest"] = canonical_hash(base);
  Json ops = Json::array();
  for (FuzzOperatorKind k : cfg.operators) ops.push_back(to_string(k));
  manifest["config"] = {{"operators", ops},
                        {"max_order", cfg.max_order},
                        {"budget", cfg.budget},
                        {"seed", cfg.seed},
                        {"dedup", cfg.dedup}};
  Json mutants = Json::array();
  for (const MutantRecord& r : records) {
    std::string file = "mutants/" + r.mutant_id + ".scn";
    write_file(dir / file, serialize_scenario(r.model));
    Json muts = Json::array();
    for (const Mutation& m : r.mutations) muts.push_back(m.to_string());
    mutants.push_back({{"mutant_id", r.mutant_id},
                       {"order", r.order()},
                       {"digest", r.digest},
                       {"mutations", muts},
                       {"file", file}});
  }
  manifest["mutants"] = mutants;
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

std::vector<MutantRecord> read_corpus(const std::filesystem::path& dir) {
  Json manifest;
  try {
    manifest = Json::parse(read_file(dir / "manifest.json"));
  } catch (const Json::exception& e) {
    throw ConfigError("malformed manifest in " + dir.string() + ": " +
                      e.what());
  }
  std::vector<MutantRecord> out;
  try {
    for (const Json& m : manifest.at("mutants")) {
      MutantRecord r;
      r.mutant_id = m.at("mutant_id").get<std::string>();
      r.digest = m.at("digest").get<std::string>();
      for (const Json& text : m.at("mutations")) {
        r.mutations.push_back(Mutation::parse(text.get<std::string>()));
      }
      r.model = load_scenario_file(dir / m.at("file").get<std::string>());
      out.push_back(std::move(r));
    }
  } catch (const Json::exception& e) {
    throw ConfigError("malformed manifest in " + dir.string() + ": " +
                      e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError("malformed mutation in manifest: " +
                      std::string(e.what()));
  }
  return out;
}

}  // namespace mbst
