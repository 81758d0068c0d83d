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

#include "mbst/trace_expansion.h"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>

#include "mbst/errors.h"
#include "mbst/text_util.h"

namespace mbst {
namespace {

struct Var {
  long event = -1;  // -1 when the setting message produced no event
  std::string flag;
  std::optional<bool> value;
};

struct PathState {
  std::vector<MessageEvent> events;
  std::vector<std::string> elements;
  std::vector<Var> vars;
  std::map<std::string, std::size_t> flag_var;
};

using Cont = std::function<void(PathState)>;

class Expander {
 public:
  Expander(const ScenarioModel& model, const ExpansionConfig& cfg)
      : model_(model), cfg_(cfg) {}

  std::vector<PathState> Run() {
    Walk(model_.body, 0, PathState{}, [this](PathState st) {
      if (done_.size() > cfg_.max_traces_per_model) return;
      done_.push_back(std::move(st));
    });
    return std::move(done_);
  }

 private:
  bool Stopped() const { return done_.size() > cfg_.max_traces_per_model; }

  // Continues with every assignment of the guard's still-open flags that
  // makes it evaluate to `required`, false-first.
  void Check(const Guard& guard, bool required, PathState st, const Cont& k) {
    if (Stopped()) return;
    std::set<std::string> flags;
    guard.collect_flags(flags);
    std::vector<std::size_t> open;
    for (const std::string& f : flags) {
      auto it = st.flag_var.find(f);
      if (it != st.flag_var.end() && !st.vars[it->second].value) {
        open.push_back(it->second);
      }
    }
    for (std::size_t mask = 0; mask < (std::size_t{1} << open.size()); ++mask) {
      PathState next = st;
      for (std::size_t b = 0; b < open.size(); ++b) {
        next.vars[open[b]].value = ((mask >> b) & 1) != 0;
      }
      bool result = guard.evaluate([&](const std::string& f) {
        auto it = next.flag_var.find(f);
        return it != next.flag_var.end() && *next.vars[it->second].value;
      });
      if (result == required) k(std::move(next));
      if (Stopped()) return;
    }
  }

  void Walk(const std::vector<Element>& body, std::size_t i, PathState st,
            const Cont& k) {
    if (Stopped()) return;
    if (i == body.size()) {
      k(std::move(st));
      return;
    }
    Cont rest = [this, &body, i, &k](PathState s) {
      Walk(body, i + 1, std::move(s), k);
    };
    const Element& e = body[i];
    if (e.is_message()) {
      const Message& m = e.message();
      Check(m.requires_flags, true, std::move(st),
            [this, &m, &rest](PathState s) {
              Emit(m, s);
              rest(std::move(s));
            });
      return;
    }
    const CombinedFragment& f = e.fragment();
    switch (f.kind) {
      case FragmentKind::kLoop:
        WalkLoop(f, std::move(st), rest);
        break;
      case FragmentKind::kOpt: {
        const Operand& op = f.operands[0];
        Guard g = Effective(op.constraint);
        Check(g, true, st, [this, &f, &op, &rest](PathState s) {
          s.elements.push_back(f.id);
          Walk(op.body, 0, std::move(s), rest);
        });
        Check(g, false, std::move(st), rest);
        break;
      }
      case FragmentKind::kAlt: {
        std::size_t n = cfg_.alt_policy == AltPolicy::kFirst
                            ? 1
                            : f.operands.size();
        for (std::size_t k2 = 0; k2 < n; ++k2) {
          const Operand& op = f.operands[k2];
          Check(Effective(op.constraint), true, st,
                [this, &f, &op, &rest](PathState s) {
                  s.elements.push_back(f.id);
                  Walk(op.body, 0, std::move(s), rest);
                });
        }
        break;
      }
    }
  }

  static Guard Effective(const InteractionConstraint& c) {
    return c.negated ? Guard::Not(c.guard) : c.guard;
  }

  std::vector<int> LoopCounts(const InteractionConstraint& c) const {
    const int cap = cfg_.loop_unroll_cap;
    std::vector<int> counts;
    if (!c.negated) {
      int hi = std::max(c.min_iter, cap);
      if (c.max_iter) hi = std::min(*c.max_iter, hi);
      for (int n = c.min_iter; n <= hi; ++n) counts.push_back(n);
      return counts;
    }
    for (int n = 0; n < c.min_iter; ++n) counts.push_back(n);
    if (c.max_iter) {
      for (int n = *c.max_iter + 1; n <= *c.max_iter + cap; ++n) {
        counts.push_back(n);
      }
    }
    if (counts.empty()) {
      if (c.guard.is_true()) {
        counts.push_back(0);
      } else {
        for (int n = 1; n <= cap; ++n) counts.push_back(n);
      }
    }
    return counts;
  }

  void WalkLoop(const CombinedFragment& f, PathState st, const Cont& k) {
    const Operand& op = f.operands[0];
    const InteractionConstraint& c = op.constraint;
    std::vector<int> counts = LoopCounts(c);
    const int hi = counts.empty() ? 0 : counts.back();
    const bool checks = !c.guard.is_true();
    for (int n : counts) {
      Iterate(f, n, 1, hi, checks, st, k);
      if (Stopped()) return;
    }
  }

  void Iterate(const CombinedFragment& f, int n, int i, int hi, bool checks,
               PathState st, const Cont& k) {
    const Operand& op = f.operands[0];
    const InteractionConstraint& c = op.constraint;
    if (i > n) {
      if (checks && !c.negated && n < hi) {
        Check(c.guard, false, std::move(st), k);
      } else {
        k(std::move(st));
      }
      return;
    }
    Cont body = [this, &f, &op, n, i, hi, checks, &k](PathState s) {
      if (i == 1) s.elements.push_back(f.id);
      Walk(op.body, 0, std::move(s), [this, &f, n, i, hi, checks,
                                      &k](PathState s2) {
        Iterate(f, n, i + 1, hi, checks, std::move(s2), k);
      });
    };
    if (checks && c.negated) {
      Check(Guard::Not(c.guard), true, std::move(st), body);
    } else if (checks && i > c.min_iter) {
      Check(c.guard, true, std::move(st), body);
    } else {
      body(std::move(st));
    }
  }

  void Emit(const Message& m, PathState& st) {
    st.elements.push_back(m.id);
    long event = -1;
    const Lifeline* to = model_.find_lifeline(m.receiver);
    const Lifeline* from = model_.find_lifeline(m.sender);
    std::optional<Direction> dir;
    if (to && to->role == LifelineRole::kSut) {
      dir = Direction::kToSut;
    } else if (from && from->role == LifelineRole::kSut) {
      dir = Direction::kFromSut;
    }
    if (dir) {
      MessageEvent ev{m.id, m.signature, *dir, {}};
      for (const Param& p : m.params) {
        ev.args.push_back({p.name, p.type, p.domain, p.fuzz_value, {}});
      }
      event = static_cast<long>(st.events.size());
      st.events.push_back(std::move(ev));
    }
    for (const std::string& f : m.sets_flags) {
      st.vars.push_back({event, f, std::nullopt});
      st.flag_var[f] = st.vars.size() - 1;
    }
  }

  const ScenarioModel& model_;
  const ExpansionConfig& cfg_;
  std::vector<PathState> done_;
};

std::string TraceId(std::string_view origin, std::size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%03zu", n);
  return std::string(origin) + "-t" + buf;
}

Trace Finish(PathState st, std::string_view origin, std::size_t n) {
  Trace t;
  t.trace_id = TraceId(origin, n);
  t.origin = std::string(origin);
  t.elements = std::move(st.elements);
  t.events = std::move(st.events);
  for (const Var& v : st.vars) {
    if (v.event < 0) continue;
    t.constraints.push_back({static_cast<std::size_t>(v.event), v.flag,
                             v.value.value_or(true)});
  }
  std::stable_sort(t.constraints.begin(), t.constraints.end(),
                   [](const OutcomeConstraint& a, const OutcomeConstraint& b) {
                     return a.event_index < b.event_index;
                   });
  return t;
}

}  // namespace

std::string_view to_string(Direction d) {
  return d == Direction::kToSut ? "TO_SUT" : "FROM_SUT";
}

std::string_view to_string(AltPolicy p) {
  return p == AltPolicy::kFirst ? "FIRST" : "ALL_BRANCHES";
}

std::optional<AltPolicy> alt_policy_from_string(std::string_view s) {
  if (s == "ALL_BRANCHES" || s == "all") return AltPolicy::kAllBranches;
  if (s == "FIRST" || s == "first") return AltPolicy::kFirst;
  return std::nullopt;
}

std::size_t Trace::count_constraints(std::string_view flag, bool value) const {
  return static_cast<std::size_t>(
      std::count_if(constraints.begin(), constraints.end(),
                    [&](const OutcomeConstraint& c) {
                      return c.flag == flag && c.value == value;
                    }));
}

ExpansionResult expand_traces(const ScenarioModel& model,
                              const ExpansionConfig& cfg,
                              std::string_view origin) {
  if (cfg.loop_unroll_cap < 1) {
    throw ConfigError("loop unroll cap must be at least 1");
  }
  if (cfg.max_traces_per_model < 1) {
    throw ConfigError("max traces per model must be at least 1");
  }
  std::vector<PathState> paths = Expander(model, cfg).Run();
  ExpansionResult result;
  if (paths.size() > cfg.max_traces_per_model) {
    result.overflow = true;
    paths.resize(cfg.max_traces_per_model);
  }
  for (std::size_t n = 0; n < paths.size(); ++n) {
    result.traces.push_back(Finish(std::move(paths[n]), origin, n + 1));
  }
  return result;
}

Trace assign_test_data(const Trace& trace, const InvalidValueCatalog& catalog,
                       DataMode mode) {
  Trace out = trace;
  std::mt19937_64 rng(fnv1a64(trace.trace_id));
  for (std::size_t i = 0; i < out.events.size(); ++i) {
    MessageEvent& ev = out.events[i];
    std::map<std::string, bool> flags;
    bool invalid = false;
    for (const OutcomeConstraint& c : trace.constraints) {
      if (c.event_index != i) continue;
      auto [it, fresh] = flags.emplace(c.flag, c.value);
      if (!fresh && it->second != c.value) {
        throw UnsatisfiableConstraint("event " + std::to_string(i) + " of " +
                                      trace.trace_id + " needs flag '" +
                                      c.flag + "' both true and false");
      }
      if (!c.value) invalid = true;
    }
    if (ev.direction != Direction::kToSut) continue;
    for (EventArg& a : ev.args) {
      if (mode == DataMode::kApplyFuzzParams && a.fuzz_value) {
        a.value = a.fuzz_value;
        continue;
      }
      if (!invalid) {
        a.value = a.domain.sample(rng);
        continue;
      }
      Param p{a.name, a.type, a.domain, std::nullopt};
      std::vector<std::size_t> bad = catalog.violating_indices(p);
      if (bad.empty()) {
        throw UnsatisfiableConstraint("no catalog value violates " +
                                      a.domain.to_string() + " for " + a.name +
                                      " in " + trace.trace_id);
      }
      a.value = catalog.entries(a.type)[bad[rng() % bad.size()]];
    }
  }
  return out;
}

std::string serialize_trace(const Trace& trace) {
  std::string s = "trace " + trace.trace_id + "\n";
  s += "origin " + trace.origin + "\n";
  s += "elements";
  for (const std::string& e : trace.elements) s += " " + e;
  s += "\n";
  for (const MessageEvent& ev : trace.events) {
    s += "event " + std::string(to_string(ev.direction)) + " " + ev.source_id +
         " " + ev.signature + "\n";
    for (const EventArg& a : ev.args) {
      s += "  arg " + a.name + " " + std::string(to_string(a.type)) + " " +
           a.domain.to_string();
      if (a.value) s += " value=" + percent_encode(*a.value);
      if (a.fuzz_value) s += " fuzz=" + percent_encode(*a.fuzz_value);
      s += "\n";
    }
  }
  for (const OutcomeConstraint& c : trace.constraints) {
    s += "constraint " + std::to_string(c.event_index) + " " + c.flag + " " +
         (c.value ? "true" : "false") + "\n";
  }
  return s;
}

Trace parse_trace(std::string_view text) {
  Trace t;
  t.origin.clear();
  int line_no = 0;
  auto fail = [&](const std::string& msg) -> ConfigError {
    return ConfigError("trace line " + std::to_string(line_no) + ": " + msg);
  };
  for (const std::string& raw : split(text, '\n')) {
    ++line_no;
    std::vector<std::string> w = split_whitespace(raw);
    if (w.empty()) continue;
    const std::string& kw = w[0];
    if (kw == "trace" && w.size() == 2) {
      t.trace_id = w[1];
    } else if (kw == "origin" && w.size() == 2) {
      t.origin = w[1];
    } else if (kw == "elements") {
      t.elements.assign(w.begin() + 1, w.end());
    } else if (kw == "event" && w.size() == 4) {
      MessageEvent ev;
      if (w[1] == "TO_SUT") {
        ev.direction = Direction::kToSut;
      } else if (w[1] == "FROM_SUT") {
        ev.direction = Direction::kFromSut;
      } else {
        throw fail("unknown direction " + w[1]);
      }
      ev.source_id = w[2];
      ev.signature = w[3];
      t.events.push_back(std::move(ev));
    } else if (kw == "arg" && w.size() >= 4) {
      if (t.events.empty()) throw fail("arg before any event");
      EventArg a;
      a.name = w[1];
      auto tag = type_tag_from_string(w[2]);
      if (!tag) throw fail("unknown type " + w[2]);
      a.type = *tag;
      try {
        a.domain = ValueDomain::Parse(w[3]);
      } catch (const std::invalid_argument& e) {
        throw fail(e.what());
      }
      for (std::size_t j = 4; j < w.size(); ++j) {
        if (starts_with(w[j], "value=")) {
          a.value = percent_decode(w[j].substr(6));
        } else if (starts_with(w[j], "fuzz=")) {
          a.fuzz_value = percent_decode(w[j].substr(5));
        } else {
          throw fail("unexpected '" + w[j] + "'");
        }
      }
      t.events.back().args.push_back(std::move(a));
    } else if (kw == "constraint" && w.size() == 4) {
      OutcomeConstraint c;
      try {
        c.event_index = std::stoul(w[1]);
      } catch (const std::exception&) {
        throw fail("bad event index " + w[1]);
      }
      if (c.event_index >= t.events.size()) {
        throw fail("constraint on missing event " + w[1]);
      }
      c.flag = w[2];
      if (w[3] != "true" && w[3] != "false") throw fail("bad flag value");
      c.value = w[3] == "true";
      t.constraints.push_back(std::move(c));
    } else {
      throw fail("cannot read '" + std::string(trim(raw)) + "'");
    }
  }
  if (t.trace_id.empty()) throw ConfigError("trace file has no 'trace' line");
  if (t.origin.empty()) t.origin = std::string(kBaselineOrigin);
  return t;
}

}  // namespace mbst
