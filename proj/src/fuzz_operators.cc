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

#include "mbst/fuzz_operators.h"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "mbst/errors.h"
#include "mbst/text_util.h"

namespace mbst {
namespace {

struct MessageLocation {
  std::string scope;
  std::size_t index = 0;
};

struct ScopeVisit {
  std::string scope;
  const std::vector<Element>* body;
};

// Pre-order list of every sequence in the model with its scope id.
void CollectScopes(const std::vector<Element>& body, const std::string& scope,
                   std::vector<ScopeVisit>& out) {
  out.push_back({scope, &body});
  for (const Element& e : body) {
    if (e.is_message()) continue;
    const CombinedFragment& f = e.fragment();
    for (std::size_t k = 0; k < f.operands.size(); ++k) {
      CollectScopes(f.operands[k].body, operand_scope_id(f.id, k), out);
    }
  }
}

std::vector<Element>* FindScope(std::vector<Element>& body,
                                std::string_view scope) {
  if (scope.empty()) return &body;
  auto slash = scope.rfind('/');
  if (slash == std::string_view::npos) return nullptr;
  std::string_view frag = scope.substr(0, slash);
  std::size_t k = 0;
  try {
    k = std::stoul(std::string(scope.substr(slash + 1)));
  } catch (const std::exception&) {
    return nullptr;
  }
  for (Element& e : body) {
    if (e.is_message()) continue;
    CombinedFragment& f = e.fragment();
    if (f.id == frag) {
      return k < f.operands.size() ? &f.operands[k].body : nullptr;
    }
    for (Operand& op : f.operands) {
      if (auto* found = FindScope(op.body, scope)) return found;
    }
  }
  return nullptr;
}

Operand* FindOperand(std::vector<Element>& body, std::string_view scope) {
  auto slash = scope.rfind('/');
  if (slash == std::string_view::npos) return nullptr;
  std::string_view frag = scope.substr(0, slash);
  std::size_t k = 0;
  try {
    k = std::stoul(std::string(scope.substr(slash + 1)));
  } catch (const std::exception&) {
    return nullptr;
  }
  for (Element& e : body) {
    if (e.is_message()) continue;
    CombinedFragment& f = e.fragment();
    if (f.id == frag) return k < f.operands.size() ? &f.operands[k] : nullptr;
    for (Operand& op : f.operands) {
      if (auto* found = FindOperand(op.body, scope)) return found;
    }
  }
  return nullptr;
}

bool FindMessageIn(const std::vector<Element>& body, const std::string& scope,
                   std::string_view id, MessageLocation& loc) {
  for (std::size_t i = 0; i < body.size(); ++i) {
    const Element& e = body[i];
    if (e.is_message()) {
      if (e.message().id == id) {
        loc = {scope, i};
        return true;
      }
      continue;
    }
    const CombinedFragment& f = e.fragment();
    for (std::size_t k = 0; k < f.operands.size(); ++k) {
      if (FindMessageIn(f.operands[k].body, operand_scope_id(f.id, k), id,
                        loc)) {
        return true;
      }
    }
  }
  return false;
}

std::optional<MessageLocation> FindMessage(const ScenarioModel& model,
                                           std::string_view id) {
  MessageLocation loc;
  if (FindMessageIn(model.body, "", id, loc)) return loc;
  return std::nullopt;
}

const Message* FindMessagePtr(const ScenarioModel& model, std::string_view id) {
  const Message* found = nullptr;
  for_each_message(model, [&](const Message& m) {
    if (!found && m.id == id) found = &m;
  });
  return found;
}

// Drops emptied operands and fragments; an ALT reduced to a single operand
// is the same choice as an OPT over that operand.
void Prune(std::vector<Element>& body) {
  for (auto it = body.begin(); it != body.end();) {
    if (it->is_message()) {
      ++it;
      continue;
    }
    CombinedFragment& f = it->fragment();
    for (Operand& op : f.operands) Prune(op.body);
    f.operands.erase(
        std::remove_if(f.operands.begin(), f.operands.end(),
                       [](const Operand& op) { return op.body.empty(); }),
        f.operands.end());
    if (f.operands.empty()) {
      it = body.erase(it);
      continue;
    }
    if (f.kind == FragmentKind::kAlt && f.operands.size() == 1) {
      f.kind = FragmentKind::kOpt;
    }
    ++it;
  }
}

std::set<std::string> AllIds(const ScenarioModel& model) {
  std::set<std::string> ids;
  for_each_message(model, [&](const Message& m) { ids.insert(m.id); });
  for_each_fragment(model,
                    [&](const CombinedFragment& f) { ids.insert(f.id); });
  return ids;
}

std::string FreshId(std::set<std::string>& taken, const std::string& base,
                    std::string_view tag) {
  for (int k = 1;; ++k) {
    std::string candidate = base + "_" + std::string(tag) + std::to_string(k);
    if (taken.insert(candidate).second) return candidate;
  }
}

void MarkMutant(ScenarioModel& model, const std::string& base_name) {
  model.annotations.emplace(std::string(kMutantOfAnnotation), base_name);
}

std::string BaseName(const ScenarioModel& model) {
  auto it = model.annotations.find(std::string(kMutantOfAnnotation));
  return it == model.annotations.end() ? model.name : it->second;
}

std::string PositionText(const Position& p) {
  return (p.scope.empty() ? std::string("top") : p.scope) + ":" +
         std::to_string(p.index);
}

Position ParsePosition(std::string_view text) {
  auto colon = text.rfind(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("position must be <scope>:<index>");
  }
  Position p;
  std::string_view scope = text.substr(0, colon);
  p.scope = scope == "top" ? "" : std::string(scope);
  p.index = std::stoul(std::string(text.substr(colon + 1)));
  return p;
}

template <typename T>
const T& DetailAs(const Mutation& m) {
  const T* d = std::get_if<T>(&m.detail);
  if (d == nullptr) {
    throw IncompatibleDetail("mutation " + m.to_string() +
                             " carries a detail of the wrong kind");
  }
  return *d;
}

std::pair<std::string, std::string> SplitParamLocus(std::string_view locus) {
  auto dot = locus.find('.');
  if (dot == std::string_view::npos) return {std::string(locus), ""};
  return {std::string(locus.substr(0, dot)),
          std::string(locus.substr(dot + 1))};
}

Message& MessageAt(ScenarioModel& model, const MessageLocation& loc) {
  return (*FindScope(model.body, loc.scope))[loc.index].message();
}

// --- enumeration -----------------------------------------------------------

void EnumerateMessages(
    const std::vector<Element>& body, const std::string& scope,
    const std::function<void(const Message&, const std::string&, std::size_t)>&
        fn) {
  for (std::size_t i = 0; i < body.size(); ++i) {
    const Element& e = body[i];
    if (e.is_message()) {
      fn(e.message(), scope, i);
      continue;
    }
    const CombinedFragment& f = e.fragment();
    for (std::size_t k = 0; k < f.operands.size(); ++k) {
      EnumerateMessages(f.operands[k].body, operand_scope_id(f.id, k), fn);
    }
  }
}

std::vector<Mutation> EnumerateMove(const ScenarioModel& model) {
  std::vector<Mutation> out;
  EnumerateMessages(
      model.body, "",
      [&](const Message& m, const std::string& scope, std::size_t index) {
        ScenarioModel copy = model;
        std::vector<Element>* seq = FindScope(copy.body, scope);
        std::size_t len = seq->size();
        for (std::size_t t = 0; t < len; ++t) {
          if (t == index) continue;
          out.push_back({FuzzOperatorKind::kMoveMessage, m.id,
                         MoveDetail{{scope, t}}});
        }
        if (scope.empty()) return;
        seq->erase(seq->begin() + static_cast<std::ptrdiff_t>(index));
        Prune(copy.body);
        for (std::size_t t = 0; t <= copy.body.size(); ++t) {
          out.push_back(
              {FuzzOperatorKind::kMoveMessage, m.id, MoveDetail{{"", t}}});
        }
      });
  return out;
}

std::vector<Mutation> EnumerateSimple(const ScenarioModel& model,
                                      FuzzOperatorKind kind) {
  std::vector<Mutation> out;
  for_each_message(model, [&](const Message& m) {
    if (kind == FuzzOperatorKind::kRepeatMessage) {
      out.push_back({kind, m.id, RepeatDetail{1}});
    } else {
      out.push_back({kind, m.id, std::monostate{}});
    }
  });
  return out;
}

std::vector<Mutation> EnumerateInsert(const ScenarioModel& model) {
  std::vector<Mutation> out;
  std::vector<ScopeVisit> scopes;
  CollectScopes(model.body, "", scopes);
  for (const std::string& sig : distinct_signatures(model)) {
    const Message* templ = nullptr;
    for_each_message(model, [&](const Message& m) {
      if (!templ && m.signature == sig) templ = &m;
    });
    for (const ScopeVisit& s : scopes) {
      for (std::size_t t = 0; t <= s.body->size(); ++t) {
        out.push_back({FuzzOperatorKind::kInsertMessage, templ->id,
                       InsertDetail{{s.scope, t}}});
      }
    }
  }
  return out;
}

std::vector<Mutation> EnumerateChange(const ScenarioModel& model) {
  std::vector<Mutation> out;
  std::vector<std::string> sigs = distinct_signatures(model);
  for_each_message(model, [&](const Message& m) {
    for (const std::string& sig : sigs) {
      if (sig == m.signature) continue;
      out.push_back(
          {FuzzOperatorKind::kChangeMessageType, m.id, ChangeDetail{sig}});
    }
  });
  return out;
}

std::vector<Mutation> EnumerateNegate(const ScenarioModel& model) {
  std::vector<Mutation> out;
  for_each_fragment(model, [&](const CombinedFragment& f) {
    for (std::size_t k = 0; k < f.operands.size(); ++k) {
      out.push_back({FuzzOperatorKind::kNegateConstraint,
                     operand_scope_id(f.id, k), std::monostate{}});
    }
  });
  return out;
}

std::vector<Mutation> EnumerateFuzz(const ScenarioModel& model,
                                    const InvalidValueCatalog& catalog) {
  std::vector<Mutation> out;
  for_each_message(model, [&](const Message& m) {
    for (const Param& p : m.params) {
      const auto& entries = catalog.entries(p.type);
      for (std::size_t i : catalog.violating_indices(p)) {
        if (p.fuzz_value && *p.fuzz_value == entries[i]) continue;
        out.push_back({FuzzOperatorKind::kFuzzParameter, m.id + "." + p.name,
                       FuzzDetail{i}});
      }
    }
  });
  return out;
}

// --- application -----------------------------------------------------------

ScenarioModel ApplyMove(const ScenarioModel& model, const Mutation& mu,
                        const MessageLocation& loc) {
  const MoveDetail& d = DetailAs<MoveDetail>(mu);
  if (d.target.scope != loc.scope && !d.target.scope.empty()) {
    throw IncompatibleDetail("MOVE target " + PositionText(d.target) +
                             " is neither the message's own scope nor top");
  }
  if (d.target.scope == loc.scope && d.target.index == loc.index) {
    throw IncompatibleDetail("MOVE to the message's current position");
  }
  ScenarioModel out = model;
  std::vector<Element>* src = FindScope(out.body, loc.scope);
  Element moved = std::move((*src)[loc.index]);
  src->erase(src->begin() + static_cast<std::ptrdiff_t>(loc.index));
  if (d.target.scope != loc.scope) Prune(out.body);
  std::vector<Element>* dst = FindScope(out.body, d.target.scope);
  if (dst == nullptr || d.target.index > dst->size()) {
    throw IncompatibleDetail("MOVE target " + PositionText(d.target) +
                             " is out of range");
  }
  dst->insert(dst->begin() + static_cast<std::ptrdiff_t>(d.target.index),
              std::move(moved));
  return out;
}

ScenarioModel ApplyRemove(const ScenarioModel& model,
                          const MessageLocation& loc) {
  ScenarioModel out = model;
  std::vector<Element>* src = FindScope(out.body, loc.scope);
  src->erase(src->begin() + static_cast<std::ptrdiff_t>(loc.index));
  Prune(out.body);
  return out;
}

ScenarioModel ApplyRepeat(const ScenarioModel& model, const Mutation& mu,
                          const MessageLocation& loc) {
  const RepeatDetail& d = DetailAs<RepeatDetail>(mu);
  if (d.copies < 1) throw IncompatibleDetail("REPEAT needs at least one copy");
  ScenarioModel out = model;
  std::set<std::string> taken = AllIds(out);
  std::vector<Element>* seq = FindScope(out.body, loc.scope);
  Message original = (*seq)[loc.index].message();
  for (int c = 0; c < d.copies; ++c) {
    Message copy = original;
    copy.id = FreshId(taken, original.id, "r");
    seq->insert(seq->begin() + static_cast<std::ptrdiff_t>(loc.index) + 1 + c,
                Element(std::move(copy)));
  }
  return out;
}

ScenarioModel ApplyInsert(const ScenarioModel& model, const Mutation& mu,
                          const Message& templ) {
  const InsertDetail& d = DetailAs<InsertDetail>(mu);
  ScenarioModel out = model;
  std::vector<Element>* dst = FindScope(out.body, d.target.scope);
  if (dst == nullptr || d.target.index > dst->size()) {
    throw IncompatibleDetail("INSERT target " + PositionText(d.target) +
                             " does not exist");
  }
  std::set<std::string> taken = AllIds(out);
  Message copy = templ;
  copy.id = FreshId(taken, templ.id, "i");
  dst->insert(dst->begin() + static_cast<std::ptrdiff_t>(d.target.index),
              Element(std::move(copy)));
  return out;
}

ScenarioModel ApplyChange(const ScenarioModel& model, const Mutation& mu,
                          const MessageLocation& loc) {
  const ChangeDetail& d = DetailAs<ChangeDetail>(mu);
  const Message* templ = nullptr;
  for_each_message(model, [&](const Message& m) {
    if (!templ && m.signature == d.signature) templ = &m;
  });
  if (templ == nullptr) {
    throw IncompatibleDetail("CHANGE to signature '" + d.signature +
                             "' which the model does not use");
  }
  ScenarioModel out = model;
  Message& m = MessageAt(out, loc);
  if (m.signature == d.signature) {
    throw IncompatibleDetail("CHANGE to the message's current signature");
  }
  // Keep the message's arity: take the template's parameters position by
  // position and fall back to the original ones where the template is short.
  std::vector<Param> params;
  for (std::size_t i = 0; i < m.params.size(); ++i) {
    params.push_back(i < templ->params.size() ? templ->params[i]
                                              : m.params[i]);
  }
  m.signature = templ->signature;
  m.sets_flags = templ->sets_flags;
  m.params = std::move(params);
  return out;
}

ScenarioModel ApplyNegate(const ScenarioModel& model, const Mutation& mu) {
  ScenarioModel out = model;
  Operand* op = FindOperand(out.body, mu.locus);
  if (op == nullptr) throw LocusNotFound(mu.locus);
  if (!std::holds_alternative<std::monostate>(mu.detail)) {
    throw IncompatibleDetail("NEGATE_CONSTRAINT takes no detail");
  }
  op->constraint.negated = !op->constraint.negated;
  return out;
}

ScenarioModel ApplyFuzz(const ScenarioModel& model, const Mutation& mu,
                        const InvalidValueCatalog& catalog) {
  const FuzzDetail& d = DetailAs<FuzzDetail>(mu);
  auto [msg_id, param_name] = SplitParamLocus(mu.locus);
  auto loc = FindMessage(model, msg_id);
  if (!loc) throw LocusNotFound(mu.locus);
  ScenarioModel out = model;
  Message& m = MessageAt(out, *loc);
  auto it = std::find_if(m.params.begin(), m.params.end(),
                         [&](const Param& p) { return p.name == param_name; });
  if (it == m.params.end()) throw LocusNotFound(mu.locus);
  const auto& entries = catalog.entries(it->type);
  if (d.selector >= entries.size()) {
    throw IncompatibleDetail("catalog has no entry " +
                             std::to_string(d.selector) + " for " +
                             std::string(to_string(it->type)));
  }
  const std::string& value = entries[d.selector];
  if (it->domain.contains(value)) {
    throw IncompatibleDetail("catalog entry '" + value +
                             "' is valid for parameter " + mu.locus);
  }
  if (it->fuzz_value == value) {
    throw IncompatibleDetail("parameter " + mu.locus +
                             " already carries that value");
  }
  it->fuzz_value = value;
  return out;
}

}  // namespace

std::string_view to_string(FuzzOperatorKind kind) {
  switch (kind) {
    case FuzzOperatorKind::kMoveMessage:
      return "MOVE_MESSAGE";
    case FuzzOperatorKind::kRemoveMessage:
      return "REMOVE_MESSAGE";
    case FuzzOperatorKind::kRepeatMessage:
      return "REPEAT_MESSAGE";
    case FuzzOperatorKind::kInsertMessage:
      return "INSERT_MESSAGE";
    case FuzzOperatorKind::kChangeMessageType:
      return "CHANGE_MESSAGE_TYPE";
    case FuzzOperatorKind::kNegateConstraint:
      return "NEGATE_CONSTRAINT";
    case FuzzOperatorKind::kFuzzParameter:
      return "FUZZ_PARAMETER";
  }
  return "REMOVE_MESSAGE";
}

std::optional<FuzzOperatorKind> operator_kind_from_string(std::string_view s) {
  static const std::pair<std::string_view, FuzzOperatorKind> kShort[] = {
      {"move", FuzzOperatorKind::kMoveMessage},
      {"remove", FuzzOperatorKind::kRemoveMessage},
      {"repeat", FuzzOperatorKind::kRepeatMessage},
      {"insert", FuzzOperatorKind::kInsertMessage},
      {"change", FuzzOperatorKind::kChangeMessageType},
      {"negate", FuzzOperatorKind::kNegateConstraint},
      {"fuzz", FuzzOperatorKind::kFuzzParameter},
  };
  for (const auto& [name, kind] : kShort) {
    if (s == name || s == to_string(kind)) return kind;
  }
  return std::nullopt;
}

const std::vector<FuzzOperatorKind>& all_operator_kinds() {
  static const std::vector<FuzzOperatorKind> kAll = {
      FuzzOperatorKind::kMoveMessage,       FuzzOperatorKind::kRemoveMessage,
      FuzzOperatorKind::kRepeatMessage,     FuzzOperatorKind::kInsertMessage,
      FuzzOperatorKind::kChangeMessageType, FuzzOperatorKind::kNegateConstraint,
      FuzzOperatorKind::kFuzzParameter,
  };
  return kAll;
}

std::string Mutation::to_string() const {
  std::string s = std::string(mbst::to_string(kind)) + " " + locus;
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, MoveDetail>) {
          s += " to=" + PositionText(d.target);
        } else if constexpr (std::is_same_v<T, RepeatDetail>) {
          s += " copies=" + std::to_string(d.copies);
        } else if constexpr (std::is_same_v<T, InsertDetail>) {
          s += " at=" + PositionText(d.target);
        } else if constexpr (std::is_same_v<T, ChangeDetail>) {
          s += " signature=" + d.signature;
        } else if constexpr (std::is_same_v<T, FuzzDetail>) {
          s += " value=" + std::to_string(d.selector);
        }
      },
      detail);
  return s;
}

Mutation Mutation::parse(std::string_view text) {
  std::vector<std::string> parts = split_whitespace(text);
  if (parts.size() < 2 || parts.size() > 3) {
    throw std::invalid_argument("mutation must be '<KIND> <locus> [detail]': " +
                                std::string(text));
  }
  auto kind = operator_kind_from_string(parts[0]);
  if (!kind) throw std::invalid_argument("unknown operator " + parts[0]);
  Mutation m{*kind, parts[1], std::monostate{}};
  if (parts.size() == 2) {
    if (*kind == FuzzOperatorKind::kRemoveMessage ||
        *kind == FuzzOperatorKind::kNegateConstraint) {
      return m;
    }
    throw std::invalid_argument("mutation " + parts[0] + " needs a detail");
  }
  const std::string& detail = parts[2];
  auto eq = detail.find('=');
  if (eq == std::string::npos) {
    throw std::invalid_argument("detail must be key=value: " + detail);
  }
  std::string key = detail.substr(0, eq);
  std::string value = detail.substr(eq + 1);
  switch (*kind) {
    case FuzzOperatorKind::kMoveMessage:
      if (key != "to") break;
      m.detail = MoveDetail{ParsePosition(value)};
      return m;
    case FuzzOperatorKind::kRepeatMessage:
      if (key != "copies") break;
      m.detail = RepeatDetail{std::stoi(value)};
      return m;
    case FuzzOperatorKind::kInsertMessage:
      if (key != "at") break;
      m.detail = InsertDetail{ParsePosition(value)};
      return m;
    case FuzzOperatorKind::kChangeMessageType:
      if (key != "signature") break;
      m.detail = ChangeDetail{value};
      return m;
    case FuzzOperatorKind::kFuzzParameter:
      if (key != "value") break;
      m.detail = FuzzDetail{std::stoul(value)};
      return m;
    default:
      break;
  }
  throw std::invalid_argument("detail '" + key + "' does not fit " + parts[0]);
}

std::string Mutation::element_id() const {
  switch (kind) {
    case FuzzOperatorKind::kNegateConstraint:
      return locus.substr(0, locus.rfind('/'));
    case FuzzOperatorKind::kFuzzParameter:
      return locus.substr(0, locus.find('.'));
    default:
      return locus;
  }
}

std::vector<Mutation> enumerate_applications(
    const ScenarioModel& model, FuzzOperatorKind kind,
    const InvalidValueCatalog& catalog) {
  switch (kind) {
    case FuzzOperatorKind::kMoveMessage:
      return EnumerateMove(model);
    case FuzzOperatorKind::kRemoveMessage:
    case FuzzOperatorKind::kRepeatMessage:
      return EnumerateSimple(model, kind);
    case FuzzOperatorKind::kInsertMessage:
      return EnumerateInsert(model);
    case FuzzOperatorKind::kChangeMessageType:
      return EnumerateChange(model);
    case FuzzOperatorKind::kNegateConstraint:
      return EnumerateNegate(model);
    case FuzzOperatorKind::kFuzzParameter:
      return EnumerateFuzz(model, catalog);
  }
  return {};
}

ScenarioModel apply_mutation(const ScenarioModel& model,
                             const Mutation& mutation,
                             const InvalidValueCatalog& catalog) {
  ScenarioModel out;
  switch (mutation.kind) {
    case FuzzOperatorKind::kNegateConstraint:
      out = ApplyNegate(model, mutation);
      break;
    case FuzzOperatorKind::kFuzzParameter:
      out = ApplyFuzz(model, mutation, catalog);
      break;
    case FuzzOperatorKind::kInsertMessage: {
      const Message* templ = FindMessagePtr(model, mutation.locus);
      if (templ == nullptr) throw LocusNotFound(mutation.locus);
      out = ApplyInsert(model, mutation, *templ);
      break;
    }
    default: {
      auto loc = FindMessage(model, mutation.locus);
      if (!loc) throw LocusNotFound(mutation.locus);
      switch (mutation.kind) {
        case FuzzOperatorKind::kMoveMessage:
          out = ApplyMove(model, mutation, *loc);
          break;
        case FuzzOperatorKind::kRemoveMessage:
          if (!std::holds_alternative<std::monostate>(mutation.detail)) {
            throw IncompatibleDetail("REMOVE_MESSAGE takes no detail");
          }
          out = ApplyRemove(model, *loc);
          break;
        case FuzzOperatorKind::kRepeatMessage:
          out = ApplyRepeat(model, mutation, *loc);
          break;
        case FuzzOperatorKind::kChangeMessageType:
          out = ApplyChange(model, mutation, *loc);
          break;
        default:
          break;
      }
    }
  }
  MarkMutant(out, BaseName(model));
  return out;
}

}  // namespace mbst
