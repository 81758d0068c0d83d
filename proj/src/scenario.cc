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

#include "mbst/scenario.h"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <set>

namespace mbst {
namespace {

void WalkBody(const std::vector<Element>& body,
              const std::function<void(const Message&)>& on_message,
              const std::function<void(const CombinedFragment&)>& on_fragment) {
  for (const Element& e : body) {
    if (e.is_message()) {
      if (on_message) on_message(e.message());
    } else {
      const CombinedFragment& f = e.fragment();
      if (on_fragment) on_fragment(f);
      for (const Operand& op : f.operands) {
        WalkBody(op.body, on_message, on_fragment);
      }
    }
  }
}

class Validator {
 public:
  explicit Validator(const ScenarioModel& model) : model_(model) {}

  std::vector<Violation> Run() {
    int sut_count = 0;
    std::set<std::string> lifeline_ids;
    for (const Lifeline& l : model_.lifelines) {
      if (l.role == LifelineRole::kSut) ++sut_count;
      if (!lifeline_ids.insert(l.id).second) {
        Add(l.id, rules::kDuplicateId, "lifeline declared twice");
      }
    }
    if (sut_count != 1) {
      Add(model_.name, rules::kSutCount,
          "expected exactly one SUT lifeline, found " +
              std::to_string(sut_count));
    }
    Body(model_.body);
    return std::move(violations_);
  }

 private:
  void Body(const std::vector<Element>& body) {
    for (const Element& e : body) {
      if (e.is_message()) {
        Msg(e.message());
      } else {
        Fragment(e.fragment());
      }
    }
  }

  void Id(const std::string& id) {
    if (!ids_.insert(id).second) {
      Add(id, rules::kDuplicateId, "element id '" + id + "' is not unique");
    }
  }

  void Msg(const Message& m) {
    Id(m.id);
    for (const std::string* end : {&m.sender, &m.receiver}) {
      if (model_.find_lifeline(*end) == nullptr) {
        Add(m.id, rules::kUndeclaredLifeline,
            "undeclared lifeline '" + *end + "'");
      }
    }
    if (m.sender == m.receiver) {
      Add(m.id, rules::kSelfSend, "sender and receiver are both '" +
                                      m.sender + "'");
    }
    if (m.seq_no <= 0) {
      Add(m.id, rules::kSeqPositive, "sequence number must be positive");
    } else if (!model_.is_mutant() && m.seq_no <= last_seq_) {
      Add(m.id, rules::kSeqOrder,
          "sequence number " + std::to_string(m.seq_no) +
              " does not increase (previous " + std::to_string(last_seq_) +
              ")");
    }
    last_seq_ = std::max(last_seq_, m.seq_no);
    std::set<std::string> names;
    for (const Param& p : m.params) {
      if (!names.insert(p.name).second) {
        Add(m.id, rules::kDuplicateParam, "parameter '" + p.name +
                                              "' declared twice");
      }
      if (!p.domain.non_empty()) {
        Add(m.id, rules::kEmptyDomain, "parameter '" + p.name +
                                           "' has an empty value domain");
      }
    }
  }

  void Fragment(const CombinedFragment& f) {
    Id(f.id);
    std::size_t n = f.operands.size();
    bool count_ok = f.kind == FragmentKind::kAlt ? n >= 2 : n == 1;
    if (!count_ok) {
      Add(f.id, rules::kOperandCount,
          std::string(to_string(f.kind)) + " has " + std::to_string(n) +
              " operand(s)");
    }
    for (const Operand& op : f.operands) {
      const InteractionConstraint& c = op.constraint;
      if (f.kind == FragmentKind::kLoop) {
        if (c.min_iter < 0 || (c.max_iter && *c.max_iter < 0) ||
            (c.max_iter && c.min_iter > *c.max_iter)) {
          Add(f.id, rules::kBounds,
              "loop bounds " + std::to_string(c.min_iter) + ".." +
                  (c.max_iter ? std::to_string(*c.max_iter) : "*") +
                  " are inconsistent");
        }
      } else if (c.min_iter != 0 || c.max_iter) {
        Add(f.id, rules::kIterOnNonLoop,
            "iteration bounds are only meaningful on loops");
      }
      if (op.body.empty()) {
        Add(f.id, rules::kEmptyOperand, "operand has an empty body");
      }
      Body(op.body);
    }
  }

  void Add(const std::string& id, std::string_view rule, std::string msg) {
    violations_.push_back({id, std::string(rule), std::move(msg)});
  }

  const ScenarioModel& model_;
  std::set<std::string> ids_;
  int last_seq_ = 0;
  std::vector<Violation> violations_;
};

void ShapeBody(const std::vector<Element>& body, std::string& out);

void ShapeMessage(const Message& m, std::string& out) {
  out += "M{";
  out += m.sender;
  out += ">";
  out += m.receiver;
  out += ":";
  out += m.signature;
  out += "(";
  for (const Param& p : m.params) {
    out += p.name;
    out += ":";
    out += to_string(p.type);
    out += "=";
    out += p.domain.to_string();
    if (p.fuzz_value) {
      // Length-prefixed so arbitrary bytes cannot forge structure.
      out += "!" + std::to_string(p.fuzz_value->size()) + ":" + *p.fuzz_value;
    }
    out += ";";
  }
  out += ")sets[";
  for (const auto& f : m.sets_flags) out += f + ",";
  out += "]req[" + m.requires_flags.to_string() + "]}";
}

void ShapeFragment(const CombinedFragment& f, std::string& out) {
  out += "F{";
  out += to_string(f.kind);
  for (const Operand& op : f.operands) {
    const InteractionConstraint& c = op.constraint;
    out += "|O{" + std::to_string(c.min_iter) + ".." +
           (c.max_iter ? std::to_string(*c.max_iter) : "*") + "[" +
           c.guard.to_string() + "]" + (c.negated ? "!" : "") + ":";
    ShapeBody(op.body, out);
    out += "}";
  }
  out += "}";
}

void ShapeBody(const std::vector<Element>& body, std::string& out) {
  for (const Element& e : body) {
    if (e.is_message()) {
      ShapeMessage(e.message(), out);
    } else {
      ShapeFragment(e.fragment(), out);
    }
  }
}

}  // namespace

std::string_view to_string(LifelineRole role) {
  switch (role) {
    case LifelineRole::kTester:
      return "TESTER";
    case LifelineRole::kSut:
      return "SUT";
    case LifelineRole::kOther:
      return "OTHER";
  }
  return "OTHER";
}

std::string_view to_string(TypeTag tag) {
  switch (tag) {
    case TypeTag::kInt:
      return "INT";
    case TypeTag::kString:
      return "STRING";
    case TypeTag::kAmount:
      return "AMOUNT";
    case TypeTag::kAccountNational:
      return "ACCOUNT_NATIONAL";
    case TypeTag::kAccountInternational:
      return "ACCOUNT_INTERNATIONAL";
    case TypeTag::kTan:
      return "TAN";
  }
  return "STRING";
}

std::string_view to_string(FragmentKind kind) {
  switch (kind) {
    case FragmentKind::kLoop:
      return "loop";
    case FragmentKind::kAlt:
      return "alt";
    case FragmentKind::kOpt:
      return "opt";
  }
  return "opt";
}

std::optional<LifelineRole> lifeline_role_from_string(std::string_view s) {
  if (s == "TESTER") return LifelineRole::kTester;
  if (s == "SUT") return LifelineRole::kSut;
  if (s == "OTHER") return LifelineRole::kOther;
  return std::nullopt;
}

std::optional<TypeTag> type_tag_from_string(std::string_view s) {
  for (TypeTag t : {TypeTag::kInt, TypeTag::kString, TypeTag::kAmount,
                    TypeTag::kAccountNational, TypeTag::kAccountInternational,
                    TypeTag::kTan}) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

bool operator==(const Operand& a, const Operand& b) {
  return a.constraint == b.constraint && a.body == b.body;
}

bool operator==(const CombinedFragment& a, const CombinedFragment& b) {
  return a.id == b.id && a.kind == b.kind && a.operands == b.operands;
}

const std::string& Element::id() const {
  return is_message() ? message().id : fragment().id;
}

const Lifeline* ScenarioModel::find_lifeline(std::string_view id) const {
  for (const Lifeline& l : lifelines) {
    if (l.id == id) return &l;
  }
  return nullptr;
}

std::string operand_scope_id(std::string_view fragment_id,
                             std::size_t operand_index) {
  return std::string(fragment_id) + "/" + std::to_string(operand_index);
}

void for_each_message(const ScenarioModel& model,
                      const std::function<void(const Message&)>& fn) {
  WalkBody(model.body, fn, nullptr);
}

void for_each_fragment(
    const ScenarioModel& model,
    const std::function<void(const CombinedFragment&)>& fn) {
  WalkBody(model.body, nullptr, fn);
}

std::size_t count_messages(const ScenarioModel& model) {
  std::size_t n = 0;
  for_each_message(model, [&](const Message&) { ++n; });
  return n;
}

std::vector<std::string> distinct_signatures(const ScenarioModel& model) {
  std::vector<std::string> out;
  for_each_message(model, [&](const Message& m) {
    if (std::find(out.begin(), out.end(), m.signature) == out.end()) {
      out.push_back(m.signature);
    }
  });
  return out;
}

std::vector<Violation> validate_model(const ScenarioModel& model) {
  return Validator(model).Run();
}

std::string canonical_shape(const ScenarioModel& model) {
  std::string out = "S{" + model.name + "}L{";
  for (const Lifeline& l : model.lifelines) {
    out += l.id + ":" + std::string(to_string(l.role)) + ";";
  }
  out += "}B{";
  ShapeBody(model.body, out);
  out += "}";
  return out;
}

std::string canonical_hash(const ScenarioModel& model) {
  std::string shape = canonical_shape(model);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int digest_len = 0;
  EVP_Digest(shape.data(), shape.size(), digest, &digest_len, EVP_sha256(),
             nullptr);
  char hex[33];
  for (int i = 0; i < 16; ++i) {
    std::snprintf(hex + 2 * i, 3, "%02x", digest[i]);
  }
  return std::string(hex, 32);
}

}  // namespace mbst
