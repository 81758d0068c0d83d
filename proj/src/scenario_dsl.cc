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

#include "mbst/scenario_dsl.h"

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "mbst/errors.h"
#include "mbst/text_util.h"

namespace mbst {
namespace {

bool IsIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool IsIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Cursor over one source line. Columns are 1-based in diagnostics.
class LineCursor {
 public:
  LineCursor(std::string_view text, int line) : text_(text), line_(line) {}

  int line() const { return line_; }
  int column() const { return static_cast<int>(pos_) + 1; }

  void SkipSpace() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool AtEnd() {
    SkipSpace();
    return pos_ >= text_.size();
  }

  char Peek() {
    SkipSpace();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  bool PeekIs(std::string_view s) {
    SkipSpace();
    return text_.substr(pos_, s.size()) == s;
  }

  bool AcceptWord(std::string_view word) {
    SkipSpace();
    if (text_.substr(pos_, word.size()) != word) return false;
    std::size_t end = pos_ + word.size();
    if (end < text_.size() && IsIdentChar(text_[end])) return false;
    pos_ = end;
    return true;
  }

  bool Accept(std::string_view token) {
    if (!PeekIs(token)) return false;
    pos_ += token.size();
    return true;
  }

  void Expect(std::string_view token) {
    if (!Accept(token)) Fail({"'" + std::string(token) + "'"});
  }

  std::string Ident(std::string_view what) {
    SkipSpace();
    if (pos_ >= text_.size() || !IsIdentStart(text_[pos_])) {
      Fail({std::string(what)});
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && IsIdentChar(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  int Integer(std::string_view what) {
    SkipSpace();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
    if (pos_ == start || pos_ - start > 9) {
      pos_ = start;
      Fail({std::string(what)});
    }
    return std::stoi(std::string(text_.substr(start, pos_ - start)));
  }

  // Everything up to the matching close bracket, honoring nesting.
  std::string Balanced(char open, char close) {
    SkipSpace();
    if (pos_ >= text_.size() || text_[pos_] != open) {
      Fail({"'" + std::string(1, open) + "'"});
    }
    int depth = 0;
    std::size_t start = pos_ + 1;
    for (; pos_ < text_.size(); ++pos_) {
      if (text_[pos_] == open) ++depth;
      if (text_[pos_] == close && --depth == 0) {
        std::string inner(text_.substr(start, pos_ - start));
        ++pos_;
        return inner;
      }
    }
    Fail({"'" + std::string(1, close) + "'"});
  }

  std::string QuotedString() {
    SkipSpace();
    if (pos_ >= text_.size() || text_[pos_] != '"') Fail({"string literal"});
    ++pos_;
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      char c = text_[pos_++];
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (pos_ >= text_.size()) break;
      char e = text_[pos_++];
      if (e == 'x') {
        if (pos_ + 2 > text_.size() ||
            !std::isxdigit(static_cast<unsigned char>(text_[pos_])) ||
            !std::isxdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
          Fail({"two hex digits after \\x"});
        }
        out.push_back(static_cast<char>(
            std::stoi(std::string(text_.substr(pos_, 2)), nullptr, 16)));
        pos_ += 2;
      } else {
        out.push_back(e);
      }
    }
    if (pos_ >= text_.size()) Fail({"closing '\"'"});
    ++pos_;
    return out;
  }

  std::string Rest() {
    SkipSpace();
    std::string r(trim(text_.substr(pos_)));
    pos_ = text_.size();
    return r;
  }

  void ExpectEnd(std::vector<std::string> expected) {
    if (!AtEnd()) Fail(std::move(expected));
  }

  [[noreturn]] void Fail(std::vector<std::string> expected) {
    SkipSpace();
    std::string found = pos_ < text_.size()
                            ? std::string(split_whitespace(text_.substr(pos_))
                                              .front())
                            : "end of line";
    throw SyntaxError(line_, column(), std::move(expected), found);
  }

 private:
  std::string_view text_;
  int line_;
  std::size_t pos_ = 0;
};

struct OpenFragment {
  CombinedFragment fragment;
  int line;
};

class ScenarioParser {
 public:
  explicit ScenarioParser(std::string_view text) : text_(text) {}

  ScenarioModel Parse() {
    int line_no = 0;
    std::size_t start = 0;
    while (start <= text_.size()) {
      auto nl = text_.find('\n', start);
      std::string_view line = text_.substr(
          start, nl == std::string_view::npos ? std::string_view::npos
                                              : nl - start);
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      ParseLine(line, line_no);
      if (nl == std::string_view::npos) break;
      start = nl + 1;
    }
    if (!have_header_) {
      throw SyntaxError(line_no, 1, {"'scenario'"}, "end of input");
    }
    if (!open_.empty()) {
      throw SyntaxError(line_no, 1, {"'end'"}, "end of input");
    }
    CheckSemantics();
    return std::move(model_);
  }

 private:
  void ParseLine(std::string_view raw, int line_no) {
    std::string_view content = trim(raw);
    if (content.empty() || content.front() == '#') return;
    // Columns refer to the untrimmed line.
    LineCursor cur(raw, line_no);
    if (!have_header_) {
      if (!cur.AcceptWord("scenario")) cur.Fail({"'scenario'"});
      model_.name = cur.Ident("scenario name");
      cur.ExpectEnd({"end of line"});
      have_header_ = true;
      return;
    }
    if (cur.AcceptWord("annotate")) return Annotate(cur);
    if (cur.AcceptWord("lifeline")) return LifelineDecl(cur);
    if (cur.AcceptWord("msg")) return MessageDecl(cur);
    if (cur.AcceptWord("loop")) return FragmentOpen(cur, FragmentKind::kLoop);
    if (cur.AcceptWord("alt")) return FragmentOpen(cur, FragmentKind::kAlt);
    if (cur.AcceptWord("opt")) return FragmentOpen(cur, FragmentKind::kOpt);
    if (cur.AcceptWord("else")) return ElseDecl(cur);
    if (cur.AcceptWord("end")) return EndDecl(cur);
    cur.Fail({"'annotate'", "'lifeline'", "'msg'", "'loop'", "'alt'", "'opt'",
              "'else'", "'end'"});
  }

  void Annotate(LineCursor& cur) {
    std::string rest = cur.Rest();
    auto eq = rest.find('=');
    if (eq == std::string::npos) cur.Fail({"'='"});
    std::string key(trim(std::string_view(rest).substr(0, eq)));
    std::string value(trim(std::string_view(rest).substr(eq + 1)));
    if (key.empty()) cur.Fail({"annotation key"});
    if (model_.annotations.count(key)) {
      throw SemanticError(cur.line(), std::string(rules::kDuplicateId), key,
                          "annotation '" + key + "' given twice");
    }
    model_.annotations[key] = value;
  }

  void LifelineDecl(LineCursor& cur) {
    Lifeline l;
    l.id = cur.Ident("lifeline id");
    std::string role = cur.Ident("lifeline role (TESTER, SUT, OTHER)");
    auto r = lifeline_role_from_string(role);
    if (!r) {
      throw SyntaxError(cur.line(), cur.column() - static_cast<int>(role.size()),
                        {"'TESTER'", "'SUT'", "'OTHER'"}, role);
    }
    l.role = *r;
    cur.ExpectEnd({"end of line"});
    model_.lifelines.push_back(std::move(l));
  }

  void MessageDecl(LineCursor& cur) {
    Message m;
    m.id = cur.Ident("message id");
    m.seq_no = cur.Integer("sequence number");
    m.sender = cur.Ident("sender lifeline");
    cur.Expect("->");
    m.receiver = cur.Ident("receiver lifeline");
    m.signature = cur.Ident("message signature");
    if (cur.Peek() == '(') {
      std::string params = cur.Balanced('(', ')');
      ParseParams(params, cur.line(), m);
    }
    if (cur.AcceptWord("sets")) {
      std::set<std::string> flags;
      do {
        flags.insert(cur.Ident("flag name"));
      } while (cur.Accept(","));
      m.sets_flags.assign(flags.begin(), flags.end());
    }
    if (cur.AcceptWord("requires")) {
      m.requires_flags = Guard_(cur.Rest(), cur.line(), m.id);
    }
    cur.ExpectEnd({"'('", "'sets'", "'requires'", "end of line"});
    Record(m.id, cur.line());
    messages_.push_back({m.id, cur.line(), m.sender, m.receiver});
    CurrentBody().push_back(Element(std::move(m)));
  }

  void ParseParams(const std::string& text, int line_no, Message& m) {
    // Split on commas that are not inside parentheses or quotes.
    std::vector<std::string> parts;
    std::string current;
    int depth = 0;
    bool in_quote = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
      char c = text[i];
      if (in_quote) {
        current.push_back(c);
        if (c == '\\' && i + 1 < text.size()) {
          current.push_back(text[++i]);
        } else if (c == '"') {
          in_quote = false;
        }
        continue;
      }
      if (c == '"') in_quote = true;
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (c == ',' && depth == 0) {
        parts.push_back(current);
        current.clear();
      } else {
        current.push_back(c);
      }
    }
    if (!trim(current).empty() || !parts.empty()) parts.push_back(current);
    for (const std::string& part : parts) {
      LineCursor pc(part, line_no);
      Param p;
      p.name = pc.Ident("parameter name");
      pc.Expect(":");
      std::string tag = pc.Ident("type tag");
      auto t = type_tag_from_string(tag);
      if (!t) {
        throw SyntaxError(line_no, 1,
                          {"'INT'", "'STRING'", "'AMOUNT'",
                           "'ACCOUNT_NATIONAL'", "'ACCOUNT_INTERNATIONAL'",
                           "'TAN'"},
                          tag);
      }
      p.type = *t;
      pc.Expect("=");
      std::string kind = pc.Ident("value domain kind");
      std::string body = pc.Balanced('(', ')');
      try {
        p.domain = ValueDomain::Parse(kind + "(" + body + ")");
      } catch (const std::invalid_argument& e) {
        throw SemanticError(line_no, "MALFORMED_DOMAIN", m.id + "." + p.name,
                            e.what());
      }
      if (pc.Accept("!")) p.fuzz_value = pc.QuotedString();
      pc.ExpectEnd({"'!'", "',' or ')'"});
      m.params.push_back(std::move(p));
    }
  }

  Guard Guard_(const std::string& text, int line_no, const std::string& id) {
    try {
      return parse_guard(text);
    } catch (const GuardSyntaxError& e) {
      throw SemanticError(line_no, "MALFORMED_GUARD", id,
                          std::string(e.what()) + " in '" + text + "'");
    }
  }

  InteractionConstraint ConstraintTail(LineCursor& cur, const std::string& id) {
    InteractionConstraint c;
    if (cur.Peek() == '[') {
      std::string g = cur.Balanced('[', ']');
      c.guard = Guard_(g, cur.line(), id);
    }
    if (cur.AcceptWord("negated")) c.negated = true;
    cur.ExpectEnd({"'['", "'negated'", "end of line"});
    return c;
  }

  void FragmentOpen(LineCursor& cur, FragmentKind kind) {
    CombinedFragment f;
    f.kind = kind;
    f.id = cur.Ident("fragment id");
    int min_iter = 0;
    std::optional<int> max_iter;
    if (kind == FragmentKind::kLoop) {
      min_iter = cur.Integer("minimum iteration count");
      cur.Expect("..");
      if (!cur.Accept("*")) max_iter = cur.Integer("maximum count or '*'");
    }
    Operand op;
    op.constraint = ConstraintTail(cur, f.id);
    op.constraint.min_iter = min_iter;
    op.constraint.max_iter = max_iter;
    f.operands.push_back(std::move(op));
    Record(f.id, cur.line());
    open_.push_back({std::move(f), cur.line()});
  }

  void ElseDecl(LineCursor& cur) {
    if (open_.empty() || open_.back().fragment.kind != FragmentKind::kAlt) {
      throw SyntaxError(cur.line(), 1, {"'else' only inside 'alt'"}, "else");
    }
    Operand op;
    op.constraint = ConstraintTail(cur, open_.back().fragment.id);
    open_.back().fragment.operands.push_back(std::move(op));
  }

  void EndDecl(LineCursor& cur) {
    cur.ExpectEnd({"end of line"});
    if (open_.empty()) {
      throw SyntaxError(cur.line(), 1, {"a fragment to close"}, "end");
    }
    CombinedFragment f = std::move(open_.back().fragment);
    open_.pop_back();
    CurrentBody().push_back(Element(std::move(f)));
  }

  std::vector<Element>& CurrentBody() {
    if (open_.empty()) return model_.body;
    return open_.back().fragment.operands.back().body;
  }

  void Record(const std::string& id, int line_no) {
    if (!lines_.emplace(id, line_no).second) {
      throw SemanticError(line_no, std::string(rules::kDuplicateId), id,
                          "element id '" + id + "' is not unique");
    }
  }

  void CheckSemantics() {
    for (const auto& m : messages_) {
      for (const std::string* end : {&m.sender, &m.receiver}) {
        if (model_.find_lifeline(*end) == nullptr) {
          throw SemanticError(m.line,
                              std::string(rules::kUndeclaredLifeline), *end,
                              "message " + m.id + " references undeclared "
                                  "lifeline '" + *end + "'");
        }
      }
    }
    auto violations = validate_model(model_);
    if (!violations.empty()) {
      const Violation& v = violations.front();
      auto it = lines_.find(v.element_id);
      int line_no = it == lines_.end() ? 1 : it->second;
      throw SemanticError(line_no, v.rule, v.element_id,
                          v.rule + " (" + v.element_id + "): " + v.message);
    }
  }

  struct MessageRef {
    std::string id;
    int line;
    std::string sender;
    std::string receiver;
  };

  std::string_view text_;
  ScenarioModel model_;
  bool have_header_ = false;
  std::vector<OpenFragment> open_;
  std::map<std::string, int> lines_;
  std::vector<MessageRef> messages_;
};

void SerializeBody(const std::vector<Element>& body, int depth,
                   std::string& out);

void Indent(int depth, std::string& out) { out.append(2 * depth, ' '); }

void SerializeMessage(const Message& m, int depth, std::string& out) {
  Indent(depth, out);
  out += "msg " + m.id + " " + std::to_string(m.seq_no) + " " + m.sender +
         " -> " + m.receiver + " " + m.signature;
  if (!m.params.empty()) {
    out += "(";
    for (std::size_t i = 0; i < m.params.size(); ++i) {
      const Param& p = m.params[i];
      if (i) out += ", ";
      out += p.name + ":" + std::string(to_string(p.type)) + "=" +
             p.domain.to_string();
      if (p.fuzz_value) out += "!" + quote(*p.fuzz_value);
    }
    out += ")";
  }
  if (!m.sets_flags.empty()) {
    out += " sets ";
    for (std::size_t i = 0; i < m.sets_flags.size(); ++i) {
      if (i) out += ",";
      out += m.sets_flags[i];
    }
  }
  if (!m.requires_flags.is_true()) {
    out += " requires " + m.requires_flags.to_string();
  }
  out += "\n";
}

std::string ConstraintText(const InteractionConstraint& c) {
  std::string s = " [" + c.guard.to_string() + "]";
  if (c.negated) s += " negated";
  return s;
}

void SerializeFragment(const CombinedFragment& f, int depth, std::string& out) {
  Indent(depth, out);
  const InteractionConstraint& first = f.operands.front().constraint;
  out += std::string(to_string(f.kind)) + " " + f.id;
  if (f.kind == FragmentKind::kLoop) {
    out += " " + std::to_string(first.min_iter) + ".." +
           (first.max_iter ? std::to_string(*first.max_iter) : "*");
  }
  out += ConstraintText(first) + "\n";
  for (std::size_t i = 0; i < f.operands.size(); ++i) {
    if (i > 0) {
      Indent(depth, out);
      out += "else" + ConstraintText(f.operands[i].constraint) + "\n";
    }
    SerializeBody(f.operands[i].body, depth + 1, out);
  }
  Indent(depth, out);
  out += "end\n";
}

void SerializeBody(const std::vector<Element>& body, int depth,
                   std::string& out) {
  for (const Element& e : body) {
    if (e.is_message()) {
      SerializeMessage(e.message(), depth, out);
    } else {
      SerializeFragment(e.fragment(), depth, out);
    }
  }
}

}  // namespace

ScenarioModel parse_scenario(std::string_view text) {
  return ScenarioParser(text).Parse();
}

std::string serialize_scenario(const ScenarioModel& model) {
  std::string out = "scenario " + model.name + "\n";
  for (const auto& [key, value] : model.annotations) {
    out += "annotate " + key + " = " + value + "\n";
  }
  for (const Lifeline& l : model.lifelines) {
    out += "lifeline " + l.id + " " + std::string(to_string(l.role)) + "\n";
  }
  if (!model.body.empty()) {
    out += "\n";
    SerializeBody(model.body, 0, out);
  }
  return out;
}

ScenarioModel load_scenario_file(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw ConfigError("scenario file not found: " + path.string());
  }
  return parse_scenario(read_file(path));
}

}  // namespace mbst
