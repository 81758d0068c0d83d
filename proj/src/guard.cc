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

#include "mbst/guard.h"

#include <cctype>
#include <utility>
#include <vector>

namespace mbst {

struct Guard::Node {
  Op op;
  std::string flag;
  Guard lhs;
  Guard rhs;
};

namespace {

bool IsIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool IsIdentChar(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
         c == '.';
}

class GuardParser {
 public:
  explicit GuardParser(std::string_view text) : text_(text) {}

  Guard Parse() {
    Guard g = Expr();
    SkipSpace();
    if (pos_ != text_.size()) {
      throw GuardSyntaxError(pos_, "unexpected '" +
                                       std::string(1, text_[pos_]) +
                                       "' in guard");
    }
    return g;
  }

 private:
  Guard Expr() {
    Guard g = Term();
    while (AcceptWord("or")) g = Guard::Or(g, Term());
    return g;
  }

  Guard Term() {
    Guard g = Factor();
    while (AcceptWord("and")) g = Guard::And(g, Factor());
    return g;
  }

  Guard Factor() {
    SkipSpace();
    if (AcceptWord("not")) return Guard::Not(Factor());
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      Guard g = Expr();
      SkipSpace();
      if (pos_ >= text_.size() || text_[pos_] != ')') {
        throw GuardSyntaxError(pos_, "expected ')' in guard");
      }
      ++pos_;
      return g;
    }
    if (pos_ >= text_.size() || !IsIdentStart(text_[pos_])) {
      throw GuardSyntaxError(pos_, "expected flag name, 'not' or '(' in guard");
    }
    std::string word = Word();
    if (word == "true") return Guard::True();
    if (word == "false") return Guard::False();
    if (word == "and" || word == "or") {
      throw GuardSyntaxError(pos_, "operator '" + word + "' missing operand");
    }
    return Guard::Flag(std::move(word));
  }

  std::string Word() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && IsIdentChar(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  bool AcceptWord(std::string_view word) {
    SkipSpace();
    if (text_.substr(pos_, word.size()) != word) return false;
    std::size_t end = pos_ + word.size();
    if (end < text_.size() && IsIdentChar(text_[end])) return false;
    pos_ = end;
    return true;
  }

  void SkipSpace() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

int Precedence(Guard::Op op) {
  switch (op) {
    case Guard::Op::kOr:
      return 1;
    case Guard::Op::kAnd:
      return 2;
    case Guard::Op::kNot:
      return 3;
    default:
      return 4;
  }
}

}  // namespace

Guard::Guard() : node_(nullptr) {}

Guard::Guard(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Guard Guard::True() { return Guard(); }

Guard Guard::False() {
  return Guard(std::make_shared<const Node>(Node{Op::kFalse, {}, {}, {}}));
}

Guard Guard::Flag(std::string name) {
  return Guard(
      std::make_shared<const Node>(Node{Op::kFlag, std::move(name), {}, {}}));
}

Guard Guard::Not(const Guard& operand) {
  return Guard(std::make_shared<const Node>(Node{Op::kNot, {}, operand, {}}));
}

Guard Guard::And(const Guard& lhs, const Guard& rhs) {
  return Guard(std::make_shared<const Node>(Node{Op::kAnd, {}, lhs, rhs}));
}

Guard Guard::Or(const Guard& lhs, const Guard& rhs) {
  return Guard(std::make_shared<const Node>(Node{Op::kOr, {}, lhs, rhs}));
}

Guard::Op Guard::op() const { return node_ ? node_->op : Op::kTrue; }

const std::string& Guard::flag() const {
  static const std::string kEmpty;
  return node_ ? node_->flag : kEmpty;
}

const Guard& Guard::lhs() const {
  static const Guard kTrue;
  return node_ ? node_->lhs : kTrue;
}

const Guard& Guard::rhs() const {
  static const Guard kTrue;
  return node_ ? node_->rhs : kTrue;
}

bool Guard::evaluate(
    const std::function<bool(const std::string&)>& flag_value) const {
  switch (op()) {
    case Op::kTrue:
      return true;
    case Op::kFalse:
      return false;
    case Op::kFlag:
      return flag_value(node_->flag);
    case Op::kNot:
      return !node_->lhs.evaluate(flag_value);
    case Op::kAnd:
      return node_->lhs.evaluate(flag_value) &&
             node_->rhs.evaluate(flag_value);
    case Op::kOr:
      return node_->lhs.evaluate(flag_value) ||
             node_->rhs.evaluate(flag_value);
  }
  return false;
}

void Guard::collect_flags(std::set<std::string>& out) const {
  switch (op()) {
    case Op::kFlag:
      out.insert(node_->flag);
      break;
    case Op::kNot:
      node_->lhs.collect_flags(out);
      break;
    case Op::kAnd:
    case Op::kOr:
      node_->lhs.collect_flags(out);
      node_->rhs.collect_flags(out);
      break;
    default:
      break;
  }
}

std::string Guard::to_string() const {
  switch (op()) {
    case Op::kTrue:
      return "true";
    case Op::kFalse:
      return "false";
    case Op::kFlag:
      return node_->flag;
    case Op::kNot: {
      const Guard& inner = node_->lhs;
      std::string s = inner.to_string();
      if (Precedence(inner.op()) < Precedence(Op::kNot)) s = "(" + s + ")";
      return "not " + s;
    }
    case Op::kAnd:
    case Op::kOr: {
      int prec = Precedence(op());
      std::string l = node_->lhs.to_string();
      std::string r = node_->rhs.to_string();
      // Binary operators associate to the left, so a right child of equal
      // precedence needs parentheses to keep its shape.
      if (Precedence(node_->lhs.op()) < prec) l = "(" + l + ")";
      if (Precedence(node_->rhs.op()) <= prec) r = "(" + r + ")";
      return l + (op() == Op::kAnd ? " and " : " or ") + r;
    }
  }
  return "true";
}

bool operator==(const Guard& a, const Guard& b) {
  if (a.node_ == b.node_) return true;
  if (a.op() != b.op()) return false;
  switch (a.op()) {
    case Guard::Op::kTrue:
    case Guard::Op::kFalse:
      return true;
    case Guard::Op::kFlag:
      return a.flag() == b.flag();
    case Guard::Op::kNot:
      return a.lhs() == b.lhs();
    case Guard::Op::kAnd:
    case Guard::Op::kOr:
      return a.lhs() == b.lhs() && a.rhs() == b.rhs();
  }
  return false;
}

Guard parse_guard(std::string_view text) { return GuardParser(text).Parse(); }

}  // namespace mbst
