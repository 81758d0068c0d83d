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

#ifndef MBST_GUARD_H_
#define MBST_GUARD_H_

#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>

namespace mbst {

// Boolean expression over outcome-flag names. Grammar:
//
//   expr   := term ("or" term)*
//   term   := factor ("and" factor)*
//   factor := "not" factor | "(" expr ")" | "true" | "false" | flag
//
// Guards are immutable and cheap to copy; subtrees are shared.
class Guard {
 public:
  enum class Op { kTrue, kFalse, kFlag, kNot, kAnd, kOr };

  // Default-constructed guard is `true`.
  Guard();

  static Guard True();
  static Guard False();
  static Guard Flag(std::string name);
  static Guard Not(const Guard& operand);
  static Guard And(const Guard& lhs, const Guard& rhs);
  static Guard Or(const Guard& lhs, const Guard& rhs);

  Op op() const;
  bool is_true() const { return op() == Op::kTrue; }
  const std::string& flag() const;
  const Guard& lhs() const;  // operand for kNot
  const Guard& rhs() const;

  bool evaluate(const std::function<bool(const std::string&)>& flag_value)
      const;
  void collect_flags(std::set<std::string>& out) const;

  // Minimal-parenthesis rendering that parses back to an equal tree.
  std::string to_string() const;

  friend bool operator==(const Guard& a, const Guard& b);

 private:
  struct Node;
  explicit Guard(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

// Thrown by parse_guard; `offset` is the byte offset into the input.
class GuardSyntaxError : public std::runtime_error {
 public:
  GuardSyntaxError(std::size_t offset, const std::string& message)
      : std::runtime_error(message), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

Guard parse_guard(std::string_view text);

}  // namespace mbst

#endif  // MBST_GUARD_H_
