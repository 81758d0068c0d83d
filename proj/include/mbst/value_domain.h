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

#ifndef MBST_VALUE_DOMAIN_H_
#define MBST_VALUE_DOMAIN_H_

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace mbst {

// Description of the valid values of a message parameter.
//
//   range(lo,hi)     decimal integers in [lo, hi]
//   enum(a|b|c)      one of the listed literals
//   pattern(DE9999)  fixed-length template: '9' digit, 'A' upper-case letter,
//                    'a' lower-case letter, anything else is literal
//   text(min,max)    ASCII letters and digits, length in [min, max]
class ValueDomain {
 public:
  enum class Kind { kRange, kEnum, kPattern, kText };

  ValueDomain() = default;

  static ValueDomain Range(std::int64_t lo, std::int64_t hi);
  static ValueDomain Enum(std::vector<std::string> values);
  static ValueDomain Pattern(std::string templ);
  static ValueDomain Text(std::size_t min_len, std::size_t max_len);

  // Throws std::invalid_argument on malformed input.
  static ValueDomain Parse(std::string_view text);

  Kind kind() const { return kind_; }

  // False for domains that admit no value at all (e.g. range(5,1)).
  bool non_empty() const;
  bool contains(std::string_view value) const;

  // Draws a member; deterministic for a given engine state.
  std::string sample(std::mt19937_64& rng) const;

  std::string to_string() const;

  friend bool operator==(const ValueDomain&, const ValueDomain&) = default;

 private:
  Kind kind_ = Kind::kText;
  std::int64_t lo_ = 0;
  std::int64_t hi_ = 0;
  std::vector<std::string> values_;
  std::string template_;
  std::size_t min_len_ = 1;
  std::size_t max_len_ = 16;
};

}  // namespace mbst

#endif  // MBST_VALUE_DOMAIN_H_
