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

#include "mbst/value_domain.h"

#include <cctype>
#include <charconv>
#include <stdexcept>

namespace mbst {
namespace {

std::uint64_t Below(std::mt19937_64& rng, std::uint64_t bound) {
  return bound == 0 ? 0 : rng() % bound;
}

std::int64_t ParseInt(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw std::invalid_argument("not an integer: '" + std::string(s) + "'");
  }
  return v;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::pair<std::string_view, std::string_view> SplitComma(std::string_view s) {
  auto comma = s.find(',');
  if (comma == std::string_view::npos) {
    throw std::invalid_argument("expected two comma-separated bounds");
  }
  return {Trim(s.substr(0, comma)), Trim(s.substr(comma + 1))};
}

constexpr std::string_view kAlnum =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789";

}  // namespace

ValueDomain ValueDomain::Range(std::int64_t lo, std::int64_t hi) {
  ValueDomain d;
  d.kind_ = Kind::kRange;
  d.lo_ = lo;
  d.hi_ = hi;
  return d;
}

ValueDomain ValueDomain::Enum(std::vector<std::string> values) {
  ValueDomain d;
  d.kind_ = Kind::kEnum;
  d.values_ = std::move(values);
  return d;
}

ValueDomain ValueDomain::Pattern(std::string templ) {
  ValueDomain d;
  d.kind_ = Kind::kPattern;
  d.template_ = std::move(templ);
  return d;
}

ValueDomain ValueDomain::Text(std::size_t min_len, std::size_t max_len) {
  ValueDomain d;
  d.kind_ = Kind::kText;
  d.min_len_ = min_len;
  d.max_len_ = max_len;
  return d;
}

ValueDomain ValueDomain::Parse(std::string_view text) {
  text = Trim(text);
  auto open = text.find('(');
  if (open == std::string_view::npos || text.back() != ')') {
    throw std::invalid_argument("value domain must look like kind(...)");
  }
  std::string_view kind = Trim(text.substr(0, open));
  std::string_view body = text.substr(open + 1, text.size() - open - 2);
  if (kind == "range") {
    auto [lo, hi] = SplitComma(body);
    return Range(ParseInt(lo), ParseInt(hi));
  }
  if (kind == "text") {
    auto [lo, hi] = SplitComma(body);
    std::int64_t a = ParseInt(lo);
    std::int64_t b = ParseInt(hi);
    if (a < 0 || b < 0) throw std::invalid_argument("negative text length");
    return Text(static_cast<std::size_t>(a), static_cast<std::size_t>(b));
  }
  if (kind == "enum") {
    std::vector<std::string> values;
    std::size_t start = 0;
    while (start <= body.size()) {
      auto bar = body.find('|', start);
      std::string_view item = Trim(body.substr(
          start, bar == std::string_view::npos ? std::string_view::npos
                                               : bar - start));
      if (!item.empty()) values.emplace_back(item);
      if (bar == std::string_view::npos) break;
      start = bar + 1;
    }
    return Enum(std::move(values));
  }
  if (kind == "pattern") {
    return Pattern(std::string(body));
  }
  throw std::invalid_argument("unknown value domain kind '" +
                              std::string(kind) + "'");
}

bool ValueDomain::non_empty() const {
  switch (kind_) {
    case Kind::kRange:
      return lo_ <= hi_;
    case Kind::kEnum:
      return !values_.empty();
    case Kind::kPattern:
      return !template_.empty();
    case Kind::kText:
      return min_len_ <= max_len_;
  }
  return false;
}

bool ValueDomain::contains(std::string_view value) const {
  switch (kind_) {
    case Kind::kRange: {
      if (value.empty()) return false;
      std::int64_t v = 0;
      auto [ptr, ec] =
          std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc() || ptr != value.data() + value.size()) {
        return false;
      }
      // from_chars accepts a leading '-', but not '+' or spaces, which is
      // the canonical decimal form we want.
      return v >= lo_ && v <= hi_;
    }
    case Kind::kEnum:
      for (const auto& v : values_) {
        if (v == value) return true;
      }
      return false;
    case Kind::kPattern: {
      if (value.size() != template_.size()) return false;
      for (std::size_t i = 0; i < value.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(value[i]);
        switch (template_[i]) {
          case '9':
            if (!std::isdigit(c)) return false;
            break;
          case 'A':
            if (!std::isupper(c)) return false;
            break;
          case 'a':
            if (!std::islower(c)) return false;
            break;
          default:
            if (value[i] != template_[i]) return false;
        }
      }
      return true;
    }
    case Kind::kText:
      if (value.size() < min_len_ || value.size() > max_len_) return false;
      for (char c : value) {
        if (!std::isalnum(static_cast<unsigned char>(c))) return false;
      }
      return true;
  }
  return false;
}

std::string ValueDomain::sample(std::mt19937_64& rng) const {
  switch (kind_) {
    case Kind::kRange: {
      auto span = static_cast<std::uint64_t>(hi_ - lo_) + 1;
      return std::to_string(lo_ + static_cast<std::int64_t>(Below(rng, span)));
    }
    case Kind::kEnum:
      return values_.empty() ? std::string()
                             : values_[Below(rng, values_.size())];
    case Kind::kPattern: {
      std::string out = template_;
      for (char& c : out) {
        if (c == '9') {
          c = static_cast<char>('0' + Below(rng, 10));
        } else if (c == 'A') {
          c = static_cast<char>('A' + Below(rng, 26));
        } else if (c == 'a') {
          c = static_cast<char>('a' + Below(rng, 26));
        }
      }
      return out;
    }
    case Kind::kText: {
      std::size_t len = min_len_ + Below(rng, max_len_ - min_len_ + 1);
      // Keep generated text short and readable in trace files.
      if (len > 12 && min_len_ <= 12) len = 12;
      std::string out;
      for (std::size_t i = 0; i < len; ++i) {
        out.push_back(kAlnum[Below(rng, kAlnum.size())]);
      }
      return out;
    }
  }
  return {};
}

std::string ValueDomain::to_string() const {
  switch (kind_) {
    case Kind::kRange:
      return "range(" + std::to_string(lo_) + "," + std::to_string(hi_) + ")";
    case Kind::kEnum: {
      std::string s = "enum(";
      for (std::size_t i = 0; i < values_.size(); ++i) {
        if (i) s += "|";
        s += values_[i];
      }
      return s + ")";
    }
    case Kind::kPattern:
      return "pattern(" + template_ + ")";
    case Kind::kText:
      return "text(" + std::to_string(min_len_) + "," +
             std::to_string(max_len_) + ")";
  }
  return {};
}

}  // namespace mbst
