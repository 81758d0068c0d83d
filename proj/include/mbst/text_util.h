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

#ifndef MBST_TEXT_UTIL_H_
#define MBST_TEXT_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace mbst {

std::string_view trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_whitespace(std::string_view s);
bool starts_with(std::string_view s, std::string_view prefix);

// Percent-encodes everything outside [A-Za-z0-9._~-]. Used for values on
// the wire and in trace files, so values never contain separators.
std::string percent_encode(std::string_view raw);
// Throws std::invalid_argument on a malformed escape.
std::string percent_decode(std::string_view encoded);

// Double-quoted literal with \" \\ and \xHH escapes for non-printables.
std::string quote(std::string_view raw);

std::uint64_t fnv1a64(std::string_view data);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace mbst

#endif  // MBST_TEXT_UTIL_H_
