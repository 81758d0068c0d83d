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

#ifndef MBST_INVALID_CATALOG_H_
#define MBST_INVALID_CATALOG_H_

#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mbst/scenario.h"

namespace mbst {

// Ordered invalid candidate values per parameter type tag. Entries are
// filtered against each parameter's value domain before use, so a catalog
// entry is only ever applied where it actually violates the domain.
class InvalidValueCatalog {
 public:
  InvalidValueCatalog() = default;
  explicit InvalidValueCatalog(std::map<TypeTag, std::vector<std::string>> e)
      : entries_(std::move(e)) {}

  // Built-in catalog shipped with the tool (data/catalog.yaml mirrors it).
  static const InvalidValueCatalog& Default();

  // YAML document: one sequence per type tag, e.g. `TAN: ["", "1234567"]`.
  // Throws SchemaError on unknown tags or non-string entries.
  static InvalidValueCatalog Parse(std::string_view yaml);
  static InvalidValueCatalog Load(const std::filesystem::path& path);

  const std::vector<std::string>& entries(TypeTag tag) const;

  // Indices into entries(p.type) whose value lies outside p.domain.
  std::vector<std::size_t> violating_indices(const Param& p) const;

  std::string to_yaml() const;

 private:
  std::map<TypeTag, std::vector<std::string>> entries_;
};

}  // namespace mbst

#endif  // MBST_INVALID_CATALOG_H_
