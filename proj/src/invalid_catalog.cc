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

#include "mbst/invalid_catalog.h"

#include <yaml-cpp/yaml.h>

#include "mbst/errors.h"
#include "mbst/text_util.h"

namespace mbst {

const InvalidValueCatalog& InvalidValueCatalog::Default() {
  static const InvalidValueCatalog kDefault({
      {TypeTag::kInt,
       {"", "abc", "-1", "0", "2147483647", "2147483648", "-2147483649",
        "1e9"}},
      {TypeTag::kString,
       {"", std::string(300, 'A'), "' OR '1'='1", "%s%s%s%n", "UNKNOWN",
        "<script>"}},
      {TypeTag::kAmount,
       {"", "-1", "0", "0.001", "100000001", "9223372036854775808", "NaN",
        "1e308"}},
      {TypeTag::kAccountNational,
       {"", "123", "12345678901234567890", "ABCDEFGHIJ", "12345-7890"}},
      {TypeTag::kAccountInternational,
       {"", "DE00", "XX00000000000000000000", "DE8937040044053201300099",
        "de89370400440532013000"}},
      {TypeTag::kTan,
       {"", "12345", "1234567", "12a456", "-12345", "000000000000",
        "999999999999999999999", " 12345"}},
  });
  return kDefault;
}

InvalidValueCatalog InvalidValueCatalog::Parse(std::string_view yaml) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(yaml));
  } catch (const YAML::Exception& e) {
    throw SchemaError(std::string("catalog is not valid YAML: ") + e.what());
  }
  if (!root.IsMap()) throw SchemaError("catalog must be a mapping of type tags");
  std::map<TypeTag, std::vector<std::string>> entries;
  for (const auto& kv : root) {
    auto key = kv.first.as<std::string>();
    auto tag = type_tag_from_string(key);
    if (!tag) throw SchemaError("catalog: unknown type tag '" + key + "'");
    if (!kv.second.IsSequence()) {
      throw SchemaError("catalog: section '" + key + "' must be a list");
    }
    auto& list = entries[*tag];
    for (const auto& item : kv.second) {
      if (!item.IsScalar()) {
        throw SchemaError("catalog: entries of '" + key + "' must be strings");
      }
      list.push_back(item.as<std::string>());
    }
  }
  return InvalidValueCatalog(std::move(entries));
}

InvalidValueCatalog InvalidValueCatalog::Load(
    const std::filesystem::path& path) {
  return Parse(read_file(path));
}

const std::vector<std::string>& InvalidValueCatalog::entries(
    TypeTag tag) const {
  static const std::vector<std::string> kNone;
  auto it = entries_.find(tag);
  return it == entries_.end() ? kNone : it->second;
}

std::vector<std::size_t> InvalidValueCatalog::violating_indices(
    const Param& p) const {
  std::vector<std::size_t> out;
  const auto& list = entries(p.type);
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (!p.domain.contains(list[i])) out.push_back(i);
  }
  return out;
}

std::string InvalidValueCatalog::to_yaml() const {
  YAML::Emitter out;
  out << YAML::BeginMap;
  for (const auto& [tag, list] : entries_) {
    out << YAML::Key << std::string(to_string(tag)) << YAML::Value
        << YAML::BeginSeq;
    for (const auto& v : list) out << YAML::DoubleQuoted << v;
    out << YAML::EndSeq;
  }
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace mbst
