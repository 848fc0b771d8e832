// Copyright 2026 The photosplat Authors
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

#pragma once

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace photosplat {

// Reader for the TOML subset used by the config files: [section] headers,
// `key = value` pairs where value is an integer, float, boolean, "string" or
// a flat array of numbers, and `#` comments. Anything else is rejected.
class ConfigFile {
 public:
  using Value = std::variant<bool, double, std::string, std::vector<double>>;

  static ConfigFile parse(const std::string& text, const std::string& origin = "<string>");
  static ConfigFile load(const std::filesystem::path& path);

  bool has(const std::string& section, const std::string& key) const;

  // Getters leave `out` untouched when the key is absent and throw
  // kInvalidArgument on a type mismatch. Every key read is marked as consumed.
  void get(const std::string& section, const std::string& key, double& out) const;
  void get(const std::string& section, const std::string& key, int& out) const;
  void get(const std::string& section, const std::string& key, bool& out) const;
  void get(const std::string& section, const std::string& key, std::string& out) const;
  void get(const std::string& section, const std::string& key, std::vector<double>& out) const;
  void get(const std::string& section, const std::string& key, std::vector<int>& out) const;

  // Keys present in the file that no getter asked for ("section.key").
  std::vector<std::string> unconsumed_keys() const;

  // Every section header in the file, including empty ones.
  std::vector<std::string> sections() const;

  const std::string& origin() const { return origin_; }

 private:
  const Value* find(const std::string& section, const std::string& key) const;

  std::string origin_;
  std::map<std::string, std::map<std::string, Value>> sections_;
  mutable std::set<std::string> consumed_;
};

}  // namespace photosplat
