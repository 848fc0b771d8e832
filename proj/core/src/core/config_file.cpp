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

#include "photosplat/core/config_file.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "photosplat/core/error.hpp"

namespace photosplat {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Drops a trailing comment, ignoring '#' inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

bool is_bare_key(const std::string& key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  }
  return true;
}

bool parse_number(std::string text, double& out) {
  text.erase(std::remove(text.begin(), text.end(), '_'), text.end());
  if (text == "inf" || text == "+inf") {
    out = std::numeric_limits<double>::infinity();
    return true;
  }
  if (text.empty()) return false;
  std::size_t used = 0;
  try {
    out = std::stod(text, &used);
  } catch (const std::logic_error&) {
    return false;
  }
  return used == text.size();
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text, const std::string& origin) {
  ConfigFile cfg;
  cfg.origin_ = origin;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw_error(ErrorCode::kInvalidArgument,
                origin + ":" + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail("unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!is_bare_key(section)) fail("invalid section name '" + section + "'");
      cfg.sections_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!is_bare_key(key)) fail("invalid key '" + key + "'");
    if (value.empty()) fail("missing value for '" + key + "'");
    auto& table = cfg.sections_[section];
    if (table.count(key) != 0) fail("duplicate key '" + key + "'");

    if (value == "true" || value == "false") {
      table[key] = value == "true";
    } else if (value.front() == '"') {
      if (value.size() < 2 || value.back() != '"') fail("unterminated string");
      table[key] = value.substr(1, value.size() - 2);
    } else if (value.front() == '[') {
      if (value.back() != ']') fail("arrays must be written on one line");
      std::vector<double> items;
      std::stringstream body(value.substr(1, value.size() - 2));
      std::string item;
      while (std::getline(body, item, ',')) {
        item = trim(item);
        if (item.empty()) continue;
        double v = 0.0;
        if (!parse_number(item, v)) fail("array element '" + item + "' is not a number");
        items.push_back(v);
      }
      table[key] = std::move(items);
    } else {
      double v = 0.0;
      if (!parse_number(value, v)) fail("cannot parse value '" + value + "'");
      table[key] = v;
    }
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw_error(ErrorCode::kIo, "cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

const ConfigFile::Value* ConfigFile::find(const std::string& section,
                                          const std::string& key) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  auto k = s->second.find(key);
  if (k == s->second.end()) return nullptr;
  consumed_.insert(section + "." + key);
  return &k->second;
}

namespace {

template <typename T>
const T& expect(const ConfigFile::Value& v, const std::string& origin, const std::string& name,
                const char* type) {
  const T* p = std::get_if<T>(&v);
  if (p == nullptr) {
    throw_error(ErrorCode::kInvalidArgument, origin + ": '" + name + "' must be " + type);
  }
  return *p;
}

int to_int(double v, const std::string& origin, const std::string& name) {
  if (v != std::floor(v) || std::abs(v) > 2e9) {
    throw_error(ErrorCode::kInvalidArgument, origin + ": '" + name + "' must be an integer");
  }
  return static_cast<int>(v);
}

}  // namespace

void ConfigFile::get(const std::string& section, const std::string& key, double& out) const {
  if (const Value* v = find(section, key)) out = expect<double>(*v, origin_, section + "." + key, "a number");
}

void ConfigFile::get(const std::string& section, const std::string& key, int& out) const {
  if (const Value* v = find(section, key)) {
    const std::string name = section + "." + key;
    out = to_int(expect<double>(*v, origin_, name, "an integer"), origin_, name);
  }
}

void ConfigFile::get(const std::string& section, const std::string& key, bool& out) const {
  if (const Value* v = find(section, key)) out = expect<bool>(*v, origin_, section + "." + key, "a boolean");
}

void ConfigFile::get(const std::string& section, const std::string& key, std::string& out) const {
  if (const Value* v = find(section, key)) out = expect<std::string>(*v, origin_, section + "." + key, "a string");
}

void ConfigFile::get(const std::string& section, const std::string& key,
                     std::vector<double>& out) const {
  if (const Value* v = find(section, key)) out = expect<std::vector<double>>(*v, origin_, section + "." + key, "an array");
}

void ConfigFile::get(const std::string& section, const std::string& key,
                     std::vector<int>& out) const {
  if (const Value* v = find(section, key)) {
    const std::string name = section + "." + key;
    const auto& items = expect<std::vector<double>>(*v, origin_, name, "an array");
    out.clear();
    for (double d : items) out.push_back(to_int(d, origin_, name));
  }
}

std::vector<std::string> ConfigFile::unconsumed_keys() const {
  std::vector<std::string> out;
  for (const auto& [section, table] : sections_) {
    for (const auto& [key, value] : table) {
      const std::string name = section + "." + key;
      if (consumed_.count(name) == 0) out.push_back(name);
    }
  }
  return out;
}

std::vector<std::string> ConfigFile::sections() const {
  std::vector<std::string> out;
  for (const auto& entry : sections_) out.push_back(entry.first);
  return out;
}

}  // namespace photosplat
