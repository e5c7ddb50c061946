// Copyright 2026 Google LLC
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

#include "nqsim/config.h"

#include <cctype>
#include <fstream>
#include <sstream>

namespace nqsim {

namespace {

std::string trim(const std::string &s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

bool valid_name(const std::string &s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  }
  return true;
}

std::vector<std::string> split_list(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("empty list element in '" + s + "'");
    out.push_back(item);
  }
  return out;
}

uint64_t parse_u64(const std::string &key, const std::string &v) {
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos) {
    throw ConfigError("'" + key + "': expected a non-negative integer, got '" + v + "'");
  }
  try {
    return std::stoull(v);
  } catch (const std::out_of_range &) {
    throw ConfigError("'" + key + "': integer out of range '" + v + "'");
  }
}

Rational parse_rat(const std::string &key, const std::string &v) {
  try {
    return parse_rational(v);
  } catch (const std::invalid_argument &) {
    throw ConfigError("'" + key + "': expected a rational, got '" + v + "'");
  }
}

}  // namespace

RunConfig RunConfig::parse(std::istream &in, const std::string &source) {
  RunConfig cfg;
  std::string line, section;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::string where = source + ":" + std::to_string(lineno);
    if (line.front() == '[') {
      if (line.back() != ']' || !valid_name(trim(line.substr(1, line.size() - 2)))) {
        throw ConfigError(where + ": malformed section header '" + line + "'");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected 'key = value', got '" + line + "'");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (!valid_name(key)) throw ConfigError(where + ": bad key '" + key + "'");
    std::string full = section.empty() ? key : section + "." + key;
    if (!cfg.values_.emplace(full, value).second) throw ConfigError(where + ": duplicate key '" + full + "'");
  }
  return cfg;
}

RunConfig RunConfig::load(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  return parse(in, path);
}

const std::string *RunConfig::find(const std::string &section, const std::string &key) {
  if (auto it = overrides_.find(key); it != overrides_.end()) return &it->second;
  for (const std::string &full : {section + "." + key, key}) {
    if (auto it = values_.find(full); it != values_.end()) {
      used_.insert(full);
      return &it->second;
    }
  }
  return nullptr;
}

uint64_t RunConfig::get_u64(const std::string &section, const std::string &key, uint64_t fallback) {
  const std::string *v = find(section, key);
  uint64_t out = v ? parse_u64(key, *v) : fallback;
  resolved_[key] = std::to_string(out);
  return out;
}

Rational RunConfig::get_rational(const std::string &section, const std::string &key, const Rational &fallback) {
  const std::string *v = find(section, key);
  Rational out = v ? parse_rat(key, *v) : fallback;
  resolved_[key] = to_string(out);
  return out;
}

std::string RunConfig::get_string(const std::string &section, const std::string &key, const std::string &fallback) {
  const std::string *v = find(section, key);
  std::string out = v ? *v : fallback;
  resolved_[key] = out;
  return out;
}

std::vector<uint64_t> RunConfig::get_u64_list(const std::string &section, const std::string &key,
                                              const std::vector<uint64_t> &fallback) {
  const std::string *v = find(section, key);
  std::vector<uint64_t> out = fallback;
  if (v) {
    out.clear();
    if (!v->empty()) {
      for (const auto &item : split_list(*v)) out.push_back(parse_u64(key, item));
    }
  }
  std::string r;
  for (size_t i = 0; i < out.size(); ++i) r += (i ? "," : "") + std::to_string(out[i]);
  resolved_[key] = r;
  return out;
}

std::vector<Rational> RunConfig::get_rational_list(const std::string &section, const std::string &key,
                                                   const std::vector<Rational> &fallback) {
  const std::string *v = find(section, key);
  std::vector<Rational> out = fallback;
  if (v) {
    out.clear();
    if (!v->empty()) {
      for (const auto &item : split_list(*v)) out.push_back(parse_rat(key, item));
    }
  }
  std::string r;
  for (size_t i = 0; i < out.size(); ++i) r += (i ? "," : "") + to_string(out[i]);
  resolved_[key] = r;
  return out;
}

void RunConfig::reject_unused(const std::string &section) const {
  for (const auto &[full, value] : values_) {
    auto dot = full.find('.');
    bool mine = dot == std::string::npos || full.substr(0, dot) == section;
    if (mine && !used_.count(full)) throw ConfigError("unknown config key '" + full + "'");
  }
}

}  // namespace nqsim
