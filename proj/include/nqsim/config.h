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

#ifndef NQSIM_CONFIG_H
#define NQSIM_CONFIG_H

#include <cstdint>
#include <istream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "nqsim/rational.h"

namespace nqsim {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Flat `key = value` file. `[section]` lines scope the following keys; a command reads
/// top-level keys and those of its own section. `#` starts a comment.
class RunConfig {
 public:
  RunConfig() = default;
  static RunConfig parse(std::istream &in, const std::string &source = "<config>");
  static RunConfig load(const std::string &path);

  /// Command-line overrides win over file values.
  void set(const std::string &key, const std::string &value) { overrides_[key] = value; }

  /// Typed lookups in `section`. Each records the value it resolved, defaults included.
  uint64_t get_u64(const std::string &section, const std::string &key, uint64_t fallback);
  Rational get_rational(const std::string &section, const std::string &key, const Rational &fallback);
  std::string get_string(const std::string &section, const std::string &key, const std::string &fallback);
  std::vector<uint64_t> get_u64_list(const std::string &section, const std::string &key,
                                     const std::vector<uint64_t> &fallback);
  std::vector<Rational> get_rational_list(const std::string &section, const std::string &key,
                                          const std::vector<Rational> &fallback);

  /// Throws ConfigError naming keys of `section` (or top level) that no lookup used.
  void reject_unused(const std::string &section) const;

  /// Resolved values in key order.
  const std::map<std::string, std::string> &resolved() const { return resolved_; }

 private:
  const std::string *find(const std::string &section, const std::string &key);
  std::map<std::string, std::string> values_;  // "section.key" or "key"
  std::map<std::string, std::string> overrides_;
  std::map<std::string, std::string> resolved_;
  std::set<std::string> used_;
};

}  // namespace nqsim

#endif
