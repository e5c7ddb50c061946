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

#ifndef NQSIM_VERIFY_H
#define NQSIM_VERIFY_H

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace nqsim {

struct CheckResult {
  std::string suite;
  std::string name;
  std::string measured;  // deterministic rendering of the measured values
  bool pass = false;
};

struct VerifyOptions {
  uint64_t seed = 1;
  uint64_t trials = 0;  // Monte Carlo sample size; 0 keeps each check's default
  bool rational = true; // exact mode where a check has both
};

/// Suites: distances, osim, walk, channels, appendixA. Throws std::invalid_argument for
/// an unknown name.
std::vector<CheckResult> verify_suite(const std::string &suite, const VerifyOptions &opt);
std::vector<std::string> verify_suite_names();

CheckResult check_single_bit_faithfulness(const VerifyOptions &opt);
CheckResult check_single_bit_cost(const VerifyOptions &opt);
CheckResult check_session_faithfulness(const VerifyOptions &opt);
CheckResult check_session_cost_bound(const VerifyOptions &opt);
CheckResult check_tensorization(const VerifyOptions &opt);
CheckResult check_distance_chain(const VerifyOptions &opt);
CheckResult check_amplification(const VerifyOptions &opt);
CheckResult check_mad_closed_form(const VerifyOptions &opt);
CheckResult check_mad_bounds(const VerifyOptions &opt);
CheckResult check_walk_hitting(const VerifyOptions &opt);
CheckResult check_walk_segment_length(const VerifyOptions &opt);
CheckResult check_walk_stream_iid(const VerifyOptions &opt);
CheckResult check_walk_wald(const VerifyOptions &opt);
CheckResult check_sign_invariance(const VerifyOptions &opt);
CheckResult check_gapmaj_adapter(const VerifyOptions &opt);
CheckResult check_channels(const VerifyOptions &opt);

nlohmann::json to_json(const CheckResult &r);

}  // namespace nqsim

#endif
