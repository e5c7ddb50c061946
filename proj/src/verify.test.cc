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

#include "nqsim/verify.h"

#include <chrono>

#include "gtest/gtest.h"

using namespace nqsim;

TEST(verify, UnknownSuiteThrows) {
  EXPECT_THROW(verify_suite("nope", {}), std::invalid_argument);
}

TEST(verify, ChecksAreDeterministic) {
  VerifyOptions opt;
  opt.seed = 5;
  opt.trials = 2000;
  auto a = check_distance_chain(opt), b = check_distance_chain(opt);
  EXPECT_EQ(a.measured, b.measured);
  EXPECT_TRUE(a.pass);
  opt.seed = 6;
  EXPECT_NE(check_distance_chain(opt).measured, a.measured);
}

TEST(verify, AllChecksPassQuickly) {
  VerifyOptions opt;
  opt.trials = 20000;
  for (auto fn : {check_single_bit_faithfulness, check_single_bit_cost, check_tensorization, check_walk_hitting,
                  check_walk_stream_iid, check_walk_wald, check_sign_invariance, check_gapmaj_adapter,
                  check_mad_closed_form}) {
    auto t0 = std::chrono::steady_clock::now();
    CheckResult r = fn(opt);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_TRUE(r.pass) << r.name << ": " << r.measured;
    std::printf("%s %s (%.2fs)\n", r.name.c_str(), r.measured.c_str(), secs);
  }
}

TEST(verify, RealModeTensorization) {
  VerifyOptions opt;
  opt.rational = false;
  auto r = check_tensorization(opt);
  EXPECT_TRUE(r.pass) << r.measured;
  EXPECT_NE(r.measured.find("mode=real"), std::string::npos);
}
