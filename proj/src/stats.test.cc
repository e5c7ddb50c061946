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

#include "nqsim/stats.h"

#include <cmath>

#include "gtest/gtest.h"

using nqsim::Rational;
using nqsim::rat;

TEST(stats, BinomPmfExact) {
  EXPECT_EQ(nqsim::binom_pmf_exact(3, 2, rat(3, 5)), rat(54, 125));
  EXPECT_EQ(nqsim::binom_pmf_exact(3, 4, rat(3, 5)), 0);
}

TEST(stats, BinomPmfNormalizes) {
  for (unsigned long k : {1ul, 5ul, 17ul}) {
    Rational total = 0;
    for (unsigned long i = 0; i <= k; ++i) total += nqsim::binom_pmf_exact(k, i, rat(2, 7));
    EXPECT_EQ(total, 1);
  }
}

TEST(stats, HypergeomFullDrawIsPointMass) {
  EXPECT_EQ(nqsim::hypergeom_pmf(10, 4, 10, 4), 1);
  EXPECT_EQ(nqsim::hypergeom_tail(10, 4, 10, 4), 1);
  EXPECT_EQ(nqsim::hypergeom_tail(10, 4, 10, 5), 0);
}

TEST(stats, HypergeomSmallCase) {
  // 2 draws from {1,1,0,0}: Pr[both marked] = 1/6, Pr[one] = 4/6.
  EXPECT_EQ(nqsim::hypergeom_pmf(4, 2, 2, 2), rat(1, 6));
  EXPECT_EQ(nqsim::hypergeom_pmf(4, 2, 2, 1), rat(2, 3));
  EXPECT_EQ(nqsim::hypergeom_tail(4, 2, 2, 1), rat(5, 6));
}

TEST(stats, MadBinomialSmallValues) {
  EXPECT_EQ(nqsim::mad_binomial(1), rat(1, 2));
  EXPECT_EQ(nqsim::mad_binomial(3), rat(3, 4));
  for (unsigned long k = 1; k <= 15; k += 2) {
    EXPECT_EQ(nqsim::mad_binomial(k), nqsim::mad_binomial_bruteforce(k)) << k;
  }
  EXPECT_THROW(nqsim::mad_binomial(4), std::invalid_argument);
}

TEST(stats, MadBinomialBounds) {
  // M_3 = 0.75 lies in [0.6910, 0.9213].
  EXPECT_NEAR(std::sqrt(3 / (2 * M_PI)), 0.6910, 1e-4);
  EXPECT_NEAR(std::sqrt(3 / (2 * M_PI)) * (4.0 / 3), 0.9213, 1e-4);
  for (unsigned long k : {1ul, 3ul, 101ul, 9999ul}) {
    auto check = nqsim::mad_binomial_bounds(k, nqsim::mad_binomial(k));
    EXPECT_TRUE(check.lower_ok) << k;
    EXPECT_TRUE(check.upper_ok) << k;
  }
  // A value just below the lower bound is rejected.
  EXPECT_FALSE(nqsim::mad_binomial_bounds(3, rat(69, 100)).lower_ok);
}

TEST(stats, WilsonInterval) {
  auto ci = nqsim::wilson_ci(50, 100, 0.95);
  EXPECT_NEAR(ci.lo, 0.4038315, 1e-6);
  EXPECT_NEAR(ci.hi, 0.5961685, 1e-6);
  auto zero = nqsim::wilson_ci(0, 40);
  EXPECT_EQ(zero.lo, 0.0);
  EXPECT_GT(zero.hi, 0.0);
}

TEST(stats, ChiSquareGof) {
  EXPECT_NEAR(nqsim::chi_square_gof({10, 10, 10}, {10, 10, 10}), 1.0, 1e-12);
  // Statistic 1.8 on 2 dof.
  EXPECT_NEAR(nqsim::chi_square_gof({13, 7, 10}, {10, 10, 10}), 0.4065697, 1e-6);
  EXPECT_THROW(nqsim::chi_square_gof({1, 2}, {1, 2}), std::invalid_argument);
}

TEST(stats, WaldDeterministicLength) {
  nqsim::RngStream rng(5);
  auto sampler = [](nqsim::RngStream &r) { return 1.0 + r.uniform_int(3); };
  auto rule = [](const std::vector<double> &past, double) { return past.size() == 4; };
  auto res = nqsim::wald_check(sampler, rule, 20000, rng, 2.0);
  EXPECT_TRUE(res.ok);
  EXPECT_NEAR(res.ratio, 1.0, 0.02);
}

TEST(stats, WaldThresholdRuleHolds) {
  nqsim::RngStream rng(6);
  auto sampler = [](nqsim::RngStream &r) { return 1.0 + r.uniform_int(5); };
  auto rule = [](const std::vector<double> &past, double) {
    double s = 0;
    for (double x : past) s += x;
    return s >= 10;
  };
  EXPECT_TRUE(nqsim::wald_check(sampler, rule, 20000, rng).ok);
}

TEST(stats, WaldPeekingRuleIsFlagged) {
  nqsim::RngStream rng(7);
  auto sampler = [](nqsim::RngStream &r) { return 1.0 + 4.0 * r.uniform_int(2); };
  auto rule = [](const std::vector<double> &, double upcoming) { return upcoming > 1; };
  auto res = nqsim::wald_check(sampler, rule, 20000, rng);
  EXPECT_FALSE(res.ok);
}

TEST(stats, FittedSlope) {
  EXPECT_NEAR(nqsim::fitted_slope({1, 2, 3}, {2, 4, 6}), 2.0, 1e-12);
}
