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

#include "nqsim/walk.h"

#include <cmath>
#include <sstream>

#include "gtest/gtest.h"
#include "nqsim/stats.h"

using namespace nqsim;

namespace {

std::shared_ptr<const ProbeInput> bits(const std::string &s) {
  return std::make_shared<DenseInput>(BitString::from_string(s));
}

BitString weight_string(size_t n, size_t w) {
  BitString x(n);
  for (size_t i = 0; i < w; ++i) x.set(i, 1);
  return x;
}

}  // namespace

TEST(walk, ParamsExamples) {
  auto w = walk_params(rat(1, 50), rat(1, 2));
  EXPECT_EQ(w.t, 5u);
  double r = std::pow(1.02 / 0.98, 5);
  EXPECT_NEAR(w.r.get_d(), r, 1e-12);
  EXPECT_NEAR(w.r.get_d(), 1.221435, 5e-7);
  EXPECT_NEAR(w.delta_prime.get_d(), (r - 1) / (r + 1), 1e-12);
  EXPECT_NEAR(w.delta_prime.get_d(), 0.0996812, 5e-8);
  EXPECT_NEAR(w.p_up.get_d(), 0.54984, 5e-6);
  EXPECT_EQ(w.p_up + w.p_up / w.r, 1);
  EXPECT_LT(w.delta_prime, w.delta);

  auto one = walk_params(rat(1, 10), rat(1, 2));
  EXPECT_EQ(one.t, 1u);
  EXPECT_EQ(one.r, rat(11, 9));
  EXPECT_EQ(one.delta_prime, rat(1, 10));

  EXPECT_THROW(walk_params(rat(1, 5), rat(1, 2)), std::invalid_argument);
  EXPECT_THROW(walk_params(Rational(0), rat(1, 2)), std::invalid_argument);
  EXPECT_THROW(walk_params(rat(1, 10), rat(3, 2)), std::invalid_argument);
}

TEST(walk, RatioBoundsOnGrid) {
  for (long gd : {11, 20, 40, 100, 300}) {
    for (long dn = 1; dn <= 10; ++dn) {
      Rational gamma = rat(1, gd), delta = rat(dn, 10);
      if (delta <= 10 * gamma) continue;
      auto w = walk_params(gamma, delta);
      EXPECT_GE(w.r, 1 + delta / 5) << gd << " " << dn;
      EXPECT_LE(w.r, 1 + delta) << gd << " " << dn;
    }
  }
}

TEST(walk, HittingStepsClosedForm) {
  EXPECT_NEAR(expected_hitting_steps(0.1, 2), 3.96040, 5e-6);
  EXPECT_EQ(expected_hitting_steps(0.0, 2), 4.0);
  EXPECT_NEAR(expected_hitting_steps(1e-7, 2), 4.0, 1e-6);
  EXPECT_NEAR(expected_hitting_steps(0.3, 1), 1.0, 1e-12);
  for (unsigned long t = 1; t <= 40; ++t) {
    for (double g : {0.001, 0.01, 0.05, 0.1, 0.2}) {
      EXPECT_GE(expected_hitting_steps(g, t), t * t / (1 + g * t) - 1e-9);
    }
  }
}

TEST(walk, HittingStepsMatchesLinearSystem) {
  // Independent oracle: solve E(x) = 1 + p E(x+1) + q E(x-1), E(+-t) = 0 by iteration.
  for (unsigned long t : {1ul, 2ul, 3ul, 5ul}) {
    for (double g : {0.05, 0.1, 0.3}) {
      std::vector<double> e(2 * t + 1, 0.0);
      double p = (1 + g) / 2;
      for (int it = 0; it < 20000; ++it) {
        for (size_t x = 1; x < 2 * t; ++x) e[x] = 1 + p * e[x + 1] + (1 - p) * e[x - 1];
      }
      EXPECT_NEAR(expected_hitting_steps(g, t), e[t], 1e-9);
    }
  }
}

TEST(walk, SegmentSampleShapes) {
  RngStream rng(61);
  for (int i = 0; i < 100; ++i) {
    auto s = segment_sample(0.2, 1, i & 1, rng);
    ASSERT_EQ(s.size(), 1u);
    EXPECT_EQ(s[0], (i & 1) ? 1 : -1);
  }
  for (int i = 0; i < 200; ++i) {
    bool up = i % 3 != 0;
    auto s = segment_sample(-0.1, 3, up, rng);
    long pos = 0;
    for (size_t j = 0; j < s.size(); ++j) {
      pos += s[j];
      if (j + 1 < s.size()) EXPECT_LT(std::abs(pos), 3);
    }
    EXPECT_EQ(pos, up ? 3 : -3);
  }
}

TEST(walk, RawWalkHittingProbability) {
  auto w = walk_params(rat(1, 10), rat(1, 1));
  ASSERT_EQ(w.t, 2u);
  RngStream rng(62);
  const uint64_t n = 100000;
  uint64_t ups = 0;
  for (uint64_t i = 0; i < n; ++i) ups += raw_walk(0.1, 2, rng).up;
  EXPECT_TRUE(wilson_ci(ups, n, 0.99).contains(w.p_up.get_d()));
  EXPECT_EQ(w.r, rat(121, 81));
}

TEST(walk, StreamPrefixLawIsExactlyIid) {
  for (auto [g, d] : {std::pair{rat(1, 10), rat(1, 2)}, {rat(1, 10), rat(1, 1)}, {rat(1, 20), rat(1, 2)}}) {
    auto w = walk_params(g, d);
    ASSERT_LE(w.t, 2u);
    for (uint8_t b : {0, 1}) {
      RDist want = tensor_power(bernoulli_dist<Rational>(b ? Rational((1 + g) / 2) : Rational((1 - g) / 2)), 4);
      EXPECT_EQ(stream_prefix_law(w, b, 4), want);
    }
  }
}

TEST(walk, StreamSampledBitsAreIid) {
  auto w = walk_params(rat(1, 10), rat(1, 1));
  SampledRandomness src(RngStream(63));
  NoisyOracle o(bits("1"), src);
  BiasStream s(o, 0, w, RngStream(64), true);
  const int n = 100000;
  std::vector<uint8_t> xs(n);
  for (int i = 0; i < n; ++i) xs[i] = s.next();
  double p = 0.55;
  std::vector<double> single(2), pairs(4);
  for (int i = 0; i < n; ++i) single[xs[i]] += 1;
  for (int i = 0; i + 1 < n; i += 2) pairs[2 * xs[i] + xs[i + 1]] += 1;
  EXPECT_GT(chi_square_gof(single, {n * (1 - p), n * p}), 1e-3);
  double np = n / 2;
  EXPECT_GT(chi_square_gof(pairs, {np * (1 - p) * (1 - p), np * (1 - p) * p, np * p * (1 - p), np * p * p}), 1e-3);
  // Segments are consumed whole, so emitted bits lag the segment total by the buffer.
  double per_bit = static_cast<double>(s.delta_queries()) / n;
  EXPECT_NEAR(per_bit * expected_hitting_steps(0.1, 2), 1.0, 0.02);
  std::ostringstream csv;
  s.write_csv(csv);
  EXPECT_EQ(csv.str().substr(0, 40), "segment,length,direction,delta_queries\n0");
}

TEST(walk, SingleStepStreamIsDegradedOracle) {
  auto w = walk_params(rat(1, 10), rat(1, 2));
  ASSERT_EQ(w.t, 1u);
  EXPECT_EQ(w.delta_prime, w.gamma);
  SampledRandomness src(RngStream(65));
  NoisyOracle o(bits("0"), src);
  BiasStream s(o, 0, w, RngStream(66));
  for (int i = 0; i < 1000; ++i) s.next();
  EXPECT_EQ(s.delta_queries(), 1000u);
  EXPECT_EQ(o.ledger().exact_total(), 1000 * w.delta * w.delta);
}

TEST(walk, SignInvariance) {
  for (unsigned long t = 1; t <= 3; ++t) {
    for (Rational g : {rat(1, 10), rat(1, 5)}) {
      auto rep = sign_invariance(g, t, 12);
      EXPECT_TRUE(rep.per_sequence_equal);
      EXPECT_TRUE(rep.complete());
      EXPECT_EQ(rep.tail_plus, rep.tail_minus);
      EXPECT_GT(rep.sequences, 0u);
    }
  }
  EXPECT_EQ(sign_invariance(rat(1, 10), 1, 12).tail_plus, 0);
}

TEST(walk, AdapterSixteenBits) {
  auto plan = plan_gapmaj_adapter(16, Rational(1));
  EXPECT_EQ(plan.levels.hi, 12u);
  EXPECT_EQ(plan.levels.lo, 4u);
  EXPECT_EQ(plan.k, 1u);
  EXPECT_EQ(plan.q1 - plan.q0, rat(1, 2));
  EXPECT_EQ(plan.f0, rat(1, 4));
  EXPECT_EQ(plan.f1, rat(1, 4));
  EXPECT_EQ(adapter_prob_one_exact(plan, 12), rat(5, 8));
  EXPECT_EQ(adapter_prob_one_exact(plan, 4), rat(3, 8));

  SampledRandomness coins(RngStream(67));
  RngStream pick(68);
  DenseInput hi(weight_string(16, 12)), lo(weight_string(16, 4)), mid(weight_string(16, 8));
  auto full = gapmaj_oracle_adapter(hi, plan, AdapterMode::kFull, coins, pick);
  EXPECT_EQ(full.bit, 1);
  EXPECT_EQ(full.queries, 16u);
  EXPECT_EQ(gapmaj_oracle_adapter(lo, plan, AdapterMode::kFull, coins, pick).bit, 0);
  EXPECT_THROW(gapmaj_oracle_adapter(mid, plan, AdapterMode::kFull, coins, pick), PromiseViolation);

  const int n = 40000;
  std::vector<double> obs(2);
  for (int i = 0; i < n; ++i) obs[gapmaj_oracle_adapter(hi, plan, AdapterMode::kCheap, coins, pick).bit] += 1;
  EXPECT_GT(chi_square_gof(obs, {n * 3.0 / 8, n * 5.0 / 8}), 1e-3);
}

TEST(walk, AdapterOddSizeAndAmplification) {
  auto asym = plan_gapmaj_adapter(17, Rational(1), rat(1, 5));
  EXPECT_EQ(asym.levels.hi + asym.levels.lo, 17u);
  EXPECT_EQ(adapter_prob_one_exact(asym, asym.levels.hi), rat(3, 5));
  EXPECT_EQ(adapter_prob_one_exact(asym, asym.levels.lo), rat(2, 5));

  auto amp = plan_gapmaj_adapter(64, rat(1, 4));
  EXPECT_GT(amp.k, 1u);
  EXPECT_EQ(adapter_prob_one_exact(amp, amp.levels.hi), rat(9, 16));
  EXPECT_EQ(adapter_prob_one_exact(amp, amp.levels.lo), rat(7, 16));
  EXPECT_THROW(plan_gapmaj_adapter(20, Rational(1)), std::invalid_argument);
}
