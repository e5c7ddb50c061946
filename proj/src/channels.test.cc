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

#include "nqsim/channels.h"

#include <cmath>
#include <fstream>
#include <map>

#include "gtest/gtest.h"
#include "json.hpp"
#include "nqsim/stats.h"

using namespace nqsim;

namespace {

double h2(double p) { return binary_entropy(p); }

// Brute-force H(f(X)|Y) over explicit output strings, in doubles, for either channel.
double brute_cond_entropy(const PartialFn &f, const DDist &mu, bool erasure, double param) {
  size_t n = f.arity;
  size_t outputs = 1;
  for (size_t i = 0; i < n; ++i) outputs *= erasure ? 3 : 2;
  double h = 0;
  for (size_t code = 0; code < outputs; ++code) {
    std::vector<int> y(n);
    size_t c = code;
    for (size_t i = 0; i < n; ++i) {
      y[i] = c % (erasure ? 3 : 2);
      c /= erasure ? 3 : 2;
    }
    double joint[2] = {0, 0};
    for (const auto &[x, p] : mu.items()) {
      double w = p;
      for (size_t i = 0; i < n; ++i) {
        if (erasure) w *= y[i] == 2 ? 1 - param : (y[i] == x[i] ? param : 0.0);
        else w *= y[i] == x[i] ? (1 + param) / 2 : (1 - param) / 2;
      }
      joint[static_cast<int>(f.eval(x))] += w;
    }
    double tot = joint[0] + joint[1];
    if (tot > 0) h += tot * h2(joint[1] / tot);
  }
  return h;
}

}  // namespace

TEST(channels, ApplyChannelLimits) {
  RngStream rng(71);
  BitString x = BitString::from_string("0110100");
  EXPECT_EQ(symbols_to_string(apply_channel(ChannelSpec::noisy(Rational(1)), x, rng)), "0110100");
  EXPECT_EQ(symbols_to_string(apply_channel(ChannelSpec::erasure(Rational(0)), x, rng)), "*******");
  EXPECT_EQ(symbols_to_string(apply_channel(ChannelSpec::erasure(Rational(1)), x, rng)), "0110100");
  EXPECT_THROW(ChannelSpec::noisy(rat(3, 2)), std::invalid_argument);
}

TEST(channels, NoisyFlipFrequency) {
  RngStream rng(72);
  BitString zeros(1000);
  uint64_t flips = 0, total = 0;
  for (int r = 0; r < 1000; ++r) {
    for (uint8_t c : apply_channel(ChannelSpec::noisy(rat(1, 2)), zeros, rng)) flips += c;
    total += 1000;
  }
  EXPECT_TRUE(wilson_ci(flips, total, 0.99).contains(0.25));
}

TEST(channels, CondEntropyLimits) {
  auto maj = majority(3);
  RngStream rng(73);
  RDist mu = random_rational_dist(all_strings(3), rng);
  EXPECT_NEAR(cond_entropy_exact(maj, mu, ChannelSpec::noisy(Rational(1))), 0.0, 1e-15);
  double hf = entropy(mu.pushforward([&](const BitString &x) { return static_cast<int>(maj.eval(x)); }));
  EXPECT_NEAR(cond_entropy_exact(maj, mu, ChannelSpec::noisy(Rational(0))), hf, 1e-12);
  EXPECT_NEAR(cond_entropy_exact(maj, mu, ChannelSpec::erasure(Rational(0))), hf, 1e-12);
  EXPECT_NEAR(cond_entropy_exact(maj, mu, ChannelSpec::erasure(Rational(1))), 0.0, 1e-15);
}

TEST(channels, ParityTwoClosedForm) {
  auto par = parity(2);
  RDist u = uniform_over<Rational>(all_strings(2));
  for (long j = 0; j <= 10; ++j) {
    double rho = j / 10.0;
    EXPECT_NEAR(cond_entropy_exact(par, u, ChannelSpec::noisy(rat(j, 10))), h2((1 + rho * rho) / 2), 1e-12);
  }
}

TEST(channels, MatchesBruteForce) {
  RngStream rng(74);
  for (int t = 0; t < 20; ++t) {
    size_t n = 2 + rng.uniform_int(3);
    std::vector<FnValue> table(size_t{1} << n);
    for (auto &v : table) v = fn_value(rng.fair_bit());
    auto f = table_fn(n, table, "rand");
    RDist mu = random_rational_dist(all_strings(n), rng);
    for (long j : {1, 4, 7}) {
      double p = j / 10.0;
      EXPECT_NEAR(cond_entropy_exact(f, mu, ChannelSpec::noisy(rat(j, 10))),
                  brute_cond_entropy(f, mu.to_double(), false, p), 1e-12);
      EXPECT_NEAR(cond_entropy_exact(f, mu, ChannelSpec::erasure(rat(j, 10))),
                  brute_cond_entropy(f, mu.to_double(), true, p), 1e-12);
    }
  }
}

TEST(channels, SupportOutsidePromiseRejected) {
  auto g = gapmaj(4, rat(1, 2));
  RDist u = uniform_over<Rational>(all_strings(4));
  EXPECT_THROW(cond_entropy_exact(g, u, ChannelSpec::noisy(rat(1, 2))), SupportOutsidePromise);
}

TEST(channels, SamorodnitskyLimitsAndMajority) {
  auto maj = majority(3);
  RDist u = uniform_over<Rational>(all_strings(3));
  auto one = samorodnitsky_check(maj, u, Rational(1));
  EXPECT_NEAR(one.h_noisy, 0.0, 1e-15);
  EXPECT_NEAR(one.margin, 0.0, 1e-15);
  auto zero = samorodnitsky_check(maj, u, Rational(0));
  EXPECT_NEAR(zero.h_noisy, 1.0, 1e-12);
  EXPECT_NEAR(zero.margin, 0.0, 1e-12);

  auto half = samorodnitsky_check(maj, u, rat(1, 2));
  EXPECT_TRUE(half.ok());
  EXPECT_GE(half.margin, 0.0);
  EXPECT_NEAR(half.h_noisy, brute_cond_entropy(maj, u.to_double(), false, 0.5), 1e-12);
  EXPECT_NEAR(half.h_erasure, brute_cond_entropy(maj, u.to_double(), true, 0.25), 1e-12);

  std::ifstream in(std::string(NQSIM_GOLDEN_DIR) + "/channels_majority3.json");
  ASSERT_TRUE(in.good());
  auto golden = nlohmann::json::parse(in);
  EXPECT_NEAR(half.h_noisy, golden["h_noisy"].get<double>(), 1e-12);
  EXPECT_NEAR(half.h_erasure, golden["h_erasure"].get<double>(), 1e-12);
  EXPECT_NEAR(half.margin, golden["margin"].get<double>(), 1e-12);
}

TEST(channels, FanoExamples) {
  auto par = parity(2);
  RDist u = uniform_over<Rational>(all_strings(2));
  auto det = fano_bounds_check(par, u, ChannelSpec::noisy(Rational(1)));
  EXPECT_EQ(det.err_bayes, 0);
  EXPECT_NEAR(det.h, 0.0, 1e-15);
  auto indep = fano_bounds_check(par, u, ChannelSpec::noisy(Rational(0)));
  EXPECT_EQ(indep.err_bayes, rat(1, 2));
  EXPECT_NEAR(indep.h, 1.0, 1e-12);
  EXPECT_TRUE(indep.lower_ok && indep.upper_ok);
  auto mid = fano_bounds_check(par, u, ChannelSpec::noisy(rat(3, 5)));
  EXPECT_EQ(mid.err_bayes, (1 - rat(9, 25)) / 2);
  EXPECT_TRUE(mid.lower_ok && mid.upper_ok);
}

TEST(channels, NoisyEntropyMonotoneInRho) {
  RngStream rng(75);
  for (int t = 0; t < 20; ++t) {
    std::vector<FnValue> table(8);
    for (auto &v : table) v = fn_value(rng.fair_bit());
    auto f = table_fn(3, table, "rand");
    RDist mu = random_rational_dist(all_strings(3), rng);
    double prev = 2;
    for (long j = 0; j <= 10; ++j) {
      double h = cond_entropy_exact(f, mu, ChannelSpec::noisy(rat(j, 10)));
      EXPECT_LE(h, prev + 1e-12);
      prev = h;
    }
  }
}

TEST(channels, SmallSweepHolds) {
  SweepConfig cfg;
  cfg.random_functions = 20;
  cfg.rhos = {rat(1, 10), rat(1, 2), rat(9, 10)};
  auto rows = channel_sweep(cfg, RngStream(76));
  EXPECT_EQ(rows.size(), (16u + 20u) * 3u);
  for (const auto &r : rows) {
    EXPECT_GE(r.margin, -1e-12) << r.f_id;
    EXPECT_TRUE(r.fano_ok) << r.f_id;
  }
  auto again = channel_sweep(cfg, RngStream(76));
  EXPECT_EQ(again.back().margin, rows.back().margin);
}
