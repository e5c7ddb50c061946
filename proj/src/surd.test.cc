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

#include "nqsim/surd.h"

#include <cmath>

#include "gtest/gtest.h"

using nqsim::Rational;
using nqsim::Surd;
using nqsim::rat;

TEST(surd, SqrtOfPerfectSquareIsRational) {
  Surd s = Surd::sqrt_of(rat(9, 4));
  EXPECT_TRUE(s.is_rational());
  EXPECT_EQ(s.rational_part(), rat(3, 2));
  EXPECT_TRUE(Surd::sqrt_of(0).is_zero());
}

TEST(surd, SqrtOfHalfCanonicalizes) {
  // sqrt(1/2) = sqrt(2)/2
  Surd s = Surd::sqrt_of(rat(1, 2));
  ASSERT_EQ(s.num_terms(), 1u);
  EXPECT_EQ(s.terms().begin()->first, 2);
  EXPECT_EQ(s.terms().begin()->second, rat(1, 2));
  EXPECT_EQ(s * s, Surd(rat(1, 2)));
}

TEST(surd, ProductOfRootsSharesFactors) {
  Surd a = Surd::sqrt_of(6), b = Surd::sqrt_of(10);
  // sqrt(60) = 2 sqrt(15)
  Surd p = a * b;
  EXPECT_EQ(p, Surd(2) * Surd::sqrt_of(15));
  EXPECT_NEAR(p.to_double(), std::sqrt(60.0), 1e-12);
}

TEST(surd, LinearIndependenceGivesExactEquality) {
  Surd lhs = Surd::sqrt_of(2) + Surd::sqrt_of(8);
  Surd rhs = Surd(3) * Surd::sqrt_of(2);
  EXPECT_EQ(lhs, rhs);
  EXPECT_NE(Surd::sqrt_of(2) + Surd::sqrt_of(3), Surd::sqrt_of(5));
  EXPECT_TRUE((lhs - rhs).is_zero());
}

TEST(surd, SignOfNearCancellation) {
  // sqrt(2) + sqrt(3) vs sqrt(5 + 2 sqrt 6); compare squares, then a close pair.
  Surd x = Surd::sqrt_of(2) + Surd::sqrt_of(3);
  EXPECT_EQ(x * x, Surd(5) + Surd(2) * Surd::sqrt_of(6));
  // 1 - sqrt(2)/2 - 0.2928932188 > 0 with a tiny margin.
  Surd close = Surd(1) - Surd::sqrt_of(rat(1, 2)) - Surd(rat(2928932188, 10000000000));
  EXPECT_EQ(close.sign(), 1);
  Surd below = Surd(1) - Surd::sqrt_of(rat(1, 2)) - Surd(rat(2928932189, 10000000000));
  EXPECT_EQ(below.sign(), -1);
  EXPECT_EQ(Surd().sign(), 0);
  EXPECT_LT(Surd::sqrt_of(2), Surd(rat(3, 2)));
}

TEST(surd, PowerMatchesRepeatedProduct) {
  Surd f = Surd::sqrt_of(rat(3, 8)) + Surd::sqrt_of(rat(1, 8));
  Surd expect = f * f * f * f * f;
  EXPECT_EQ(nqsim::pow(f, 5), expect);
  EXPECT_EQ(nqsim::pow(f, 0), Surd(1));
}

TEST(surd, NegativeArgumentRejected) {
  EXPECT_THROW(Surd::sqrt_of(-1), std::domain_error);
}

TEST(rational, ParseForms) {
  EXPECT_EQ(nqsim::parse_rational("0.25"), rat(1, 4));
  EXPECT_EQ(nqsim::parse_rational("010"), 10);
  EXPECT_EQ(nqsim::parse_rational(" 3/6 "), rat(1, 2));
  EXPECT_EQ(nqsim::parse_rational("-0.5"), rat(-1, 2));
  EXPECT_EQ(nqsim::parse_rational("0.900000"), rat(9, 10));
  EXPECT_THROW(nqsim::parse_rational("abc"), std::invalid_argument);
  EXPECT_THROW(nqsim::parse_rational("1/0"), std::invalid_argument);
  EXPECT_THROW(nqsim::parse_rational(""), std::invalid_argument);
}

TEST(rational, RatCanonicalizes) {
  Rational r = rat(4, 8);
  EXPECT_EQ(r.get_num(), 1);
  EXPECT_EQ(r.get_den(), 2);
  EXPECT_EQ(r + r, 1);
}
