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

#include "nqsim/boolfn.h"

#include <bit>
#include <cmath>

#include "gtest/gtest.h"

using namespace nqsim;

namespace {

BitString weight_string(uint64_t m, uint64_t w) {
  BitString x(m);
  for (uint64_t i = 0; i < w; ++i) x.set(i, 1);
  return x;
}

// Floating-point radius, used as an independent check of the exact threshold search.
int64_t float_radius(uint64_t k, double c) {
  double t = k / 2.0 - c * std::sqrt(k * std::log2(static_cast<double>(k)));
  return static_cast<int64_t>(std::floor(t));
}

}  // namespace

TEST(boolfn, BitStringBasics) {
  BitString x = BitString::from_string("1011");
  EXPECT_EQ(x.weight(), 3u);
  EXPECT_EQ(x.to_uint(), 0b1101u);
  EXPECT_EQ(BitString::from_uint(0b1101, 4), x);
  EXPECT_EQ(x.to_string(), "1011");
  EXPECT_EQ(hamming_distance(x, BitString::from_string("0011")), 1u);
  EXPECT_THROW(BitString(kMaxDenseBits + 1), std::length_error);
}

TEST(boolfn, PartialAssignmentConsistency) {
  PartialAssignment z = PartialAssignment::from_string("0*1");
  EXPECT_TRUE(z.consistent_with(BitString::from_string("011")));
  EXPECT_FALSE(z.consistent_with(BitString::from_string("111")));
  PartialAssignment star(3);
  EXPECT_TRUE(star.consistent_with(z));
  EXPECT_TRUE(z.consistent_with(z));
  EXPECT_TRUE(z.consistent_with(PartialAssignment::from_string("**1")));
  EXPECT_FALSE(z.consistent_with(PartialAssignment::from_string("1**")));
  EXPECT_EQ(z.num_set(), 2u);
}

TEST(boolfn, GapMajPaperLevels) {
  PartialFn f = gapmaj(100, 2);
  EXPECT_EQ(f.eval(weight_string(100, 70)), FnValue::kOne);
  EXPECT_EQ(f.eval(weight_string(100, 30)), FnValue::kZero);
  EXPECT_EQ(f.eval(weight_string(100, 50)), FnValue::kOutside);
  PartialFn g = gapmaj(16, 1);
  EXPECT_EQ(g.eval(weight_string(16, 12)), FnValue::kOne);
  EXPECT_EQ(g.eval(weight_string(16, 4)), FnValue::kZero);
}

TEST(boolfn, GapMajPromisePartitionsByWeight) {
  for (uint64_t m : {4u, 9u, 16u, 17u, 25u}) {
    for (Rational gap : {Rational(1), rat(3, 2), rat(1, 2)}) {
      if (!gapmaj_valid(m, gap)) continue;
      GapLevels lv = gapmaj_levels(m, gap);
      double s = gap.get_d() * std::sqrt(static_cast<double>(m));
      EXPECT_EQ(lv.hi, static_cast<uint64_t>(std::ceil(m / 2.0 + s - 1e-12)));
      EXPECT_EQ(lv.lo, static_cast<uint64_t>(std::floor(m / 2.0 - s + 1e-12)));
      PartialFn f = gapmaj(m, gap);
      for (uint64_t w = 0; w <= m; ++w) {
        FnValue expect = w == lv.hi ? FnValue::kOne : w == lv.lo ? FnValue::kZero : FnValue::kOutside;
        EXPECT_EQ(f.eval(weight_string(m, w)), expect) << m << " " << w;
      }
    }
  }
}

TEST(boolfn, GapMajRejectsDegenerateParameters) {
  EXPECT_THROW(gapmaj(3, 1), std::invalid_argument);
  EXPECT_THROW(gapmaj(100, 6), std::invalid_argument);
  EXPECT_NO_THROW(gapmaj(100, 5));
  EXPECT_EQ(smallest_valid_gapmaj(3, 1), 4u);
  EXPECT_EQ(smallest_valid_gapmaj(13, 2), 16u);
}

TEST(boolfn, TrivOrAnd) {
  EXPECT_EQ(triv(3).eval(BitString::from_string("111")), FnValue::kOne);
  EXPECT_EQ(triv(3).eval(BitString::from_string("000")), FnValue::kZero);
  EXPECT_EQ(triv(3).eval(BitString::from_string("101")), FnValue::kOutside);
  EXPECT_EQ(or_n(2).eval(BitString::from_string("00")), FnValue::kZero);
  EXPECT_EQ(or_n(2).eval(BitString::from_string("01")), FnValue::kOne);
  EXPECT_EQ(and_n(2).eval(BitString::from_string("01")), FnValue::kZero);
  EXPECT_EQ(majority(3).eval(BitString::from_string("110")), FnValue::kOne);
  EXPECT_EQ(parity(3).eval(BitString::from_string("110")), FnValue::kZero);
}

TEST(boolfn, ComposeExamples) {
  PartialFn g = gapmaj(16, 1);
  auto blocks = [](uint64_t w1, uint64_t w2) {
    BitString x(32);
    for (uint64_t i = 0; i < w1; ++i) x.set(i, 1);
    for (uint64_t i = 0; i < w2; ++i) x.set(16 + i, 1);
    return x;
  };
  EXPECT_EQ(compose(triv(2), g).eval(blocks(12, 12)), FnValue::kOne);
  EXPECT_EQ(compose(triv(2), g).eval(blocks(12, 4)), FnValue::kOutside);
  EXPECT_EQ(compose(or_n(2), g).eval(blocks(4, 12)), FnValue::kOne);
  EXPECT_EQ(compose(or_n(2), g).eval(blocks(4, 4)), FnValue::kZero);
  EXPECT_EQ(compose(or_n(2), g).eval(blocks(4, 8)), FnValue::kOutside);
}

TEST(boolfn, ComposeAgreesWithBlockwiseEvaluation) {
  std::vector<PartialFn> outers = {or_n(2), and_n(2), triv(2), majority(3), parity(2), triv(4)};
  std::vector<PartialFn> inners = {and_n(2), or_n(2), triv(2), majority(3), gapmaj(4, 1), triv(4), parity(1)};
  for (const auto &f : outers) {
    for (const auto &g : inners) {
      if (f.arity * g.arity > 16) continue;
      PartialFn h = compose(f, g);
      for (uint64_t v = 0; v < (uint64_t{1} << h.arity); ++v) {
        BitString x = BitString::from_uint(v, h.arity);
        BitString outer(f.arity);
        bool inside = true;
        for (uint64_t j = 0; j < f.arity; ++j) {
          BitString block(g.arity);
          for (uint64_t t = 0; t < g.arity; ++t) block.set(t, x[j * g.arity + t]);
          FnValue gv = g.eval(block);
          if (gv == FnValue::kOutside) inside = false;
          else outer.set(j, static_cast<uint8_t>(gv));
        }
        FnValue expect = inside ? f.eval(outer) : FnValue::kOutside;
        ASSERT_EQ(h.eval(x), expect) << h.name << " " << x.to_string();
      }
    }
  }
}

TEST(boolfn, EvalIsStable) {
  PartialFn f = approxindex(4, 0);
  RngStream rng(1);
  for (int t = 0; t < 50; ++t) {
    BitString x(f.arity);
    for (uint64_t i = 0; i < f.arity; ++i) x.set(i, rng.fair_bit());
    EXPECT_EQ(f.eval(x), f.eval(x));
  }
}

TEST(boolfn, ApproxIndexRadiusMatchesFloatThreshold) {
  for (uint64_t k = 4; k <= 40; ++k) {
    for (double c : {0.0, 0.25, 0.4, 0.9, 2.0}) {
      Rational rc = parse_rational(std::to_string(c));
      int64_t expect = std::max<int64_t>(-1, float_radius(k, c));
      EXPECT_EQ(approxindex_raw_radius(k, rc), expect) << k << " " << c;
    }
  }
  // Paper coefficient: negative at desk-scale k, positive from k = 128.
  EXPECT_EQ(approxindex_raw_radius(8, 2), -1);
  EXPECT_EQ(approxindex_raw_radius(128, 2), 4);
  EXPECT_TRUE(ApproxIndex(8).radius_clamped());
  EXPECT_EQ(ApproxIndex(8).radius(), 0u);
}

TEST(boolfn, ApproxIndexPowerOfTwoExactBoundary) {
  // k = 16, c = 1/2: threshold 8 - 0.5 * 8 = 4 exactly, so d = 4 is inside.
  EXPECT_EQ(approxindex_raw_radius(16, rat(1, 2)), 4);
  // k = 64, c = 1: threshold 32 - sqrt(384) = 12.4...
  EXPECT_EQ(approxindex_raw_radius(64, 1), 12);
}

TEST(boolfn, ApproxIndexSmallExamples) {
  ApproxIndex fn(8);
  BitString a(8);
  ApproxIndexInput in(fn, a, 1);
  EXPECT_EQ(in.cell(0), 1);
  EXPECT_EQ(in.cell(255), 2);
  BitString x = materialize(in);
  EXPECT_EQ(fn.eval_boolean(x), FnValue::kOne);
  // Flip one far cell to 0: encoding 10 -> 00.
  uint64_t far = 255;
  x.set(8 + 2 * far, 0);
  EXPECT_EQ(fn.eval_boolean(x), FnValue::kOutside);

  BitString a2 = BitString::from_string("10110010");
  BitString y = materialize(ApproxIndexInput(fn, a2, 0));
  EXPECT_EQ(fn.eval_boolean(y), FnValue::kZero);
  // Invalid symbol 11 anywhere is outside the promise.
  y.set(8 + 2 * 3, 1);
  y.set(8 + 2 * 3 + 1, 1);
  EXPECT_EQ(fn.eval_boolean(y), FnValue::kOutside);
}

TEST(boolfn, ApproxIndexNearCellsWithPositiveRadius) {
  ApproxIndex fn(8, rat(1, 4));
  ASSERT_EQ(fn.radius(), static_cast<uint64_t>(float_radius(8, 0.25)));
  ASSERT_GT(fn.radius(), 0u);
  BitString a = BitString::from_string("11001010");
  ApproxIndexInput in(fn, a, 1);
  uint64_t ai = a.to_uint();
  for (uint64_t b = 0; b < 256; ++b) {
    uint8_t expect = static_cast<uint64_t>(std::popcount(ai ^ b)) <= fn.radius() ? 1 : 2;
    EXPECT_EQ(in.cell(b), expect);
  }
  EXPECT_EQ(fn.eval_boolean(materialize(in)), FnValue::kOne);
}

TEST(boolfn, ApproxIndexInputsAreInPromise) {
  RngStream rng(42);
  for (uint64_t k = 8; k <= 16; ++k) {
    for (Rational c : {Rational(2), rat(2, 5)}) {
      ApproxIndex fn(k, c);
      for (int t = 0; t < 2; ++t) {
        BitString a(k);
        for (uint64_t i = 0; i < k; ++i) a.set(i, rng.fair_bit());
        uint8_t v = rng.fair_bit();
        ApproxIndexInput in(fn, a, v);
        EXPECT_EQ(fn.eval_boolean(materialize(in)), fn_value(v)) << k;
      }
    }
  }
}

TEST(boolfn, GadgetInputEncodesOuterBits) {
  auto outer = std::make_shared<DenseInput>(BitString::from_string("1001"));
  GadgetInput in(outer, 16, 1, RngStream(3));
  BitString x = materialize(in);
  EXPECT_EQ(compose(parse_function("triv:n=1"), gapmaj(16, 1)).arity, 16u);
  PartialFn g = gapmaj(16, 1);
  for (uint64_t j = 0; j < 4; ++j) {
    BitString block(16);
    for (uint64_t t = 0; t < 16; ++t) block.set(t, x[16 * j + t]);
    EXPECT_EQ(g.eval(block), fn_value(outer->probe(j)));
  }
  // Same key, same gadgets.
  GadgetInput again(outer, 16, 1, RngStream(3));
  EXPECT_EQ(materialize(again), x);
}

TEST(boolfn, ParseFunctionZoo) {
  EXPECT_EQ(parse_function("gapmaj:m=100,gap=2").arity, 100u);
  EXPECT_EQ(parse_function("approxindex:k=4").arity, 4u + 32u);
  EXPECT_EQ(parse_function("maj:n=3").eval(BitString::from_string("011")), FnValue::kOne);
  EXPECT_THROW(parse_function("nonsense:n=1"), std::invalid_argument);
  EXPECT_THROW(parse_function("triv:x=1"), std::invalid_argument);
}
