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

#ifndef NQSIM_OSIM_H
#define NQSIM_OSIM_H

#include <cstdint>
#include <optional>
#include <type_traits>
#include <vector>

#include "json.hpp"
#include "nqsim/dist.h"
#include "nqsim/dtree.h"
#include "nqsim/noisy.h"
#include "nqsim/surd.h"

namespace nqsim {

/// Exact probabilities carry exact Hellinger sums; floating point carries doubles.
template <class P>
using HellingerType = std::conditional_t<std::is_same_v<P, Rational>, Surd, double>;

/// argmin over c of mu0|_i(c) + mu1|_i(c), given the probabilities of 0; ties give 0.
template <class P>
uint8_t cheaper_value(const P &mu0_zero, const P &mu1_zero) {
  P s0 = mu0_zero + mu1_zero;
  P s1 = P(2 - s0);
  return s0 <= s1 ? 0 : 1;
}

/// One-bit simulation: returns a with probability exactly p_b, where b is the bit behind
/// `b_index` of `b_oracle`. p0 = mu0|_i(a), p1 = mu1|_i(a).
/// Adds the γ² charged to `*cost` when given.
template <class P>
uint8_t single_bit_sim(const P &p0, const P &p1, uint8_t a, NoisyOracle &b_oracle, size_t b_index,
                       P *cost = nullptr);

struct SingleBitLaw {
  Rational prob_a;         // Pr[output = a]
  Rational expected_cost;  // E[γ² charged]
};
SingleBitLaw single_bit_sim_exact(const Rational &p0, const Rational &p1, uint8_t a, uint8_t b);

enum class Phase { kStreaming, kPostCutoff, kResolved };
const char *phase_name(Phase p);

template <class P>
struct SessionStep {
  size_t index;
  uint8_t a;
  P p0;
  P p1;
  P cost;
  HellingerType<P> c_after;
  Phase phase;
  uint8_t answer;
};

/// Stateful simulation of an oracle for x ~ mu_b using noisy calls on b. Phases:
/// streaming (one-bit simulations), post-cutoff (b revealed by one γ=1 call once the
/// accumulated Hellinger budget c exceeds the cutoff) and resolved (b implied by the
/// answers so far, no further cost).
template <class P>
class SimSession {
 public:
  using Dist = FiniteDist<BitString, P>;
  using H = HellingerType<P>;

  SimSession(const Dist &mu0, const Dist &mu1, NoisyOracle &b_oracle, size_t b_index, size_t m,
             const P &cutoff = P(1), bool keep_trace = false);

  uint8_t answer(size_t i);

  const PartialAssignment &revealed() const { return z_; }
  const H &c() const { return c_; }
  Phase phase() const { return phase_; }
  const P &cost() const { return cost_; }
  const std::vector<SessionStep<P>> &trace() const { return trace_; }
  nlohmann::json trace_json() const;

 private:
  uint8_t answer_from(const Dist &mu, size_t i);

  const Dist &mu0_;
  const Dist &mu1_;
  NoisyOracle &oracle_;
  size_t b_index_;
  PartialAssignment z_;
  P cutoff_;
  bool keep_trace_;
  H c_ = H(0);
  P cost_ = P(0);
  Phase phase_ = Phase::kStreaming;
  std::optional<uint8_t> b_;
  std::vector<SessionStep<P>> trace_;
};

/// h² between the distributions of x_i under the two conditioned laws, given their
/// probabilities of 0.
Surd bit_hellinger_sq_exact(const Rational &a0, const Rational &b0);
double bit_hellinger_sq(double a0, double b0);

struct FaithfulnessResult {
  FiniteDist<BitString, Rational> simulated;  // answer sequences produced by the session
  FiniteDist<BitString, Rational> truth;      // answer sequences of x ~ mu_b
  bool equal() const { return simulated == truth; }
};

/// Exact answer-sequence laws for a fixed query sequence (m <= 4).
FaithfulnessResult session_run_faithfulness_check(const RDist &mu0, const RDist &mu1,
                                                  const std::vector<size_t> &queries, uint8_t b);

/// Exact transcript laws for an adaptive tree run against the session (m <= 4).
struct TreeFaithfulnessResult {
  FiniteDist<Transcript, Rational> simulated;
  FiniteDist<Transcript, Rational> truth;
  Rational expected_cost;
};
TreeFaithfulnessResult session_tree_check(const RDist &mu0, const RDist &mu1, const DecisionTree &tree, uint8_t b);

/// Expected session cost of running `tree` with hidden bit b, by path enumeration.
template <class P>
P session_expected_cost(const FiniteDist<BitString, P> &mu0, const FiniteDist<BitString, P> &mu1,
                        const DecisionTree &tree, size_t m, uint8_t b, const P &cutoff = P(1));

struct LiftResult {
  int output;
  double cost;
};

/// Runs A, an algorithm on n copies of m-bit inputs, against n simulation sessions whose
/// hidden bits are the bits of `y_oracle`.
template <class P>
LiftResult lift_composed_algorithm(const DecisionTree &a, const FiniteDist<BitString, P> &mu0,
                                   const FiniteDist<BitString, P> &mu1, size_t m, NoisyOracle &y_oracle,
                                   const P &cutoff = P(1));

}  // namespace nqsim

#endif
