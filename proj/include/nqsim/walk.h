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

#ifndef NQSIM_WALK_H
#define NQSIM_WALK_H

#include <cstdint>
#include <deque>
#include <ostream>
#include <vector>

#include "nqsim/boolfn.h"
#include "nqsim/dist.h"
#include "nqsim/noisy.h"
#include "nqsim/rational.h"
#include "nqsim/rng.h"

namespace nqsim {

struct WalkParams {
  Rational gamma;
  Rational delta;
  unsigned long t;      // floor(delta / (5 gamma))
  Rational r;           // ((1+gamma)/(1-gamma))^t
  Rational delta_prime; // (R-1)/(R+1)
  Rational p_up;        // R/(R+1)
};

/// Requires 0 < gamma, delta/gamma >= 5, delta <= 1.
WalkParams walk_params(const Rational &gamma, const Rational &delta);

/// Expected exit time from (-t, t) of the walk started at 0 with up-probability
/// (1+gamma)/2 (gambler's ruin duration); t² at gamma = 0.
double expected_hitting_steps(double gamma, unsigned long t);

struct RawWalk {
  bool up;
  std::vector<int8_t> steps;
};
constexpr uint64_t kMaxWalkSteps = 10'000'000;

/// Unconditioned walk from 0 until it reaches +t or -t; throws past kMaxWalkSteps.
RawWalk raw_walk(double gamma, unsigned long t, RngStream &rng);

/// Step sequence from 0 exiting at +t (up) or -t, by rejection on the bias-|gamma| walk.
/// A down segment is the mirror image of an up segment.
std::vector<int8_t> segment_sample(double gamma, unsigned long t, bool up, RngStream &rng,
                                   uint64_t *attempts = nullptr);

struct SegmentRecord {
  uint64_t length;
  bool up;
  uint64_t delta_queries;  // cumulative
};

/// Bits of bias gamma toward b, built from bias-delta calls on `oracle` index `index`:
/// each segment costs one delta call, degraded to delta', which picks the segment
/// direction; the segment's steps are emitted as bits (up = 1).
class BiasStream {
 public:
  BiasStream(NoisyOracle &oracle, size_t index, const WalkParams &params, RngStream rng, bool keep_segments = false);

  uint8_t next();
  uint64_t delta_queries() const { return delta_queries_; }
  uint64_t emitted() const { return emitted_; }
  const std::vector<SegmentRecord> &segments() const { return segments_; }
  void write_csv(std::ostream &out) const;

 private:
  NoisyOracle &oracle_;
  size_t index_;
  WalkParams params_;
  double gamma_;
  RngStream rng_;
  bool keep_segments_;
  std::deque<uint8_t> buffer_;
  uint64_t delta_queries_ = 0;
  uint64_t emitted_ = 0;
  std::vector<SegmentRecord> segments_;
};

/// Exact law of the first `nbits` emitted bits for hidden bit b, from the conditioned
/// (h-transformed) walk. Requires rational probabilities throughout.
RDist stream_prefix_law(const WalkParams &params, uint8_t b, size_t nbits);

struct SignInvarianceReport {
  size_t sequences;        // up-exiting sequences of length <= max_len
  bool per_sequence_equal; // conditional probabilities agree under +gamma and -gamma
  Rational enumerated_plus;
  Rational enumerated_minus;
  Rational tail_plus;      // exact Pr[length > max_len | up], +gamma
  Rational tail_minus;
  bool complete() const { return enumerated_plus + tail_plus == 1 && enumerated_minus + tail_minus == 1; }
};
SignInvarianceReport sign_invariance(const Rational &gamma, unsigned long t, size_t max_len);

/// Adapter turning queries to a GapMaj gadget into bias-tau answers about its value.
struct AdapterPlan {
  uint64_t n;
  Rational target;  // tau
  unsigned long k;  // sampled bits per answer (majority vote when k > 1)
  Rational r0;      // Pr[sampled bit = 1] when the gadget value is 0
  Rational r1;
  Rational q0;      // Pr[majority = 1] given value 0
  Rational q1;
  Rational f0;      // flip probability applied to a majority of 0
  Rational f1;
  GapLevels levels;
};
/// tau defaults to 1/sqrt(n) and then requires n to be a perfect square.
AdapterPlan plan_gapmaj_adapter(uint64_t n, const Rational &gap_coeff);
AdapterPlan plan_gapmaj_adapter(uint64_t n, const Rational &gap_coeff, const Rational &tau);

struct AdapterAnswer {
  uint8_t bit;
  uint64_t queries;
};
enum class AdapterMode { kCheap, kFull };

/// Throws PromiseViolation when the gadget weight is neither level (checked only in full
/// mode, where every bit is read).
AdapterAnswer gapmaj_oracle_adapter(const ProbeInput &gadget, const AdapterPlan &plan, AdapterMode mode,
                                    Randomness &coins, RngStream &pick);

/// Exact Pr[answer = 1] of the cheap adapter on a gadget of the given weight.
Rational adapter_prob_one_exact(const AdapterPlan &plan, uint64_t weight);

}  // namespace nqsim

#endif
