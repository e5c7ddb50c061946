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

#ifndef NQSIM_NOISY_H
#define NQSIM_NOISY_H

#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "nqsim/boolfn.h"
#include "nqsim/dist.h"
#include "nqsim/rational.h"
#include "nqsim/rng.h"

namespace nqsim {

/// Source of every random choice made by a protocol. Sampling mode draws from a stream;
/// exact mode enumerates all choice paths with their probabilities.
class Randomness {
 public:
  virtual ~Randomness() = default;
  /// True with probability p.
  virtual bool coin(const Rational &p) = 0;
  virtual bool coin(double p) = 0;
};

class SampledRandomness : public Randomness {
 public:
  explicit SampledRandomness(RngStream rng) : rng_(rng) {}
  bool coin(const Rational &p) override { return rng_.bernoulli(p); }
  bool coin(double p) override { return rng_.bernoulli(p); }
  RngStream &stream() { return rng_; }

 private:
  RngStream rng_;
};

/// Depth-first enumeration of all choice paths of a computation, tracking each path's
/// probability in P. Zero-probability branches are never taken.
template <class P>
class BasicPathEnumerator : public Randomness {
 public:
  bool coin(const Rational &p) override {
    if (sgn(p) < 0 || p > 1) throw std::invalid_argument("coin: probability outside [0, 1]");
    return take(prob_from_rational<P>(p), sgn(p) > 0, p < 1);
  }
  bool coin(double p) override;

  /// Runs `body` once per path with positive probability, passing the path probability
  /// after the run. Throws BudgetExceeded past `max_paths`.
  void for_each_path(const std::function<void()> &body, const std::function<void(const P &)> &on_path,
                     size_t max_paths = size_t{1} << 20) {
    path_.clear();
    size_t paths = 0;
    while (true) {
      if (++paths > max_paths) throw BudgetExceeded("PathEnumerator: too many paths");
      pos_ = 0;
      prob_ = 1;
      body();
      if (pos_ != path_.size()) throw std::logic_error("PathEnumerator: computation is not a function of its coins");
      on_path(prob_);
      while (!path_.empty() && (path_.back().value || !path_.back().alternative_feasible)) path_.pop_back();
      if (path_.empty()) break;
      path_.back() = {true, false};
    }
  }

 private:
  struct Choice {
    bool value;
    bool alternative_feasible;
  };

  bool take(const P &p, bool can_true, bool can_false) {
    if (!can_true && !can_false) throw std::invalid_argument("coin: probability outside [0, 1]");
    bool v;
    if (pos_ < path_.size()) {
      v = path_[pos_].value;
    } else {
      v = !can_false;
      path_.push_back({v, can_false && can_true});
    }
    ++pos_;
    if (v) prob_ *= p;
    else prob_ *= P(1 - p);
    return v;
  }

  std::vector<Choice> path_;
  size_t pos_ = 0;
  P prob_ = P(1);
};

template <>
inline bool BasicPathEnumerator<Rational>::coin(double p) {
  if (p == 0.0 || p == 1.0) return coin(Rational(p));
  throw std::logic_error("PathEnumerator: exact mode needs rational probabilities");
}
template <>
inline bool BasicPathEnumerator<double>::coin(double p) {
  if (!(p >= 0 && p <= 1)) throw std::invalid_argument("coin: probability outside [0, 1]");
  return take(p, p > 0, p < 1);
}

using PathEnumerator = BasicPathEnumerator<Rational>;
using FloatPathEnumerator = BasicPathEnumerator<double>;

struct CallRecord {
  size_t index;
  double gamma;
  uint8_t answer;
  double cumulative_cost;
};

class CostLedger {
 public:
  explicit CostLedger(bool keep_log = false) : keep_log_(keep_log) {}

  void charge(size_t index, const Rational &gamma, uint8_t answer);
  void charge(size_t index, double gamma, uint8_t answer);

  double total() const { return total_; }
  /// Exact Σγ² over all calls; only meaningful when every call used a rational γ.
  const Rational &exact_total() const { return exact_total_; }
  bool all_exact() const { return all_exact_; }
  double cost_at(size_t index) const;
  size_t calls() const { return calls_; }
  const std::vector<CallRecord> &log() const { return log_; }

  /// CSV rows (trial_id, index, gamma, answer, cumulative_cost); header when `header`.
  void write_csv(std::ostream &out, uint64_t trial_id, bool header) const;

 private:
  void record(size_t index, double gamma, double cost, uint8_t answer);
  bool keep_log_;
  double total_ = 0;
  Rational exact_total_ = 0;
  bool all_exact_ = true;
  size_t calls_ = 0;
  std::unordered_map<size_t, double> per_index_;
  std::vector<CallRecord> log_;
};

/// Oracle for a hidden bit string. A call with parameter γ ∈ [0, 1] answers the hidden
/// bit with probability (1+γ)/2 and costs γ².
class NoisyOracle {
 public:
  NoisyOracle(std::shared_ptr<const ProbeInput> hidden, Randomness &source, bool keep_log = false)
      : hidden_(std::move(hidden)), source_(&source), ledger_(keep_log) {}

  uint8_t query(size_t i, const Rational &gamma);
  uint8_t query(size_t i, double gamma);

  size_t size() const { return hidden_->size(); }
  const CostLedger &ledger() const { return ledger_; }
  Randomness &source() { return *source_; }

 private:
  std::shared_ptr<const ProbeInput> hidden_;
  Randomness *source_;
  CostLedger ledger_;
};

/// Exact bias of the majority of k independent bits each of bias γ (k odd, |γ| <= 1/3,
/// k <= 1/γ²).
Rational amplified_bias(const Rational &gamma, unsigned long k);
/// amplified_bias for k = 1, 3, ..., k_max (entry j is k = 2j + 1), without the range
/// restriction on k.
std::vector<Rational> amplified_bias_sequence(const Rational &gamma, unsigned long k_max);

/// Flips `bit` with probability (1 - lo/hi)/2, turning bias hi into bias lo.
uint8_t degrade(uint8_t bit, const Rational &gamma_hi, const Rational &gamma_lo, Randomness &source);
Rational degrade_flip_probability(const Rational &gamma_hi, const Rational &gamma_lo);

struct BiasPlan {
  bool use_exact_call;  // target > 1/3: one γ=1 call then degrade
  unsigned long k;      // number of base calls (1 on the exact-call path)
  Rational amplified;   // bias before degrading
  Rational flip;        // degrade flip probability
  Rational output_bias; // amplified * (1 - 2 flip), equal to the target
  Rational cost;        // k γ_base², or 1
};
BiasPlan plan_bias_simulation(const Rational &gamma_target, const Rational &gamma_base);

/// Bit of exact bias gamma_target toward hidden_i, built from gamma_base calls.
uint8_t simulate_bias_via(NoisyOracle &oracle, size_t i, const Rational &gamma_target, const Rational &gamma_base);

}  // namespace nqsim

#endif
