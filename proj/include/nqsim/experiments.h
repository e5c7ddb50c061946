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

#ifndef NQSIM_EXPERIMENTS_H
#define NQSIM_EXPERIMENTS_H

#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "nqsim/boolfn.h"
#include "nqsim/rational.h"
#include "nqsim/rng.h"
#include "nqsim/stats.h"

namespace nqsim {

struct AlgResult {
  uint8_t output = 0;
  uint64_t queries = 0;
  bool promise_violation = false;  // a probed ApproxIndex cell held 2
};

class QueryAlgorithm {
 public:
  virtual ~QueryAlgorithm() = default;
  virtual std::string name() const = 0;
  virtual AlgResult run(const ProbeInput &x, RngStream &rng) const = 0;
};

/// Reads all m bits.
class GapMajFull : public QueryAlgorithm {
 public:
  GapMajFull(uint64_t m, const Rational &gap_coeff);
  std::string name() const override;
  AlgResult run(const ProbeInput &x, RngStream &rng) const override;

 private:
  uint64_t m_;
  Rational gap_;
  GapLevels levels_;
};

/// Majority of d distinct uniformly random positions.
class GapMajSubsample : public QueryAlgorithm {
 public:
  GapMajSubsample(uint64_t m, const Rational &gap_coeff, uint64_t d);
  std::string name() const override;
  AlgResult run(const ProbeInput &x, RngStream &rng) const override;

  /// Exact error on inputs with f = value, from the hypergeometric law.
  Rational exact_error(uint8_t value) const;
  Rational exact_error() const;  // max over the two values

 private:
  uint64_t m_;
  Rational gap_;
  uint64_t d_;
  GapLevels levels_;
};

/// ceil(c sqrt(k log2 k)).
uint64_t sqrt_k_log_k_count(uint64_t k, const Rational &c);

/// Copies the first q address bits, fills the rest of b uniformly and reads cell b. Works
/// on the Boolean view (cell b occupies positions k + 2b, k + 2b + 1) and counts the cell
/// read as one query.
class ApproxIndexAlg : public QueryAlgorithm {
 public:
  ApproxIndexAlg(uint64_t k, uint64_t q);
  /// q = ceil(c1 sqrt(k log2 k)), clamped to k.
  static ApproxIndexAlg with_constant(uint64_t k, const Rational &c1 = 8);

  std::string name() const override;
  AlgResult run(const ProbeInput &x, RngStream &rng) const override;
  uint64_t address_bits() const { return q_; }
  bool clamped() const { return clamped_; }
  /// Exact error under the hard distribution for the given promise radius.
  Rational exact_error(uint64_t radius) const;

 private:
  uint64_t k_;
  uint64_t q_;
  bool clamped_ = false;
};

/// ApproxIndex(k) o GapMaj(m, gap): estimates the first q address bits by a majority of
/// s random samples from each gadget, then fully reads the two gadgets of cell b.
class ComposedAlg : public QueryAlgorithm {
 public:
  ComposedAlg(uint64_t k, uint64_t gadget_m, const Rational &gap_coeff, uint64_t q, uint64_t s);
  /// s = ceil(c2 ceil(log2 m)), q = ceil(c3 sqrt(k log2 k)) clamped to k.
  static ComposedAlg with_constants(uint64_t k, uint64_t gadget_m, const Rational &gap_coeff,
                                    const Rational &c2, const Rational &c3);

  std::string name() const override;
  AlgResult run(const ProbeInput &x, RngStream &rng) const override;
  uint64_t address_bits() const { return q_; }
  uint64_t samples() const { return s_; }
  uint64_t cost() const { return q_ * s_ + 2 * m_; }
  /// Error of one gadget vote (ties count 1/2), averaged over the two gadget values.
  Rational vote_error() const;
  Rational exact_error(uint64_t radius) const;

 private:
  uint64_t k_;
  uint64_t m_;
  Rational gap_;
  uint64_t q_;
  uint64_t s_;
  GapLevels levels_;
};

/// Smallest valid GapMaj size >= ceil(log2(k + 2^k)).
uint64_t composed_gadget_size(uint64_t k, const Rational &gap_coeff);
uint64_t ceil_log2(uint64_t x);

struct Instance {
  std::shared_ptr<const ProbeInput> input;
  uint8_t truth;
};
using InputGenerator = std::function<Instance(RngStream &)>;

/// Uniform value, then a uniform string at its promise weight.
InputGenerator gapmaj_generator(uint64_t m, const Rational &gap_coeff);
/// Hard distribution: uniform address a, then a uniform value.
InputGenerator approxindex_generator(const ApproxIndex &fn);
/// Hard ApproxIndex input encoded by lazily sampled GapMaj gadgets.
InputGenerator composed_generator(const ApproxIndex &fn, uint64_t gadget_m, const Rational &gap_coeff);

/// Runs f(0), ..., f(n - 1) on `jobs` threads with a fixed interleaved assignment.
void parallel_for(uint64_t n, unsigned jobs, const std::function<void(uint64_t)> &f);

struct ReportCell {
  std::string algorithm;
  uint64_t trials = 0;
  uint64_t seed = 0;
  uint64_t total_queries = 0;
  uint64_t max_queries = 0;
  uint64_t errors = 0;
  uint64_t violations = 0;
  double mean_queries = 0;
  double error_rate = 0;
  Interval error_ci{0, 0};  // Wilson 95%
};

/// Trial t uses the stream RngStream(seed).child(t), so the report does not depend on
/// `jobs`. Requires trials >= 100.
ReportCell estimate_R(const QueryAlgorithm &alg, const InputGenerator &gen, uint64_t trials,
                      uint64_t seed, unsigned jobs = 1);

struct CounterexampleConfig {
  std::vector<uint64_t> k_list = {12, 14, 16};
  uint64_t trials = 10000;
  uint64_t seed = 1;
  Rational radius_coeff = rat(2, 5);
  Rational gap_coeff = rat(3, 2);
  Rational budget = rat(1, 3);
  unsigned jobs = 1;
};

struct CounterexampleRow {
  uint64_t k = 0;
  uint64_t radius = 0;
  uint64_t gadget_m = 0;
  uint64_t q_f = 0;   // address bits read by the selected ApproxIndex variant
  uint64_t q_fg = 0;  // gadgets voted on by the selected composed variant
  uint64_t s_fg = 0;  // samples per voted gadget
  double Q_f = 0;
  double Q_g = 0;
  double Q_fg = 0;
  double ratio = 0;
  ReportCell f;
  ReportCell g;
  ReportCell fg;
  Rational exact_err_f;
  Rational exact_err_fg;
  bool f_clamped = false;  // selected variant reads all of a
  uint64_t variants_measured = 0;
};

/// Budget refusal: no variant met the error budget, or 2^k is too large.
class CounterexampleRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per k, the cheapest measured ApproxIndex and composed variants whose Wilson upper
/// bound on error is <= budget. Candidates are visited in cost order and those whose
/// exact error already exceeds the budget are skipped.
std::vector<CounterexampleRow> counterexample_table(const CounterexampleConfig &config);

struct TrendFit {
  double slope_fg;
  double slope_product;
  size_t cells;  // unclamped cells used
};
TrendFit counterexample_trend(const std::vector<CounterexampleRow> &rows);

void write_counterexample_csv(std::ostream &out, const std::vector<CounterexampleRow> &rows);
nlohmann::json counterexample_json(const std::vector<CounterexampleRow> &rows);
nlohmann::json to_json(const ReportCell &cell);

}  // namespace nqsim

#endif
