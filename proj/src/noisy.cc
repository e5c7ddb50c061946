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

#include "nqsim/noisy.h"

#include <cmath>
#include <stdexcept>


namespace nqsim {

void CostLedger::record(size_t index, double gamma, double cost, uint8_t answer) {
  ++calls_;
  total_ += cost;
  per_index_[index] += cost;
  if (keep_log_) log_.push_back({index, gamma, answer, total_});
}

void CostLedger::charge(size_t index, const Rational &gamma, uint8_t answer) {
  Rational c = gamma * gamma;
  exact_total_ += c;
  record(index, gamma.get_d(), c.get_d(), answer);
}

void CostLedger::charge(size_t index, double gamma, uint8_t answer) {
  all_exact_ = false;
  record(index, gamma, gamma * gamma, answer);
}

double CostLedger::cost_at(size_t index) const {
  auto it = per_index_.find(index);
  return it == per_index_.end() ? 0.0 : it->second;
}

void CostLedger::write_csv(std::ostream &out, uint64_t trial_id, bool header) const {
  if (header) out << "trial_id,index,gamma,answer,cumulative_cost\n";
  auto old = out.precision(17);
  for (const auto &r : log_) {
    out << trial_id << "," << r.index << "," << r.gamma << "," << int(r.answer) << "," << r.cumulative_cost << "\n";
  }
  out.precision(old);
}

uint8_t NoisyOracle::query(size_t i, const Rational &gamma) {
  if (sgn(gamma) < 0 || gamma > 1) throw std::invalid_argument("query: gamma outside [0, 1]");
  if (i >= hidden_->size()) throw std::out_of_range("query: index out of range");
  uint8_t h = hidden_->probe(i);
  uint8_t a = source_->coin(Rational((1 + gamma) / 2)) ? h : uint8_t(1 - h);
  ledger_.charge(i, gamma, a);
  return a;
}

uint8_t NoisyOracle::query(size_t i, double gamma) {
  if (!(gamma >= 0 && gamma <= 1)) throw std::invalid_argument("query: gamma outside [0, 1]");
  if (i >= hidden_->size()) throw std::out_of_range("query: index out of range");
  uint8_t h = hidden_->probe(i);
  uint8_t a = source_->coin((1 + gamma) / 2) ? h : uint8_t(1 - h);
  ledger_.charge(i, gamma, a);
  return a;
}

std::vector<Rational> amplified_bias_sequence(const Rational &gamma, unsigned long k_max) {
  if (k_max % 2 == 0) throw std::invalid_argument("amplified_bias: k must be odd");
  // gamma'_{k+2} = gamma'_k + 2 gamma C(k, (k-1)/2) q^{(k+1)/2}, q = (1 - gamma^2)/4.
  Rational q = (1 - gamma * gamma) / 4;
  std::vector<Rational> out;
  out.reserve(k_max / 2 + 1);
  Rational g = gamma;
  Rational term = q;  // C(1, 0) q^1
  for (unsigned long k = 1;; k += 2) {
    out.push_back(g);
    if (k == k_max) break;
    g += 2 * gamma * term;
    unsigned long j = (k - 1) / 2;
    term *= rat(2 * (2 * j + 3), j + 2);
    term *= q;
  }
  return out;
}

Rational amplified_bias(const Rational &gamma, unsigned long k) {
  if (k % 2 == 0) throw std::invalid_argument("amplified_bias: k must be odd");
  if (abs(gamma) > rat(1, 3)) throw std::invalid_argument("amplified_bias: |gamma| must be <= 1/3");
  if (Rational(gamma * gamma * k) > 1) throw std::invalid_argument("amplified_bias: k must be <= 1/gamma^2");
  return amplified_bias_sequence(gamma, k).back();
}

Rational degrade_flip_probability(const Rational &gamma_hi, const Rational &gamma_lo) {
  if (sgn(gamma_lo) <= 0 || gamma_lo > gamma_hi) throw std::invalid_argument("degrade: need 0 < gamma_lo <= gamma_hi");
  return (1 - gamma_lo / gamma_hi) / 2;
}

uint8_t degrade(uint8_t bit, const Rational &gamma_hi, const Rational &gamma_lo, Randomness &source) {
  Rational f = degrade_flip_probability(gamma_hi, gamma_lo);
  return source.coin(f) ? uint8_t(1 - bit) : bit;
}

BiasPlan plan_bias_simulation(const Rational &gamma_target, const Rational &gamma_base) {
  if (gamma_target > 1 || sgn(gamma_base) <= 0) throw std::invalid_argument("simulate_bias_via: need 0 < base, target <= 1");
  BiasPlan plan;
  if (gamma_target > rat(1, 3)) {
    plan.use_exact_call = true;
    plan.k = 1;
    plan.amplified = 1;
    plan.cost = 1;
  } else {
    if (gamma_base > gamma_target) throw std::invalid_argument("simulate_bias_via: need base <= target");
    plan.use_exact_call = false;
    // Incremental recurrence; the lemma guarantees a hit before k = 9 target^2 / base^2 + 1.
    Rational q = (1 - gamma_base * gamma_base) / 4;
    Rational g = gamma_base, term = q;
    unsigned long k = 1;
    while (g < gamma_target) {
      if (k > 10'000'000) throw BudgetExceeded("simulate_bias_via: amplification does not reach target");
      g += 2 * gamma_base * term;
      unsigned long j = (k - 1) / 2;
      term *= rat(2 * (2 * j + 3), j + 2);
      term *= q;
      k += 2;
    }
    plan.k = k;
    plan.amplified = g;
    plan.cost = gamma_base * gamma_base * k;
  }
  plan.flip = degrade_flip_probability(plan.amplified, gamma_target);
  plan.output_bias = plan.amplified * (1 - 2 * plan.flip);
  return plan;
}

uint8_t simulate_bias_via(NoisyOracle &oracle, size_t i, const Rational &gamma_target, const Rational &gamma_base) {
  BiasPlan plan = plan_bias_simulation(gamma_target, gamma_base);
  uint8_t bit;
  if (plan.use_exact_call) {
    bit = oracle.query(i, Rational(1));
  } else {
    unsigned long ones = 0;
    for (unsigned long j = 0; j < plan.k; ++j) ones += oracle.query(i, gamma_base);
    bit = 2 * ones > plan.k;
  }
  return oracle.source().coin(plan.flip) ? uint8_t(1 - bit) : bit;
}

}  // namespace nqsim
