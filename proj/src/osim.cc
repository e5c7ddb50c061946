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

#include "nqsim/osim.h"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace nqsim {

namespace {

Rational rational_abs(const Rational &x) { return abs(x); }
double rational_abs(double x) { return std::abs(x); }

// Reads from a session as if it were the hidden input.
template <class P>
class SessionInput : public ProbeInput {
 public:
  SessionInput(std::vector<std::unique_ptr<SimSession<P>>> &sessions, size_t m) : sessions_(&sessions), m_(m) {}
  uint64_t size() const override { return sessions_->size() * m_; }
  uint8_t probe(uint64_t q) const override { return (*sessions_)[q / m_]->answer(q % m_); }

 private:
  std::vector<std::unique_ptr<SimSession<P>>> *sessions_;
  size_t m_;
};

size_t dist_length(const RDist &mu) {
  if (mu.empty()) throw std::invalid_argument("empty distribution");
  return mu.items().begin()->first.size();
}

}  // namespace

template <class P>
uint8_t single_bit_sim(const P &p0, const P &p1, uint8_t a, NoisyOracle &b_oracle, size_t b_index, P *cost) {
  P s = p0 + p1;
  if (is_zero(s) || !b_oracle.source().coin(s)) return 1 - a;
  P g = (p0 - p1) / s;
  bool flipped = g < 0;
  P ag = rational_abs(g);
  uint8_t ans = b_oracle.query(b_index, ag);
  if (cost) *cost += P(ag * ag);
  return ans == (flipped ? 1 : 0) ? a : uint8_t(1 - a);
}

template uint8_t single_bit_sim<Rational>(const Rational &, const Rational &, uint8_t, NoisyOracle &, size_t,
                                          Rational *);
template uint8_t single_bit_sim<double>(const double &, const double &, uint8_t, NoisyOracle &, size_t, double *);

SingleBitLaw single_bit_sim_exact(const Rational &p0, const Rational &p1, uint8_t a, uint8_t b) {
  PathEnumerator en;
  BitString hidden(1);
  hidden.set(0, b);
  NoisyOracle o(std::make_shared<DenseInput>(hidden), en);
  SingleBitLaw law{0, 0};
  uint8_t out = 0;
  Rational cost;
  en.for_each_path(
      [&] {
        cost = 0;
        out = single_bit_sim(p0, p1, a, o, 0, &cost);
      },
      [&](const Rational &p) {
        if (out == a) law.prob_a += p;
        law.expected_cost += p * cost;
      });
  return law;
}

const char *phase_name(Phase p) {
  switch (p) {
    case Phase::kStreaming: return "streaming";
    case Phase::kPostCutoff: return "post-cutoff";
    case Phase::kResolved: return "resolved";
  }
  return "?";
}

Surd bit_hellinger_sq_exact(const Rational &a0, const Rational &b0) {
  return Surd(1) - Surd::sqrt_of(a0 * b0) - Surd::sqrt_of(Rational((1 - a0) * (1 - b0)));
}

double bit_hellinger_sq(double a0, double b0) {
  double d0 = std::sqrt(a0) - std::sqrt(b0), d1 = std::sqrt(1 - a0) - std::sqrt(1 - b0);
  return (d0 * d0 + d1 * d1) / 2;
}

namespace {
Surd bit_h2(const Rational &a0, const Rational &b0) { return bit_hellinger_sq_exact(a0, b0); }
double bit_h2(double a0, double b0) { return bit_hellinger_sq(a0, b0); }
double to_plain(const Surd &s) { return s.to_double(); }
double to_plain(double x) { return x; }
}  // namespace

template <class P>
SimSession<P>::SimSession(const Dist &mu0, const Dist &mu1, NoisyOracle &b_oracle, size_t b_index, size_t m,
                          const P &cutoff, bool keep_trace)
    : mu0_(mu0), mu1_(mu1), oracle_(b_oracle), b_index_(b_index), z_(m), cutoff_(cutoff), keep_trace_(keep_trace) {}

template <class P>
uint8_t SimSession<P>::answer_from(const Dist &mu, size_t i) {
  P m = consistent_mass(mu, z_);
  if (is_zero(m)) throw ZeroMassCondition("SimSession: revealed bits have zero mass under mu_b");
  PartialAssignment z1 = z_;
  z1.set(i, 1);
  P q = consistent_mass(mu, z1) / m;
  uint8_t bit = oracle_.source().coin(q) ? 1 : 0;
  z_.set(i, bit);
  return bit;
}

template <class P>
uint8_t SimSession<P>::answer(size_t i) {
  if (i >= z_.size()) throw std::out_of_range("SimSession: index out of range");
  if (z_.is_set(i)) return *z_.get(i);
  if (phase_ == Phase::kStreaming && c_ > H(cutoff_)) {
    b_ = oracle_.query(b_index_, P(1));
    cost_ += P(1);
    phase_ = Phase::kPostCutoff;
  }
  if (phase_ == Phase::kStreaming) {
    P m0 = consistent_mass(mu0_, z_), m1 = consistent_mass(mu1_, z_);
    if (is_zero(m0) && is_zero(m1)) throw ZeroMassCondition("SimSession: revealed bits have zero mass under both laws");
    if (is_zero(m0) || is_zero(m1)) {
      b_ = is_zero(m0) ? 1 : 0;
      phase_ = Phase::kResolved;
    }
  }
  if (phase_ != Phase::kStreaming) {
    P before = cost_;
    uint8_t bit = answer_from(*b_ ? mu1_ : mu0_, i);
    if (keep_trace_) trace_.push_back({i, bit, P(0), P(0), P(cost_ - before), c_, phase_, bit});
    return bit;
  }
  PartialAssignment z0 = z_;
  z0.set(i, 0);
  P a0 = consistent_mass(mu0_, z0) / consistent_mass(mu0_, z_);
  P b0 = consistent_mass(mu1_, z0) / consistent_mass(mu1_, z_);
  uint8_t a = cheaper_value(a0, b0);
  P p0 = a == 0 ? a0 : P(1 - a0);
  P p1 = a == 0 ? b0 : P(1 - b0);
  P before = cost_;
  uint8_t bit = single_bit_sim(p0, p1, a, oracle_, b_index_, &cost_);
  c_ += bit_h2(a0, b0);
  z_.set(i, bit);
  if (keep_trace_) trace_.push_back({i, a, p0, p1, P(cost_ - before), c_, phase_, bit});
  return bit;
}

template <class P>
nlohmann::json SimSession<P>::trace_json() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto &s : trace_) {
    out.push_back({{"index", s.index},
                   {"a", s.a},
                   {"p0", to_double(s.p0)},
                   {"p1", to_double(s.p1)},
                   {"cost", to_double(s.cost)},
                   {"c_after", to_plain(s.c_after)},
                   {"phase", phase_name(s.phase)},
                   {"answer", s.answer}});
  }
  return out;
}

template class SimSession<Rational>;
template class SimSession<double>;

FaithfulnessResult session_run_faithfulness_check(const RDist &mu0, const RDist &mu1,
                                                  const std::vector<size_t> &queries, uint8_t b) {
  size_t m = dist_length(mu0);
  if (m > 4) throw BudgetExceeded("faithfulness check: m must be <= 4");
  BitString hidden(1);
  hidden.set(0, b);
  PathEnumerator en;
  NoisyOracle o(std::make_shared<DenseInput>(hidden), en);
  FaithfulnessResult r;
  BitString answers(queries.size());
  en.for_each_path(
      [&] {
        SimSession<Rational> s(mu0, mu1, o, 0, m);
        for (size_t j = 0; j < queries.size(); ++j) answers.set(j, s.answer(queries[j]));
      },
      [&](const Rational &p) { r.simulated.add(answers, p); });
  for (const auto &[x, p] : (b ? mu1 : mu0).items()) {
    BitString y(queries.size());
    for (size_t j = 0; j < queries.size(); ++j) y.set(j, x[queries[j]]);
    r.truth.add(y, p);
  }
  return r;
}

TreeFaithfulnessResult session_tree_check(const RDist &mu0, const RDist &mu1, const DecisionTree &tree, uint8_t b) {
  size_t m = dist_length(mu0);
  if (m > 4) throw BudgetExceeded("faithfulness check: m must be <= 4");
  BitString hidden(1);
  hidden.set(0, b);
  PathEnumerator en;
  NoisyOracle o(std::make_shared<DenseInput>(hidden), en);
  TreeFaithfulnessResult r;
  r.expected_cost = 0;
  Transcript t;
  Rational cost;
  en.for_each_path(
      [&] {
        std::vector<std::unique_ptr<SimSession<Rational>>> sessions;
        sessions.push_back(std::make_unique<SimSession<Rational>>(mu0, mu1, o, 0, m));
        SessionInput<Rational> in(sessions, m);
        t = run(tree, in).transcript;
        cost = sessions[0]->cost();
      },
      [&](const Rational &p) {
        r.simulated.add(t, p);
        r.expected_cost += p * cost;
      });
  r.truth = transcript_dist(tree, b ? mu1 : mu0);
  return r;
}

template <class P>
P session_expected_cost(const FiniteDist<BitString, P> &mu0, const FiniteDist<BitString, P> &mu1,
                        const DecisionTree &tree, size_t m, uint8_t b, const P &cutoff) {
  BitString hidden(1);
  hidden.set(0, b);
  BasicPathEnumerator<P> en;
  NoisyOracle o(std::make_shared<DenseInput>(hidden), en);
  P total(0), cost(0);
  en.for_each_path(
      [&] {
        std::vector<std::unique_ptr<SimSession<P>>> sessions;
        sessions.push_back(std::make_unique<SimSession<P>>(mu0, mu1, o, 0, m, cutoff));
        SessionInput<P> in(sessions, m);
        run(tree, in);
        cost = sessions[0]->cost();
      },
      [&](const P &p) { total += P(p * cost); });
  return total;
}

template Rational session_expected_cost<Rational>(const RDist &, const RDist &, const DecisionTree &, size_t, uint8_t,
                                                  const Rational &);
template double session_expected_cost<double>(const DDist &, const DDist &, const DecisionTree &, size_t, uint8_t,
                                              const double &);

template <class P>
LiftResult lift_composed_algorithm(const DecisionTree &a, const FiniteDist<BitString, P> &mu0,
                                   const FiniteDist<BitString, P> &mu1, size_t m, NoisyOracle &y_oracle,
                                   const P &cutoff) {
  size_t n = y_oracle.size();
  std::vector<std::unique_ptr<SimSession<P>>> sessions;
  for (size_t i = 0; i < n; ++i) sessions.push_back(std::make_unique<SimSession<P>>(mu0, mu1, y_oracle, i, m, cutoff));
  SessionInput<P> in(sessions, m);
  double before = y_oracle.ledger().total();
  int out = run(a, in).output;
  return {out, y_oracle.ledger().total() - before};
}

template LiftResult lift_composed_algorithm<Rational>(const DecisionTree &, const RDist &, const RDist &, size_t,
                                                      NoisyOracle &, const Rational &);
template LiftResult lift_composed_algorithm<double>(const DecisionTree &, const DDist &, const DDist &, size_t,
                                                    NoisyOracle &, const double &);

}  // namespace nqsim
