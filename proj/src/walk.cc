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
#include <functional>
#include <stdexcept>

#include "nqsim/stats.h"

namespace nqsim {

WalkParams walk_params(const Rational &gamma, const Rational &delta) {
  if (sgn(gamma) <= 0 || delta > 1) throw std::invalid_argument("walk_params: need 0 < gamma and delta <= 1");
  if (delta < 5 * gamma) throw std::invalid_argument("walk_params: need delta / gamma >= 5");
  WalkParams w;
  w.gamma = gamma;
  w.delta = delta;
  Rational ratio = delta / (5 * gamma);
  Integer t;
  mpz_fdiv_q(t.get_mpz_t(), ratio.get_num_mpz_t(), ratio.get_den_mpz_t());
  w.t = t.get_ui();
  w.r = pow(Rational((1 + gamma) / (1 - gamma)), w.t);
  w.delta_prime = (w.r - 1) / (w.r + 1);
  w.p_up = w.r / (w.r + 1);
  return w;
}

double expected_hitting_steps(double gamma, unsigned long t) {
  if (gamma == 0) return static_cast<double>(t) * t;
  long double g = gamma, tt = t;
  long double a = std::exp(tt * std::log1p(g)), b = std::exp(tt * std::log1p(-g));
  return static_cast<double>((tt / g) * (1 - 2 * b * (a - b) / (a * a - b * b)));
}

RawWalk raw_walk(double gamma, unsigned long t, RngStream &rng) {
  if (t == 0) throw std::invalid_argument("raw_walk: t must be >= 1");
  RawWalk w{false, {}};
  long pos = 0, target = static_cast<long>(t);
  double p = (1 + gamma) / 2;
  while (pos > -target && pos < target) {
    if (w.steps.size() >= kMaxWalkSteps) throw BudgetExceeded("raw_walk: step cap exceeded");
    int8_t s = rng.bernoulli(p) ? 1 : -1;
    w.steps.push_back(s);
    pos += s;
  }
  w.up = pos == target;
  return w;
}

std::vector<int8_t> segment_sample(double gamma, unsigned long t, bool up, RngStream &rng, uint64_t *attempts) {
  double g = std::abs(gamma);
  uint64_t tries = 0;
  while (true) {
    ++tries;
    RawWalk w = raw_walk(g, t, rng);
    if (!w.up) continue;
    if (attempts) *attempts = tries;
    if (!up) {
      for (auto &s : w.steps) s = -s;
    }
    return w.steps;
  }
}

BiasStream::BiasStream(NoisyOracle &oracle, size_t index, const WalkParams &params, RngStream rng,
                       bool keep_segments)
    : oracle_(oracle),
      index_(index),
      params_(params),
      gamma_(params.gamma.get_d()),
      rng_(rng),
      keep_segments_(keep_segments) {}

uint8_t BiasStream::next() {
  if (buffer_.empty()) {
    uint8_t d = oracle_.query(index_, params_.delta);
    uint8_t y = degrade(d, params_.delta, params_.delta_prime, oracle_.source());
    ++delta_queries_;
    auto steps = segment_sample(gamma_, params_.t, y == 1, rng_);
    for (int8_t s : steps) buffer_.push_back(s > 0 ? 1 : 0);
    if (keep_segments_) segments_.push_back({steps.size(), y == 1, delta_queries_});
  }
  uint8_t bit = buffer_.front();
  buffer_.pop_front();
  ++emitted_;
  return bit;
}

void BiasStream::write_csv(std::ostream &out) const {
  out << "segment,length,direction,delta_queries\n";
  for (size_t j = 0; j < segments_.size(); ++j) {
    out << j << "," << segments_[j].length << "," << (segments_[j].up ? "up" : "down") << ","
        << segments_[j].delta_queries << "\n";
  }
}

namespace {

// Pr[reach +t before -t from x] for up-probability p, x in [-t, t].
struct HittingProb {
  Rational rho;  // q / p
  long t;
  Rational denom;

  HittingProb(const Rational &p, unsigned long t_) : rho((1 - p) / p), t(static_cast<long>(t_)) {
    denom = rho == 1 ? Rational(2 * t) : Rational(1 - pow(rho, 2 * t));
  }
  Rational operator()(long x) const {
    if (rho == 1) return Rational(x + t) / denom;
    return (1 - pow(rho, static_cast<unsigned long>(x + t))) / denom;
  }
};

}  // namespace

RDist stream_prefix_law(const WalkParams &params, uint8_t b, size_t nbits) {
  Rational p = (1 + params.gamma) / 2;
  HittingProb h(p, params.t);
  long t = static_cast<long>(params.t);
  Rational up_prob = b ? Rational((1 + params.delta_prime) / 2) : Rational((1 - params.delta_prime) / 2);
  RDist out;
  BitString bits(nbits);
  // Up segments follow the h-transform of the +gamma walk; down segments mirror them.
  std::function<void(size_t, long, int, const Rational &)> rec = [&](size_t j, long x, int dir, const Rational &w) {
    if (sgn(w) == 0) return;
    if (j == nbits) {
      out.add(bits, w);
      return;
    }
    if (dir == 0 || x == t || x == -t) {
      if (sgn(up_prob) > 0) rec(j, 0, 1, Rational(w * up_prob));
      if (up_prob < 1) rec(j, 0, -1, Rational(w * (1 - up_prob)));
      return;
    }
    long y = dir * x;  // position in the up-segment frame
    Rational forward = p * h(y + 1) / h(y);
    bits.set(j, dir > 0 ? 1 : 0);
    rec(j + 1, x + dir, dir, Rational(w * forward));
    bits.set(j, dir > 0 ? 0 : 1);
    rec(j + 1, x - dir, dir, Rational(w * (1 - forward)));
  };
  rec(0, 0, 0, Rational(1));
  return out;
}

SignInvarianceReport sign_invariance(const Rational &gamma, unsigned long t_, size_t max_len) {
  Rational p = (1 + gamma) / 2, q = (1 - gamma) / 2;
  long t = static_cast<long>(t_);
  Rational r = pow(Rational(p / q), t_);
  Rational up_plus = r / (r + 1), up_minus = 1 / (r + 1);
  SignInvarianceReport rep{0, true, 0, 0, 0, 0};
  // Enumerate sequences by (ups, downs); each individual sequence is visited.
  std::function<void(long, unsigned long, unsigned long)> rec = [&](long x, unsigned long u, unsigned long d) {
    if (x == t) {
      ++rep.sequences;
      Rational plus = pow(p, u) * pow(q, d) / up_plus;
      Rational minus = pow(q, u) * pow(p, d) / up_minus;
      if (plus != minus) rep.per_sequence_equal = false;
      rep.enumerated_plus += plus;
      rep.enumerated_minus += minus;
      return;
    }
    if (x == -t || u + d == max_len) return;
    rec(x + 1, u + 1, d);
    rec(x - 1, u, d + 1);
  };
  rec(0, 0, 0);
  // Tail: surviving mass after max_len steps, weighted by the chance of exiting up.
  auto tail = [&](const Rational &pp, const Rational &up) {
    std::vector<Rational> mass(2 * t + 1);
    mass[t] = 1;
    for (size_t s = 0; s < max_len; ++s) {
      std::vector<Rational> next(2 * t + 1);
      for (long x = -t + 1; x < t; ++x) {
        const Rational &m = mass[x + t];
        if (sgn(m) == 0) continue;
        next[x + 1 + t] += m * pp;
        next[x - 1 + t] += m * (1 - pp);
      }
      next[0] = 0;
      next[2 * t] = 0;
      mass.swap(next);
    }
    HittingProb h(pp, t_);
    Rational total = 0;
    for (long x = -t + 1; x < t; ++x) total += mass[x + t] * h(x);
    return Rational(total / up);
  };
  rep.tail_plus = tail(p, up_plus);
  rep.tail_minus = tail(q, up_minus);
  return rep;
}

namespace {

Rational majority_one_prob(const Rational &r, unsigned long k) {
  Rational s = 0;
  for (unsigned long i = k / 2 + 1; i <= k; ++i) s += binom_pmf_exact(k, i, r);
  return s;
}

uint8_t adapter_finish(bool majority_one, const AdapterPlan &plan, Randomness &coins) {
  if (majority_one) return coins.coin(plan.f1) ? 0 : 1;
  return coins.coin(plan.f0) ? 1 : 0;
}

}  // namespace

AdapterPlan plan_gapmaj_adapter(uint64_t n, const Rational &gap_coeff) {
  Integer root;
  mpz_sqrt(root.get_mpz_t(), Integer(static_cast<unsigned long>(n)).get_mpz_t());
  if (root * root != static_cast<unsigned long>(n)) {
    throw std::invalid_argument("gapmaj adapter: default bias 1/sqrt(n) needs a perfect square n");
  }
  return plan_gapmaj_adapter(n, gap_coeff, rat(1, root));
}

AdapterPlan plan_gapmaj_adapter(uint64_t n, const Rational &gap_coeff, const Rational &tau) {
  if (sgn(tau) <= 0 || tau >= 1) throw std::invalid_argument("gapmaj adapter: tau must lie in (0, 1)");
  AdapterPlan plan;
  plan.n = n;
  plan.target = tau;
  plan.levels = gapmaj_levels(n, gap_coeff);
  plan.r1 = rat(static_cast<unsigned long>(plan.levels.hi), static_cast<unsigned long>(n));
  plan.r0 = rat(static_cast<unsigned long>(plan.levels.lo), static_cast<unsigned long>(n));
  for (plan.k = 1;; plan.k += 2) {
    if (plan.k > 10001) throw BudgetExceeded("gapmaj adapter: majority size above 10001");
    plan.q1 = majority_one_prob(plan.r1, plan.k);
    plan.q0 = majority_one_prob(plan.r0, plan.k);
    if (plan.q1 - plan.q0 >= tau) break;
  }
  // Pr[answer = 1 | v] = f0 + slope q_v, with slope (q1 - q0) = tau and f0 + slope q1 = (1+tau)/2.
  Rational slope = tau / (plan.q1 - plan.q0);
  plan.f0 = (1 + tau) / 2 - slope * plan.q1;
  plan.f1 = 1 - slope - plan.f0;
  if (sgn(plan.f0) < 0 || plan.f0 > 1 || sgn(plan.f1) < 0 || plan.f1 > 1) {
    throw std::domain_error("gapmaj adapter: correction channel infeasible for these levels");
  }
  return plan;
}

AdapterAnswer gapmaj_oracle_adapter(const ProbeInput &gadget, const AdapterPlan &plan, AdapterMode mode,
                                    Randomness &coins, RngStream &pick) {
  if (gadget.size() != plan.n) throw std::invalid_argument("gapmaj adapter: gadget size mismatch");
  if (mode == AdapterMode::kFull) {
    uint64_t w = 0;
    for (uint64_t i = 0; i < plan.n; ++i) w += gadget.probe(i);
    if (w == plan.levels.hi) return {1, plan.n};
    if (w == plan.levels.lo) return {0, plan.n};
    throw PromiseViolation("gapmaj adapter: gadget weight " + std::to_string(w) + " outside the promise");
  }
  unsigned long ones = 0;
  for (unsigned long j = 0; j < plan.k; ++j) ones += gadget.probe(pick.uniform_int(plan.n));
  return {adapter_finish(2 * ones > plan.k, plan, coins), plan.k};
}

Rational adapter_prob_one_exact(const AdapterPlan &plan, uint64_t weight) {
  Rational r = rat(static_cast<unsigned long>(weight), static_cast<unsigned long>(plan.n));
  PathEnumerator en;
  Rational one = 0;
  uint8_t out = 0;
  en.for_each_path(
      [&] {
        unsigned long ones = 0;
        for (unsigned long j = 0; j < plan.k; ++j) ones += en.coin(r);
        out = adapter_finish(2 * ones > plan.k, plan, en);
      },
      [&](const Rational &p) { if (out) one += p; });
  return one;
}

}  // namespace nqsim
