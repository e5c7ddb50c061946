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

#ifndef NQSIM_DIST_H
#define NQSIM_DIST_H

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "nqsim/boolfn.h"
#include "nqsim/rational.h"
#include "nqsim/rng.h"
#include "nqsim/surd.h"

namespace nqsim {

class ZeroMassCondition : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class OverlapError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class BudgetExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Finite-support distribution. Outcomes with zero mass are never stored.
template <class O, class P>
class FiniteDist {
 public:
  using Outcome = O;
  using Prob = P;

  FiniteDist() = default;
  static FiniteDist point(const O &o) {
    FiniteDist d;
    d.add(o, P(1));
    return d;
  }

  void add(const O &o, const P &p) {
    if (is_zero(p)) return;
    auto it = probs_.find(o);
    if (it == probs_.end()) {
      probs_.emplace(o, p);
      return;
    }
    it->second += p;
    if (is_zero(it->second)) probs_.erase(it);
  }

  P prob(const O &o) const {
    auto it = probs_.find(o);
    return it == probs_.end() ? P(0) : it->second;
  }
  const std::map<O, P> &items() const { return probs_; }
  size_t support_size() const { return probs_.size(); }
  bool empty() const { return probs_.empty(); }
  P total() const {
    P t(0);
    for (const auto &kv : probs_) t += kv.second;
    return t;
  }

  template <class F>
  auto pushforward(F &&f) const {
    using O2 = std::decay_t<decltype(f(std::declval<const O &>()))>;
    FiniteDist<O2, P> out;
    for (const auto &[o, p] : probs_) out.add(f(o), p);
    return out;
  }

  FiniteDist scaled(const P &w) const {
    FiniteDist out;
    for (const auto &[o, p] : probs_) out.add(o, p * w);
    return out;
  }

  FiniteDist<O, double> to_double() const {
    FiniteDist<O, double> out;
    for (const auto &[o, p] : probs_) out.add(o, nqsim::to_double(p));
    return out;
  }

  /// Inverse-CDF sampling on a double uniform.
  const O &sample(RngStream &rng) const {
    if (probs_.empty()) throw std::logic_error("sample: empty distribution");
    double u = rng.uniform() * nqsim::to_double(total());
    double acc = 0;
    for (const auto &[o, p] : probs_) {
      acc += nqsim::to_double(p);
      if (u < acc) return o;
    }
    return probs_.rbegin()->first;
  }

  bool operator==(const FiniteDist &o) const { return probs_ == o.probs_; }
  bool operator!=(const FiniteDist &o) const { return !(*this == o); }

 private:
  std::map<O, P> probs_;
};

using RDist = FiniteDist<BitString, Rational>;
using DDist = FiniteDist<BitString, double>;

template <class P>
FiniteDist<BitString, P> bernoulli_dist(const P &p1) {
  FiniteDist<BitString, P> d;
  d.add(BitString::from_string("0"), P(1) - p1);
  d.add(BitString::from_string("1"), p1);
  return d;
}

template <class P>
FiniteDist<BitString, P> uniform_over(const std::vector<BitString> &support) {
  FiniteDist<BitString, P> d;
  for (const auto &x : support) d.add(x, P(1) / P(support.size()));
  return d;
}

/// mu conditioned on the strings consistent with z.
template <class P>
FiniteDist<BitString, P> condition(const FiniteDist<BitString, P> &mu, const PartialAssignment &z) {
  FiniteDist<BitString, P> out;
  P mass(0);
  for (const auto &[x, p] : mu.items()) {
    if (z.consistent_with(x)) {
      out.add(x, p);
      mass += p;
    }
  }
  if (is_zero(mass)) throw ZeroMassCondition("condition: no mass consistent with " + z.to_string());
  FiniteDist<BitString, P> norm;
  for (const auto &[x, p] : out.items()) norm.add(x, p / mass);
  return norm;
}

/// Mass of the strings consistent with z (unnormalized).
template <class P>
P consistent_mass(const FiniteDist<BitString, P> &mu, const PartialAssignment &z) {
  P mass(0);
  for (const auto &[x, p] : mu.items()) {
    if (z.consistent_with(x)) mass += p;
  }
  return mass;
}

/// Pr_mu[x_i = 1], 0-based index.
template <class P>
P marginal(const FiniteDist<BitString, P> &mu, size_t i) {
  P out(0);
  for (const auto &[x, p] : mu.items()) {
    if (i >= x.size()) throw std::out_of_range("marginal: index beyond string length");
    if (x[i]) out += p;
  }
  return out;
}

inline BitString concat(const BitString &a, const BitString &b) {
  BitString out(a.size() + b.size());
  for (size_t i = 0; i < a.size(); ++i) out.set(i, a[i]);
  for (size_t i = 0; i < b.size(); ++i) out.set(a.size() + i, b[i]);
  return out;
}

template <class P>
FiniteDist<BitString, P> product(const FiniteDist<BitString, P> &a, const FiniteDist<BitString, P> &b) {
  FiniteDist<BitString, P> out;
  for (const auto &[x, px] : a.items()) {
    for (const auto &[y, py] : b.items()) out.add(concat(x, y), px * py);
  }
  return out;
}

constexpr uint64_t kExactSupportBudget = uint64_t{1} << 20;

template <class P>
FiniteDist<BitString, P> tensor_power(const FiniteDist<BitString, P> &p, unsigned k) {
  if (k == 0) throw std::invalid_argument("tensor_power: k must be >= 1");
  double size = std::pow(static_cast<double>(p.support_size()), k);
  if (size > static_cast<double>(kExactSupportBudget)) {
    throw BudgetExceeded("tensor_power: support^k exceeds 2^20 outcomes");
  }
  FiniteDist<BitString, P> out = p;
  for (unsigned i = 1; i < k; ++i) out = product(out, p);
  return out;
}

/// Independent factors; sampling concatenates factor samples.
template <class P>
struct ProductDist {
  std::vector<FiniteDist<BitString, P>> factors;

  BitString sample(RngStream &rng) const {
    BitString out;
    for (const auto &f : factors) out = concat(out, f.sample(rng));
    return out;
  }
  FiniteDist<BitString, P> joint() const {
    if (factors.empty()) throw std::invalid_argument("ProductDist: no factors");
    double size = 1;
    for (const auto &f : factors) size *= f.support_size();
    if (size > static_cast<double>(kExactSupportBudget)) throw BudgetExceeded("ProductDist: joint too large");
    FiniteDist<BitString, P> out = factors[0];
    for (size_t i = 1; i < factors.size(); ++i) out = product(out, factors[i]);
    return out;
  }
};

// Distance measures. Outcomes missing from one side have probability 0 there.

template <class O, class P, class F>
void for_each_union(const FiniteDist<O, P> &p, const FiniteDist<O, P> &q, F &&f) {
  auto ip = p.items().begin(), iq = q.items().begin();
  const auto ep = p.items().end(), eq = q.items().end();
  const P zero(0);
  while (ip != ep || iq != eq) {
    if (iq == eq || (ip != ep && ip->first < iq->first)) {
      f(ip->second, zero);
      ++ip;
    } else if (ip == ep || iq->first < ip->first) {
      f(zero, iq->second);
      ++iq;
    } else {
      f(ip->second, iq->second);
      ++ip;
      ++iq;
    }
  }
}

template <class O, class P>
double hellinger_sq(const FiniteDist<O, P> &p, const FiniteDist<O, P> &q) {
  double s = 0;
  for_each_union(p, q, [&](const P &a, const P &b) {
    double d = std::sqrt(nqsim::to_double(a)) - std::sqrt(nqsim::to_double(b));
    s += d * d;
  });
  return s / 2;
}

template <class O>
Surd fidelity_exact(const FiniteDist<O, Rational> &p, const FiniteDist<O, Rational> &q) {
  Surd f;
  for (const auto &[o, a] : p.items()) {
    Rational b = q.prob(o);
    if (sgn(b) != 0) f += Surd::sqrt_of(a * b);
  }
  return f;
}

/// h^2 = 1 - F, exact for normalized rational inputs.
template <class O>
Surd hellinger_sq_exact(const FiniteDist<O, Rational> &p, const FiniteDist<O, Rational> &q) {
  return Surd((p.total() + q.total()) / 2) - fidelity_exact(p, q);
}

template <class O, class P>
P chi_sym_sq(const FiniteDist<O, P> &p, const FiniteDist<O, P> &q) {
  P s(0);
  for_each_union(p, q, [&](const P &a, const P &b) {
    P t = a + b;
    if (!is_zero(t)) s += (a - b) * (a - b) / t;
  });
  return s / P(2);
}

template <class O, class P>
P tvd(const FiniteDist<O, P> &p, const FiniteDist<O, P> &q) {
  P s(0);
  for_each_union(p, q, [&](const P &a, const P &b) { s += abs_value(a - b); });
  return s / P(2);
}

/// Jensen-Shannon distance in bits.
template <class O, class P>
double js(const FiniteDist<O, P> &p, const FiniteDist<O, P> &q) {
  double s = 0;
  for_each_union(p, q, [&](const P &pa, const P &pb) {
    double a = nqsim::to_double(pa), b = nqsim::to_double(pb);
    if (a > 0) s += a * std::log2(2 * a / (a + b));
    if (b > 0) s += b * std::log2(2 * b / (a + b));
  });
  return s / 2;
}

/// Shannon entropy in bits.
template <class O, class P>
double entropy(const FiniteDist<O, P> &d) {
  double h = 0;
  for (const auto &[o, p] : d.items()) {
    double x = nqsim::to_double(p);
    if (x > 0) h -= x * std::log2(x);
  }
  return h;
}

double binary_entropy(double p);

/// I(Z; Y_Z) for Z ~ Bern((1 + gamma)/2), Y_0 ~ p0, Y_1 ~ p1. With gamma = 0 this is the
/// mutual-information form of js(p0, p1).
template <class O, class P>
double coin_information(const FiniteDist<O, P> &p0, const FiniteDist<O, P> &p1, double gamma) {
  double w1 = (1 + gamma) / 2, w0 = 1 - w1;
  FiniteDist<O, double> mix;
  double h_joint = 0;
  for (const auto &[o, p] : p0.items()) {
    double x = w0 * nqsim::to_double(p);
    mix.add(o, x);
    if (x > 0) h_joint -= x * std::log2(x);
  }
  for (const auto &[o, p] : p1.items()) {
    double x = w1 * nqsim::to_double(p);
    mix.add(o, x);
    if (x > 0) h_joint -= x * std::log2(x);
  }
  return binary_entropy(w1) + entropy(mix) - h_joint;
}

template <class H>
struct MixtureH2 {
  H weighted;  // sum_a w_a h^2(p_a, q_a)
  H mixed;     // h^2 of the two mixed distributions
};

template <class O>
MixtureH2<Surd> disjoint_mixture_h2_exact(const std::vector<std::pair<FiniteDist<O, Rational>, FiniteDist<O, Rational>>> &pairs,
                                          const std::vector<Rational> &weights);
template <class O>
MixtureH2<double> disjoint_mixture_h2(const std::vector<std::pair<FiniteDist<O, double>, FiniteDist<O, double>>> &pairs,
                                      const std::vector<double> &weights);

namespace internal {

template <class O, class P>
void mix_disjoint(const std::vector<std::pair<FiniteDist<O, P>, FiniteDist<O, P>>> &pairs, const std::vector<P> &weights,
                  FiniteDist<O, P> &m0, FiniteDist<O, P> &m1) {
  if (pairs.size() != weights.size()) throw std::invalid_argument("disjoint_mixture_h2: size mismatch");
  std::map<O, size_t> owner;
  for (size_t a = 0; a < pairs.size(); ++a) {
    for (const auto *d : {&pairs[a].first, &pairs[a].second}) {
      for (const auto &[o, p] : d->items()) {
        auto [it, inserted] = owner.emplace(o, a);
        if (!inserted && it->second != a) throw OverlapError("disjoint_mixture_h2: supports of distinct pairs intersect");
      }
    }
    for (const auto &[o, p] : pairs[a].first.items()) m0.add(o, p * weights[a]);
    for (const auto &[o, p] : pairs[a].second.items()) m1.add(o, p * weights[a]);
  }
}

}  // namespace internal

template <class O>
MixtureH2<Surd> disjoint_mixture_h2_exact(const std::vector<std::pair<FiniteDist<O, Rational>, FiniteDist<O, Rational>>> &pairs,
                                          const std::vector<Rational> &weights) {
  FiniteDist<O, Rational> m0, m1;
  internal::mix_disjoint(pairs, weights, m0, m1);
  Surd weighted;
  for (size_t a = 0; a < pairs.size(); ++a) {
    weighted += Surd(weights[a]) * hellinger_sq_exact(pairs[a].first, pairs[a].second);
  }
  return {weighted, hellinger_sq_exact(m0, m1)};
}

template <class O>
MixtureH2<double> disjoint_mixture_h2(const std::vector<std::pair<FiniteDist<O, double>, FiniteDist<O, double>>> &pairs,
                                      const std::vector<double> &weights) {
  FiniteDist<O, double> m0, m1;
  internal::mix_disjoint(pairs, weights, m0, m1);
  double weighted = 0;
  for (size_t a = 0; a < pairs.size(); ++a) weighted += weights[a] * hellinger_sq(pairs[a].first, pairs[a].second);
  return {weighted, hellinger_sq(m0, m1)};
}

/// Random rational distribution over the given outcomes: integer weights in [0, max_weight],
/// at least one positive. Small weights keep exact square roots cheap.
RDist random_rational_dist(const std::vector<BitString> &outcomes, RngStream &rng, unsigned max_weight = 9);
/// Random double distribution with i.i.d. exponential weights, some zeroed with probability zero_prob.
DDist random_real_dist(const std::vector<BitString> &outcomes, RngStream &rng, double zero_prob = 0.2);
std::vector<BitString> all_strings(size_t n);

/// JSON list of {"outcome", "num", "den"} records.
nlohmann::json to_json(const RDist &d);
RDist rdist_from_json(const nlohmann::json &j);

}  // namespace nqsim

#endif
