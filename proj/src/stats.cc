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

#include "nqsim/stats.h"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <stdexcept>

namespace nqsim {

Rational binom_pmf_exact(unsigned long k, unsigned long i, const Rational &p) {
  if (i > k) return 0;
  return Rational(binomial(k, i)) * pow(p, i) * pow(Rational(1) - p, k - i);
}

Rational hypergeom_pmf(unsigned long m, unsigned long K, unsigned long d, unsigned long i) {
  if (K > m || d > m) throw std::invalid_argument("hypergeom_pmf: K and d must be <= m");
  if (i > K || i > d || d - i > m - K) return 0;
  Rational r(binomial(K, i) * binomial(m - K, d - i), binomial(m, d));
  r.canonicalize();
  return r;
}

Rational hypergeom_tail(unsigned long m, unsigned long K, unsigned long d, unsigned long threshold) {
  Rational total = 0;
  for (unsigned long i = threshold; i <= d; ++i) total += hypergeom_pmf(m, K, d, i);
  return total;
}

Rational mad_binomial(unsigned long k) {
  if (k % 2 == 0) throw std::invalid_argument("mad_binomial: k must be odd");
  Rational r(binomial(k, (k - 1) / 2) * ((k + 1) / 2));
  mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), k);
  r.canonicalize();
  return r;
}

Rational mad_binomial_bruteforce(unsigned long k) {
  Rational total = 0;
  Rational half_k = rat(k, 2);
  for (unsigned long i = 0; i <= k; ++i) {
    total += Rational(binomial(k, i)) * abs(Rational(i) - half_k);
  }
  mpz_mul_2exp(total.get_den_mpz_t(), total.get_den_mpz_t(), k);
  total.canonicalize();
  return total;
}

MadBoundCheck mad_binomial_bounds(unsigned long k, const Rational &mk) {
  static const Rational pi_lo("31415926535897932384626433832795028841971/"
                              "10000000000000000000000000000000000000000");
  static const Rational pi_hi = pi_lo + Rational(1, Integer("10000000000000000000000000000000000000000"));
  // sqrt(k/2pi) <= M  <=>  k <= 2 pi M^2, implied by k <= 2 pi_lo M^2.
  Rational m2 = mk * mk;
  Rational kk(k);
  bool lower = kk <= 2 * pi_lo * m2;
  Rational factor = Rational(1) + rat(1, k);
  bool upper = 2 * pi_hi * m2 <= kk * factor * factor;
  return {lower, upper};
}

double normal_quantile(double p) {
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

Interval wilson_ci(uint64_t successes, uint64_t trials, double level) {
  if (trials == 0) throw std::invalid_argument("wilson_ci: zero trials");
  if (successes > trials) throw std::invalid_argument("wilson_ci: successes exceed trials");
  double z = normal_quantile(0.5 + level / 2);
  double n = static_cast<double>(trials);
  double phat = successes / n;
  double denom = 1 + z * z / n;
  double center = (phat + z * z / (2 * n)) / denom;
  double half = z * std::sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom;
  // The endpoints are exactly 0 and 1 at the extremes; rounding would otherwise leave them off.
  return {successes == 0 ? 0.0 : std::max(0.0, center - half),
          successes == trials ? 1.0 : std::min(1.0, center + half)};
}

Interval mean_ci(double mean, double variance, uint64_t n, double level) {
  double z = normal_quantile(0.5 + level / 2);
  double half = z * std::sqrt(variance / static_cast<double>(n));
  return {mean - half, mean + half};
}

double chi_square_gof(const std::vector<double> &observed, const std::vector<double> &expected,
                      int dof_reduction) {
  if (observed.size() != expected.size() || observed.size() < 2) {
    throw std::invalid_argument("chi_square_gof: need matching vectors with >= 2 cells");
  }
  double stat = 0;
  for (size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] < 5) throw std::invalid_argument("chi_square_gof: expected count below 5");
    double d = observed[i] - expected[i];
    stat += d * d / expected[i];
  }
  int dof = static_cast<int>(observed.size()) - 1 - dof_reduction;
  if (dof < 1) throw std::invalid_argument("chi_square_gof: no degrees of freedom");
  boost::math::chi_squared_distribution<double> dist(dof);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

WaldResult wald_check(const SegmentSampler &sampler, const StoppingRule &rule, uint64_t trials,
                      RngStream rng, std::optional<double> known_mean) {
  if (trials < 2) throw std::invalid_argument("wald_check: need at least 2 trials");
  double sum_s = 0, sum_s2 = 0, sum_l = 0, sum_l2 = 0, sum_sl = 0;
  RngStream stop_rng = rng.child("stopped");
  std::vector<double> past;
  for (uint64_t trial = 0; trial < trials; ++trial) {
    RngStream r = stop_rng.child(trial);
    past.clear();
    double next = sampler(r);
    double s = 0;
    while (true) {
      past.push_back(next);
      s += next;
      next = sampler(r);
      if (rule(past, next)) break;
    }
    double l = static_cast<double>(past.size());
    sum_s += s;
    sum_s2 += s * s;
    sum_l += l;
    sum_l2 += l * l;
    sum_sl += s * l;
  }
  double n = static_cast<double>(trials);
  double ms = sum_s / n, ml = sum_l / n;
  double vs = (sum_s2 - n * ms * ms) / (n - 1);
  double vl = (sum_l2 - n * ml * ml) / (n - 1);
  double csl = (sum_sl - n * ms * ml) / (n - 1);

  double mx, vx_over_n;
  if (known_mean) {
    mx = *known_mean;
    vx_over_n = 0;
  } else {
    RngStream fresh = rng.child("fresh");
    double sx = 0, sx2 = 0;
    for (uint64_t i = 0; i < trials; ++i) {
      RngStream r = fresh.child(i);
      double x = sampler(r);
      sx += x;
      sx2 += x * x;
    }
    mx = sx / n;
    vx_over_n = (sx2 - n * mx * mx) / (n - 1) / n;
  }
  double rhs = ml * mx;
  double ratio = ms / rhs;
  // Delta method on log(ratio) = log(ms) - log(ml) - log(mx); ms and ml are correlated.
  double var_log = vs / (n * ms * ms) + vl / (n * ml * ml) - 2 * csl / (n * ms * ml) +
                   vx_over_n / (mx * mx);
  double half = normal_quantile(0.975) * ratio * std::sqrt(std::max(0.0, var_log));
  return {ms, rhs, ratio, half, std::abs(ratio - 1) <= 3 * half};
}

double fitted_slope(const std::vector<double> &x, const std::vector<double> &y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fitted_slope: bad sizes");
  double mx = 0, my = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  double num = 0, den = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - mx) * (y[i] - my);
    den += (x[i] - mx) * (x[i] - mx);
  }
  if (den == 0) throw std::invalid_argument("fitted_slope: degenerate x");
  return num / den;
}

}  // namespace nqsim
