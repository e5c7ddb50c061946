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

#ifndef NQSIM_STATS_H
#define NQSIM_STATS_H

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "nqsim/rational.h"
#include "nqsim/rng.h"

namespace nqsim {

Rational binom_pmf_exact(unsigned long k, unsigned long i, const Rational &p);

/// Pr[X = i] for X the number of marked items among d draws without replacement from
/// m items of which K are marked.
Rational hypergeom_pmf(unsigned long m, unsigned long K, unsigned long d, unsigned long i);
/// Upper tail Pr[X >= threshold] of the same law.
Rational hypergeom_tail(unsigned long m, unsigned long K, unsigned long d, unsigned long threshold);

/// E|Bin(k, 1/2) - k/2| for odd k, via the closed form 2^-k ((k+1)/2) C(k, (k-1)/2).
Rational mad_binomial(unsigned long k);
/// Same quantity by summing over the binomial law.
Rational mad_binomial_bruteforce(unsigned long k);

struct MadBoundCheck {
  bool lower_ok;  // sqrt(k / 2 pi) <= M_k
  bool upper_ok;  // M_k <= sqrt(k / 2 pi) (1 + 1/k)
};
/// Exact check, using a rational enclosure of pi of width 1e-40.
MadBoundCheck mad_binomial_bounds(unsigned long k, const Rational &mk);

struct Interval {
  double lo;
  double hi;
  double half_width() const { return (hi - lo) / 2; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

Interval wilson_ci(uint64_t successes, uint64_t trials, double level = 0.95);
/// Normal-approximation interval for a sample mean.
Interval mean_ci(double mean, double variance, uint64_t n, double level = 0.95);
double normal_quantile(double p);

/// Pearson statistic with a chi-square tail. `dof_reduction` extra constraints beyond
/// the total are subtracted from the degrees of freedom. Throws std::invalid_argument
/// when an expected count is below 5.
double chi_square_gof(const std::vector<double> &observed, const std::vector<double> &expected,
                      int dof_reduction = 0);

struct WaldResult {
  double lhs;  // mean of sum_{l <= L} X_l
  double rhs;  // mean(L) * mean(X)
  double ratio;
  double ci_half_width;  // 95% half width of the ratio estimate
  bool ok;               // |ratio - 1| <= 3 * ci_half_width
};

using SegmentSampler = std::function<double(RngStream &)>;
/// Called after segment l has been appended to `past`. `upcoming` is the value the next
/// segment will take; a valid stopping time ignores it.
using StoppingRule = std::function<bool(const std::vector<double> &past, double upcoming)>;

/// Wald's equation check. E[X] is estimated from an independent batch of `trials`
/// segments unless `known_mean` is given.
WaldResult wald_check(const SegmentSampler &sampler, const StoppingRule &rule, uint64_t trials,
                      RngStream rng, std::optional<double> known_mean = std::nullopt);

/// Least-squares slope of y against x.
double fitted_slope(const std::vector<double> &x, const std::vector<double> &y);

}  // namespace nqsim

#endif
