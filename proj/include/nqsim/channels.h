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

#ifndef NQSIM_CHANNELS_H
#define NQSIM_CHANNELS_H

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "nqsim/boolfn.h"
#include "nqsim/dist.h"
#include "nqsim/rational.h"
#include "nqsim/rng.h"

namespace nqsim {

class SupportOutsidePromise : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ChannelKind { kNoisy, kErasure };

/// noisy(rho) flips each bit independently with probability (1-rho)/2; erasure(keep)
/// keeps each bit with probability keep and otherwise emits the erasure symbol.
struct ChannelSpec {
  ChannelKind kind;
  Rational param;

  static ChannelSpec noisy(const Rational &rho);
  static ChannelSpec erasure(const Rational &keep_prob);
  std::string to_string() const;
};

constexpr uint8_t kErased = 2;

/// Symbols 0, 1 or kErased.
std::vector<uint8_t> apply_channel(const ChannelSpec &spec, const BitString &x, RngStream &rng);
std::string symbols_to_string(const std::vector<uint8_t> &y);

struct ChannelPosterior {
  double cond_entropy;  // H(f(X) | Y) in bits
  Rational bayes_error; // Pr[f(X) != beta(Y)] for the Bayes rule (ties output 0)
};

/// Exact joint enumeration. Noisy: arity <= 12; erasure: arity <= 8.
ChannelPosterior channel_posterior(const PartialFn &f, const RDist &mu, const ChannelSpec &spec);
double cond_entropy_exact(const PartialFn &f, const RDist &mu, const ChannelSpec &spec);

struct SamorodnitskyResult {
  double h_noisy;
  double h_erasure;
  double margin;  // h_noisy - h_erasure
  bool ok() const { return margin >= -1e-12; }
};
/// Compares noisy(rho) against erasure(rho²).
SamorodnitskyResult samorodnitsky_check(const PartialFn &f, const RDist &mu, const Rational &rho);

struct FanoResult {
  Rational err_bayes;
  double h;
  bool lower_ok;  // 2 err <= H
  bool upper_ok;  // H <= h(err)
};
FanoResult fano_bounds_check(const PartialFn &f, const RDist &mu, const ChannelSpec &spec);

struct SweepRow {
  std::string f_id;
  size_t n;
  Rational rho;
  double h_noisy;
  double h_erasure;
  double margin;
  double err_bayes;
  bool fano_ok;
};

struct SweepConfig {
  size_t random_functions = 200;
  std::vector<size_t> random_arities = {3, 4};
  std::vector<Rational> rhos;  // empty means 0.1, 0.2, ..., 0.9
};

/// All 16 total functions on 2 bits plus random partial functions, each with a random
/// rational input law on its domain, over the rho grid.
std::vector<SweepRow> channel_sweep(const SweepConfig &config, RngStream rng);
void write_sweep_csv(std::ostream &out, const std::vector<SweepRow> &rows);

}  // namespace nqsim

#endif
