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

#ifndef NQSIM_RNG_H
#define NQSIM_RNG_H

#include <cstdint>
#include <limits>
#include <string_view>

#include "nqsim/rational.h"

namespace nqsim {

/// Counter-based splittable stream. The key is derived from (seed, path) by hashing,
/// and output i is splitmix64(key + i * golden). Identical (seed, path) always gives
/// the identical sequence, so trial parallelism never reorders randomness.
class RngStream {
 public:
  using result_type = uint64_t;

  explicit RngStream(uint64_t seed) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

  /// Substream for a child path component. Does not advance this stream.
  RngStream child(uint64_t id) const { return RngStream(key_, id, 0); }
  RngStream child(std::string_view tag) const;

  uint64_t next_u64() { return mix(key_ + (++counter_) * 0x9e3779b97f4a7c15ULL); }
  uint64_t operator()() { return next_u64(); }
  static constexpr uint64_t min() { return 0; }
  static constexpr uint64_t max() { return std::numeric_limits<uint64_t>::max(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  /// Exact Bernoulli(p) for rational p by lazy comparison against the binary expansion.
  bool bernoulli(const Rational &p);
  /// Uniform integer in [0, n), n >= 1, unbiased (Lemire's method).
  uint64_t uniform_int(uint64_t n);
  bool fair_bit() { return next_u64() >> 63; }

  uint64_t draws() const { return counter_; }

  static uint64_t mix(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  RngStream(uint64_t parent_key, uint64_t id, int)
      : key_(mix(parent_key ^ mix(id + 0x3c6ef372fe94f82bULL))) {}
  uint64_t key_;
  uint64_t counter_ = 0;
};

}  // namespace nqsim

#endif
