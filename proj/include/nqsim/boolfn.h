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

#ifndef NQSIM_BOOLFN_H
#define NQSIM_BOOLFN_H

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nqsim/rational.h"
#include "nqsim/rng.h"

namespace nqsim {

constexpr uint64_t kMaxDenseBits = uint64_t{1} << 20;

class BitString {
 public:
  BitString() = default;
  explicit BitString(size_t n, uint8_t fill = 0);
  /// From text such as "0110"; index 0 is the leftmost character.
  static BitString from_string(const std::string &text);
  static BitString from_uint(uint64_t value, size_t n);  // bit i = (value >> i) & 1

  size_t size() const { return bits_.size(); }
  uint8_t operator[](size_t i) const { return bits_[i]; }
  void set(size_t i, uint8_t v) { bits_[i] = v & 1; }
  void flip(size_t i) { bits_[i] ^= 1; }
  size_t weight() const;
  uint64_t to_uint() const;
  std::string to_string() const;
  const std::vector<uint8_t> &bits() const { return bits_; }

  auto operator<=>(const BitString &) const = default;
  bool operator==(const BitString &) const = default;

 private:
  std::vector<uint8_t> bits_;
};

size_t hamming_distance(const BitString &a, const BitString &b);

/// String over {0, 1, *}; -1 encodes *.
class PartialAssignment {
 public:
  PartialAssignment() = default;
  explicit PartialAssignment(size_t n) : entries_(n, -1) {}
  static PartialAssignment from_string(const std::string &text);

  size_t size() const { return entries_.size(); }
  std::optional<uint8_t> get(size_t i) const;
  bool is_set(size_t i) const { return entries_[i] >= 0; }
  void set(size_t i, uint8_t v) { entries_[i] = static_cast<int8_t>(v & 1); }
  void clear(size_t i) { entries_[i] = -1; }
  size_t num_set() const;
  bool consistent_with(const BitString &x) const;
  bool consistent_with(const PartialAssignment &o) const;
  std::string to_string() const;

  auto operator<=>(const PartialAssignment &) const = default;
  bool operator==(const PartialAssignment &) const = default;

 private:
  std::vector<int8_t> entries_;
};

enum class FnValue : uint8_t { kZero = 0, kOne = 1, kOutside = 2 };

inline FnValue fn_value(int bit) { return bit ? FnValue::kOne : FnValue::kZero; }
std::string to_string(FnValue v);

/// Read access to an input one position at a time, without materializing it.
class ProbeInput {
 public:
  virtual ~ProbeInput() = default;
  virtual uint64_t size() const = 0;
  virtual uint8_t probe(uint64_t i) const = 0;
};

class DenseInput : public ProbeInput {
 public:
  explicit DenseInput(BitString x) : x_(std::move(x)) {}
  uint64_t size() const override { return x_.size(); }
  uint8_t probe(uint64_t i) const override { return x_[i]; }
  const BitString &bits() const { return x_; }

 private:
  BitString x_;
};

/// Reads every position of a probe input; refused above kMaxDenseBits.
BitString materialize(const ProbeInput &input);

struct PartialFn {
  uint64_t arity = 0;
  std::string name;
  std::function<FnValue(const BitString &)> eval_fn;

  FnValue eval(const BitString &x) const;
  bool in_domain(const BitString &x) const { return eval(x) != FnValue::kOutside; }
};

class PromiseViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct GapLevels {
  uint64_t hi;  // ceil(m/2 + gap sqrt m), the weight of 1-inputs
  uint64_t lo;  // floor(m/2 - gap sqrt m), the weight of 0-inputs
};
/// Exact thresholds; throws std::invalid_argument if they leave [0, m].
GapLevels gapmaj_levels(uint64_t m, const Rational &gap_coeff);
bool gapmaj_valid(uint64_t m, const Rational &gap_coeff);
/// Smallest valid gadget size >= min_m.
uint64_t smallest_valid_gapmaj(uint64_t min_m, const Rational &gap_coeff);

PartialFn gapmaj(uint64_t m, const Rational &gap_coeff);
PartialFn triv(uint64_t n);
PartialFn or_n(uint64_t n);
PartialFn and_n(uint64_t n);
PartialFn majority(uint64_t n);
PartialFn parity(uint64_t n);
/// Function given by a value table indexed by BitString::to_uint.
PartialFn table_fn(uint64_t n, std::vector<FnValue> table, std::string name);
PartialFn compose(const PartialFn &f, const PartialFn &g);

/// Largest d >= 0 with d <= k/2 - coeff sqrt(k log2 k), decided exactly. Returns -1 when
/// the threshold is negative.
int64_t approxindex_raw_radius(uint64_t k, const Rational &radius_coeff);

/// ApproxIndex over the ternary alphabet. Symbols 0..k-1 are the address a; symbol
/// k + b is array cell b (b read as an integer with bit i = address bit i).
class ApproxIndex {
 public:
  explicit ApproxIndex(uint64_t k, const Rational &radius_coeff = 2);

  uint64_t k() const { return k_; }
  uint64_t num_cells() const { return uint64_t{1} << k_; }
  uint64_t ternary_arity() const { return k_ + num_cells(); }
  /// Boolean view: k address bits, then two bits per cell (00 -> 0, 01 -> 1, 10 -> 2).
  uint64_t boolean_arity() const { return k_ + 2 * num_cells(); }
  /// The radius used by the promise. The raw threshold is clamped at 0 so that cell a
  /// itself always carries the answer.
  uint64_t radius() const { return radius_; }
  bool radius_clamped() const { return raw_radius_ < 0; }
  const Rational &radius_coeff() const { return radius_coeff_; }

  /// Evaluates on ternary symbols read through `symbol(i)`.
  FnValue eval_ternary(const std::function<uint8_t(uint64_t)> &symbol) const;
  FnValue eval_boolean(const BitString &x) const;
  PartialFn as_partial_fn() const;

 private:
  uint64_t k_;
  Rational radius_coeff_;
  int64_t raw_radius_;
  uint64_t radius_;
};

PartialFn approxindex(uint64_t k, const Rational &radius_coeff = 2);

/// Lazy ApproxIndex input generated from (a, value).
class ApproxIndexInput : public ProbeInput {
 public:
  ApproxIndexInput(const ApproxIndex &fn, BitString a, uint8_t value);

  uint64_t size() const override { return k_ + 2 * (uint64_t{1} << k_); }
  /// Boolean view probe.
  uint8_t probe(uint64_t i) const override;
  /// Ternary symbol: a_i for i < k, otherwise the content of cell i - k.
  uint8_t symbol(uint64_t i) const;
  uint8_t cell(uint64_t b) const;
  const BitString &address() const { return a_; }
  uint8_t value() const { return value_; }
  uint64_t address_as_cell() const { return a_.to_uint(); }

 private:
  uint64_t k_;
  uint64_t radius_;
  BitString a_;
  uint64_t a_int_;
  uint8_t value_;
};

/// Input to f o GapMaj(m, gap): outer bit j is encoded by gadget j of m bits. Gadgets are
/// uniformly random strings at the promise weight of their outer bit, generated on first
/// probe from (rng key, j) so the input stays lazy.
class GadgetInput : public ProbeInput {
 public:
  GadgetInput(std::shared_ptr<const ProbeInput> outer, uint64_t m, const Rational &gap_coeff,
              RngStream rng);

  uint64_t size() const override { return outer_->size() * m_; }
  uint8_t probe(uint64_t i) const override;
  uint64_t gadget_size() const { return m_; }
  uint8_t outer_bit(uint64_t j) const { return outer_->probe(j); }
  const ProbeInput &outer() const { return *outer_; }

 private:
  const BitString &gadget(uint64_t j) const;
  std::shared_ptr<const ProbeInput> outer_;
  uint64_t m_;
  GapLevels levels_;
  RngStream rng_;
  mutable std::mutex mu_;
  mutable std::map<uint64_t, BitString> cache_;
};

/// Uniformly random m-bit string of the given weight.
BitString random_weight_string(uint64_t m, uint64_t weight, RngStream &rng);

/// Function zoo, e.g. "gapmaj:m=100,gap=2", "triv:n=3", "approxindex:k=8".
PartialFn parse_function(const std::string &spec);

}  // namespace nqsim

#endif
