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

#include "nqsim/boolfn.h"

#include <algorithm>
#include <bit>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace nqsim {

BitString::BitString(size_t n, uint8_t fill) : bits_(n, fill & 1) {
  if (n > kMaxDenseBits) throw std::length_error("BitString: dense strings are capped at 2^20 bits");
}

BitString BitString::from_string(const std::string &text) {
  BitString out(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '0' && text[i] != '1') throw std::invalid_argument("BitString: bad char in '" + text + "'");
    out.bits_[i] = text[i] - '0';
  }
  return out;
}

BitString BitString::from_uint(uint64_t value, size_t n) {
  BitString out(n);
  for (size_t i = 0; i < n && i < 64; ++i) out.bits_[i] = (value >> i) & 1;
  return out;
}

size_t BitString::weight() const { return std::count(bits_.begin(), bits_.end(), 1); }

uint64_t BitString::to_uint() const {
  if (bits_.size() > 64) throw std::length_error("BitString::to_uint: more than 64 bits");
  uint64_t v = 0;
  for (size_t i = 0; i < bits_.size(); ++i) v |= uint64_t{bits_[i]} << i;
  return v;
}

std::string BitString::to_string() const {
  std::string s(bits_.size(), '0');
  for (size_t i = 0; i < bits_.size(); ++i) s[i] = '0' + bits_[i];
  return s;
}

size_t hamming_distance(const BitString &a, const BitString &b) {
  if (a.size() != b.size()) throw std::invalid_argument("hamming_distance: length mismatch");
  size_t d = 0;
  for (size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

PartialAssignment PartialAssignment::from_string(const std::string &text) {
  PartialAssignment out(text.size());
  for (size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '0' || text[i] == '1') {
      out.entries_[i] = text[i] - '0';
    } else if (text[i] != '*') {
      throw std::invalid_argument("PartialAssignment: bad char in '" + text + "'");
    }
  }
  return out;
}

std::optional<uint8_t> PartialAssignment::get(size_t i) const {
  if (entries_[i] < 0) return std::nullopt;
  return static_cast<uint8_t>(entries_[i]);
}

size_t PartialAssignment::num_set() const {
  return std::count_if(entries_.begin(), entries_.end(), [](int8_t e) { return e >= 0; });
}

bool PartialAssignment::consistent_with(const BitString &x) const {
  if (x.size() != entries_.size()) throw std::invalid_argument("consistent_with: length mismatch");
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i] >= 0 && entries_[i] != x[i]) return false;
  }
  return true;
}

bool PartialAssignment::consistent_with(const PartialAssignment &o) const {
  if (o.size() != entries_.size()) throw std::invalid_argument("consistent_with: length mismatch");
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i] >= 0 && o.entries_[i] >= 0 && entries_[i] != o.entries_[i]) return false;
  }
  return true;
}

std::string PartialAssignment::to_string() const {
  std::string s(entries_.size(), '*');
  for (size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i] >= 0) s[i] = '0' + entries_[i];
  }
  return s;
}

std::string to_string(FnValue v) {
  switch (v) {
    case FnValue::kZero:
      return "0";
    case FnValue::kOne:
      return "1";
    default:
      return "outside";
  }
}

BitString materialize(const ProbeInput &input) {
  if (input.size() > kMaxDenseBits) {
    throw std::length_error("materialize: input exceeds the dense limit, keep it lazy");
  }
  BitString out(input.size());
  for (uint64_t i = 0; i < input.size(); ++i) out.set(i, input.probe(i));
  return out;
}

FnValue PartialFn::eval(const BitString &x) const {
  if (x.size() != arity) {
    throw std::invalid_argument(name + ": expected " + std::to_string(arity) + " bits, got " +
                                std::to_string(x.size()));
  }
  return eval_fn(x);
}

namespace {

// Smallest integer w with w - m/2 >= g sqrt(m).
uint64_t ceil_upper(uint64_t m, const Rational &g) {
  Rational g2m = g * g * m;
  // Start at ceil(m/2) and walk up; m is small enough in practice for a linear scan.
  for (uint64_t w = (m + 1) / 2;; ++w) {
    Rational d = Rational(w) - rat(m, 2);
    if (sgn(d) >= 0 && d * d >= g2m) return w;
  }
}

// Largest integer w with m/2 - w >= g sqrt(m), or -1.
int64_t floor_lower(uint64_t m, const Rational &g) {
  Rational g2m = g * g * m;
  for (int64_t w = static_cast<int64_t>(m / 2); w >= 0; --w) {
    Rational d = rat(m, 2) - Rational(w);
    if (sgn(d) >= 0 && d * d >= g2m) return w;
  }
  return -1;
}

}  // namespace

bool gapmaj_valid(uint64_t m, const Rational &gap_coeff) {
  if (m == 0 || sgn(gap_coeff) <= 0) return false;
  // hi <= m  <=>  m/2 >= g sqrt m  <=>  m/4 >= g^2.
  return rat(m, 4) >= gap_coeff * gap_coeff;
}

GapLevels gapmaj_levels(uint64_t m, const Rational &gap_coeff) {
  if (!gapmaj_valid(m, gap_coeff)) {
    throw std::invalid_argument("gapmaj: m=" + std::to_string(m) + " gap=" + gap_coeff.get_str() +
                                " leaves the promise levels outside [0, m]");
  }
  int64_t lo = floor_lower(m, gap_coeff);
  uint64_t hi = ceil_upper(m, gap_coeff);
  if (lo < 0 || hi > m) throw std::invalid_argument("gapmaj: degenerate gadget");
  return {hi, static_cast<uint64_t>(lo)};
}

uint64_t smallest_valid_gapmaj(uint64_t min_m, const Rational &gap_coeff) {
  for (uint64_t m = std::max<uint64_t>(min_m, 1);; ++m) {
    if (gapmaj_valid(m, gap_coeff)) return m;
  }
}

PartialFn gapmaj(uint64_t m, const Rational &gap_coeff) {
  GapLevels lv = gapmaj_levels(m, gap_coeff);
  return {m, "gapmaj(m=" + std::to_string(m) + ",gap=" + gap_coeff.get_str() + ")",
          [lv](const BitString &x) {
            size_t w = x.weight();
            if (w == lv.hi) return FnValue::kOne;
            if (w == lv.lo) return FnValue::kZero;
            return FnValue::kOutside;
          }};
}

PartialFn triv(uint64_t n) {
  if (n == 0) throw std::invalid_argument("triv: n must be >= 1");
  return {n, "triv(" + std::to_string(n) + ")", [n](const BitString &x) {
            size_t w = x.weight();
            if (w == 0) return FnValue::kZero;
            if (w == n) return FnValue::kOne;
            return FnValue::kOutside;
          }};
}

PartialFn or_n(uint64_t n) {
  if (n == 0) throw std::invalid_argument("or_n: n must be >= 1");
  return {n, "or(" + std::to_string(n) + ")", [](const BitString &x) { return fn_value(x.weight() > 0); }};
}

PartialFn and_n(uint64_t n) {
  if (n == 0) throw std::invalid_argument("and_n: n must be >= 1");
  return {n, "and(" + std::to_string(n) + ")", [n](const BitString &x) { return fn_value(x.weight() == n); }};
}

PartialFn majority(uint64_t n) {
  if (n == 0 || n % 2 == 0) throw std::invalid_argument("majority: n must be odd");
  return {n, "maj(" + std::to_string(n) + ")", [n](const BitString &x) { return fn_value(2 * x.weight() > n); }};
}

PartialFn parity(uint64_t n) {
  if (n == 0) throw std::invalid_argument("parity: n must be >= 1");
  return {n, "parity(" + std::to_string(n) + ")", [](const BitString &x) { return fn_value(x.weight() % 2); }};
}

PartialFn table_fn(uint64_t n, std::vector<FnValue> table, std::string name) {
  if (n > 20 || table.size() != (uint64_t{1} << n)) throw std::invalid_argument("table_fn: table size must be 2^n");
  auto shared = std::make_shared<const std::vector<FnValue>>(std::move(table));
  return {n, std::move(name), [shared](const BitString &x) { return (*shared)[x.to_uint()]; }};
}

PartialFn compose(const PartialFn &f, const PartialFn &g) {
  uint64_t m = g.arity;
  return {f.arity * g.arity, f.name + "∘" + g.name, [f, g, m](const BitString &x) {
            BitString outer(f.arity);
            BitString block(m);
            for (uint64_t j = 0; j < f.arity; ++j) {
              for (uint64_t t = 0; t < m; ++t) block.set(t, x[j * m + t]);
              FnValue v = g.eval(block);
              if (v == FnValue::kOutside) return FnValue::kOutside;
              outer.set(j, static_cast<uint8_t>(v));
            }
            return f.eval(outer);
          }};
}

int64_t approxindex_raw_radius(uint64_t k, const Rational &radius_coeff) {
  if (sgn(radius_coeff) < 0) throw std::invalid_argument("approxindex: negative radius coefficient");
  auto within = [&](int64_t d) {
    Rational slack = rat(k, 2) - Rational(d);
    if (sgn(slack) < 0) return false;
    if (sgn(radius_coeff) == 0) return true;
    // slack >= c sqrt(k log2 k)  <=>  log2 k <= X := slack^2 / (c^2 k)  <=>  k^q <= 2^p.
    Rational x = slack * slack / (radius_coeff * radius_coeff * k);
    if (!x.get_den().fits_ulong_p() || !x.get_num().fits_ulong_p()) {
      throw std::overflow_error("approxindex: threshold exponent too large");
    }
    unsigned long p = x.get_num().get_ui(), q = x.get_den().get_ui();
    Integer lhs, rhs;
    mpz_ui_pow_ui(lhs.get_mpz_t(), k, q);
    mpz_ui_pow_ui(rhs.get_mpz_t(), 2, p);
    return lhs <= rhs;
  };
  int64_t best = -1;
  for (int64_t d = 0; d <= static_cast<int64_t>(k); ++d) {
    if (!within(d)) break;
    best = d;
  }
  return best;
}

ApproxIndex::ApproxIndex(uint64_t k, const Rational &radius_coeff)
    : k_(k), radius_coeff_(radius_coeff) {
  if (k < 4) throw std::invalid_argument("approxindex: k must be >= 4");
  if (k > 40) throw std::invalid_argument("approxindex: k too large for 64-bit cell addressing");
  raw_radius_ = approxindex_raw_radius(k, radius_coeff);
  radius_ = raw_radius_ < 0 ? 0 : static_cast<uint64_t>(raw_radius_);
}

FnValue ApproxIndex::eval_ternary(const std::function<uint8_t(uint64_t)> &symbol) const {
  uint64_t a = 0;
  for (uint64_t i = 0; i < k_; ++i) {
    uint8_t s = symbol(i);
    if (s > 1) return FnValue::kOutside;
    a |= uint64_t{s} << i;
  }
  uint8_t value = symbol(k_ + a);
  if (value > 1) return FnValue::kOutside;
  for (uint64_t b = 0; b < num_cells(); ++b) {
    uint8_t expect = static_cast<uint64_t>(std::popcount(a ^ b)) <= radius_ ? value : 2;
    if (symbol(k_ + b) != expect) return FnValue::kOutside;
  }
  return fn_value(value);
}

FnValue ApproxIndex::eval_boolean(const BitString &x) const {
  if (x.size() != boolean_arity()) throw std::invalid_argument("approxindex: wrong input length");
  return eval_ternary([&](uint64_t i) -> uint8_t {
    if (i < k_) return x[i];
    uint64_t b = i - k_;
    return static_cast<uint8_t>(2 * x[k_ + 2 * b] + x[k_ + 2 * b + 1]);
  });
}

PartialFn ApproxIndex::as_partial_fn() const {
  ApproxIndex self = *this;
  return {boolean_arity(),
          "approxindex(k=" + std::to_string(k_) + ",radius=" + std::to_string(radius_) + ")",
          [self](const BitString &x) { return self.eval_boolean(x); }};
}

PartialFn approxindex(uint64_t k, const Rational &radius_coeff) {
  return ApproxIndex(k, radius_coeff).as_partial_fn();
}

ApproxIndexInput::ApproxIndexInput(const ApproxIndex &fn, BitString a, uint8_t value)
    : k_(fn.k()), radius_(fn.radius()), a_(std::move(a)), value_(value & 1) {
  if (a_.size() != k_) throw std::invalid_argument("ApproxIndexInput: |a| must equal k");
  a_int_ = a_.to_uint();
}

uint8_t ApproxIndexInput::cell(uint64_t b) const {
  return static_cast<uint64_t>(std::popcount(a_int_ ^ b)) <= radius_ ? value_ : 2;
}

uint8_t ApproxIndexInput::symbol(uint64_t i) const { return i < k_ ? a_[i] : cell(i - k_); }

uint8_t ApproxIndexInput::probe(uint64_t i) const {
  if (i < k_) return a_[i];
  uint64_t off = i - k_;
  uint8_t s = cell(off / 2);
  return off % 2 == 0 ? (s >> 1) : (s & 1);
}

BitString random_weight_string(uint64_t m, uint64_t weight, RngStream &rng) {
  if (weight > m) throw std::invalid_argument("random_weight_string: weight exceeds length");
  std::vector<uint64_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  BitString out(m);
  // Partial Fisher-Yates: the first `weight` slots form a uniform subset.
  for (uint64_t i = 0; i < weight; ++i) {
    uint64_t j = i + rng.uniform_int(m - i);
    std::swap(idx[i], idx[j]);
    out.set(idx[i], 1);
  }
  return out;
}

GadgetInput::GadgetInput(std::shared_ptr<const ProbeInput> outer, uint64_t m, const Rational &gap_coeff,
                         RngStream rng)
    : outer_(std::move(outer)), m_(m), levels_(gapmaj_levels(m, gap_coeff)), rng_(rng) {}

const BitString &GadgetInput::gadget(uint64_t j) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find(j);
  if (it != cache_.end()) return it->second;
  RngStream r = rng_.child(j);
  uint64_t w = outer_->probe(j) ? levels_.hi : levels_.lo;
  return cache_.emplace(j, random_weight_string(m_, w, r)).first->second;
}

uint8_t GadgetInput::probe(uint64_t i) const { return gadget(i / m_)[i % m_]; }

namespace {

std::map<std::string, std::string> parse_params(const std::string &text) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("function spec: expected key=value, got '" + item + "'");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

uint64_t need_uint(const std::map<std::string, std::string> &p, const std::string &key) {
  auto it = p.find(key);
  if (it == p.end()) throw std::invalid_argument("function spec: missing '" + key + "'");
  return std::stoull(it->second);
}

}  // namespace

PartialFn parse_function(const std::string &spec) {
  auto colon = spec.find(':');
  std::string name = spec.substr(0, colon);
  auto p = parse_params(colon == std::string::npos ? "" : spec.substr(colon + 1));
  if (name == "gapmaj") {
    return gapmaj(need_uint(p, "m"), p.count("gap") ? parse_rational(p["gap"]) : Rational(2));
  }
  if (name == "approxindex") {
    return approxindex(need_uint(p, "k"), p.count("radius_coeff") ? parse_rational(p["radius_coeff"]) : Rational(2));
  }
  if (name == "triv") return triv(need_uint(p, "n"));
  if (name == "or") return or_n(need_uint(p, "n"));
  if (name == "and") return and_n(need_uint(p, "n"));
  if (name == "maj") return majority(need_uint(p, "n"));
  if (name == "parity") return parity(need_uint(p, "n"));
  throw std::invalid_argument("unknown function '" + name + "'");
}

}  // namespace nqsim
