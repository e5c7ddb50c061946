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

#ifndef NQSIM_SURD_H
#define NQSIM_SURD_H

#include <map>
#include <string>

#include "nqsim/rational.h"

namespace nqsim {

/// Exact element of Q(sqrt 2, sqrt 3, ...): a finite sum of rational multiples of
/// square roots of squarefree positive integers. Two Surds are equal iff their
/// canonical term maps agree, because square roots of distinct squarefree integers
/// are linearly independent over Q.
class Surd {
 public:
  Surd() = default;
  Surd(const Rational &r);  // NOLINT: implicit by design, rationals embed.
  Surd(long v) : Surd(Rational(v)) {}

  /// Exact square root of a nonnegative rational. Throws std::domain_error when the
  /// squarefree part cannot be certified by trial division.
  static Surd sqrt_of(const Rational &r);

  Surd &operator+=(const Surd &o);
  Surd &operator-=(const Surd &o);
  Surd &operator*=(const Surd &o);
  friend Surd operator+(Surd a, const Surd &b) { return a += b; }
  friend Surd operator-(Surd a, const Surd &b) { return a -= b; }
  friend Surd operator*(Surd a, const Surd &b) { return a *= b; }
  Surd operator-() const;
  bool operator==(const Surd &o) const { return terms_ == o.terms_; }
  bool operator!=(const Surd &o) const { return !(*this == o); }

  bool is_rational() const;
  Rational rational_part() const;
  bool is_zero() const { return terms_.empty(); }
  size_t num_terms() const { return terms_.size(); }

  /// Sign determined by certified high-precision evaluation; exact zero is detected
  /// structurally.
  int sign() const;
  int compare(const Surd &o) const { return (*this - o).sign(); }
  double to_double() const;
  std::string to_string() const;

  const std::map<Integer, Rational> &terms() const { return terms_; }

 private:
  void add_term(const Integer &radicand, const Rational &coef);
  std::map<Integer, Rational> terms_;
};

inline bool operator<(const Surd &a, const Surd &b) { return a.compare(b) < 0; }
inline bool operator<=(const Surd &a, const Surd &b) { return a.compare(b) <= 0; }
inline bool operator>(const Surd &a, const Surd &b) { return a.compare(b) > 0; }
inline bool operator>=(const Surd &a, const Surd &b) { return a.compare(b) >= 0; }

Surd pow(const Surd &base, unsigned long exponent);

}  // namespace nqsim

#endif
