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

#ifndef NQSIM_RATIONAL_H
#define NQSIM_RATIONAL_H

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace nqsim {

using Rational = mpq_class;
using Integer = mpz_class;

/// Canonicalized num/den. mpq_class(num, den) alone does not reduce, and GMP arithmetic
/// requires canonical operands.
template <class A, class B = long>
Rational rat(const A &num, const B &den = 1) {
  Rational r{Integer(num), Integer(den)};
  if (r.get_den() == 0) throw std::invalid_argument("rat: zero denominator");
  r.canonicalize();
  return r;
}

/// Parses "a/b", "a" or a finite decimal like "0.25" into an exact rational.
Rational parse_rational(const std::string &text);

inline double to_double(const Rational &r) { return r.get_d(); }
inline double to_double(double x) { return x; }

Rational pow(const Rational &base, unsigned long exponent);
Integer binomial(unsigned long n, unsigned long k);

/// Numerator/denominator rendering used by golden files and JSON.
std::string to_string(const Rational &r);

/// Shared numeric helpers so templates can be written once over Rational and double.
template <class P>
P prob_from_rational(const Rational &r);
template <>
inline Rational prob_from_rational<Rational>(const Rational &r) { return r; }
template <>
inline double prob_from_rational<double>(const Rational &r) { return r.get_d(); }

inline Rational abs_value(const Rational &r) { return abs(r); }
inline double abs_value(double x) { return x < 0 ? -x : x; }

inline bool is_zero(const Rational &r) { return sgn(r) == 0; }
inline bool is_zero(double x) { return x == 0.0; }

}  // namespace nqsim

#endif
