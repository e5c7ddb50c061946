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

#include "nqsim/surd.h"

#include <sstream>
#include <stdexcept>

namespace nqsim {

namespace {

constexpr unsigned long kTrialDivisionLimit = 2000000;

// Writes n = square^2 * free with free squarefree.
void squarefree_split(Integer n, Integer &square, Integer &free) {
  square = 1;
  free = 1;
  auto strip = [&](unsigned long p) {
    int e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
      ++e;
    }
    for (int j = 0; j + 1 < e; j += 2) square *= p;
    if (e % 2 == 1) free *= p;
  };
  strip(2);
  unsigned long p = 3;
  for (; p <= kTrialDivisionLimit && Integer(p) * p <= n; p += 2) {
    strip(p);
  }
  if (n == 1) return;
  if (Integer(p) * p > n) {
    free *= n;
    return;
  }
  if (mpz_perfect_square_p(n.get_mpz_t())) {
    square *= sqrt(n);
    return;
  }
  throw std::domain_error("Surd: cannot certify squarefree part of " + n.get_str());
}

}  // namespace

Surd::Surd(const Rational &r) {
  if (sgn(r) != 0) terms_[1] = r;
}

Surd Surd::sqrt_of(const Rational &r) {
  if (sgn(r) < 0) throw std::domain_error("Surd::sqrt_of: negative argument");
  Surd out;
  if (sgn(r) == 0) return out;
  Integer square, free;
  squarefree_split(r.get_num() * r.get_den(), square, free);
  Rational coef(square, r.get_den());
  coef.canonicalize();
  out.terms_[free] = coef;
  return out;
}

void Surd::add_term(const Integer &radicand, const Rational &coef) {
  if (sgn(coef) == 0) return;
  auto it = terms_.find(radicand);
  if (it == terms_.end()) {
    terms_.emplace(radicand, coef);
    return;
  }
  it->second += coef;
  if (sgn(it->second) == 0) terms_.erase(it);
}

Surd &Surd::operator+=(const Surd &o) {
  for (const auto &[rad, coef] : o.terms_) add_term(rad, coef);
  return *this;
}

Surd &Surd::operator-=(const Surd &o) {
  for (const auto &[rad, coef] : o.terms_) add_term(rad, -coef);
  return *this;
}

Surd Surd::operator-() const {
  Surd out;
  for (const auto &[rad, coef] : terms_) out.terms_.emplace(rad, -coef);
  return out;
}

Surd &Surd::operator*=(const Surd &o) {
  Surd out;
  for (const auto &[ra, ca] : terms_) {
    for (const auto &[rb, cb] : o.terms_) {
      // sqrt(ra) sqrt(rb) = g sqrt((ra/g)(rb/g)) with g = gcd, and the product
      // of the cofactors is again squarefree.
      Integer g = gcd(ra, rb);
      Integer rad = (ra / g) * (rb / g);
      out.add_term(rad, ca * cb * Rational(g));
    }
  }
  terms_ = std::move(out.terms_);
  return *this;
}

bool Surd::is_rational() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 1);
}

Rational Surd::rational_part() const {
  auto it = terms_.find(1);
  return it == terms_.end() ? Rational(0) : it->second;
}

int Surd::sign() const {
  if (terms_.empty()) return 0;
  if (is_rational()) return sgn(terms_.begin()->second);
  for (mp_bitcnt_t prec = 128; prec <= (1u << 18); prec *= 2) {
    mpf_class sum(0, prec), bound(0, prec);
    for (const auto &[rad, coef] : terms_) {
      mpf_class root(rad, prec);
      root = sqrt(root);
      mpf_class term(coef, prec);
      term *= root;
      sum += term;
      bound += abs(term);
    }
    // Each term carries relative error well below 2^(8-prec).
    mpf_class slack(bound, prec);
    mpf_div_2exp(slack.get_mpf_t(), slack.get_mpf_t(), prec - 8 - terms_.size());
    if (abs(sum) > slack) return sgn(sum);
  }
  throw std::runtime_error("Surd::sign: precision exhausted");
}

double Surd::to_double() const {
  mpf_class sum(0, 256);
  for (const auto &[rad, coef] : terms_) {
    mpf_class root(rad, 256);
    root = sqrt(root);
    sum += mpf_class(coef, 256) * root;
  }
  return sum.get_d();
}

std::string Surd::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto &[rad, coef] : terms_) {
    if (!first) out << " + ";
    first = false;
    out << coef.get_str();
    if (rad != 1) out << "*sqrt(" << rad.get_str() << ")";
  }
  return out.str();
}

Surd pow(const Surd &base, unsigned long exponent) {
  Surd result(Rational(1));
  Surd b = base;
  while (exponent) {
    if (exponent & 1) result *= b;
    exponent >>= 1;
    if (exponent) b *= b;
  }
  return result;
}

}  // namespace nqsim
