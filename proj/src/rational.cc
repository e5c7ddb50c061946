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

#include "nqsim/rational.h"

#include <cctype>
#include <stdexcept>

namespace nqsim {

Rational parse_rational(const std::string &text) {
  std::string s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
  size_t start = 0;
  while (start < s.size() && std::isspace(static_cast<unsigned char>(s[start]))) ++start;
  s = s.substr(start);
  if (s.empty()) throw std::invalid_argument("empty rational");
  auto dot = s.find('.');
  try {
    if (dot == std::string::npos) {
      Rational r(s, 10);
      if (r.get_den() == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
      r.canonicalize();
      return r;
    }
    std::string whole = s.substr(0, dot);
    std::string frac = s.substr(dot + 1);
    bool neg = !whole.empty() && whole[0] == '-';
    if (neg || (!whole.empty() && whole[0] == '+')) whole = whole.substr(1);
    if (whole.empty()) whole = "0";
    if (frac.find_first_not_of("0123456789") != std::string::npos ||
        whole.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("bad decimal '" + text + "'");
    }
    Integer den = 1;
    for (size_t i = 0; i < frac.size(); ++i) den *= 10;
    Integer num(whole + frac, 10);
    Rational r(num, den);
    r.canonicalize();
    return neg ? Rational(-r) : r;
  } catch (const std::invalid_argument &) {
    throw std::invalid_argument("cannot parse rational '" + text + "'");
  }
}

Rational pow(const Rational &base, unsigned long exponent) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), exponent);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), exponent);
  out.canonicalize();
  return out;
}

Integer binomial(unsigned long n, unsigned long k) {
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

std::string to_string(const Rational &r) { return r.get_str(); }

}  // namespace nqsim
