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

#include "nqsim/rng.h"

#include <stdexcept>

namespace nqsim {

RngStream RngStream::child(std::string_view tag) const {
  // FNV-1a over the tag, then treated as a numeric path component.
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : tag) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return RngStream(key_, h, 0);
}

bool RngStream::bernoulli(const Rational &p) {
  if (sgn(p) <= 0) return false;
  if (p >= 1) return true;
  // u < p where u = 0.u1u2... is uniform; compare bit by bit against p's expansion.
  Integer num = p.get_num();
  const Integer &den = p.get_den();
  uint64_t word = 0;
  int left = 0;
  while (true) {
    if (left == 0) {
      word = next_u64();
      left = 64;
    }
    int u = static_cast<int>(word >> 63);
    word <<= 1;
    --left;
    num *= 2;
    int pbit = 0;
    if (num >= den) {
      pbit = 1;
      num -= den;
    }
    if (u != pbit) return u < pbit;
    if (num == 0) return false;  // remaining expansion of p is all zeros, u >= p
  }
}

uint64_t RngStream::uniform_int(uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_int: empty range");
  unsigned __int128 m = static_cast<unsigned __int128>(next_u64()) * n;
  uint64_t low = static_cast<uint64_t>(m);
  if (low < n) {
    uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next_u64()) * n;
      low = static_cast<uint64_t>(m);
    }
  }
  return static_cast<uint64_t>(m >> 64);
}

}  // namespace nqsim
