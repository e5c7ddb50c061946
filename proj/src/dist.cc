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

#include "nqsim/dist.h"

namespace nqsim {

double binary_entropy(double p) {
  if (p <= 0 || p >= 1) return 0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

RDist random_rational_dist(const std::vector<BitString> &outcomes, RngStream &rng, unsigned max_weight) {
  if (outcomes.empty()) throw std::invalid_argument("random_rational_dist: no outcomes");
  std::vector<unsigned long> w(outcomes.size());
  unsigned long total = 0;
  while (total == 0) {
    total = 0;
    for (auto &x : w) {
      x = rng.uniform_int(max_weight + 1);
      total += x;
    }
  }
  RDist d;
  for (size_t i = 0; i < outcomes.size(); ++i) d.add(outcomes[i], rat(w[i], total));
  return d;
}

DDist random_real_dist(const std::vector<BitString> &outcomes, RngStream &rng, double zero_prob) {
  if (outcomes.empty()) throw std::invalid_argument("random_real_dist: no outcomes");
  std::vector<double> w(outcomes.size());
  double total = 0;
  while (total == 0) {
    total = 0;
    for (auto &x : w) {
      x = rng.uniform() < zero_prob ? 0.0 : -std::log1p(-rng.uniform());
      total += x;
    }
  }
  DDist d;
  for (size_t i = 0; i < outcomes.size(); ++i) d.add(outcomes[i], w[i] / total);
  return d;
}

std::vector<BitString> all_strings(size_t n) {
  if (n > 20) throw BudgetExceeded("all_strings: n > 20");
  std::vector<BitString> out;
  out.reserve(size_t{1} << n);
  for (uint64_t v = 0; v < (uint64_t{1} << n); ++v) out.push_back(BitString::from_uint(v, n));
  return out;
}

nlohmann::json to_json(const RDist &d) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto &[x, p] : d.items()) {
    j.push_back({{"outcome", x.to_string()}, {"num", p.get_num().get_str()}, {"den", p.get_den().get_str()}});
  }
  return j;
}

RDist rdist_from_json(const nlohmann::json &j) {
  RDist d;
  for (const auto &rec : j) {
    Rational p(Integer(rec.at("num").get<std::string>(), 10), Integer(rec.at("den").get<std::string>(), 10));
    p.canonicalize();
    if (sgn(p) < 0) throw std::invalid_argument("rdist_from_json: negative probability");
    d.add(BitString::from_string(rec.at("outcome").get<std::string>()), p);
  }
  if (d.total() != 1) throw std::invalid_argument("rdist_from_json: probabilities do not sum to 1");
  return d;
}

}  // namespace nqsim
