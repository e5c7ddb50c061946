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

#include "nqsim/verify.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "nqsim/channels.h"
#include "nqsim/dist.h"
#include "nqsim/dtree.h"
#include "nqsim/noisy.h"
#include "nqsim/osim.h"
#include "nqsim/stats.h"
#include "nqsim/walk.h"

namespace nqsim {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

RngStream check_rng(const VerifyOptions &opt, std::string_view tag) { return RngStream(opt.seed).child(tag); }

uint64_t trials_or(const VerifyOptions &opt, uint64_t fallback) { return opt.trials ? opt.trials : fallback; }

Rational random_prob(RngStream &rng) {
  uint64_t den = 1 + rng.uniform_int(40);
  return rat(rng.uniform_int(den + 1), den);
}

struct BitPair {
  Rational q0, q1;  // Pr[x_i = 0] under mu0 and mu1
};

std::vector<BitPair> single_bit_sweep(const VerifyOptions &opt) {
  RngStream rng = check_rng(opt, "single_bit");
  std::vector<BitPair> out;
  for (int t = 0; t < 200; ++t) out.push_back({random_prob(rng), random_prob(rng)});
  return out;
}

// Ordered sequences of distinct indices from [0, m), all lengths >= 1.
void arrangements(size_t m, std::vector<size_t> &cur, std::vector<bool> &used,
                  const std::function<void(const std::vector<size_t> &)> &f) {
  if (!cur.empty()) f(cur);
  for (size_t i = 0; i < m; ++i) {
    if (used[i]) continue;
    used[i] = true;
    cur.push_back(i);
    arrangements(m, cur, used, f);
    cur.pop_back();
    used[i] = false;
  }
}

}  // namespace

CheckResult check_single_bit_faithfulness(const VerifyOptions &opt) {
  uint64_t mismatches = 0, cases = 0;
  for (const auto &[q0, q1] : single_bit_sweep(opt)) {
    uint8_t a = cheaper_value(q0, q1);
    Rational p0 = a ? Rational(1 - q0) : q0, p1 = a ? Rational(1 - q1) : q1;
    for (uint8_t b : {0, 1}) {
      ++cases;
      if (single_bit_sim_exact(p0, p1, a, b).prob_a != (b ? p1 : p0)) ++mismatches;
    }
  }
  return {"osim", "single_bit_faithfulness", "cases=" + std::to_string(cases) + " mismatches=" + std::to_string(mismatches),
          mismatches == 0};
}

CheckResult check_single_bit_cost(const VerifyOptions &opt) {
  uint64_t identity_fail = 0, bound_fail = 0;
  double worst = 0;
  for (const auto &[q0, q1] : single_bit_sweep(opt)) {
    uint8_t a = cheaper_value(q0, q1);
    Rational p0 = a ? Rational(1 - q0) : q0, p1 = a ? Rational(1 - q1) : q1;
    Rational formula = sgn(p0 + p1) ? Rational((p0 - p1) * (p0 - p1) / (p0 + p1)) : Rational(0);
    Rational s2 = chi_sym_sq(bernoulli_dist<Rational>(Rational(1 - q0)), bernoulli_dist<Rational>(Rational(1 - q1)));
    for (uint8_t b : {0, 1}) {
      Rational cost = single_bit_sim_exact(p0, p1, a, b).expected_cost;
      if (cost != formula) ++identity_fail;
      if (cost > 2 * s2) ++bound_fail;
      if (sgn(s2)) worst = std::max(worst, Rational(cost / s2).get_d());
    }
  }
  return {"osim", "single_bit_cost",
          "identity_failures=" + std::to_string(identity_fail) + " bound_failures=" + std::to_string(bound_fail) +
              " max_cost_over_S2=" + fmt(worst),
          identity_fail == 0 && bound_fail == 0};
}

CheckResult check_session_faithfulness(const VerifyOptions &opt) {
  RngStream rng = check_rng(opt, "session");
  uint64_t cases = 0, mismatches = 0;
  for (int t = 0; t < 300; ++t) {
    size_t m = 1 + t / 100;
    RDist mu0 = random_rational_dist(all_strings(m), rng), mu1 = random_rational_dist(all_strings(m), rng);
    std::vector<size_t> cur;
    std::vector<bool> used(m, false);
    arrangements(m, cur, used, [&](const std::vector<size_t> &order) {
      for (uint8_t b : {0, 1}) {
        ++cases;
        if (!session_run_faithfulness_check(mu0, mu1, order, b).equal()) ++mismatches;
      }
    });
  }
  return {"osim", "session_faithfulness", "cases=" + std::to_string(cases) + " mismatches=" + std::to_string(mismatches),
          mismatches == 0};
}

CheckResult check_session_cost_bound(const VerifyOptions &opt) {
  RngStream rng = check_rng(opt, "session_cost");
  double worst = 0;
  uint64_t zero_violations = 0;
  for (int t = 0; t < 500; ++t) {
    size_t m = 1 + rng.uniform_int(8);
    DDist mu0 = random_real_dist(all_strings(m), rng), mu1 = random_real_dist(all_strings(m), rng);
    DecisionTree tree = random_tree(m, 6, rng);
    double h2 = hellinger_sq(transcript_dist(tree, mu0), transcript_dist(tree, mu1));
    for (uint8_t b : {0, 1}) {
      double cost = session_expected_cost(mu0, mu1, tree, m, b);
      if (h2 <= 1e-15) {
        if (cost > 1e-12) ++zero_violations;
      } else {
        worst = std::max(worst, cost / h2);
      }
    }
  }
  return {"osim", "session_cost_bound",
          "trees=500 C=" + fmt(worst) + " zero_distance_violations=" + std::to_string(zero_violations),
          worst <= 50 && zero_violations == 0};
}

CheckResult check_tensorization(const VerifyOptions &opt) {
  RngStream rng = check_rng(opt, "tensor");
  uint64_t cases = 0, mismatches = 0;
  double worst = 0;
  for (int t = 0; t < 100; ++t) {
    auto outs = all_strings(t % 2 ? 2 : 1);
    RDist p = random_rational_dist(outs, rng), q = random_rational_dist(outs, rng);
    for (unsigned k = 1; k <= 6; ++k) {
      ++cases;
      RDist pk = tensor_power(p, k), qk = tensor_power(q, k);
      if (opt.rational) {
        Surd h = hellinger_sq_exact(p, q);
        if (hellinger_sq_exact(pk, qk) != Surd(1) - pow(Surd(1) - h, k)) ++mismatches;
      } else {
        double h = hellinger_sq(p.to_double(), q.to_double());
        double gap = std::abs(hellinger_sq(pk.to_double(), qk.to_double()) - (1 - std::pow(1 - h, k)));
        worst = std::max(worst, gap);
        if (gap > 1e-12) ++mismatches;
      }
    }
  }
  std::string m = "cases=" + std::to_string(cases) + " mismatches=" + std::to_string(mismatches) +
                  (opt.rational ? " mode=rational" : " mode=real max_gap=" + fmt(worst));
  return {"distances", "tensorization", m, mismatches == 0};
}

CheckResult check_distance_chain(const VerifyOptions &opt) {
  RngStream rng = check_rng(opt, "chain");
  uint64_t n = trials_or(opt, 10000);
  // Largest lhs - rhs of each inequality.
  std::map<std::string, double> slack = {
      {"h2<=JS", -1}, {"JS<=S2", -1}, {"S2<=2h2", -1}, {"D2<=S2", -1}, {"S2<=D", -1}};
  for (uint64_t t = 0; t < n; ++t) {
    auto outs = all_strings(1 + rng.uniform_int(5));
    DDist p = random_real_dist(outs, rng), q = random_real_dist(outs, rng);
    double h2 = hellinger_sq(p, q), j = js(p, q), s2 = chi_sym_sq(p, q), d = tvd(p, q);
    slack["h2<=JS"] = std::max(slack["h2<=JS"], h2 - j);
    slack["JS<=S2"] = std::max(slack["JS<=S2"], j - s2);
    slack["S2<=2h2"] = std::max(slack["S2<=2h2"], s2 - 2 * h2);
    slack["D2<=S2"] = std::max(slack["D2<=S2"], d * d - s2);
    slack["S2<=D"] = std::max(slack["S2<=D"], s2 - d);
  }
  std::string m = "pairs=" + std::to_string(n);
  bool ok = true;
  for (const auto &[name, v] : slack) {
    m += " " + name + ":" + fmt(v);
    ok = ok && v <= 1e-9;
  }
  return {"distances", "distance_chain", m, ok};
}

CheckResult check_amplification(const VerifyOptions &) {
  uint64_t cases = 0, failures = 0;
  for (long j = 1; j <= 33; ++j) {
    Rational g = rat(j, 100);
    unsigned long kmax = 10000 / (j * j);
    if (kmax % 2 == 0) --kmax;
    auto seq = amplified_bias_sequence(g, kmax);
    Rational g2 = g * g;
    for (size_t i = 0; i < seq.size(); ++i) {
      unsigned long k = 2 * i + 1;
      Rational sq = seq[i] * seq[i];
      ++cases;
      if (sq < g2 * k / 9 || sq > 9 * g2 * k) ++failures;
    }
  }
  return {"appendixA", "amplification_bounds", "cases=" + std::to_string(cases) + " failures=" + std::to_string(failures),
          failures == 0};
}

CheckResult check_mad_closed_form(const VerifyOptions &) {
  uint64_t failures = 0;
  for (unsigned long k = 1; k <= 15; k += 2) {
    // Direct expectation over the binomial law.
    Rational direct = 0;
    for (unsigned long i = 0; i <= k; ++i) direct += Rational(binomial(k, i)) * abs(Rational(2 * i) - k) / 2;
    direct /= pow(Rational(2), k);
    direct.canonicalize();
    if (direct != mad_binomial(k) || direct != mad_binomial_bruteforce(k)) ++failures;
  }
  return {"appendixA", "mad_closed_form", "k<=15 failures=" + std::to_string(failures) + " M_1=" + to_string(mad_binomial(1)),
          failures == 0 && mad_binomial(1) == rat(1, 2)};
}

CheckResult check_mad_bounds(const VerifyOptions &) {
  uint64_t failures = 0, cases = 0;
  for (unsigned long k = 1; k <= 10000; k += 2) {
    ++cases;
    auto c = mad_binomial_bounds(k, mad_binomial(k));
    if (!c.lower_ok || !c.upper_ok) ++failures;
  }
  return {"appendixA", "mad_bounds", "odd k<=10000 cases=" + std::to_string(cases) + " failures=" + std::to_string(failures),
          failures == 0};
}

CheckResult check_walk_hitting(const VerifyOptions &opt) {
  RngStream rng = check_rng(opt, "walk_hitting");
  uint64_t n = trials_or(opt, 100000);
  std::string m;
  bool ok = true;
  for (auto [g, d] : {std::pair{rat(1, 10), rat(1, 1)}, {rat(1, 50), rat(1, 2)}}) {
    WalkParams w = walk_params(g, d);
    uint64_t ups = 0;
    for (uint64_t i = 0; i < n; ++i) ups += raw_walk(g.get_d(), w.t, rng).up;
    Interval ci = wilson_ci(ups, n, 0.99);
    ok = ok && ci.contains(w.p_up.get_d());
    m += (m.empty() ? "" : " ") + std::string("gamma=") + to_string(g) + ",t=" + std::to_string(w.t) +
         ":freq=" + fmt(static_cast<double>(ups) / n) + ",p_up=" + fmt(w.p_up.get_d());
  }
  return {"walk", "hitting_probability", m, ok};
}

CheckResult check_walk_segment_length(const VerifyOptions &opt) {
  RngStream rng = check_rng(opt, "walk_length");
  uint64_t n = trials_or(opt, 1000000);
  WalkParams w = walk_params(rat(1, 50), rat(1, 2));
  uint64_t total = 0;
  for (uint64_t i = 0; i < n; ++i) total += raw_walk(0.02, w.t, rng).steps.size();
  double mean = static_cast<double>(total) / n, closed = expected_hitting_steps(0.02, w.t);
  double rel = std::abs(mean / closed - 1);
  return {"walk", "segment_length",
          "segments=" + std::to_string(n) + " mean=" + fmt(mean) + " closed_form=" + fmt(closed) + " rel_err=" + fmt(rel),
          rel <= 0.01};
}

CheckResult check_walk_stream_iid(const VerifyOptions &opt) {
  RngStream rng = check_rng(opt, "walk_stream");
  auto w = walk_params(rat(1, 10), rat(1, 1));
  SampledRandomness src(rng.child("oracle"));
  NoisyOracle o(std::make_shared<DenseInput>(BitString(1, 1)), src);
  BiasStream s(o, 0, w, rng.child("walk"));
  uint64_t n = trials_or(opt, 100000);
  std::vector<uint8_t> xs(n);
  for (auto &x : xs) x = s.next();
  double p = Rational((1 + w.gamma) / 2).get_d();
  std::vector<double> single(2), pairs(4);
  for (uint8_t x : xs) single[x] += 1;
  for (uint64_t i = 0; i + 1 < n; i += 2) pairs[2 * xs[i] + xs[i + 1]] += 1;
  double np = static_cast<double>(n / 2);
  double p1 = chi_square_gof(single, {n * (1 - p), n * p});
  double p2 = chi_square_gof(pairs, {np * (1 - p) * (1 - p), np * (1 - p) * p, np * p * (1 - p), np * p * p});
  return {"walk", "stream_iid", "bits=" + std::to_string(n) + " p_single=" + fmt(p1) + " p_pairs=" + fmt(p2),
          p1 > 1e-3 && p2 > 1e-3};
}

CheckResult check_walk_wald(const VerifyOptions &opt) {
  RngStream rng = check_rng(opt, "walk_wald");
  auto sampler = [](RngStream &r) { return static_cast<double>(raw_walk(0.02, 5, r).steps.size()); };
  auto rule = [](const std::vector<double> &past, double) {
    double s = 0;
    for (double x : past) s += x;
    return s >= 100;
  };
  WaldResult res = wald_check(sampler, rule, trials_or(opt, 20000), rng);
  return {"walk", "wald_equation", "ratio=" + fmt(res.ratio) + " ci_half_width=" + fmt(res.ci_half_width), res.ok};
}

CheckResult check_sign_invariance(const VerifyOptions &) {
  bool ok = true;
  Rational worst_tail = 0;
  size_t sequences = 0;
  for (unsigned long t = 1; t <= 3; ++t) {
    for (Rational g : {rat(1, 10), rat(1, 5), rat(1, 50)}) {
      auto rep = sign_invariance(g, t, 12);
      ok = ok && rep.per_sequence_equal && rep.complete() && rep.tail_plus == rep.tail_minus;
      worst_tail = std::max(worst_tail, rep.tail_plus);
      sequences += rep.sequences;
    }
  }
  return {"walk", "sign_invariance",
          "t<=3 sequences=" + std::to_string(sequences) + " max_exact_tail=" + fmt(worst_tail.get_d()), ok};
}

CheckResult check_gapmaj_adapter(const VerifyOptions &) {
  AdapterPlan plan = plan_gapmaj_adapter(16, Rational(1));
  bool ok = true;
  std::string m = "n=16 tau=1/4";
  for (uint8_t b : {0, 1}) {
    // The law of one noisy query with bias 1/4 on the hidden bit b.
    PathEnumerator en;
    NoisyOracle o(std::make_shared<DenseInput>(BitString(1, b)), en);
    Rational one = 0;
    uint8_t ans = 0;
    en.for_each_path([&] { ans = o.query(0, rat(1, 4)); }, [&](const Rational &p) { one += ans * p; });
    Rational adapter = adapter_prob_one_exact(plan, b ? plan.levels.hi : plan.levels.lo);
    ok = ok && adapter == one;
    m += " b=" + std::to_string(b) + ":adapter=" + to_string(adapter) + ",oracle=" + to_string(one);
  }
  return {"walk", "gapmaj_adapter", m, ok};
}

CheckResult check_channels(const VerifyOptions &opt) {
  auto rows = channel_sweep(SweepConfig{}, check_rng(opt, "channels"));
  double min_margin = 1;
  uint64_t fano_fail = 0;
  for (const auto &r : rows) {
    min_margin = std::min(min_margin, r.margin);
    fano_fail += !r.fano_ok;
  }
  return {"channels", "samorodnitsky_and_fano",
          "rows=" + std::to_string(rows.size()) + " min_margin=" + fmt(min_margin) + " fano_failures=" + std::to_string(fano_fail),
          min_margin >= -1e-12 && fano_fail == 0};
}

std::vector<std::string> verify_suite_names() { return {"distances", "osim", "walk", "channels", "appendixA"}; }

std::vector<CheckResult> verify_suite(const std::string &suite, const VerifyOptions &opt) {
  using Check = CheckResult (*)(const VerifyOptions &);
  static const std::map<std::string, std::vector<Check>> suites = {
      {"distances", {check_tensorization, check_distance_chain}},
      {"osim", {check_single_bit_faithfulness, check_single_bit_cost, check_session_faithfulness, check_session_cost_bound}},
      {"walk", {check_walk_hitting, check_walk_segment_length, check_walk_stream_iid, check_walk_wald,
                check_sign_invariance, check_gapmaj_adapter}},
      {"channels", {check_channels}},
      {"appendixA", {check_amplification, check_mad_closed_form, check_mad_bounds}},
  };
  std::vector<CheckResult> out;
  if (suite == "all") {
    for (const auto &name : verify_suite_names()) {
      for (Check c : suites.at(name)) out.push_back(c(opt));
    }
    return out;
  }
  auto it = suites.find(suite);
  if (it == suites.end()) throw std::invalid_argument("unknown suite '" + suite + "'");
  for (Check c : it->second) out.push_back(c(opt));
  return out;
}

nlohmann::json to_json(const CheckResult &r) {
  return {{"suite", r.suite}, {"check", r.name}, {"measured", r.measured}, {"status", r.pass ? "PASS" : "FAIL"}};
}

}  // namespace nqsim
