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

#include "nqsim/experiments.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace nqsim {

namespace {

// Uniformly random d-subset of [0, m) via a partial Fisher-Yates shuffle.
std::vector<uint64_t> sample_positions(uint64_t m, uint64_t d, RngStream &rng) {
  std::vector<uint64_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  for (uint64_t i = 0; i < d; ++i) std::swap(idx[i], idx[i + rng.uniform_int(m - i)]);
  idx.resize(d);
  return idx;
}

// Pr[majority of s draws is wrong] for a gadget of weight w whose value is `value`;
// a tie counts 1/2.
Rational vote_error_at(uint64_t m, uint64_t w, uint64_t s, uint8_t value) {
  Rational err = 0;
  for (uint64_t i = 0; i <= s; ++i) {
    Rational p = hypergeom_pmf(m, w, s, i);
    if (2 * i == s) {
      err += p / 2;
    } else if ((2 * i > s) != (value == 1)) {
      err += p;
    }
  }
  return err;
}

// Pr[X > r] for X = Bin(q, eps) + Bin(rest, 1/2).
Rational distance_tail(uint64_t q, const Rational &eps, uint64_t rest, uint64_t r) {
  std::vector<Rational> a(q + 1), b(rest + 1);
  for (uint64_t i = 0; i <= q; ++i) a[i] = binom_pmf_exact(q, i, eps);
  for (uint64_t j = 0; j <= rest; ++j) b[j] = binom_pmf_exact(rest, j, rat(1, 2));
  Rational tail = 0;
  for (uint64_t i = 0; i <= q; ++i) {
    for (uint64_t j = 0; j <= rest; ++j) {
      if (i + j > r) tail += a[i] * b[j];
    }
  }
  return tail;
}

uint8_t decode_gadget(const ProbeInput &x, uint64_t first, uint64_t m, const GapLevels &lv, bool *bad) {
  uint64_t w = 0;
  for (uint64_t i = 0; i < m; ++i) w += x.probe(first + i);
  if (w == lv.hi) return 1;
  if (w != lv.lo) *bad = true;
  return 0;
}

// Reads cell b as its two Boolean symbols via `bit`, returning the output bit.
template <class ReadBit>
uint8_t read_cell(uint64_t b, uint64_t k, ReadBit bit, RngStream &rng, AlgResult &res) {
  uint8_t hi = bit(k + 2 * b), lo = bit(k + 2 * b + 1);
  if (hi) {
    res.promise_violation = true;
    return rng.fair_bit();
  }
  return lo;
}

}  // namespace

GapMajFull::GapMajFull(uint64_t m, const Rational &gap_coeff)
    : m_(m), gap_(gap_coeff), levels_(gapmaj_levels(m, gap_coeff)) {}

std::string GapMajFull::name() const { return "gapmaj_full(m=" + std::to_string(m_) + ",gap=" + gap_.get_str() + ")"; }

AlgResult GapMajFull::run(const ProbeInput &x, RngStream &) const {
  uint64_t w = 0;
  for (uint64_t i = 0; i < m_; ++i) w += x.probe(i);
  return {static_cast<uint8_t>(2 * w > m_), m_, w != levels_.hi && w != levels_.lo};
}

GapMajSubsample::GapMajSubsample(uint64_t m, const Rational &gap_coeff, uint64_t d)
    : m_(m), gap_(gap_coeff), d_(d), levels_(gapmaj_levels(m, gap_coeff)) {
  if (d % 2 == 0 || d > m) throw std::invalid_argument("gapmaj_subsample: d must be odd and <= m");
}

std::string GapMajSubsample::name() const {
  return "gapmaj_subsample(m=" + std::to_string(m_) + ",gap=" + gap_.get_str() + ",d=" + std::to_string(d_) + ")";
}

AlgResult GapMajSubsample::run(const ProbeInput &x, RngStream &rng) const {
  uint64_t ones = 0;
  for (uint64_t i : sample_positions(m_, d_, rng)) ones += x.probe(i);
  return {static_cast<uint8_t>(2 * ones > d_), d_, false};
}

Rational GapMajSubsample::exact_error(uint8_t value) const {
  uint64_t need = (d_ + 1) / 2;
  if (value) return 1 - hypergeom_tail(m_, levels_.hi, d_, need);
  return hypergeom_tail(m_, levels_.lo, d_, need);
}

Rational GapMajSubsample::exact_error() const { return std::max(exact_error(0), exact_error(1)); }

uint64_t sqrt_k_log_k_count(uint64_t k, const Rational &c) {
  if (k < 2) return 0;
  long double v = static_cast<long double>(c.get_d()) * std::sqrt(static_cast<long double>(k) * std::log2((long double)k));
  // Guard exact squares such as 8 sqrt(16 * 4) = 64 against rounding upward.
  long double r = std::nearbyint(v);
  return std::fabs(v - r) < 1e-12L ? static_cast<uint64_t>(r) : static_cast<uint64_t>(std::ceil(v));
}

ApproxIndexAlg::ApproxIndexAlg(uint64_t k, uint64_t q) : k_(k), q_(q) {
  if (k == 0 || k > 62) throw std::invalid_argument("approxindex alg: k out of range");
  if (q > k) throw std::invalid_argument("approxindex alg: q exceeds k");
}

ApproxIndexAlg ApproxIndexAlg::with_constant(uint64_t k, const Rational &c1) {
  uint64_t q = sqrt_k_log_k_count(k, c1);
  ApproxIndexAlg alg(k, std::min(q, k));
  alg.clamped_ = q >= k;
  return alg;
}

std::string ApproxIndexAlg::name() const {
  return "approxindex(k=" + std::to_string(k_) + ",q=" + std::to_string(q_) + ")";
}

AlgResult ApproxIndexAlg::run(const ProbeInput &x, RngStream &rng) const {
  AlgResult res;
  uint64_t b = 0;
  for (uint64_t i = 0; i < k_; ++i) {
    uint64_t bit = i < q_ ? x.probe(i) : rng.fair_bit();
    b |= bit << i;
  }
  res.output = read_cell(b, k_, [&](uint64_t i) { return x.probe(i); }, rng, res);
  res.queries = q_ + 1;
  return res;
}

Rational ApproxIndexAlg::exact_error(uint64_t radius) const {
  return distance_tail(0, 0, k_ - q_, radius) / 2;
}

uint64_t ceil_log2(uint64_t x) {
  uint64_t r = 0;
  while ((uint64_t{1} << r) < x) ++r;
  return r;
}

uint64_t composed_gadget_size(uint64_t k, const Rational &gap_coeff) {
  if (k > 62) throw std::invalid_argument("composed_gadget_size: k too large");
  return smallest_valid_gapmaj(ceil_log2(k + (uint64_t{1} << k)), gap_coeff);
}

ComposedAlg::ComposedAlg(uint64_t k, uint64_t gadget_m, const Rational &gap_coeff, uint64_t q, uint64_t s)
    : k_(k), m_(gadget_m), gap_(gap_coeff), q_(q), s_(s), levels_(gapmaj_levels(gadget_m, gap_coeff)) {
  if (k == 0 || k > 62) throw std::invalid_argument("composed alg: k out of range");
  if (q > k) throw std::invalid_argument("composed alg: q exceeds k");
  if (s == 0 || s > gadget_m) throw std::invalid_argument("composed alg: need 1 <= s <= gadget_m");
}

ComposedAlg ComposedAlg::with_constants(uint64_t k, uint64_t gadget_m, const Rational &gap_coeff,
                                        const Rational &c2, const Rational &c3) {
  Rational s = c2 * ceil_log2(gadget_m);
  Integer sc;
  mpz_cdiv_q(sc.get_mpz_t(), s.get_num_mpz_t(), s.get_den_mpz_t());
  uint64_t q = std::min(sqrt_k_log_k_count(k, c3), k);
  return ComposedAlg(k, gadget_m, gap_coeff, q, sc.get_ui());
}

std::string ComposedAlg::name() const {
  return "composed(k=" + std::to_string(k_) + ",m=" + std::to_string(m_) + ",gap=" + gap_.get_str() +
         ",q=" + std::to_string(q_) + ",s=" + std::to_string(s_) + ")";
}

AlgResult ComposedAlg::run(const ProbeInput &x, RngStream &rng) const {
  AlgResult res;
  uint64_t b = 0;
  for (uint64_t i = 0; i < k_; ++i) {
    uint64_t bit;
    if (i < q_) {
      uint64_t ones = 0;
      for (uint64_t p : sample_positions(m_, s_, rng)) ones += x.probe(i * m_ + p);
      bit = 2 * ones == s_ ? rng.fair_bit() : 2 * ones > s_;
    } else {
      bit = rng.fair_bit();
    }
    b |= bit << i;
  }
  bool bad = false;
  auto gadget_bit = [&](uint64_t j) { return decode_gadget(x, j * m_, m_, levels_, &bad); };
  res.output = read_cell(b, k_, gadget_bit, rng, res);
  res.promise_violation |= bad;
  res.queries = cost();
  return res;
}

Rational ComposedAlg::vote_error() const {
  return (vote_error_at(m_, levels_.hi, s_, 1) + vote_error_at(m_, levels_.lo, s_, 0)) / 2;
}

Rational ComposedAlg::exact_error(uint64_t radius) const {
  return distance_tail(q_, vote_error(), k_ - q_, radius) / 2;
}

InputGenerator gapmaj_generator(uint64_t m, const Rational &gap_coeff) {
  GapLevels lv = gapmaj_levels(m, gap_coeff);
  return [m, lv](RngStream &rng) {
    uint8_t value = rng.fair_bit();
    auto x = std::make_shared<DenseInput>(random_weight_string(m, value ? lv.hi : lv.lo, rng));
    return Instance{x, value};
  };
}

namespace {

std::shared_ptr<ApproxIndexInput> hard_approxindex_input(const ApproxIndex &fn, RngStream &rng) {
  BitString a(fn.k());
  for (uint64_t i = 0; i < fn.k(); ++i) a.set(i, rng.fair_bit());
  uint8_t value = rng.fair_bit();
  return std::make_shared<ApproxIndexInput>(fn, std::move(a), value);
}

}  // namespace

InputGenerator approxindex_generator(const ApproxIndex &fn) {
  return [fn](RngStream &rng) {
    auto x = hard_approxindex_input(fn, rng);
    return Instance{x, x->value()};
  };
}

InputGenerator composed_generator(const ApproxIndex &fn, uint64_t gadget_m, const Rational &gap_coeff) {
  gapmaj_levels(gadget_m, gap_coeff);  // validates
  return [fn, gadget_m, gap_coeff](RngStream &rng) {
    auto outer = hard_approxindex_input(fn, rng);
    uint8_t value = outer->value();
    auto x = std::make_shared<GadgetInput>(outer, gadget_m, gap_coeff, rng.child("gadgets"));
    return Instance{x, value};
  };
}

void parallel_for(uint64_t n, unsigned jobs, const std::function<void(uint64_t)> &f) {
  jobs = std::max(1u, jobs);
  if (jobs == 1) {
    for (uint64_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < jobs; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (uint64_t i = w; i < n; i += jobs) f(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto &th : pool) th.join();
  for (auto &e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

ReportCell estimate_R(const QueryAlgorithm &alg, const InputGenerator &gen, uint64_t trials, uint64_t seed,
                      unsigned jobs) {
  if (trials < 100) throw std::invalid_argument("estimate_R: trials must be >= 100");
  std::vector<AlgResult> results(trials);
  std::vector<uint8_t> truth(trials);
  RngStream root(seed);
  parallel_for(trials, jobs, [&](uint64_t t) {
    RngStream tr = root.child(t);
    RngStream in_rng = tr.child("input"), alg_rng = tr.child("alg");
    Instance inst = gen(in_rng);
    results[t] = alg.run(*inst.input, alg_rng);
    truth[t] = inst.truth;
  });

  ReportCell cell;
  cell.algorithm = alg.name();
  cell.trials = trials;
  cell.seed = seed;
  for (uint64_t t = 0; t < trials; ++t) {
    cell.total_queries += results[t].queries;
    cell.max_queries = std::max(cell.max_queries, results[t].queries);
    cell.errors += results[t].output != truth[t];
    cell.violations += results[t].promise_violation;
  }
  cell.mean_queries = static_cast<double>(cell.total_queries) / trials;
  cell.error_rate = static_cast<double>(cell.errors) / trials;
  cell.error_ci = wilson_ci(cell.errors, trials);
  return cell;
}

std::vector<CounterexampleRow> counterexample_table(const CounterexampleConfig &config) {
  std::vector<CounterexampleRow> rows;
  RngStream root(config.seed);
  double budget = config.budget.get_d();
  for (uint64_t k : config.k_list) {
    if (k < 2 || k > 20) {
      throw CounterexampleRefused("counterexample: k=" + std::to_string(k) + " outside [2, 20]");
    }
    CounterexampleRow row;
    row.k = k;
    ApproxIndex fn(k, config.radius_coeff);
    row.radius = fn.radius();
    row.gadget_m = composed_gadget_size(k, config.gap_coeff);
    RngStream cell_rng = root.child(k);
    uint64_t seed_f = cell_rng.child("f").next_u64();
    uint64_t seed_g = cell_rng.child("g").next_u64();
    uint64_t seed_fg = cell_rng.child("fg").next_u64();

    bool found = false;
    InputGenerator gen_f = approxindex_generator(fn);
    for (uint64_t q = 0; q <= k && !found; ++q) {
      ApproxIndexAlg alg(k, q);
      Rational exact = alg.exact_error(row.radius);
      if (exact > config.budget) continue;
      ++row.variants_measured;
      ReportCell cell = estimate_R(alg, gen_f, config.trials, seed_f, config.jobs);
      if (cell.error_ci.hi <= budget) {
        found = true;
        row.f = cell;
        row.q_f = q;
        row.exact_err_f = exact;
        row.f_clamped = q == k;
      }
    }
    if (!found) throw CounterexampleRefused("counterexample: no ApproxIndex variant within budget at k=" + std::to_string(k));

    row.g = estimate_R(GapMajFull(row.gadget_m, config.gap_coeff), gapmaj_generator(row.gadget_m, config.gap_coeff),
                       config.trials, seed_g, config.jobs);

    struct Candidate {
      uint64_t cost;
      Rational exact;
      uint64_t q, s;
    };
    std::vector<Candidate> cands;
    for (uint64_t q = 0; q <= k; ++q) {
      for (uint64_t s = 1; s <= row.gadget_m; ++s) {
        ComposedAlg alg(k, row.gadget_m, config.gap_coeff, q, s);
        Rational exact = alg.exact_error(row.radius);
        if (exact <= config.budget) cands.push_back({alg.cost(), exact, q, s});
        if (q == 0) break;  // s is irrelevant without votes
      }
    }
    std::sort(cands.begin(), cands.end(), [](const Candidate &a, const Candidate &b) {
      return std::tie(a.cost, a.exact, a.q, a.s) < std::tie(b.cost, b.exact, b.q, b.s);
    });
    InputGenerator gen_fg = composed_generator(fn, row.gadget_m, config.gap_coeff);
    found = false;
    for (const auto &c : cands) {
      ComposedAlg alg(k, row.gadget_m, config.gap_coeff, c.q, c.s);
      ++row.variants_measured;
      ReportCell cell = estimate_R(alg, gen_fg, config.trials, seed_fg, config.jobs);
      if (cell.error_ci.hi <= budget) {
        found = true;
        row.fg = cell;
        row.q_fg = c.q;
        row.s_fg = c.s;
        row.exact_err_fg = c.exact;
        break;
      }
    }
    if (!found) throw CounterexampleRefused("counterexample: no composed variant within budget at k=" + std::to_string(k));

    row.Q_f = row.f.mean_queries;
    row.Q_g = row.g.mean_queries;
    row.Q_fg = row.fg.mean_queries;
    row.ratio = row.Q_fg / (row.Q_f * row.Q_g);
    rows.push_back(std::move(row));
  }
  return rows;
}

TrendFit counterexample_trend(const std::vector<CounterexampleRow> &rows) {
  std::vector<double> x, yfg, yprod;
  for (const auto &r : rows) {
    if (r.f_clamped) continue;
    x.push_back(std::log(static_cast<double>(r.k)));
    yfg.push_back(std::log(r.Q_fg));
    yprod.push_back(std::log(r.Q_f * r.Q_g));
  }
  if (x.size() < 2) return {NAN, NAN, x.size()};
  return {fitted_slope(x, yfg), fitted_slope(x, yprod), x.size()};
}

void write_counterexample_csv(std::ostream &out, const std::vector<CounterexampleRow> &rows) {
  out << "k,gadget_m,Q_f,Q_g,Q_fg,ratio,err_f,err_fg,ci_half_f,ci_half_fg\n";
  auto old = out.precision(17);
  for (const auto &r : rows) {
    out << r.k << "," << r.gadget_m << "," << r.Q_f << "," << r.Q_g << "," << r.Q_fg << "," << r.ratio << ","
        << r.f.error_rate << "," << r.fg.error_rate << "," << r.f.error_ci.half_width() << ","
        << r.fg.error_ci.half_width() << "\n";
  }
  out.precision(old);
}

nlohmann::json to_json(const ReportCell &cell) {
  return {{"algorithm", cell.algorithm},
          {"trials", cell.trials},
          {"seed", cell.seed},
          {"mean_queries", cell.mean_queries},
          {"max_queries", cell.max_queries},
          {"errors", cell.errors},
          {"error_rate", cell.error_rate},
          {"wilson_lo", cell.error_ci.lo},
          {"wilson_hi", cell.error_ci.hi},
          {"promise_violations", cell.violations}};
}

nlohmann::json counterexample_json(const std::vector<CounterexampleRow> &rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto &r : rows) {
    double lk = std::sqrt(r.k * std::log2(static_cast<double>(r.k)));
    out.push_back({{"k", r.k},
                   {"radius", r.radius},
                   {"gadget_m", r.gadget_m},
                   {"gadget_m_note", "smallest valid GapMaj size >= ceil(log2(k + 2^k)) = " +
                                         std::to_string(ceil_log2(r.k + (uint64_t{1} << r.k)))},
                   {"Q_f", r.Q_f},
                   {"Q_g", r.Q_g},
                   {"Q_fg", r.Q_fg},
                   {"ratio", r.ratio},
                   {"q_f", r.q_f},
                   {"q_fg", r.q_fg},
                   {"s_fg", r.s_fg},
                   {"c1", r.q_f / lk},
                   {"c3", r.q_fg / lk},
                   {"c2", static_cast<double>(r.s_fg) / ceil_log2(r.gadget_m)},
                   {"exact_err_f", to_string(r.exact_err_f)},
                   {"exact_err_fg", to_string(r.exact_err_fg)},
                   {"f_clamped", r.f_clamped},
                   {"variants_measured", r.variants_measured},
                   {"f", to_json(r.f)},
                   {"g", to_json(r.g)},
                   {"fg", to_json(r.fg)}});
  }
  return out;
}

}  // namespace nqsim
