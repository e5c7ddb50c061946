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

#include "nqsim/channels.h"

#include <cmath>
#include <map>
#include <sstream>

namespace nqsim {

ChannelSpec ChannelSpec::noisy(const Rational &rho) {
  if (sgn(rho) < 0 || rho > 1) throw std::invalid_argument("noisy channel: rho must lie in [0, 1]");
  return {ChannelKind::kNoisy, rho};
}

ChannelSpec ChannelSpec::erasure(const Rational &keep_prob) {
  if (sgn(keep_prob) < 0 || keep_prob > 1) throw std::invalid_argument("erasure channel: keep_prob must lie in [0, 1]");
  return {ChannelKind::kErasure, keep_prob};
}

std::string ChannelSpec::to_string() const {
  return std::string(kind == ChannelKind::kNoisy ? "noisy(" : "erasure(") + nqsim::to_string(param) + ")";
}

std::vector<uint8_t> apply_channel(const ChannelSpec &spec, const BitString &x, RngStream &rng) {
  std::vector<uint8_t> y(x.size());
  if (spec.kind == ChannelKind::kNoisy) {
    Rational flip = (1 - spec.param) / 2;
    for (size_t i = 0; i < x.size(); ++i) y[i] = rng.bernoulli(flip) ? uint8_t(1 - x[i]) : x[i];
  } else {
    for (size_t i = 0; i < x.size(); ++i) y[i] = rng.bernoulli(spec.param) ? x[i] : kErased;
  }
  return y;
}

std::string symbols_to_string(const std::vector<uint8_t> &y) {
  std::string s;
  for (uint8_t c : y) s += c == kErased ? '*' : char('0' + c);
  return s;
}

namespace {

double xlog2(double p) { return p > 0 ? -p * std::log2(p) : 0.0; }

struct Split {
  Rational zero = 0;  // Pr[f(X) = 0, Y = y]
  Rational one = 0;
};

void accumulate(const Split &s, double &h, Rational &err) {
  Rational tot = s.zero + s.one;
  if (sgn(tot) == 0) return;
  // Exact posterior, entropy evaluated once per output symbol.
  double p1 = Rational(s.one / tot).get_d();
  h += tot.get_d() * (xlog2(p1) + xlog2(1 - p1));
  err += s.one > s.zero ? s.zero : s.one;  // tie outputs 0, erring on the one-mass
}

std::vector<std::pair<BitString, std::pair<Rational, uint8_t>>> labelled_support(const PartialFn &f, const RDist &mu) {
  std::vector<std::pair<BitString, std::pair<Rational, uint8_t>>> out;
  for (const auto &[x, p] : mu.items()) {
    if (x.size() != f.arity) throw std::invalid_argument("channel: input length differs from arity");
    FnValue v = f.eval(x);
    if (v == FnValue::kOutside) throw SupportOutsidePromise("channel: mu puts mass outside Dom(f)");
    out.push_back({x, {p, static_cast<uint8_t>(v)}});
  }
  return out;
}

}  // namespace

ChannelPosterior channel_posterior(const PartialFn &f, const RDist &mu, const ChannelSpec &spec) {
  auto support = labelled_support(f, mu);
  size_t n = f.arity;
  ChannelPosterior res{0.0, 0};
  if (spec.kind == ChannelKind::kNoisy) {
    if (n > 12) throw BudgetExceeded("cond_entropy_exact: noisy channel arity must be <= 12");
    Rational keep = (1 + spec.param) / 2, flip = (1 - spec.param) / 2;
    std::vector<Rational> by_distance(n + 1);
    for (size_t d = 0; d <= n; ++d) by_distance[d] = pow(keep, n - d) * pow(flip, d);
    for (uint64_t yv = 0; yv < (uint64_t{1} << n); ++yv) {
      BitString y = BitString::from_uint(yv, n);
      Split s;
      for (const auto &[x, pv] : support) {
        Rational w = pv.first * by_distance[hamming_distance(x, y)];
        (pv.second ? s.one : s.zero) += w;
      }
      accumulate(s, res.cond_entropy, res.bayes_error);
    }
  } else {
    if (n > 8) throw BudgetExceeded("cond_entropy_exact: erasure channel arity must be <= 8");
    const Rational &keep = spec.param;
    for (uint64_t kept = 0; kept < (uint64_t{1} << n); ++kept) {
      unsigned k = std::popcount(kept);
      Rational w = pow(keep, k) * pow(Rational(1 - keep), n - k);
      if (sgn(w) == 0) continue;
      std::map<uint64_t, Split> groups;
      for (const auto &[x, pv] : support) {
        uint64_t key = x.to_uint() & kept;
        (pv.second ? groups[key].one : groups[key].zero) += w * pv.first;
      }
      for (const auto &[key, s] : groups) accumulate(s, res.cond_entropy, res.bayes_error);
    }
  }
  return res;
}

double cond_entropy_exact(const PartialFn &f, const RDist &mu, const ChannelSpec &spec) {
  return channel_posterior(f, mu, spec).cond_entropy;
}

SamorodnitskyResult samorodnitsky_check(const PartialFn &f, const RDist &mu, const Rational &rho) {
  double hn = cond_entropy_exact(f, mu, ChannelSpec::noisy(rho));
  double he = cond_entropy_exact(f, mu, ChannelSpec::erasure(rho * rho));
  return {hn, he, hn - he};
}

FanoResult fano_bounds_check(const PartialFn &f, const RDist &mu, const ChannelSpec &spec) {
  auto post = channel_posterior(f, mu, spec);
  double err = post.bayes_error.get_d();
  return {post.bayes_error, post.cond_entropy, 2 * err <= post.cond_entropy + 1e-12,
          post.cond_entropy <= binary_entropy(err) + 1e-12};
}

namespace {

RDist random_law_on_domain(const PartialFn &f, RngStream &rng) {
  std::vector<BitString> dom;
  for (const auto &x : all_strings(f.arity)) {
    if (f.in_domain(x)) dom.push_back(x);
  }
  RDist mu = random_rational_dist(dom, rng);
  return mu;
}

}  // namespace

std::vector<SweepRow> channel_sweep(const SweepConfig &config, RngStream rng) {
  std::vector<Rational> rhos = config.rhos;
  if (rhos.empty()) {
    for (long j = 1; j <= 9; ++j) rhos.push_back(rat(j, 10));
  }
  std::vector<std::pair<PartialFn, RDist>> cases;
  for (uint64_t table = 0; table < 16; ++table) {
    std::vector<FnValue> values(4);
    for (size_t x = 0; x < 4; ++x) values[x] = fn_value((table >> x) & 1);
    PartialFn f = table_fn(2, values, "total2_" + std::to_string(table));
    RngStream r = rng.child("total").child(table);
    cases.push_back({f, random_law_on_domain(f, r)});
  }
  for (size_t j = 0; j < config.random_functions; ++j) {
    RngStream r = rng.child("partial").child(j);
    size_t n = config.random_arities[r.uniform_int(config.random_arities.size())];
    std::vector<FnValue> values(size_t{1} << n);
    bool any = false;
    while (!any) {
      for (auto &v : values) {
        uint64_t u = r.uniform_int(4);
        v = u == 3 ? FnValue::kOutside : fn_value(u & 1);
        any |= v != FnValue::kOutside;
      }
    }
    PartialFn f = table_fn(n, values, "partial" + std::to_string(n) + "_" + std::to_string(j));
    cases.push_back({f, random_law_on_domain(f, r)});
  }
  std::vector<SweepRow> rows;
  for (const auto &[f, mu] : cases) {
    for (const auto &rho : rhos) {
      auto s = samorodnitsky_check(f, mu, rho);
      auto fano = fano_bounds_check(f, mu, ChannelSpec::noisy(rho));
      auto fano_e = fano_bounds_check(f, mu, ChannelSpec::erasure(rho * rho));
      rows.push_back({f.name, f.arity, rho, s.h_noisy, s.h_erasure, s.margin, fano.err_bayes.get_d(),
                      fano.lower_ok && fano.upper_ok && fano_e.lower_ok && fano_e.upper_ok});
    }
  }
  return rows;
}

void write_sweep_csv(std::ostream &out, const std::vector<SweepRow> &rows) {
  out << "f_id,n,rho,H_noisy,H_erasure,margin,err_bayes,fano_ok\n";
  auto old = out.precision(17);
  for (const auto &r : rows) {
    out << r.f_id << "," << r.n << "," << to_string(r.rho) << "," << r.h_noisy << "," << r.h_erasure << "," << r.margin
        << "," << r.err_bayes << "," << (r.fano_ok ? 1 : 0) << "\n";
  }
  out.precision(old);
}

}  // namespace nqsim
