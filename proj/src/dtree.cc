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

#include "nqsim/dtree.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace nqsim {

PartialAssignment Transcript::induced(size_t n) const {
  PartialAssignment z(n);
  for (const auto &[i, a] : pairs) z.set(i, a);
  return z;
}

std::string Transcript::to_string() const {
  std::ostringstream out;
  if (tree_id) out << "D" << *tree_id << ":";
  out << "[";
  for (size_t j = 0; j < pairs.size(); ++j) {
    if (j) out << ",";
    out << pairs[j].first << "=" << int(pairs[j].second);
  }
  out << "]";
  return out.str();
}

DecisionTree DecisionTree::leaf(int label) {
  DecisionTree t;
  Node n;
  n.label = label;
  t.nodes_.push_back(n);
  return t;
}

size_t DecisionTree::append(const DecisionTree &t) {
  size_t offset = nodes_.size();
  for (Node n : t.nodes_) {
    for (int &c : n.child) {
      if (c >= 0) c += static_cast<int32_t>(offset);
    }
    nodes_.push_back(n);
  }
  return offset;
}

DecisionTree DecisionTree::query(uint32_t index, const DecisionTree &zero, const DecisionTree &one) {
  DecisionTree t;
  t.nodes_.push_back(Node{});
  size_t z = t.append(zero);
  size_t o = t.append(one);
  t.nodes_[0].query = static_cast<int32_t>(index);
  t.nodes_[0].child[0] = static_cast<int32_t>(z);
  t.nodes_[0].child[1] = static_cast<int32_t>(o);
  return t;
}

namespace {

DecisionTree parse_at(const std::string &s, size_t &pos) {
  while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  if (pos >= s.size()) throw std::invalid_argument("DecisionTree::parse: unexpected end");
  if (s[pos] == '(') {
    ++pos;
    if (pos >= s.size() || s[pos] != 'q') throw std::invalid_argument("DecisionTree::parse: expected 'q'");
    ++pos;
    size_t used = 0;
    unsigned long idx = std::stoul(s.substr(pos), &used);
    pos += used;
    DecisionTree zero = parse_at(s, pos);
    DecisionTree one = parse_at(s, pos);
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos >= s.size() || s[pos] != ')') throw std::invalid_argument("DecisionTree::parse: expected ')'");
    ++pos;
    return DecisionTree::query(static_cast<uint32_t>(idx), zero, one);
  }
  size_t used = 0;
  int label = std::stoi(s.substr(pos), &used);
  pos += used;
  return DecisionTree::leaf(label);
}

void print_at(const DecisionTree &t, size_t i, std::ostringstream &out) {
  const auto &n = t.node(i);
  if (n.query < 0) {
    out << n.label;
    return;
  }
  out << "(q" << n.query << " ";
  print_at(t, n.child[0], out);
  out << " ";
  print_at(t, n.child[1], out);
  out << ")";
}

DecisionTree full_reader_at(const std::vector<uint32_t> &order, size_t pos, BitString &x, const PartialFn &f) {
  if (pos == order.size()) return DecisionTree::leaf(static_cast<int>(f.eval(x)));
  x.set(order[pos], 0);
  DecisionTree zero = full_reader_at(order, pos + 1, x, f);
  x.set(order[pos], 1);
  DecisionTree one = full_reader_at(order, pos + 1, x, f);
  x.set(order[pos], 0);
  return DecisionTree::query(order[pos], zero, one);
}

}  // namespace

DecisionTree DecisionTree::parse(const std::string &text) {
  size_t pos = 0;
  DecisionTree t = parse_at(text, pos);
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos != text.size()) throw std::invalid_argument("DecisionTree::parse: trailing input");
  t.validate();
  return t;
}

DecisionTree DecisionTree::full_reader(const std::vector<uint32_t> &order, const PartialFn &f) {
  if (order.size() != f.arity) throw std::invalid_argument("full_reader: order must cover all indices");
  BitString x(f.arity);
  return full_reader_at(order, 0, x, f);
}

size_t DecisionTree::depth() const {
  std::function<size_t(size_t)> rec = [&](size_t i) -> size_t {
    const Node &n = nodes_[i];
    if (n.query < 0) return 0;
    return 1 + std::max(rec(n.child[0]), rec(n.child[1]));
  };
  return rec(0);
}

size_t DecisionTree::min_arity() const {
  size_t a = 0;
  for (const Node &n : nodes_) {
    if (n.query >= 0) a = std::max<size_t>(a, n.query + 1);
  }
  return a;
}

void DecisionTree::validate() const {
  std::vector<uint32_t> path;
  std::function<void(size_t)> rec = [&](size_t i) {
    const Node &n = nodes_[i];
    if (n.query < 0) return;
    if (std::find(path.begin(), path.end(), static_cast<uint32_t>(n.query)) != path.end()) {
      throw std::invalid_argument("DecisionTree: index " + std::to_string(n.query) + " repeats on a path");
    }
    path.push_back(n.query);
    rec(n.child[0]);
    rec(n.child[1]);
    path.pop_back();
  };
  rec(0);
}

std::string DecisionTree::to_string() const {
  std::ostringstream out;
  print_at(*this, 0, out);
  return out.str();
}

namespace {

DecisionTree random_tree_at(std::vector<uint32_t> &unused, size_t depth_left, RngStream &rng, double leaf_prob) {
  if (depth_left == 0 || unused.empty() || rng.bernoulli(leaf_prob)) return DecisionTree::leaf(rng.fair_bit());
  size_t pick = rng.uniform_int(unused.size());
  uint32_t q = unused[pick];
  unused.erase(unused.begin() + pick);
  DecisionTree zero = random_tree_at(unused, depth_left - 1, rng, leaf_prob);
  DecisionTree one = random_tree_at(unused, depth_left - 1, rng, leaf_prob);
  unused.insert(unused.begin() + pick, q);
  return DecisionTree::query(q, zero, one);
}

}  // namespace

DecisionTree random_tree(size_t m, size_t max_depth, RngStream &rng, double leaf_prob) {
  std::vector<uint32_t> unused(m);
  for (size_t i = 0; i < m; ++i) unused[i] = static_cast<uint32_t>(i);
  return random_tree_at(unused, max_depth, rng, leaf_prob);
}

RunResult run(const DecisionTree &tree, const ProbeInput &x) {
  RunResult r{0, {}, 0};
  size_t i = 0;
  while (tree.node(i).query >= 0) {
    uint32_t q = static_cast<uint32_t>(tree.node(i).query);
    if (q >= x.size()) throw std::out_of_range("run: query index beyond input length");
    uint8_t a = x.probe(q);
    r.transcript.pairs.emplace_back(q, a);
    i = tree.node(i).child[a];
  }
  r.output = tree.node(i).label;
  r.queries = r.transcript.pairs.size();
  return r;
}

RunResult run(const DecisionTree &tree, const BitString &x) { return run(tree, DenseInput(x)); }

int replay(const DecisionTree &tree, const Transcript &t) {
  size_t i = 0;
  for (const auto &[q, a] : t.pairs) {
    if (tree.node(i).query != static_cast<int32_t>(q)) throw std::invalid_argument("replay: transcript diverges from tree");
    i = tree.node(i).child[a];
  }
  if (tree.node(i).query >= 0) throw std::invalid_argument("replay: transcript ends before a leaf");
  return tree.node(i).label;
}

template <>
const DecisionTree &RandomizedTree<double>::sample(RngStream &rng, size_t *index) const {
  double u = rng.uniform(), acc = 0;
  for (size_t d = 0; d < trees.size(); ++d) {
    acc += weights[d];
    if (u < acc) {
      if (index) *index = d;
      return trees[d];
    }
  }
  if (index) *index = trees.size() - 1;
  return trees.back();
}

template <>
const DecisionTree &RandomizedTree<Rational>::sample(RngStream &rng, size_t *index) const {
  // Sequential exact Bernoulli draws: pick d with probability w_d / (remaining mass).
  Rational remaining = 1;
  for (size_t d = 0; d + 1 < trees.size(); ++d) {
    if (sgn(remaining) > 0 && rng.bernoulli(Rational(weights[d] / remaining))) {
      if (index) *index = d;
      return trees[d];
    }
    remaining -= weights[d];
  }
  if (index) *index = trees.size() - 1;
  return trees.back();
}

TranscriptH2Exact transcript_h2_exact(const RandomizedTree<Rational> &r, const RDist &mu0, const RDist &mu1) {
  Surd mixture;
  for (size_t d = 0; d < r.trees.size(); ++d) {
    mixture += Surd(r.weights[d]) * hellinger_sq_exact(transcript_dist(r.trees[d], mu0), transcript_dist(r.trees[d], mu1));
  }
  Surd joint = hellinger_sq_exact(joint_transcript_dist(r, mu0), joint_transcript_dist(r, mu1));
  return {mixture, joint};
}

TranscriptH2 transcript_h2(const RandomizedTree<double> &r, const DDist &mu0, const DDist &mu1) {
  double mixture = 0;
  for (size_t d = 0; d < r.trees.size(); ++d) {
    mixture += r.weights[d] * hellinger_sq(transcript_dist(r.trees[d], mu0), transcript_dist(r.trees[d], mu1));
  }
  return {mixture, hellinger_sq(joint_transcript_dist(r, mu0), joint_transcript_dist(r, mu1))};
}

namespace {

// (expected queries under mu0, under mu1, h^2 contribution)
using Triple = std::array<double, 3>;

struct TreeEnumerator {
  size_t n;
  const DDist &mu0;
  const DDist &mu1;
  std::map<std::pair<PartialAssignment, size_t>, std::vector<Triple>> memo;

  std::pair<double, double> masses(const PartialAssignment &z) const {
    return {consistent_mass(mu0, z), consistent_mass(mu1, z)};
  }

  const std::vector<Triple> &all(const PartialAssignment &z, size_t depth_left) {
    auto key = std::make_pair(z, depth_left);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    auto [m0, m1] = masses(z);
    double d = std::sqrt(m0) - std::sqrt(m1);
    std::vector<Triple> out = {{0.0, 0.0, d * d / 2}};
    if (depth_left > 0) {
      for (size_t i = 0; i < n; ++i) {
        if (z.is_set(i)) continue;
        PartialAssignment z0 = z, z1 = z;
        z0.set(i, 0);
        z1.set(i, 1);
        const auto &a = all(z0, depth_left - 1);
        const auto &b = all(z1, depth_left - 1);
        if (out.size() + a.size() * b.size() > (size_t{1} << 24)) {
          throw BudgetExceeded("distinguishing_cost_bruteforce: tree count above 2^24");
        }
        for (const auto &ta : a) {
          for (const auto &tb : b) out.push_back({m0 + ta[0] + tb[0], m1 + ta[1] + tb[1], ta[2] + tb[2]});
        }
      }
    }
    return memo.emplace(key, std::move(out)).first->second;
  }
};

std::vector<Triple> pareto_front(std::vector<Triple> pts) {
  // Minimize c0, c1; maximize h.
  std::sort(pts.begin(), pts.end(), [](const Triple &a, const Triple &b) {
    if (a[0] != b[0]) return a[0] < b[0];
    if (a[1] != b[1]) return a[1] < b[1];
    return a[2] > b[2];
  });
  std::vector<Triple> front;
  for (const auto &p : pts) {
    bool dominated = false;
    for (const auto &f : front) {
      if (f[0] <= p[0] && f[1] <= p[1] && f[2] >= p[2]) {
        dominated = true;
        break;
      }
    }
    if (!dominated) front.push_back(p);
  }
  return front;
}

}  // namespace

DistinguishingCost distinguishing_cost_bruteforce(const DDist &mu0, const DDist &mu1, size_t n, size_t max_depth) {
  if (n > 4) throw BudgetExceeded("distinguishing_cost_bruteforce: n must be <= 4");
  max_depth = std::min(max_depth, n);
  TreeEnumerator en{n, mu0, mu1, {}};
  const auto &trees = en.all(PartialAssignment(n), max_depth);
  auto front = pareto_front(trees);
  const double inf = std::numeric_limits<double>::infinity();
  DistinguishingCost best{inf, inf, trees.size(), front.size(), 1.0};
  for (const auto &t : front) {
    if (t[2] > 0) best.best_single = std::min(best.best_single, std::min(t[0], t[1]) / t[2]);
  }
  best.ratio = best.best_single;
  // A mixture can only beat both endpoints when the cheaper side differs between them.
  std::vector<const Triple *> left, right;
  for (const auto &t : front) {
    if (t[0] < t[1]) left.push_back(&t);
    else if (t[0] > t[1]) right.push_back(&t);
  }
  for (const Triple *a : left) {
    for (const Triple *b : right) {
      for (int j = 1; j < 64; ++j) {
        double l = j / 64.0;
        double c0 = l * (*a)[0] + (1 - l) * (*b)[0];
        double c1 = l * (*a)[1] + (1 - l) * (*b)[1];
        double h = l * (*a)[2] + (1 - l) * (*b)[2];
        if (h <= 0) continue;
        double r = std::min(c0, c1) / h;
        if (r < best.ratio) {
          best.ratio = r;
          best.mixture_weight = l;
        }
      }
    }
  }
  return best;
}

std::vector<uint32_t> minimal_sensitive_blocks(const PartialFn &f, const BitString &x) {
  if (f.arity > 12) throw BudgetExceeded("block sensitivity: arity must be <= 12");
  FnValue fx = f.eval(x);
  if (fx == FnValue::kOutside) throw std::invalid_argument("block sensitivity: x outside Dom(f)");
  uint32_t full = (1u << f.arity) - 1;
  std::vector<uint8_t> sensitive(full + 1, 0);
  for (uint32_t mask = 1; mask <= full; ++mask) {
    BitString y = x;
    for (uint32_t i = 0; i < f.arity; ++i) {
      if (mask >> i & 1) y.flip(i);
    }
    FnValue fy = f.eval(y);
    sensitive[mask] = fy != FnValue::kOutside && fy != fx;
  }
  std::vector<uint32_t> out;
  for (uint32_t mask = 1; mask <= full; ++mask) {
    if (!sensitive[mask]) continue;
    bool minimal = true;
    for (uint32_t sub = (mask - 1) & mask; sub; sub = (sub - 1) & mask) {
      if (sensitive[sub]) {
        minimal = false;
        break;
      }
    }
    if (minimal) out.push_back(mask);
  }
  return out;
}

size_t sensitivity(const PartialFn &f, const BitString &x) {
  size_t s = 0;
  for (uint32_t b : minimal_sensitive_blocks(f, x)) s += std::popcount(b) == 1;
  return s;
}

size_t block_sensitivity(const PartialFn &f, const BitString &x) {
  auto blocks = minimal_sensitive_blocks(f, x);
  size_t best = 0;
  // Branch on the lowest free element: it is either left uncovered or covered by one block.
  std::function<void(uint32_t, uint32_t, size_t)> rec = [&](uint32_t used, uint32_t skipped, size_t count) {
    best = std::max(best, count);
    uint32_t avail = ~(used | skipped) & ((1u << f.arity) - 1);
    if (!avail) return;
    size_t remaining = std::popcount(avail);
    if (count + remaining <= best) return;
    uint32_t low = avail & (~avail + 1);
    for (uint32_t b : blocks) {
      if ((b & low) && !(b & (used | skipped))) rec(used | b, skipped, count + 1);
    }
    rec(used, skipped | low, count);
  };
  rec(0, 0, 0);
  return best;
}

Rational solve_packing_lp(const std::vector<std::vector<Rational>> &a, const std::vector<Rational> &b,
                          const std::vector<Rational> &c) {
  size_t m = a.size(), n = c.size();
  for (const auto &row : a) {
    if (row.size() != n) throw std::invalid_argument("solve_packing_lp: ragged constraint matrix");
  }
  for (const auto &bi : b) {
    if (sgn(bi) < 0) throw std::invalid_argument("solve_packing_lp: b must be nonnegative");
  }
  // Tableau columns: n structural, m slack, then the right-hand side.
  size_t cols = n + m;
  std::vector<std::vector<Rational>> t(m, std::vector<Rational>(cols + 1));
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][n + i] = 1;
    t[i][cols] = b[i];
  }
  std::vector<Rational> reduced(cols + 1);  // reduced costs c_j - z_j, last entry -objective
  for (size_t j = 0; j < n; ++j) reduced[j] = c[j];
  std::vector<size_t> basis(m);
  for (size_t i = 0; i < m; ++i) basis[i] = n + i;
  while (true) {
    size_t enter = cols;
    for (size_t j = 0; j < cols; ++j) {
      if (sgn(reduced[j]) > 0) {
        enter = j;
        break;
      }
    }
    if (enter == cols) break;
    size_t leave = m;
    Rational best_ratio;
    for (size_t i = 0; i < m; ++i) {
      if (sgn(t[i][enter]) <= 0) continue;
      Rational r = t[i][cols] / t[i][enter];
      if (leave == m || r < best_ratio || (r == best_ratio && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = r;
      }
    }
    if (leave == m) throw std::domain_error("solve_packing_lp: unbounded");
    Rational piv = t[leave][enter];
    for (auto &v : t[leave]) v /= piv;
    for (size_t i = 0; i < m; ++i) {
      if (i == leave || sgn(t[i][enter]) == 0) continue;
      Rational f = t[i][enter];
      for (size_t j = 0; j <= cols; ++j) t[i][j] -= f * t[leave][j];
    }
    Rational f = reduced[enter];
    for (size_t j = 0; j <= cols; ++j) reduced[j] -= f * t[leave][j];
    basis[leave] = enter;
  }
  return -reduced[cols];
}

Rational fractional_block_sensitivity(const PartialFn &f, const BitString &x) {
  auto blocks = minimal_sensitive_blocks(f, x);
  if (blocks.empty()) return 0;
  std::vector<std::vector<Rational>> a(f.arity, std::vector<Rational>(blocks.size()));
  for (size_t j = 0; j < blocks.size(); ++j) {
    for (uint32_t i = 0; i < f.arity; ++i) {
      if (blocks[j] >> i & 1) a[i][j] = 1;
    }
  }
  return solve_packing_lp(a, std::vector<Rational>(f.arity, Rational(1)), std::vector<Rational>(blocks.size(), Rational(1)));
}

BayesResult bayes_distinguisher(const std::function<std::optional<Transcript>()> &next, const DDist &mu0,
                                const DDist &mu1, double eta) {
  if (!(eta > 0 && eta < 1)) throw std::invalid_argument("bayes_distinguisher: eta must lie in (0, 1)");
  const double threshold = 0.5 * std::log((1 + eta) / (1 - eta));
  const double inf = std::numeric_limits<double>::infinity();
  size_t n = mu0.empty() ? 0 : mu0.items().begin()->first.size();
  BayesResult res{0, 0, 0, false, 0.0};
  while (auto t = next()) {
    ++res.transcripts_consumed;
    PartialAssignment z(n);
    double m0 = 1, m1 = 1;
    for (const auto &[i, a] : t->pairs) {
      z.set(i, a);
      double n0 = consistent_mass(mu0, z), n1 = consistent_mass(mu1, z);
      ++res.queries_consumed;
      if (n0 == 0 && n1 == 0) throw ZeroLikelihood("bayes_distinguisher: answer impossible under both hypotheses");
      if (n0 == 0) res.log_odds = inf;
      else if (n1 == 0) res.log_odds = -inf;
      else res.log_odds += std::log(n1 / m1) - std::log(n0 / m0);
      m0 = n0;
      m1 = n1;
      if (std::abs(res.log_odds) >= threshold) {
        res.threshold_crossed = true;
        res.guess = res.log_odds > 0 ? 1 : 0;
        return res;
      }
    }
  }
  res.guess = 0;
  return res;
}

}  // namespace nqsim
