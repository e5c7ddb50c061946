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

#ifndef NQSIM_DTREE_H
#define NQSIM_DTREE_H

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nqsim/boolfn.h"
#include "nqsim/dist.h"
#include "nqsim/rational.h"
#include "nqsim/rng.h"
#include "nqsim/surd.h"

namespace nqsim {

struct Transcript {
  std::vector<std::pair<uint32_t, uint8_t>> pairs;
  std::optional<int> tree_id;

  size_t size() const { return pairs.size(); }
  PartialAssignment induced(size_t n) const;
  std::string to_string() const;
  auto operator<=>(const Transcript &) const = default;
  bool operator==(const Transcript &) const = default;
};

/// Deterministic decision tree stored as an arena of nodes; node 0 is the root.
class DecisionTree {
 public:
  struct Node {
    int32_t query = -1;  // -1 marks a leaf
    int32_t child[2] = {-1, -1};
    int32_t label = 0;
  };

  static DecisionTree leaf(int label);
  static DecisionTree query(uint32_t index, const DecisionTree &zero, const DecisionTree &one);
  /// Parses the text format: a leaf is its integer label, an internal node is
  /// "(q<index> <zero-subtree> <one-subtree>)".
  static DecisionTree parse(const std::string &text);
  /// Tree that queries `order` in sequence and labels each leaf with f of the fully
  /// determined input (order must cover every index of f).
  static DecisionTree full_reader(const std::vector<uint32_t> &order, const PartialFn &f);

  const Node &node(size_t i) const { return nodes_[i]; }
  size_t num_nodes() const { return nodes_.size(); }
  size_t depth() const;
  /// 1 + largest queried index, 0 for a single leaf.
  size_t min_arity() const;
  /// Throws std::invalid_argument if an index repeats on a root-to-leaf path.
  void validate() const;
  std::string to_string() const;

 private:
  size_t append(const DecisionTree &t);
  std::vector<Node> nodes_;
};

/// Random tree over indices [0, m): each node stops with probability leaf_prob (always at
/// max_depth or when no index is left), otherwise queries a uniformly chosen unused index.
/// Leaf labels are fair bits.
DecisionTree random_tree(size_t m, size_t max_depth, RngStream &rng, double leaf_prob = 0.2);

struct RunResult {
  int output;
  Transcript transcript;
  size_t queries;
};

RunResult run(const DecisionTree &tree, const ProbeInput &x);
RunResult run(const DecisionTree &tree, const BitString &x);
/// Follows the transcript's answers from the root and returns the leaf label reached.
int replay(const DecisionTree &tree, const Transcript &t);

template <class P>
struct RandomizedTree {
  std::vector<DecisionTree> trees;
  std::vector<P> weights;

  const DecisionTree &sample(RngStream &rng, size_t *index = nullptr) const;
};

constexpr size_t kExactTranscriptBudget = size_t{1} << 16;

template <class P>
FiniteDist<Transcript, P> transcript_dist(const DecisionTree &tree, const FiniteDist<BitString, P> &mu,
                                          std::optional<int> tree_id = std::nullopt) {
  if (mu.support_size() > kExactTranscriptBudget) throw BudgetExceeded("transcript_dist: support above 2^16");
  FiniteDist<Transcript, P> out;
  for (const auto &[x, p] : mu.items()) {
    Transcript t = run(tree, x).transcript;
    t.tree_id = tree_id;
    out.add(t, p);
  }
  return out;
}

/// Expected number of queries of `tree` on mu.
template <class P>
P expected_queries(const DecisionTree &tree, const FiniteDist<BitString, P> &mu) {
  P total(0);
  for (const auto &[x, p] : mu.items()) total += p * P(static_cast<long>(run(tree, x).queries));
  return total;
}

template <class P>
FiniteDist<Transcript, P> joint_transcript_dist(const RandomizedTree<P> &r, const FiniteDist<BitString, P> &mu) {
  FiniteDist<Transcript, P> out;
  for (size_t d = 0; d < r.trees.size(); ++d) {
    auto td = transcript_dist(r.trees[d], mu, static_cast<int>(d));
    for (const auto &[t, p] : td.items()) out.add(t, P(p * r.weights[d]));
  }
  return out;
}

struct TranscriptH2Exact {
  Surd mixture;  // sum_D w_D h^2(tran(D, mu0), tran(D, mu1))
  Surd joint;    // h^2 of the (tree id, transcript) distributions
};
TranscriptH2Exact transcript_h2_exact(const RandomizedTree<Rational> &r, const RDist &mu0, const RDist &mu1);

struct TranscriptH2 {
  double mixture;
  double joint;
};
TranscriptH2 transcript_h2(const RandomizedTree<double> &r, const DDist &mu0, const DDist &mu1);

struct DistinguishingCost {
  double ratio;        // +inf when no enumerated algorithm achieves h^2 > 0
  double best_single;  // best ratio over single deterministic trees
  size_t trees_enumerated;
  size_t pareto_size;
  double mixture_weight;  // weight on the first tree of the best pair (1 for a single tree)
};

/// Upper bound on the Hellinger distinguishing cost: minimum over all deterministic trees
/// of depth <= max_depth and over two-tree mixtures on a 1/64 weight grid.
DistinguishingCost distinguishing_cost_bruteforce(const DDist &mu0, const DDist &mu1, size_t n, size_t max_depth);

/// Minimal sensitive blocks of f at x, as bit masks. x must lie in Dom(f).
std::vector<uint32_t> minimal_sensitive_blocks(const PartialFn &f, const BitString &x);
size_t sensitivity(const PartialFn &f, const BitString &x);
size_t block_sensitivity(const PartialFn &f, const BitString &x);
Rational fractional_block_sensitivity(const PartialFn &f, const BitString &x);

/// max c.w subject to A w <= b, w >= 0, with b >= 0; exact simplex with Bland's rule.
Rational solve_packing_lp(const std::vector<std::vector<Rational>> &a, const std::vector<Rational> &b,
                          const std::vector<Rational> &c);

class ZeroLikelihood : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct BayesResult {
  int guess;
  size_t transcripts_consumed;
  size_t queries_consumed;
  bool threshold_crossed;
  double log_odds;  // natural log, log Pr[.|mu1] - log Pr[.|mu0]
};

/// Sequential Bayesian distinguisher. Consumes transcripts from `next` (nullopt ends the
/// stream), adding per-query log-likelihood-ratio increments, and stops as soon as
/// |log odds| >= (1/2) log((1 + eta)/(1 - eta)). Falls back to 0 on exhaustion.
BayesResult bayes_distinguisher(const std::function<std::optional<Transcript>()> &next, const DDist &mu0,
                                const DDist &mu1, double eta);

}  // namespace nqsim

#endif
