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

// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "nqsim/experiments.h"
#include "nqsim/stats.h"
#include "nqsim/verify.h"

using namespace nqsim;

namespace {

// Wall-clock budgets in seconds, one per criterion.
constexpr double kBudget[16] = {0, 5, 5, 120, 600, 5, 30, 60, 60, 300, 60, 5, 300, 600, 120, 60};
constexpr double kErrorBudget = 1.0 / 3;
constexpr double kSlopeLo = 0.9, kSlopeHi = 1.6, kSlopeSeparation = 0.3;
constexpr uint64_t kTrialsPerCell = 10000;

struct Outcome {
  bool pass;
  std::string detail;
};

Outcome from_checks(std::initializer_list<CheckResult> checks) {
  Outcome o{true, ""};
  for (const auto &c : checks) {
    o.pass = o.pass && c.pass;
    o.detail += (o.detail.empty() ? "" : "; ") + c.name + ": " + c.measured;
  }
  return o;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

Outcome counterexample_direction() {
  CounterexampleConfig cfg;
  cfg.k_list = {12, 14, 16, 18};
  cfg.trials = kTrialsPerCell;
  cfg.seed = 1;
  auto rows = counterexample_table(cfg);
  bool ok = true;
  std::string d;
  for (const auto &r : rows) {
    ok = ok && r.f.error_ci.hi <= kErrorBudget && r.fg.error_ci.hi <= kErrorBudget && r.g.errors == 0;
    d += "k=" + std::to_string(r.k) + ":ratio=" + fmt(r.ratio) + " ";
  }
  // Ratio below 1 and strictly decreasing over k = 12, 14, 16.
  for (size_t i = 0; i < 3; ++i) {
    ok = ok && rows[i].ratio < 1;
    if (i) ok = ok && rows[i].ratio < rows[i - 1].ratio;
  }
  TrendFit fit = counterexample_trend(rows);
  ok = ok && fit.cells == rows.size();
  ok = ok && fit.slope_fg >= kSlopeLo && fit.slope_fg <= kSlopeHi;
  ok = ok && fit.slope_product - fit.slope_fg >= kSlopeSeparation;
  d += "slope_fg=" + fmt(fit.slope_fg) + " slope_product=" + fmt(fit.slope_product);
  return {ok, d};
}

Outcome subsample_oracle() {
  struct Cell {
    uint64_t m, d;
  };
  std::vector<Cell> cells;
  for (uint64_t d : {1, 3, 5, 9, 15, 25}) cells.push_back({25, d});
  for (uint64_t d : {1, 5, 11, 25, 51, 75, 99}) cells.push_back({100, d});
  // Simultaneous 95% coverage across the sweep.
  double level = 1 - 0.05 / cells.size();
  bool ok = true;
  uint64_t misses = 0;
  double worst_z = 0;
  for (size_t i = 0; i < cells.size(); ++i) {
    auto [m, d] = cells[i];
    GapMajSubsample alg(m, 1, d);
    ReportCell r = estimate_R(alg, gapmaj_generator(m, 1), kTrialsPerCell, 1000 + i);
    double exact = Rational((alg.exact_error(0) + alg.exact_error(1)) / 2).get_d();
    if (!wilson_ci(r.errors, r.trials, level).contains(exact)) ++misses;
    if (d == m) ok = ok && alg.exact_error() == 0 && r.errors == 0;
    double sd = std::sqrt(exact * (1 - exact) / r.trials);
    if (sd > 0) worst_z = std::max(worst_z, std::abs(r.error_rate - exact) / sd);
  }
  ok = ok && misses == 0;
  return {ok, "cells=" + std::to_string(cells.size()) + " misses=" + std::to_string(misses) + " max_|z|=" + fmt(worst_z)};
}

std::string slurp(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string &args) {
  std::string cmd = std::string(NQSIM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome reproducibility() {
  namespace fs = std::filesystem;
  fs::path root = fs::temp_directory_path() / ("nqsim_accept_" + std::to_string(::getpid()));
  fs::remove_all(root);
  fs::create_directories(root);
  fs::path cfg = root / "small.cfg";
  std::ofstream(cfg) << "[counterexample]\nk_list = 8, 10\ntrials = 2000\n[channels]\nrandom_functions = 20\n"
                        "[walk]\ngammas = 1/50, 1/10\ntrials = 20000\n";
  struct Run {
    std::string command;
    std::string stem;
  };
  std::vector<Run> runs = {{"counterexample", "counterexample"}, {"channels", "channels"},
                           {"walk", "walk"}, {"verify distances", "verify_distances"}};
  bool ok = true;
  std::string d;
  for (const auto &run : runs) {
    std::vector<std::string> outputs;
    for (const auto &[tag, jobs] : {std::pair{"a", 1}, {"b", 1}, {"c", 3}}) {
      fs::path out = root / (run.stem + tag);
      int code = run_cli(run.command + " --config " + cfg.string() + " --seed 11 --jobs " + std::to_string(jobs) +
                         " --out " + out.string());
      ok = ok && code == 0;
      outputs.push_back(slurp(out / (run.stem + ".csv")) + slurp(out / (run.stem + ".json")));
    }
    bool same = !outputs[0].empty() && outputs[0] == outputs[1] && outputs[0] == outputs[2];
    ok = ok && same;
    d += run.stem + (same ? ":identical " : ":DIFFERENT ");
  }
  fs::remove_all(root);
  return {ok, d + "(runs x2 at --jobs 1, x1 at --jobs 3)"};
}

}  // namespace

int main() {
  VerifyOptions opt;
  opt.seed = 1;
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"SingleBitSim faithfulness", [&] { return from_checks({check_single_bit_faithfulness(opt)}); }},
      {"SingleBitSim cost identity", [&] { return from_checks({check_single_bit_cost(opt)}); }},
      {"OracleSim faithfulness", [&] { return from_checks({check_session_faithfulness(opt)}); }},
      {"OracleSim cost bound", [&] { return from_checks({check_session_cost_bound(opt)}); }},
      {"Tensorization", [&] { return from_checks({check_tensorization(opt)}); }},
      {"Distance chain", [&] { return from_checks({check_distance_chain(opt)}); }},
      {"Amplification", [&] { return from_checks({check_amplification(opt)}); }},
      {"Mean absolute deviation", [&] { return from_checks({check_mad_closed_form(opt), check_mad_bounds(opt)}); }},
      {"Walk protocol",
       [&] {
         return from_checks({check_walk_hitting(opt), check_walk_segment_length(opt), check_walk_stream_iid(opt),
                             check_walk_wald(opt)});
       }},
      {"Sign invariance", [&] { return from_checks({check_sign_invariance(opt)}); }},
      {"GapMaj adapter", [&] { return from_checks({check_gapmaj_adapter(opt)}); }},
      {"Channels", [&] { return from_checks({check_channels(opt)}); }},
      {"Counterexample direction", counterexample_direction},
      {"Subsample oracle", subsample_oracle},
      {"Reproducibility", reproducibility},
  };
  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = secs < kBudget[i + 1];
    bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("%s criterion %zu: %s | %s | %.2fs (budget %.0fs)\n", pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), o.detail.c_str(), secs, kBudget[i + 1]);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
