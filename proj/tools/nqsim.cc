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

// nqsim: runs verification suites and experiments and writes CSV/JSON reports.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "nqsim/channels.h"
#include "nqsim/config.h"
#include "nqsim/experiments.h"
#include "nqsim/stats.h"
#include "nqsim/verify.h"
#include "nqsim/walk.h"
#include "vendor/CLI11.hpp"

namespace {

using namespace nqsim;

constexpr const char *kVersion = "1.0.0";

enum Exit { kOk = 0, kCheckFailed = 1, kUsage = 2 };

struct Common {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::optional<uint64_t> trials;
  std::string out = ".";
  std::string mode = "rational";
  unsigned jobs = 1;
};

struct Report {
  std::string command;
  std::string stem;
  std::string csv_body;
  nlohmann::json json;
};

std::string header(const std::string &command, const RunConfig &cfg) {
  std::ostringstream os;
  os << "# nqsim " << command << "\n# version = " << kVersion << "\n";
  for (const auto &[k, v] : cfg.resolved()) os << "# " << k << " = " << v << "\n";
  return os.str();
}

void write_report(const Common &c, const RunConfig &cfg, const Report &r) {
  std::filesystem::create_directories(c.out);
  std::filesystem::path dir(c.out);
  std::ofstream csv(dir / (r.stem + ".csv"));
  csv << header(r.command, cfg) << r.csv_body;
  nlohmann::json j = r.json;
  j["command"] = r.command;
  j["version"] = kVersion;
  j["config"] = cfg.resolved();
  std::ofstream(dir / (r.stem + ".json")) << j.dump(2) << "\n";
  if (!csv) throw std::runtime_error("cannot write to '" + c.out + "'");
}

RunConfig load_config(const Common &c) {
  RunConfig cfg = c.config_path.empty() ? RunConfig() : RunConfig::load(c.config_path);
  if (c.seed) cfg.set("seed", std::to_string(*c.seed));
  if (c.trials) cfg.set("trials", std::to_string(*c.trials));
  return cfg;
}

std::string csv_quote(const std::string &s) {
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

int cmd_verify(const Common &c, const std::string &suite) {
  RunConfig cfg = load_config(c);
  VerifyOptions opt;
  opt.seed = cfg.get_u64("verify", "seed", 1);
  opt.trials = cfg.get_u64("verify", "trials", 0);
  opt.rational = cfg.get_string("verify", "mode", c.mode) == "rational";
  cfg.get_string("verify", "suite", suite);
  cfg.reject_unused("verify");
  auto names = verify_suite_names();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end()) {
    throw ConfigError("unknown suite '" + suite + "'");
  }
  auto results = verify_suite(suite, opt);
  std::ostringstream body;
  body << "suite,check,status,measured\n";
  nlohmann::json checks = nlohmann::json::array();
  bool ok = true;
  for (const auto &r : results) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.suite << "/" << r.name << " " << r.measured << "\n";
    body << r.suite << "," << r.name << "," << (r.pass ? "PASS" : "FAIL") << "," << csv_quote(r.measured) << "\n";
    checks.push_back(to_json(r));
    ok = ok && r.pass;
  }
  write_report(c, cfg, {"verify", "verify_" + suite, body.str(), {{"checks", checks}}});
  return ok ? kOk : kCheckFailed;
}

int cmd_counterexample(const Common &c) {
  RunConfig cfg = load_config(c);
  const std::string s = "counterexample";
  CounterexampleConfig cx;
  cx.seed = cfg.get_u64(s, "seed", 1);
  cx.trials = cfg.get_u64(s, "trials", 10000);
  cx.k_list = cfg.get_u64_list(s, "k_list", {12, 14, 16});
  cx.radius_coeff = cfg.get_rational(s, "radius_coeff", rat(2, 5));
  cx.gap_coeff = cfg.get_rational(s, "gap", rat(3, 2));
  cx.budget = cfg.get_rational(s, "budget", rat(1, 3));
  cfg.reject_unused(s);
  if (cx.trials < 100) throw ConfigError("trials must be >= 100");
  cx.jobs = c.jobs;
  std::vector<CounterexampleRow> rows;
  try {
    rows = counterexample_table(cx);
  } catch (const CounterexampleRefused &e) {
    std::cerr << "nqsim: " << e.what() << "\n";
    return kCheckFailed;
  }
  std::ostringstream body;
  write_counterexample_csv(body, rows);
  nlohmann::json j = {{"rows", counterexample_json(rows)}};
  TrendFit fit = counterexample_trend(rows);
  if (fit.cells >= 2) j["trend"] = {{"slope_fg", fit.slope_fg}, {"slope_product", fit.slope_product}, {"cells", fit.cells}};
  for (const auto &r : rows) {
    std::cout << "k=" << r.k << " Q_f=" << r.Q_f << " Q_g=" << r.Q_g << " Q_fg=" << r.Q_fg << " ratio=" << r.ratio
              << " err_f=" << r.f.error_rate << " err_fg=" << r.fg.error_rate << "\n";
  }
  write_report(c, cfg, {s, s, body.str(), j});
  return kOk;
}

int cmd_channels(const Common &c) {
  RunConfig cfg = load_config(c);
  const std::string s = "channels";
  uint64_t seed = cfg.get_u64(s, "seed", 1);
  SweepConfig sc;
  sc.random_functions = cfg.get_u64(s, "random_functions", 200);
  auto arities = cfg.get_u64_list(s, "arities", {3, 4});
  sc.random_arities.assign(arities.begin(), arities.end());
  sc.rhos = cfg.get_rational_list(s, "rhos", {rat(1, 10), rat(2, 10), rat(3, 10), rat(4, 10), rat(5, 10),
                                              rat(6, 10), rat(7, 10), rat(8, 10), rat(9, 10)});
  cfg.reject_unused(s);
  for (auto n : sc.random_arities) {
    if (n < 1 || n > 8) throw ConfigError("arities must lie in [1, 8]");
  }
  for (const auto &r : sc.rhos) {
    if (r < 0 || r > 1) throw ConfigError("rhos must lie in [0, 1]");
  }
  auto rows = channel_sweep(sc, RngStream(seed));
  std::ostringstream body;
  write_sweep_csv(body, rows);
  nlohmann::json arr = nlohmann::json::array();
  bool ok = true;
  double min_margin = 1;
  for (const auto &r : rows) {
    arr.push_back({{"f_id", r.f_id}, {"n", r.n}, {"rho", to_string(r.rho)}, {"H_noisy", r.h_noisy},
                   {"H_erasure", r.h_erasure}, {"margin", r.margin}, {"err_bayes", r.err_bayes}, {"fano_ok", r.fano_ok}});
    ok = ok && r.margin >= -1e-12 && r.fano_ok;
    min_margin = std::min(min_margin, r.margin);
  }
  std::cout << "rows=" << rows.size() << " min_margin=" << min_margin << (ok ? " ok" : " FAILED") << "\n";
  write_report(c, cfg, {s, s, body.str(), {{"rows", arr}}});
  return ok ? kOk : kCheckFailed;
}

int cmd_walk(const Common &c) {
  RunConfig cfg = load_config(c);
  const std::string s = "walk";
  uint64_t seed = cfg.get_u64(s, "seed", 1);
  uint64_t segments = cfg.get_u64(s, "trials", 100000);
  auto gammas = cfg.get_rational_list(s, "gammas", {rat(1, 50)});
  auto deltas = cfg.get_rational_list(s, "deltas", {rat(1, 2)});
  Rational tol = cfg.get_rational(s, "tolerance", rat(2, 100));
  cfg.reject_unused(s);
  if (segments < 1) throw ConfigError("trials must be >= 1");
  std::vector<WalkParams> cells;
  for (const auto &g : gammas) {
    for (const auto &d : deltas) {
      try {
        cells.push_back(walk_params(g, d));
      } catch (const std::invalid_argument &e) {
        throw ConfigError("walk cell gamma=" + to_string(g) + " delta=" + to_string(d) + ": " + e.what());
      }
    }
  }
  std::ostringstream body;
  body << "gamma,delta,t,R,delta_prime,p_up,segments,mean_length,closed_form,rel_err,up_fraction,up_ci_lo,up_ci_hi,ok\n";
  body.precision(17);
  nlohmann::json arr = nlohmann::json::array();
  bool all_ok = true;
  RngStream root(seed);
  for (size_t ci = 0; ci < cells.size(); ++ci) {
    const WalkParams &w = cells[ci];
    double g = w.gamma.get_d();
    std::vector<uint64_t> len(segments);
    std::vector<uint8_t> up(segments);
    RngStream cell_rng = root.child(ci);
    parallel_for(segments, c.jobs, [&](uint64_t i) {
      RngStream r = cell_rng.child(i);
      RawWalk rw = raw_walk(g, w.t, r);
      len[i] = rw.steps.size();
      up[i] = rw.up;
    });
    uint64_t total = 0, ups = 0;
    for (uint64_t i = 0; i < segments; ++i) {
      total += len[i];
      ups += up[i];
    }
    double mean = static_cast<double>(total) / segments, closed = expected_hitting_steps(g, w.t);
    double rel = std::abs(mean / closed - 1);
    Interval ci99 = wilson_ci(ups, segments, 0.99);
    bool ok = rel <= tol.get_d() && ci99.contains(w.p_up.get_d());
    all_ok = all_ok && ok;
    double frac = static_cast<double>(ups) / segments;
    body << to_string(w.gamma) << "," << to_string(w.delta) << "," << w.t << "," << w.r.get_d() << ","
         << w.delta_prime.get_d() << "," << w.p_up.get_d() << "," << segments << "," << mean << "," << closed << ","
         << rel << "," << frac << "," << ci99.lo << "," << ci99.hi << "," << (ok ? 1 : 0) << "\n";
    arr.push_back({{"gamma", to_string(w.gamma)}, {"delta", to_string(w.delta)}, {"t", w.t}, {"R", to_string(w.r)},
                   {"delta_prime", to_string(w.delta_prime)}, {"p_up", to_string(w.p_up)}, {"segments", segments},
                   {"mean_length", mean}, {"closed_form", closed}, {"rel_err", rel}, {"up_fraction", frac},
                   {"up_ci99", {ci99.lo, ci99.hi}}, {"ok", ok}});
    std::cout << "gamma=" << to_string(w.gamma) << " delta=" << to_string(w.delta) << " t=" << w.t << " mean=" << mean
              << " closed=" << closed << (ok ? " ok" : " FAILED") << "\n";
  }
  write_report(c, cfg, {s, s, body.str(), {{"cells", arr}}});
  return all_ok ? kOk : kCheckFailed;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Noisy-oracle query complexity laboratory"};
  app.set_version_flag("--version", kVersion);
  Common c;
  app.add_option("--config", c.config_path, "key = value config file");
  app.add_option("--seed", c.seed, "root seed");
  app.add_option("--trials", c.trials, "trials or samples per cell");
  app.add_option("--out", c.out, "output directory")->capture_default_str();
  app.add_option("--mode", c.mode, "numeric mode")->check(CLI::IsMember({"rational", "real"}))->capture_default_str();
  app.add_option("--jobs", c.jobs, "worker threads; output does not depend on it")
      ->check(CLI::Range(1u, 256u))
      ->capture_default_str();
  app.require_subcommand(1);

  std::string suite;
  auto *verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "distances, osim, walk, channels, appendixA or all")->required();
  auto *counter = app.add_subcommand("counterexample", "composition counterexample table");
  auto *channels = app.add_subcommand("channels", "noisy vs erasure channel sweep");
  auto *walk = app.add_subcommand("walk", "bias-conversion walk statistics");
  for (auto *sub : {verify, counter, channels, walk}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*verify) return cmd_verify(c, suite);
    if (*counter) return cmd_counterexample(c);
    if (*channels) return cmd_channels(c);
    if (*walk) return cmd_walk(c);
  } catch (const ConfigError &e) {
    std::cerr << "nqsim: config error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception &e) {
    std::cerr << "nqsim: " << e.what() << "\n";
    return kCheckFailed;
  }
  return kUsage;
}
