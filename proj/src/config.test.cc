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

#include "nqsim/config.h"

#include <sstream>

#include "gtest/gtest.h"

using namespace nqsim;

namespace {

RunConfig parse(const std::string &text) {
  std::istringstream in(text);
  return RunConfig::parse(in);
}

}  // namespace

TEST(config, SectionsAndTopLevel) {
  RunConfig c = parse("seed = 7  # comment\n[counterexample]\nk_list = 12, 14\ngap = 3/2\n[walk]\ngammas = 0.02\n");
  EXPECT_EQ(c.get_u64("counterexample", "seed", 1), 7u);
  EXPECT_EQ(c.get_u64_list("counterexample", "k_list", {}), (std::vector<uint64_t>{12, 14}));
  EXPECT_EQ(c.get_rational("counterexample", "gap", 1), rat(3, 2));
  EXPECT_EQ(c.get_rational("counterexample", "budget", rat(1, 3)), rat(1, 3));
  EXPECT_NO_THROW(c.reject_unused("counterexample"));
  EXPECT_EQ(c.resolved().at("budget"), "1/3");
  EXPECT_EQ(c.resolved().at("k_list"), "12,14");
}

TEST(config, EmptyListAndOverrides) {
  RunConfig c = parse("k_list =\ntrials = 5\n");
  EXPECT_TRUE(c.get_u64_list("x", "k_list", {12}).empty());
  c.set("trials", "9");
  EXPECT_EQ(c.get_u64("x", "trials", 1), 9u);
}

TEST(config, Malformed) {
  EXPECT_THROW(parse("just words\n"), ConfigError);
  EXPECT_THROW(parse("[bad section\n"), ConfigError);
  EXPECT_THROW(parse("a = 1\na = 2\n"), ConfigError);
  EXPECT_THROW(parse("a b = 1\n"), ConfigError);
  RunConfig c = parse("trials = lots\n");
  EXPECT_THROW(c.get_u64("x", "trials", 1), ConfigError);
  RunConfig u = parse("tirals = 5\n");
  EXPECT_THROW(u.reject_unused("x"), ConfigError);
  EXPECT_THROW(RunConfig::load("/nonexistent/config.txt"), ConfigError);
}

TEST(config, OtherSectionsAreIgnored) {
  RunConfig c = parse("[walk]\nfoo = 1\n");
  EXPECT_NO_THROW(c.reject_unused("channels"));
  EXPECT_THROW(c.reject_unused("walk"), ConfigError);
}
