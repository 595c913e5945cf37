// Copyright 2026 The Dilemma Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dilemma/env.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <vector>

#include "doctest.h"

namespace dilemma {
namespace {

EnvParams Barren() {
  EnvParams p;
  p.delta_g = 0;
  p.sigma = 0;
  p.initial_apple_density = 0;
  p.initial_garbage_density = 0;
  return p;
}

// Brute-force reference for the signed index: garbage cells count up from +1
// in reading order, apple cells count down from -1.
int OracleIndex(int row, int col) {
  int k = 0;
  for (int r = 0; r < kRows; ++r) {
    for (int c = 0; c < kCols; ++c) {
      if ((r < kHalfRows) != (row < kHalfRows)) continue;
      ++k;
      if (r == row && c == col) return row < kHalfRows ? k : -k;
    }
  }
  return 0;
}

TEST_CASE("cell index examples") {
  CHECK(ToCellIndex(0, 0) == 1);
  CHECK(ToCellIndex(6, 0) == -1);
  CHECK(ToCellIndex(11, 19) == -120);
  CHECK(ToCellIndex(5, 19) == 120);
}

TEST_CASE("cell index matches enumeration oracle and is a bijection") {
  std::set<int> seen;
  for (int r = 0; r < kRows; ++r) {
    for (int c = 0; c < kCols; ++c) {
      const int idx = ToCellIndex(r, c);
      CHECK(idx == OracleIndex(r, c));
      CHECK(FromCellIndex(idx) == Cell{r, c});
      seen.insert(idx);
    }
  }
  CHECK(seen.size() == kNumCells);
  CHECK(*seen.begin() == -120);
  CHECK(*seen.rbegin() == 120);
  CHECK(seen.count(0) == 0);
}

TEST_CASE("cell index rejects invalid input") {
  CHECK_THROWS_AS(ToCellIndex(-1, 0), std::out_of_range);
  CHECK_THROWS_AS(ToCellIndex(12, 0), std::out_of_range);
  CHECK_THROWS_AS(ToCellIndex(0, 20), std::out_of_range);
  CHECK_THROWS_AS(FromCellIndex(0), std::out_of_range);
  CHECK_THROWS_AS(FromCellIndex(121), std::out_of_range);
  CHECK_THROWS_AS(FromCellIndex(-121), std::out_of_range);
}

TEST_CASE("apple growth rate") {
  EnvParams p;
  p.sigma = 0.1;
  p.delta_sg = 60;
  CHECK(AppleGrowthRate(0, p) == p.sigma);
  CHECK(AppleGrowthRate(60, p) == 0.0);
  CHECK(AppleGrowthRate(120, p) == 0.0);
  CHECK(AppleGrowthRate(30, p) == doctest::Approx(0.05).epsilon(1e-15));
  double prev = p.sigma;
  for (int n = 0; n <= 120; ++n) {
    const double g = AppleGrowthRate(n, p);
    CHECK(g <= prev);
    CHECK(g >= 0);
    prev = g;
  }
}

TEST_CASE("params validation names the field") {
  EnvParams p;
  CHECK_NOTHROW(p.Validate());
  p.sigma = 0;
  CHECK_THROWS_WITH(p.Validate(), doctest::Contains("env.sigma"));
  p = EnvParams();
  p.view = 0;
  CHECK_THROWS_WITH(p.Validate(), doctest::Contains("env.view"));
  p = EnvParams();
  p.delta_g = 1.5;
  CHECK_THROWS_WITH(p.Validate(), doctest::Contains("env.delta_g"));
}

TEST_CASE("reset with zero densities gives an empty grid") {
  EnvState s = ResetEnv(Barren(), {{0, 0}, {6, 0}}, 7);
  CHECK(s.n_apples() == 0);
  CHECK(s.n_garbage() == 0);
  CHECK(s.CheckInvariants());
}

TEST_CASE("reset is deterministic") {
  EnvParams p;
  p.initial_garbage_density = 0.2;
  EnvState a = ResetEnv(p, {{1, 1}, {8, 3}}, 99);
  EnvState b = ResetEnv(p, {{1, 1}, {8, 3}}, 99);
  CHECK(a == b);
  CHECK(a.Hash() == b.Hash());
  EnvState c = ResetEnv(p, {{1, 1}, {8, 3}}, 100);
  CHECK(a.Hash() != c.Hash());
}

TEST_CASE("reset rejects invalid placements") {
  CHECK_THROWS_AS(ResetEnv(EnvParams(), {{12, 0}}, 1), std::out_of_range);
  CHECK_THROWS_AS(ResetEnv(EnvParams(), {{0, -1}}, 1), std::out_of_range);
}

TEST_CASE("initial apple count averages the binomial mean") {
  EnvParams p;  // density 0.3 over 120 apple cells
  double total = 0;
  const int kSeeds = 10000;
  for (int seed = 0; seed < kSeeds; ++seed) {
    total += ResetEnv(p, {}, seed).n_apples();
  }
  CHECK(std::abs(total / kSeeds - 36.0) <= 1.0);
}

TEST_CASE("spawn with zero probabilities changes nothing") {
  // One piece of garbage saturates growth, so delta_a is zero.
  EnvParams p = Barren();
  p.sigma = 0.1;
  p.delta_sg = 1;
  EnvState s = ResetEnv(p, {}, 3);
  s.Set({0, 0}, CellContent::kGarbage);
  s.Set({7, 7}, CellContent::kApple);
  REQUIRE(AppleGrowthRate(s.n_garbage(), p) == 0.0);
  const std::vector<CellContent> before(s.cells().begin(), s.cells().end());
  SpawnResources(s);
  CHECK(std::equal(before.begin(), before.end(), s.cells().begin()));
}

TEST_CASE("spawn with certain garbage fills the garbage half") {
  EnvParams p = Barren();
  p.delta_g = 1;
  EnvState s = ResetEnv(p, {}, 4);
  SpawnResources(s);
  CHECK(s.n_garbage() == kCellsPerHalf);
  CHECK(s.CheckInvariants());
}

TEST_CASE("spawn only fills empty cells and respects halves") {
  EnvParams p;
  p.delta_g = 0.5;
  p.sigma = 0.5;
  p.delta_sg = 1e9;
  EnvState s = ResetEnv(p, {}, 5);
  for (int i = 0; i < 10; ++i) {
    SpawnResources(s);
    CHECK(s.CheckInvariants());
  }
}

TEST_CASE("apple spawn mean matches the binomial oracle") {
  // 100 empty apple cells at delta_a = 0.05 should yield 5 apples on average.
  EnvParams p = Barren();
  p.sigma = 0.05;
  p.delta_sg = 1e9;
  double total = 0;
  const int kTrials = 10000;
  for (int t = 0; t < kTrials; ++t) {
    EnvState s = ResetEnv(p, {}, 1000 + t);
    for (int col = 0; col < kCols; ++col) s.Set({6, col}, CellContent::kApple);
    REQUIRE(s.n_apples() == 20);
    SpawnResources(s);
    total += s.n_apples() - 20;
  }
  CHECK(std::abs(total / kTrials - 5.0) <= 0.1);
}

TEST_CASE("spawn rate is computed from the garbage count before the pass") {
  EnvParams p = Barren();
  p.sigma = 1;
  p.delta_sg = 1;  // one piece of garbage stops all apple growth
  p.delta_g = 1;
  EnvState s = ResetEnv(p, {}, 6);
  SpawnResources(s);  // garbage half fills, but apples were allowed this pass
  CHECK(s.n_apples() == kCellsPerHalf);
  CHECK(s.n_garbage() == kCellsPerHalf);
}

TEST_CASE("observation at a corner clips to the border") {
  EnvParams p = Barren();
  p.view = 1;
  EnvState s = ResetEnv(p, {{0, 0}}, 1);
  const Observation obs = Observe(s, 0);
  CHECK(obs.center_index == 1);
  CHECK(obs.window.size() == 9);
  CHECK(std::count(obs.window.begin(), obs.window.end(), Observed::kBorder) ==
        5);
  CHECK(obs.At(-1, -1) == Observed::kBorder);
  CHECK(obs.At(1, 1) == Observed::kEmpty);
}

TEST_CASE("observation in the middle of an empty grid") {
  EnvParams p = Barren();
  p.view = 1;
  EnvState s = ResetEnv(p, {{5, 10}}, 1);
  s.Set({6, 11}, CellContent::kApple);
  s.Set({4, 9}, CellContent::kGarbage);
  const Observation obs = Observe(s, 0);
  CHECK(obs.At(1, 1) == Observed::kApple);
  CHECK(obs.At(-1, -1) == Observed::kGarbage);
  CHECK(obs.At(0, 0) == Observed::kEmpty);
  CHECK_THROWS_AS(Observe(s, 1), std::out_of_range);
}

TEST_CASE("moves clamp at walls") {
  EnvState s = ResetEnv(Barren(), {{0, 0}, {11, 19}, {3, 3}}, 1);
  const std::vector<AgentAction> actions = {
      AgentAction::kMoveUp, AgentAction::kMoveRight, AgentAction::kMoveDown};
  const auto rewards = ResolveActions(s, actions);
  CHECK(s.position(0) == Cell{0, 0});
  CHECK(s.position(1) == Cell{11, 19});
  CHECK(s.position(2) == Cell{4, 3});
  CHECK(rewards == std::vector<double>{0, 0, 0});
}

TEST_CASE("moves can cross between halves") {
  EnvState s = ResetEnv(Barren(), {{5, 0}, {6, 0}}, 1);
  const std::vector<AgentAction> actions = {AgentAction::kMoveDown,
                                            AgentAction::kMoveUp};
  ResolveActions(s, actions);
  CHECK(s.position(0) == Cell{6, 0});
  CHECK(s.position(1) == Cell{5, 0});
}

TEST_CASE("collect pays for an apple and nothing for an empty cell") {
  EnvState s = ResetEnv(Barren(), {{7, 7}, {8, 8}}, 1);
  s.Set({7, 7}, CellContent::kApple);
  const std::vector<AgentAction> actions = {AgentAction::kCollect,
                                            AgentAction::kCollect};
  const auto rewards = ResolveActions(s, actions);
  CHECK(rewards[0] == 10);
  CHECK(rewards[1] == 0);
  CHECK(s.At({7, 7}) == CellContent::kEmpty);
  CHECK(s.n_apples() == 0);
}

TEST_CASE("clean removes garbage in view and pays per piece") {
  EnvState s = ResetEnv(Barren(), {{2, 2}}, 1);
  s.Set({0, 0}, CellContent::kGarbage);
  s.Set({4, 4}, CellContent::kGarbage);
  s.Set({2, 3}, CellContent::kGarbage);
  s.Set({5, 5}, CellContent::kGarbage);  // outside a view of 2
  const std::vector<AgentAction> actions = {AgentAction::kClean};
  const auto rewards = ResolveActions(s, actions);
  CHECK(rewards[0] == 15);
  CHECK(s.n_garbage() == 1);
  CHECK(s.At({5, 5}) == CellContent::kGarbage);
}

TEST_CASE("clean with no garbage pays nothing") {
  EnvState s = ResetEnv(Barren(), {{9, 9}}, 1);
  const std::vector<AgentAction> actions = {AgentAction::kClean};
  CHECK(ResolveActions(s, actions)[0] == 0);
}

TEST_CASE("contested apple goes to exactly one agent") {
  // Over many seeds both permutation orders occur; each pays out once.
  int first_wins = 0;
  int second_wins = 0;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    EnvState s = ResetEnv(Barren(), {{9, 4}, {9, 4}}, seed);
    s.Set({9, 4}, CellContent::kApple);
    const std::vector<AgentAction> actions = {AgentAction::kCollect,
                                              AgentAction::kCollect};
    const auto rewards = ResolveActions(s, actions);
    CHECK(rewards[0] + rewards[1] == 10);
    CHECK((rewards[0] == 0 || rewards[1] == 0));
    if (rewards[0] == 10) ++first_wins;
    if (rewards[1] == 10) ++second_wins;
  }
  CHECK(first_wins > 0);
  CHECK(second_wins > 0);
}

TEST_CASE("action count must match agent count") {
  EnvState s = ResetEnv(Barren(), {{0, 0}, {1, 1}}, 1);
  const std::vector<AgentAction> one = {AgentAction::kStay};
  CHECK_THROWS_AS(ResolveActions(s, one), std::invalid_argument);
}

TEST_CASE("all stay with no spawning leaves the state unchanged") {
  EnvParams p = Barren();
  p.initial_apple_density = 0.5;
  EnvState s = ResetEnv(p, {{0, 0}, {7, 7}}, 11);
  const std::vector<CellContent> before(s.cells().begin(), s.cells().end());
  const std::vector<AgentAction> actions(2, AgentAction::kStay);
  const auto rewards = EnvStep(s, actions);
  CHECK(rewards == std::vector<double>{0, 0});
  CHECK(std::equal(before.begin(), before.end(), s.cells().begin()));
}

TEST_CASE("collected apple is gone before the spawn pass") {
  // With sigma zero the removed apple cannot regrow in the same step.
  EnvState s = ResetEnv(Barren(), {{10, 10}}, 2);
  s.Set({10, 10}, CellContent::kApple);
  const std::vector<AgentAction> actions = {AgentAction::kCollect};
  EnvStep(s, actions);
  CHECK(s.n_apples() == 0);
}

TEST_CASE("set enforces resource locality") {
  EnvState s = ResetEnv(Barren(), {}, 1);
  CHECK_THROWS_AS(s.Set({0, 0}, CellContent::kApple), std::invalid_argument);
  CHECK_THROWS_AS(s.Set({6, 0}, CellContent::kGarbage), std::invalid_argument);
}

TEST_CASE("random trajectories conserve rewards and keep counts") {
  EnvParams p;
  p.delta_g = 0.1;
  p.sigma = 0.3;
  p.initial_garbage_density = 0.2;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    EnvState s = ResetEnv(p, {{0, 0}, {2, 5}, {5, 19}, {6, 1}, {9, 9}, {11, 0}},
                          seed);
    Rng actions_rng(seed * 31 + 1);
    for (int t = 0; t < 150; ++t) {
      std::vector<AgentAction> actions;
      for (int i = 0; i < s.num_agents(); ++i) {
        actions.push_back(kAllActions[actions_rng.UniformInt(kNumActions)]);
      }
      const int apples = s.n_apples();
      const int garbage = s.n_garbage();
      const auto rewards = ResolveActions(s, actions);
      double paid = 0;
      for (double r : rewards) paid += r;
      CHECK(paid == p.r_a * (apples - s.n_apples()) +
                        p.r_g * (garbage - s.n_garbage()));
      CHECK(s.CheckInvariants());
      SpawnResources(s);
      CHECK(s.CheckInvariants());
    }
  }
}

TEST_CASE("golden seeded trajectory is reproducible") {
  auto run = [] {
    EnvState s = ResetEnv(EnvParams(), {{0, 0}, {3, 7}, {5, 19},
                                        {6, 0}, {9, 9}, {11, 19}},
                          2024);
    Rng actions_rng(42);
    std::vector<std::uint64_t> hashes;
    for (int t = 0; t < 100; ++t) {
      std::vector<AgentAction> actions;
      for (int i = 0; i < s.num_agents(); ++i) {
        actions.push_back(kAllActions[actions_rng.UniformInt(kNumActions)]);
      }
      EnvStep(s, actions);
      hashes.push_back(s.Hash());
    }
    return hashes;
  };
  CHECK(run() == run());
}

}  // namespace
}  // namespace dilemma
