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

// Episode and experiment loops plus the metrics behind the result tables.
//
// One replica (seed) samples its target rewards once, then runs `episodes`
// episodes of `trials_per_episode` synchronized steps. Q-tables persist across
// episodes; the grid, placements and reward windows are reset at the start of
// each episode. Replicas are independent and may run on separate threads.

#ifndef DILEMMA_EXPERIMENT_H_
#define DILEMMA_EXPERIMENT_H_

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <optional>
#include <vector>

#include "dilemma/agent.h"
#include "dilemma/env.h"
#include "dilemma/population.h"
#include "dilemma/rng.h"

namespace dilemma {

std::string_view ConditionName(LearningRateMode mode);
std::optional<LearningRateMode> ParseCondition(std::string_view name);

struct ExperimentConfig {
  LearningRateMode condition = LearningRateMode::kDynamic;
  double fixed_learning_rate = 0.001;
  GroupAttribute attribute = GroupAttribute::kHeterogeneous;
  PlacementMode placement = PlacementMode::kSplit;
  int n_agents = 6;
  int episodes = 300;
  int trials_per_episode = 100;
  int n_seeds = 5;
  std::uint64_t base_seed = 1;
  int tau = 5;
  double beta = 0.001;
  double gamma = 0.9;
  double epsilon = 0.05;
  // Optimistic start: every unvisited Q(s, a) reads as this value.
  double q_init = 50;
  // Episodes at the end of a run that count as "final".
  int final_window = 50;
  EnvParams env;
  TargetRewardSpec population;

  // Throws std::invalid_argument naming the offending key.
  void Validate() const;
  // Checks the target ranges against the low/high rewarder thresholds for
  // this config's tau. Not part of Validate() so that tau sweeps can keep
  // the base targets.
  void ValidateTargets() const {
    population.ValidateClassification(env.r_a, env.r_g, tau);
  }

  AgentParams MakeAgentParams(double target_reward) const;
  std::uint64_t ReplicaSeed(int replica) const {
    return base_seed + static_cast<std::uint64_t>(replica);
  }

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

using OccupancyGrid = std::array<std::int64_t, kNumCells>;

struct EpisodeMetrics {
  std::vector<double> agent_rewards;
  // Cell each agent acted from, counted once per trial.
  std::vector<OccupancyGrid> occupancy;
  // Sum over trials of the per-trial agent-order sums.
  double collective_return = 0;
};

// Per-trial hook for traces: joint action, rewards, and the step sizes used.
struct TrialRecord {
  int trial = 0;
  std::span<const AgentAction> actions;
  std::span<const double> rewards;
  std::span<const double> learning_rates;
};
using TrialObserver = std::function<void(const TrialRecord&)>;

// Clears every agent's reward window, then for each trial: observe and
// encode, select actions, step the environment, update each agent with its
// own reward. Throws std::invalid_argument on an agent/env count mismatch.
EpisodeMetrics RunEpisode(EnvState& env, std::vector<AgentState>& agents,
                          int trials, Rng& policy_rng,
                          const TrialObserver& observer = {},
                          StateEncoder encoder = EncodePosition);

struct Inequality {
  double range = 0;
  double gini = 0;
  friend bool operator==(const Inequality&, const Inequality&) = default;
};

struct MetricsRecord {
  std::uint64_t seed = 0;
  std::vector<double> targets;
  std::vector<double> per_episode_collective_return;
  std::vector<double> per_agent_total;
  std::vector<OccupancyGrid> occupancy;
  // Occupancy restricted to the final window of episodes.
  std::vector<OccupancyGrid> final_occupancy;
  Inequality inequality;
  double final_return = 0;

  friend bool operator==(const MetricsRecord&, const MetricsRecord&) = default;
};

struct Aggregate {
  std::vector<double> mean;  // per episode, across seeds
  std::vector<double> sd;    // sample standard deviation, 0 for one seed
  double final_mean = 0;
  double final_sd = 0;
  double gini_mean = 0;
  double range_mean = 0;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<MetricsRecord> replicas;
  Aggregate aggregate;
};

// Runs one seed. Throws std::runtime_error if any metric is non-finite.
MetricsRecord RunReplica(const ExperimentConfig& config, int replica);

// `threads` <= 0 picks the hardware concurrency. Output does not depend on
// the thread count.
ExperimentResult RunExperiment(const ExperimentConfig& config,
                               int threads = 1);

struct SweepSpec {
  ExperimentConfig base;
  std::vector<int> tau_values{1, 2, 5, 10, 20, 50};
};

struct SweepRow {
  int tau = 0;
  double mean_final_return = 0;
  double sd = 0;
};

// One experiment per tau on the base config's seeds; rows ascending by tau.
std::vector<SweepRow> RunSweep(const SweepSpec& sweep, int threads = 1);

// Mean of the last `window` entries (all of them if fewer).
double FinalMean(std::span<const double> series, int window);

double Mean(std::span<const double> xs);
// Sample standard deviation; 0 for fewer than two values.
double SampleSd(std::span<const double> xs);

// Gini coefficient: sum_ij |x_i - x_j| / (2 n^2 mean). Zero for an all-zero
// vector. Throws std::invalid_argument on negative or non-finite input.
double Gini(std::span<const double> totals);
double Range(std::span<const double> totals);

// Fraction of the visits that fall in `half`. Throws std::invalid_argument
// when there are no visits.
double OccupancyFraction(const OccupancyGrid& occupancy, Half half);

}  // namespace dilemma

#endif  // DILEMMA_EXPERIMENT_H_
