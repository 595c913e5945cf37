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

#include "dilemma/experiment.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>

namespace dilemma {
namespace {

void Require(bool ok, const char* key, const char* what) {
  if (!ok) throw std::invalid_argument(std::string(key) + ": " + what);
}

void CheckFinite(double x, const char* what, std::uint64_t seed) {
  if (!std::isfinite(x)) {
    throw std::runtime_error(std::string("non-finite ") + what +
                             " in replica seed " + std::to_string(seed));
  }
}

// Runs `fn(i)` for i in [0, n) on up to `threads` workers. Results are
// written by index, so scheduling order cannot leak into the output.
template <typename Fn>
void ParallelFor(int n, int threads, Fn fn) {
  if (threads <= 0) {
    threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> workers;
  workers.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::string_view ConditionName(LearningRateMode mode) {
  switch (mode) {
    case LearningRateMode::kDynamic: return "dynamic";
    case LearningRateMode::kFixed: return "fixed";
    case LearningRateMode::kRandomPolicy: return "random";
  }
  return "?";
}

std::optional<LearningRateMode> ParseCondition(std::string_view name) {
  for (LearningRateMode m :
       {LearningRateMode::kDynamic, LearningRateMode::kFixed,
        LearningRateMode::kRandomPolicy}) {
    if (ConditionName(m) == name) return m;
  }
  return std::nullopt;
}

void ExperimentConfig::Validate() const {
  Require(episodes >= 1, "episodes", "must be >= 1");
  Require(trials_per_episode >= 1, "trials_per_episode", "must be >= 1");
  Require(n_seeds >= 1, "n_seeds", "must be >= 1");
  Require(n_agents >= 1, "n_agents", "must be >= 1");
  Require(tau >= 1, "tau", "must be >= 1");
  Require(final_window >= 1, "final_window", "must be >= 1");
  env.Validate();
  population.Validate();
  MakeAgentParams(population.low.min).Validate();
}

AgentParams ExperimentConfig::MakeAgentParams(double target_reward) const {
  AgentParams p;
  p.target_reward = target_reward;
  p.discount = gamma;
  p.beta = beta;
  p.window_len = tau;
  p.lr_mode = condition;
  p.fixed_rate = fixed_learning_rate;
  p.epsilon = epsilon;
  p.q_init = q_init;
  return p;
}

EpisodeMetrics RunEpisode(EnvState& env, std::vector<AgentState>& agents,
                          int trials, Rng& policy_rng,
                          const TrialObserver& observer,
                          StateEncoder encoder) {
  const int n = static_cast<int>(agents.size());
  if (n != env.num_agents()) {
    throw std::invalid_argument("agent count " + std::to_string(n) +
                                " does not match environment count " +
                                std::to_string(env.num_agents()));
  }
  EpisodeMetrics metrics;
  metrics.agent_rewards.assign(n, 0.0);
  metrics.occupancy.assign(n, OccupancyGrid{});
  for (AgentState& agent : agents) agent.window.Clear();

  std::vector<StateIndex> states(n);
  std::vector<AgentAction> actions(n);
  std::vector<double> etas(n);
  for (int t = 0; t < trials; ++t) {
    for (int i = 0; i < n; ++i) {
      states[i] = encoder(Observe(env, i));
      ++metrics.occupancy[i][GridGeometry::Flat(env.position(i))];
    }
    for (int i = 0; i < n; ++i) {
      actions[i] = SelectAction(agents[i], states[i], policy_rng);
    }
    const std::vector<double> rewards = EnvStep(env, actions);
    double trial_sum = 0;
    for (int i = 0; i < n; ++i) {
      const StateIndex next = encoder(Observe(env, i));
      etas[i] = QUpdate(agents[i], states[i], actions[i], rewards[i], next);
      metrics.agent_rewards[i] += rewards[i];
      trial_sum += rewards[i];
    }
    metrics.collective_return += trial_sum;
    if (observer) observer({t, actions, rewards, etas});
  }
  return metrics;
}

MetricsRecord RunReplica(const ExperimentConfig& config, int replica) {
  config.Validate();
  MetricsRecord record;
  record.seed = config.ReplicaSeed(replica);
  Rng population_rng(DeriveSeed(record.seed, Stream::kPopulation));
  Rng env_stream(DeriveSeed(record.seed, Stream::kEnvironment));
  Rng policy_rng(DeriveSeed(record.seed, Stream::kPolicy));

  const int n = config.n_agents;
  record.targets = SampleTargetRewards(config.attribute, config.population, n,
                                       population_rng);
  std::vector<AgentState> agents;
  agents.reserve(n);
  for (double target : record.targets) {
    agents.emplace_back(config.MakeAgentParams(target));
  }

  record.per_agent_total.assign(n, 0.0);
  record.occupancy.assign(n, OccupancyGrid{});
  record.final_occupancy.assign(n, OccupancyGrid{});
  record.per_episode_collective_return.reserve(config.episodes);
  const int final_start = std::max(0, config.episodes - config.final_window);
  for (int e = 0; e < config.episodes; ++e) {
    EnvState env = ResetEnv(config.env,
                            InitialPlacement(config.placement, n, population_rng),
                            env_stream.NextU64());
    const EpisodeMetrics m =
        RunEpisode(env, agents, config.trials_per_episode, policy_rng);
    CheckFinite(m.collective_return, "collective return", record.seed);
    record.per_episode_collective_return.push_back(m.collective_return);
    for (int i = 0; i < n; ++i) {
      record.per_agent_total[i] += m.agent_rewards[i];
      for (int c = 0; c < kNumCells; ++c) {
        record.occupancy[i][c] += m.occupancy[i][c];
        if (e >= final_start) record.final_occupancy[i][c] += m.occupancy[i][c];
      }
    }
  }
  for (double total : record.per_agent_total) {
    CheckFinite(total, "agent total", record.seed);
  }
  record.inequality.range = Range(record.per_agent_total);
  record.inequality.gini = Gini(record.per_agent_total);
  record.final_return =
      FinalMean(record.per_episode_collective_return, config.final_window);
  CheckFinite(record.final_return, "final return", record.seed);
  return record;
}

ExperimentResult RunExperiment(const ExperimentConfig& config, int threads) {
  config.Validate();
  ExperimentResult result;
  result.config = config;
  result.replicas.resize(config.n_seeds);
  ParallelFor(config.n_seeds, threads, [&](int i) {
    result.replicas[i] = RunReplica(config, i);
  });

  Aggregate& agg = result.aggregate;
  agg.mean.resize(config.episodes);
  agg.sd.resize(config.episodes);
  std::vector<double> column(config.n_seeds);
  for (int e = 0; e < config.episodes; ++e) {
    for (int s = 0; s < config.n_seeds; ++s) {
      column[s] = result.replicas[s].per_episode_collective_return[e];
    }
    agg.mean[e] = Mean(column);
    agg.sd[e] = SampleSd(column);
  }
  std::vector<double> finals, ginis, ranges;
  for (const MetricsRecord& r : result.replicas) {
    finals.push_back(r.final_return);
    ginis.push_back(r.inequality.gini);
    ranges.push_back(r.inequality.range);
  }
  agg.final_mean = Mean(finals);
  agg.final_sd = SampleSd(finals);
  agg.gini_mean = Mean(ginis);
  agg.range_mean = Mean(ranges);
  return result;
}

std::vector<SweepRow> RunSweep(const SweepSpec& sweep, int threads) {
  if (sweep.tau_values.empty()) {
    throw std::invalid_argument("taus: at least one value required");
  }
  std::set<int> taus;
  for (int tau : sweep.tau_values) {
    Require(tau >= 1, "taus", "every tau must be >= 1");
    Require(taus.insert(tau).second, "taus", "values must be distinct");
  }
  // Targets are classified against the base tau only; swept taus keep the
  // same targets.
  sweep.base.Validate();
  sweep.base.ValidateTargets();

  std::vector<SweepRow> rows;
  for (int tau : taus) {
    ExperimentConfig config = sweep.base;
    config.tau = tau;
    const ExperimentResult result = RunExperiment(config, threads);
    rows.push_back({tau, result.aggregate.final_mean, result.aggregate.final_sd});
  }
  return rows;
}

double FinalMean(std::span<const double> series, int window) {
  if (series.empty()) return 0;
  const std::size_t k = std::min<std::size_t>(series.size(), window);
  return Mean(series.subspan(series.size() - k));
}

double Mean(std::span<const double> xs) {
  if (xs.empty()) return 0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
}

double SampleSd(std::span<const double> xs) {
  if (xs.size() < 2) return 0;
  const double m = Mean(xs);
  double ss = 0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / (xs.size() - 1));
}

double Gini(std::span<const double> totals) {
  double sum = 0;
  for (double x : totals) {
    if (!std::isfinite(x) || x < 0) {
      throw std::invalid_argument("gini: totals must be finite and >= 0");
    }
    sum += x;
  }
  if (totals.empty() || sum == 0) return 0;
  double diff = 0;
  for (double a : totals) {
    for (double b : totals) diff += std::abs(a - b);
  }
  const double n = static_cast<double>(totals.size());
  return diff / (2.0 * n * sum);
}

double Range(std::span<const double> totals) {
  if (totals.empty()) return 0;
  const auto [lo, hi] = std::minmax_element(totals.begin(), totals.end());
  return *hi - *lo;
}

double OccupancyFraction(const OccupancyGrid& occupancy, Half half) {
  std::int64_t total = 0;
  std::int64_t in_half = 0;
  for (int c = 0; c < kNumCells; ++c) {
    total += occupancy[c];
    if (GridGeometry::HalfOf(GridGeometry::FromFlat(c)) == half) {
      in_half += occupancy[c];
    }
  }
  if (total == 0) {
    throw std::invalid_argument("occupancy_fraction: no visits recorded");
  }
  return static_cast<double>(in_half) / static_cast<double>(total);
}

}  // namespace dilemma
