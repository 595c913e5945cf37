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

#include "dilemma/agent.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dilemma {
namespace {

void Require(bool ok, const char* field, const char* what) {
  if (!ok) {
    throw std::invalid_argument(std::string(field) + ": " + what);
  }
}

}  // namespace

const ActionValues& QTable::Values(StateIndex s) const {
  auto it = values_.find(s);
  return it == values_.end() ? initial_ : it->second;
}

void QTable::Set(StateIndex s, AgentAction a, double value) {
  auto [it, inserted] = values_.try_emplace(s, initial_);
  it->second[static_cast<int>(a)] = value;
}

double QTable::MaxValue(StateIndex s) const {
  const ActionValues& v = Values(s);
  return *std::max_element(v.begin(), v.end());
}

bool QTable::AllFinite() const {
  for (const auto& [s, v] : values_) {
    for (double x : v) {
      if (!std::isfinite(x)) return false;
    }
  }
  return true;
}

void AgentParams::Validate() const {
  Require(target_reward > 0 && std::isfinite(target_reward), "target_reward",
          "must be > 0");
  Require(discount >= 0 && discount < 1, "gamma", "must lie in [0, 1)");
  Require(beta > 0 && std::isfinite(beta), "beta", "must be > 0");
  Require(window_len >= 1, "tau", "must be >= 1");
  Require(fixed_rate >= 0 && fixed_rate <= 1, "fixed_learning_rate",
          "must lie in [0, 1]");
  Require(epsilon >= 0 && epsilon <= 1, "epsilon", "must lie in [0, 1]");
  Require(std::isfinite(q_init), "q_init", "must be finite");
}

RewardWindow::RewardWindow(int capacity) {
  if (capacity < 1) {
    throw std::invalid_argument("tau: window length must be >= 1");
  }
  buffer_.assign(capacity, 0.0);
}

void RewardWindow::Push(double reward) {
  const int cap = capacity();
  if (size_ < cap) {
    buffer_[(head_ + size_) % cap] = reward;
    ++size_;
  } else {
    buffer_[head_] = reward;
    head_ = (head_ + 1) % cap;
  }
}

void RewardWindow::Clear() {
  std::fill(buffer_.begin(), buffer_.end(), 0.0);
  head_ = 0;
  size_ = 0;
}

double RewardWindow::Sum() const {
  double sum = 0;
  for (int i = 0; i < size_; ++i) sum += buffer_[(head_ + i) % capacity()];
  return sum;
}

std::vector<double> RewardWindow::Contents() const {
  std::vector<double> out;
  out.reserve(size_);
  for (int i = 0; i < size_; ++i) out.push_back(buffer_[(head_ + i) % capacity()]);
  return out;
}

StateIndex EncodePosition(const Observation& obs) { return obs.center_index; }

double LearningRate(double target, double stage, double beta) {
  if (!(target > 0)) {
    throw std::invalid_argument("target reward must be > 0");
  }
  if (!(beta > 0)) throw std::invalid_argument("beta must be > 0");
  return std::max(target - stage, 0.0) / target * beta;
}

double CurrentLearningRate(const AgentState& agent) {
  switch (agent.params.lr_mode) {
    case LearningRateMode::kDynamic:
      return LearningRate(agent.params.target_reward,
                          StageCumulativeReward(agent.window),
                          agent.params.beta);
    case LearningRateMode::kFixed:
      return agent.params.fixed_rate;
    case LearningRateMode::kRandomPolicy:
      return 0.0;
  }
  return 0.0;
}

double QUpdate(AgentState& agent, StateIndex s, AgentAction a, double r,
               StateIndex s_next) {
  if (!std::isfinite(r)) throw std::invalid_argument("non-finite reward");
  const double eta = CurrentLearningRate(agent);
  if (agent.params.lr_mode != LearningRateMode::kRandomPolicy && eta != 0.0) {
    const double old = agent.q.Get(s, a);
    const double target = r + agent.params.discount * agent.q.MaxValue(s_next);
    const double updated = old + eta * (target - old);
    if (!std::isfinite(updated)) {
      throw std::domain_error("Q update produced a non-finite value");
    }
    agent.q.Set(s, a, updated);
  }
  agent.window.Push(r);
  agent.cumulative_total += r;
  return eta;
}

AgentAction SelectAction(const AgentState& agent, StateIndex s, Rng& rng) {
  if (agent.params.lr_mode == LearningRateMode::kRandomPolicy ||
      rng.Uniform() < agent.params.epsilon) {
    return kAllActions[rng.UniformInt(kNumActions)];
  }
  const ActionValues& v = agent.q.Values(s);
  const double best = *std::max_element(v.begin(), v.end());
  std::array<int, kNumActions> ties{};
  int n_ties = 0;
  for (int i = 0; i < kNumActions; ++i) {
    if (v[i] == best) ties[n_ties++] = i;
  }
  const int pick = n_ties == 1 ? ties[0] : ties[rng.UniformInt(n_ties)];
  return kAllActions[pick];
}

}  // namespace dilemma
