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

// Tabular Q-learning agent with a satisficing learning rate.
//
// In the dynamic mode the step size is
//
//   eta = max(target - recent, 0) / target * beta
//
// where `recent` is the sum of the agent's last `window_len` rewards. An
// agent whose recent rewards meet its target stops updating; one that falls
// short learns at up to beta.

#ifndef DILEMMA_AGENT_H_
#define DILEMMA_AGENT_H_

#include <array>
#include <map>
#include <vector>

#include "dilemma/env.h"
#include "dilemma/rng.h"

namespace dilemma {

using StateIndex = int;
using ActionValues = std::array<double, kNumActions>;

enum class LearningRateMode { kDynamic, kFixed, kRandomPolicy };

class QTable {
 public:
  explicit QTable(double initial_value = 0) { initial_.fill(initial_value); }

  // Unseen states read as the initial value for every action.
  const ActionValues& Values(StateIndex s) const;
  double Get(StateIndex s, AgentAction a) const {
    return Values(s)[static_cast<int>(a)];
  }
  void Set(StateIndex s, AgentAction a, double value);
  double MaxValue(StateIndex s) const;
  bool AllFinite() const;
  std::size_t num_states() const { return values_.size(); }
  const std::map<StateIndex, ActionValues>& entries() const { return values_; }

  friend bool operator==(const QTable&, const QTable&) = default;

 private:
  ActionValues initial_;
  std::map<StateIndex, ActionValues> values_;
};

struct AgentParams {
  double target_reward = 50;
  double discount = 0.9;
  double beta = 0.001;
  int window_len = 5;
  LearningRateMode lr_mode = LearningRateMode::kDynamic;
  double fixed_rate = 0.001;  // used by kFixed only
  double epsilon = 0.05;
  double q_init = 0;  // value of every unvisited Q(s, a)

  // Throws std::invalid_argument naming the first offending field.
  void Validate() const;

  friend bool operator==(const AgentParams&, const AgentParams&) = default;
};

// Ring buffer of the most recent rewards; the oldest entry is evicted once
// `capacity` rewards are held.
class RewardWindow {
 public:
  explicit RewardWindow(int capacity);

  void Push(double reward);
  void Clear();
  // Sums oldest to newest. Empty window sums to 0.
  double Sum() const;
  int size() const { return size_; }
  int capacity() const { return static_cast<int>(buffer_.size()); }
  // Oldest first.
  std::vector<double> Contents() const;

  friend bool operator==(const RewardWindow&, const RewardWindow&) = default;

 private:
  std::vector<double> buffer_;
  int head_ = 0;  // slot of the oldest entry
  int size_ = 0;
};

struct AgentState {
  explicit AgentState(const AgentParams& p)
      : q(p.q_init), params(p), window(p.window_len) {}

  QTable q;
  AgentParams params;
  RewardWindow window;
  double cumulative_total = 0;

  friend bool operator==(const AgentState&, const AgentState&) = default;
};

// Default encoder: the signed position index of the agent's cell. The window
// contents are ignored, giving 240 tabular states.
StateIndex EncodePosition(const Observation& obs);
using StateEncoder = StateIndex (*)(const Observation&);

// Sum of the buffered rewards.
inline double StageCumulativeReward(const RewardWindow& window) {
  return window.Sum();
}

// max(target - stage, 0) / target * beta. Throws std::invalid_argument when
// target <= 0 or beta <= 0.
double LearningRate(double target, double stage, double beta);

// Step size the agent would use for its next update: computed from the
// window as it stands, before the next reward is pushed.
double CurrentLearningRate(const AgentState& agent);

// One Q-learning step:
//   Q(s, a) += eta * (r + gamma * max_a' Q(s_next, a') - Q(s, a))
// then pushes r into the reward window and the lifetime total. Random-policy
// agents skip the Q change but still record the reward. Returns the eta used.
// Throws std::invalid_argument for a non-finite reward and std::domain_error
// if the update produces a non-finite value.
double QUpdate(AgentState& agent, StateIndex s, AgentAction a, double r,
               StateIndex s_next);

// Epsilon-greedy over Q(s, .) with uniform tie-breaking; uniform for
// random-policy agents.
AgentAction SelectAction(const AgentState& agent, StateIndex s, Rng& rng);

}  // namespace dilemma

#endif  // DILEMMA_AGENT_H_
