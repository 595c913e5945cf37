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

#ifndef DILEMMA_POPULATION_H_
#define DILEMMA_POPULATION_H_

#include <optional>
#include <string_view>
#include <vector>

#include "dilemma/env.h"
#include "dilemma/rng.h"

namespace dilemma {

enum class GroupAttribute { kHeterogeneous, kHomogeneousHigh, kHomogeneousLow };

std::string_view AttributeName(GroupAttribute attribute);
std::optional<GroupAttribute> ParseAttribute(std::string_view name);

// Closed interval of target rewards. Draws land in (min, max], or exactly on
// min when the interval is a point.
struct TargetRange {
  double min = 0;
  double max = 0;
  friend bool operator==(const TargetRange&, const TargetRange&) = default;
};

struct TargetRewardSpec {
  TargetRange low{10, 25};
  TargetRange high{50, 100};

  // Basic sanity: positive, ordered, and low strictly below high.
  void Validate() const;
  // Low rewarders must satisfy 10 < R <= r_g * tau and high rewarders
  // R >= r_a * tau.
  void ValidateClassification(double r_a, double r_g, int tau) const;

  friend bool operator==(const TargetRewardSpec&,
                         const TargetRewardSpec&) = default;
};

enum class PlacementMode {
  kSplit,    // first half of the agents in the garbage half, rest in apples
  kUniform,  // every agent anywhere on the map
};

std::string_view PlacementName(PlacementMode mode);
std::optional<PlacementMode> ParsePlacement(std::string_view name);

// Number of low rewarders among the first agents of a heterogeneous group.
inline int NumLowRewarders(int n_agents) { return n_agents / 2; }

// Heterogeneous: the first n/2 agents draw from `low`, the rest from `high`.
// Homogeneous groups draw every agent from one range.
std::vector<double> SampleTargetRewards(GroupAttribute attribute,
                                        const TargetRewardSpec& spec,
                                        int n_agents, Rng& rng);

// Split mode puts the first n/2 agents uniformly in the garbage half and the
// rest uniformly in the apple half. Co-occupancy is allowed.
std::vector<Cell> InitialPlacement(PlacementMode mode, int n_agents, Rng& rng);

}  // namespace dilemma

#endif  // DILEMMA_POPULATION_H_
