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

#include "dilemma/population.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dilemma {
namespace {

// Table floor for low rewarders: a single apple never satisfies them.
constexpr double kLowFloor = 10;

double Draw(const TargetRange& range, Rng& rng) {
  if (range.min == range.max) return range.min;
  return range.max - rng.Uniform() * (range.max - range.min);
}

}  // namespace

std::string_view AttributeName(GroupAttribute attribute) {
  switch (attribute) {
    case GroupAttribute::kHeterogeneous: return "hetero";
    case GroupAttribute::kHomogeneousHigh: return "homo-high";
    case GroupAttribute::kHomogeneousLow: return "homo-low";
  }
  return "?";
}

std::optional<GroupAttribute> ParseAttribute(std::string_view name) {
  for (GroupAttribute a :
       {GroupAttribute::kHeterogeneous, GroupAttribute::kHomogeneousHigh,
        GroupAttribute::kHomogeneousLow}) {
    if (AttributeName(a) == name) return a;
  }
  return std::nullopt;
}

std::string_view PlacementName(PlacementMode mode) {
  return mode == PlacementMode::kSplit ? "split" : "uniform";
}

std::optional<PlacementMode> ParsePlacement(std::string_view name) {
  if (name == "split") return PlacementMode::kSplit;
  if (name == "uniform") return PlacementMode::kUniform;
  return std::nullopt;
}

void TargetRewardSpec::Validate() const {
  for (const auto& [range, name] :
       {std::pair{low, "population.low_range"},
        std::pair{high, "population.high_range"}}) {
    if (!std::isfinite(range.min) || !std::isfinite(range.max) ||
        range.min <= 0 || range.min > range.max) {
      throw std::invalid_argument(std::string(name) +
                                  ": need 0 < min <= max");
    }
  }
  if (low.max >= high.min) {
    throw std::invalid_argument(
        "population.low_range: must lie below population.high_range");
  }
}

void TargetRewardSpec::ValidateClassification(double r_a, double r_g,
                                              int tau) const {
  Validate();
  const bool low_above_floor =
      low.min > kLowFloor || (low.min == kLowFloor && low.max > kLowFloor);
  if (!low_above_floor || low.max > r_g * tau) {
    throw std::invalid_argument(
        "population.low_range: low rewarders need 10 < R <= r_g * tau = " +
        std::to_string(r_g * tau));
  }
  if (high.min < r_a * tau) {
    throw std::invalid_argument(
        "population.high_range: high rewarders need R >= r_a * tau = " +
        std::to_string(r_a * tau));
  }
}

std::vector<double> SampleTargetRewards(GroupAttribute attribute,
                                        const TargetRewardSpec& spec,
                                        int n_agents, Rng& rng) {
  spec.Validate();
  if (n_agents < 1) throw std::invalid_argument("n_agents must be >= 1");
  std::vector<double> targets;
  targets.reserve(n_agents);
  for (int i = 0; i < n_agents; ++i) {
    bool low = false;
    switch (attribute) {
      case GroupAttribute::kHeterogeneous:
        low = i < NumLowRewarders(n_agents);
        break;
      case GroupAttribute::kHomogeneousHigh: low = false; break;
      case GroupAttribute::kHomogeneousLow: low = true; break;
    }
    targets.push_back(Draw(low ? spec.low : spec.high, rng));
  }
  return targets;
}

std::vector<Cell> InitialPlacement(PlacementMode mode, int n_agents,
                                   Rng& rng) {
  std::vector<Cell> cells;
  cells.reserve(n_agents);
  for (int i = 0; i < n_agents; ++i) {
    if (mode == PlacementMode::kUniform) {
      cells.push_back(GridGeometry::FromFlat(
          static_cast<int>(rng.UniformInt(kNumCells))));
      continue;
    }
    const int k = static_cast<int>(rng.UniformInt(kCellsPerHalf));
    const bool garbage = i < NumLowRewarders(n_agents);
    cells.push_back(FromCellIndex(garbage ? k + 1 : -(k + 1)));
  }
  return cells;
}

}  // namespace dilemma
