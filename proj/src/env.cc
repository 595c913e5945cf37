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
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>

namespace dilemma {
namespace {

void Require(bool ok, const char* field, const char* what) {
  if (!ok) {
    throw std::invalid_argument(std::string(field) + ": " + what);
  }
}

std::uint64_t Fnv1a(std::uint64_t h, std::uint64_t value) {
  for (int i = 0; i < 8; ++i) {
    h ^= (value >> (8 * i)) & 0xff;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Cell Shift(Cell cell, AgentAction action) {
  switch (action) {
    case AgentAction::kMoveUp: --cell.row; break;
    case AgentAction::kMoveDown: ++cell.row; break;
    case AgentAction::kMoveLeft: --cell.col; break;
    case AgentAction::kMoveRight: ++cell.col; break;
    default: break;
  }
  return cell;
}

}  // namespace

CellIndex ToCellIndex(int row, int col) {
  if (!GridGeometry::Contains(row, col)) {
    throw std::out_of_range("invalid coordinate (" + std::to_string(row) +
                            ", " + std::to_string(col) + ")");
  }
  if (row < kHalfRows) return row * kCols + col + 1;
  return -((row - kHalfRows) * kCols + col + 1);
}

Cell FromCellIndex(CellIndex index) {
  if (index == 0 || index > kCellsPerHalf || index < -kCellsPerHalf) {
    throw std::out_of_range("invalid cell index " + std::to_string(index));
  }
  if (index > 0) return {(index - 1) / kCols, (index - 1) % kCols};
  const int k = -index - 1;
  return {kHalfRows + k / kCols, k % kCols};
}

std::string_view ActionName(AgentAction action) {
  switch (action) {
    case AgentAction::kMoveUp: return "up";
    case AgentAction::kMoveDown: return "down";
    case AgentAction::kMoveLeft: return "left";
    case AgentAction::kMoveRight: return "right";
    case AgentAction::kStay: return "stay";
    case AgentAction::kCollect: return "collect";
    case AgentAction::kClean: return "clean";
  }
  return "?";
}

void EnvParams::Validate() const {
  Require(delta_g >= 0 && delta_g <= 1, "env.delta_g", "must lie in [0, 1]");
  Require(sigma > 0 && sigma <= 1, "env.sigma", "must lie in (0, 1]");
  Require(delta_sg > 0, "env.delta_sg", "must be > 0");
  Require(r_g > 0, "env.r_g", "must be > 0");
  Require(r_a > r_g, "env.r_a", "must be > r_g");
  Require(view >= 1, "env.view", "must be >= 1");
  Require(initial_apple_density >= 0 && initial_apple_density <= 1,
          "env.initial_apple_density", "must lie in [0, 1]");
  Require(initial_garbage_density >= 0 && initial_garbage_density <= 1,
          "env.initial_garbage_density", "must lie in [0, 1]");
}

double AppleGrowthRate(int n_garbage, const EnvParams& params) {
  const double rate =
      -params.sigma / params.delta_sg * n_garbage + params.sigma;
  return std::clamp(rate, 0.0, params.sigma);
}

EnvState::EnvState(const EnvParams& params, std::vector<Cell> placements,
                   std::uint64_t seed)
    : params_(params),
      cells_(kNumCells, CellContent::kEmpty),
      positions_(std::move(placements)),
      rng_(seed) {
  for (const Cell& cell : positions_) {
    if (!GridGeometry::Contains(cell.row, cell.col)) {
      throw std::out_of_range("invalid placement (" +
                              std::to_string(cell.row) + ", " +
                              std::to_string(cell.col) + ")");
    }
  }
}

Cell EnvState::position(int agent) const {
  if (agent < 0 || agent >= num_agents()) {
    throw std::out_of_range("unknown agent " + std::to_string(agent));
  }
  return positions_[agent];
}

void EnvState::Set(Cell cell, CellContent content) {
  if (!GridGeometry::Contains(cell.row, cell.col)) {
    throw std::out_of_range("invalid coordinate");
  }
  const Half half = GridGeometry::HalfOf(cell);
  if ((content == CellContent::kApple && half != Half::kApple) ||
      (content == CellContent::kGarbage && half != Half::kGarbage)) {
    throw std::invalid_argument("resource not allowed in this half");
  }
  CellContent& slot = cells_[GridGeometry::Flat(cell)];
  if (slot == CellContent::kApple) --n_apples_;
  if (slot == CellContent::kGarbage) --n_garbage_;
  slot = content;
  if (slot == CellContent::kApple) ++n_apples_;
  if (slot == CellContent::kGarbage) ++n_garbage_;
}

void EnvState::MoveAgent(int agent, Cell cell) {
  if (agent < 0 || agent >= num_agents()) {
    throw std::out_of_range("unknown agent " + std::to_string(agent));
  }
  if (!GridGeometry::Contains(cell.row, cell.col)) {
    throw std::out_of_range("invalid coordinate");
  }
  positions_[agent] = cell;
}

bool EnvState::CheckInvariants() const {
  int garbage = 0;
  int apples = 0;
  for (int flat = 0; flat < kNumCells; ++flat) {
    const Half half = GridGeometry::HalfOf(GridGeometry::FromFlat(flat));
    if (cells_[flat] == CellContent::kGarbage) {
      if (half != Half::kGarbage) return false;
      ++garbage;
    } else if (cells_[flat] == CellContent::kApple) {
      if (half != Half::kApple) return false;
      ++apples;
    }
  }
  if (garbage != n_garbage_ || apples != n_apples_) return false;
  return std::all_of(positions_.begin(), positions_.end(), [](Cell c) {
    return GridGeometry::Contains(c.row, c.col);
  });
}

std::uint64_t EnvState::Hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (CellContent c : cells_) h = Fnv1a(h, static_cast<std::uint64_t>(c));
  for (const Cell& p : positions_) {
    h = Fnv1a(h, static_cast<std::uint64_t>(p.row));
    h = Fnv1a(h, static_cast<std::uint64_t>(p.col));
  }
  h = Fnv1a(h, static_cast<std::uint64_t>(n_garbage_));
  h = Fnv1a(h, static_cast<std::uint64_t>(n_apples_));
  // The next draw stands in for the engine state.
  Rng probe = rng_;
  return Fnv1a(h, probe.NextU64());
}

EnvState ResetEnv(const EnvParams& params, std::vector<Cell> placements,
                  std::uint64_t seed) {
  EnvState state(params, std::move(placements), seed);
  for (int flat = 0; flat < kNumCells; ++flat) {
    const Cell cell = GridGeometry::FromFlat(flat);
    if (GridGeometry::HalfOf(cell) == Half::kGarbage) {
      if (state.rng().Bernoulli(params.initial_garbage_density)) {
        state.Set(cell, CellContent::kGarbage);
      }
    } else if (state.rng().Bernoulli(params.initial_apple_density)) {
      state.Set(cell, CellContent::kApple);
    }
  }
  return state;
}

void SpawnResources(EnvState& state) {
  const double delta_g = state.params().delta_g;
  const double delta_a = AppleGrowthRate(state.n_garbage(), state.params());
  for (int flat = 0; flat < kNumCells; ++flat) {
    const Cell cell = GridGeometry::FromFlat(flat);
    if (state.At(cell) != CellContent::kEmpty) continue;
    if (GridGeometry::HalfOf(cell) == Half::kGarbage) {
      if (state.rng().Bernoulli(delta_g)) {
        state.Set(cell, CellContent::kGarbage);
      }
    } else if (state.rng().Bernoulli(delta_a)) {
      state.Set(cell, CellContent::kApple);
    }
  }
}

Observation Observe(const EnvState& state, int agent) {
  const Cell center = state.position(agent);
  const int view = state.params().view;
  Observation obs;
  obs.center_index = ToCellIndex(center);
  obs.view = view;
  obs.window.reserve((2 * view + 1) * (2 * view + 1));
  for (int dr = -view; dr <= view; ++dr) {
    for (int dc = -view; dc <= view; ++dc) {
      const int r = center.row + dr;
      const int c = center.col + dc;
      if (!GridGeometry::Contains(r, c)) {
        obs.window.push_back(Observed::kBorder);
        continue;
      }
      switch (state.At({r, c})) {
        case CellContent::kEmpty: obs.window.push_back(Observed::kEmpty); break;
        case CellContent::kApple: obs.window.push_back(Observed::kApple); break;
        case CellContent::kGarbage:
          obs.window.push_back(Observed::kGarbage);
          break;
      }
    }
  }
  return obs;
}

std::vector<double> ResolveActions(EnvState& state,
                                   std::span<const AgentAction> actions) {
  const int n = state.num_agents();
  if (static_cast<int>(actions.size()) != n) {
    throw std::invalid_argument("expected " + std::to_string(n) +
                                " actions, got " +
                                std::to_string(actions.size()));
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(state.rng().UniformInt(i + 1));
    std::swap(order[i], order[j]);
  }

  const EnvParams& params = state.params();
  std::vector<double> rewards(n, 0.0);
  for (int agent : order) {
    const Cell here = state.position(agent);
    switch (actions[agent]) {
      case AgentAction::kMoveUp:
      case AgentAction::kMoveDown:
      case AgentAction::kMoveLeft:
      case AgentAction::kMoveRight: {
        const Cell next = Shift(here, actions[agent]);
        if (GridGeometry::Contains(next.row, next.col)) {
          state.MoveAgent(agent, next);
        }
        break;
      }
      case AgentAction::kStay:
        break;
      case AgentAction::kCollect:
        if (state.At(here) == CellContent::kApple) {
          state.Set(here, CellContent::kEmpty);
          rewards[agent] = params.r_a;
        }
        break;
      case AgentAction::kClean: {
        int removed = 0;
        const int r0 = std::max(0, here.row - params.view);
        const int r1 = std::min(kRows - 1, here.row + params.view);
        const int c0 = std::max(0, here.col - params.view);
        const int c1 = std::min(kCols - 1, here.col + params.view);
        for (int r = r0; r <= r1; ++r) {
          for (int c = c0; c <= c1; ++c) {
            if (state.At({r, c}) == CellContent::kGarbage) {
              state.Set({r, c}, CellContent::kEmpty);
              ++removed;
            }
          }
        }
        rewards[agent] = removed * params.r_g;
        break;
      }
    }
  }
  return rewards;
}

std::vector<double> EnvStep(EnvState& state,
                            std::span<const AgentAction> actions) {
  std::vector<double> rewards = ResolveActions(state, actions);
  SpawnResources(state);
  return rewards;
}

}  // namespace dilemma
