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

// The apple/garbage gridworld.
//
// The map is 12 rows by 20 columns. Rows 0-5 form the garbage half, rows 6-11
// the apple half. Garbage spawns at a constant per-cell rate; apples spawn at
// a rate that falls linearly with the amount of garbage on the map and is
// zero once the garbage count reaches the saturation count. Agents see a
// square window of radius `view` around their cell. Clean removes every piece
// of garbage in that window and pays r_g per piece; Collect takes the apple
// under the agent and pays r_a.

#ifndef DILEMMA_ENV_H_
#define DILEMMA_ENV_H_

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "dilemma/rng.h"

namespace dilemma {

inline constexpr int kRows = 12;
inline constexpr int kCols = 20;
inline constexpr int kNumCells = kRows * kCols;
inline constexpr int kHalfRows = kRows / 2;
inline constexpr int kCellsPerHalf = kHalfRows * kCols;

struct Cell {
  int row = 0;
  int col = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

enum class Half { kGarbage, kApple };

// Signed position index: garbage-half cells map to +1..+120, apple-half
// cells to -1..-120, row-major within each half. Zero is never produced.
using CellIndex = int;

struct GridGeometry {
  static constexpr int rows = kRows;
  static constexpr int cols = kCols;

  static bool Contains(int row, int col) {
    return row >= 0 && row < rows && col >= 0 && col < cols;
  }
  static Half HalfOf(Cell cell) {
    return cell.row < kHalfRows ? Half::kGarbage : Half::kApple;
  }
  static int Flat(Cell cell) { return cell.row * cols + cell.col; }
  static Cell FromFlat(int flat) { return {flat / cols, flat % cols}; }
};

// Throws std::out_of_range for coordinates outside the grid.
CellIndex ToCellIndex(int row, int col);
inline CellIndex ToCellIndex(Cell cell) {
  return ToCellIndex(cell.row, cell.col);
}
// Inverse of ToCellIndex. Throws std::out_of_range for 0 or |index| > 120.
Cell FromCellIndex(CellIndex index);

enum class CellContent : std::uint8_t { kEmpty, kApple, kGarbage };

// What an agent sees in one window slot. kBorder marks slots outside the map.
enum class Observed : std::uint8_t { kEmpty, kApple, kGarbage, kBorder };

enum class AgentAction : std::uint8_t {
  kMoveUp,
  kMoveDown,
  kMoveLeft,
  kMoveRight,
  kStay,
  kCollect,
  kClean,
};
inline constexpr int kNumActions = 7;
inline constexpr std::array<AgentAction, kNumActions> kAllActions = {
    AgentAction::kMoveUp,   AgentAction::kMoveDown, AgentAction::kMoveLeft,
    AgentAction::kMoveRight, AgentAction::kStay,    AgentAction::kCollect,
    AgentAction::kClean};

std::string_view ActionName(AgentAction action);

struct EnvParams {
  double delta_g = 0.01;  // garbage spawn probability per empty cell
  double sigma = 1.0;     // maximum apple spawn probability per empty cell
  double delta_sg = 60;   // garbage count at which apples stop growing
  double r_a = 10;
  double r_g = 5;
  int view = 2;
  double initial_apple_density = 0.3;
  double initial_garbage_density = 0.0;

  // Throws std::invalid_argument naming the first offending field.
  void Validate() const;

  friend bool operator==(const EnvParams&, const EnvParams&) = default;
};

// Apple spawn probability for the given garbage count:
// clamp(sigma - sigma / delta_sg * n_garbage, 0, sigma).
double AppleGrowthRate(int n_garbage, const EnvParams& params);

struct Observation {
  CellIndex center_index = 0;
  int view = 0;
  // Row-major (2 * view + 1)^2 window centered on the agent.
  std::vector<Observed> window;

  Observed At(int drow, int dcol) const {
    const int side = 2 * view + 1;
    return window[(drow + view) * side + (dcol + view)];
  }
};

class EnvState {
 public:
  EnvState(const EnvParams& params, std::vector<Cell> placements,
           std::uint64_t seed);

  const EnvParams& params() const { return params_; }
  int num_agents() const { return static_cast<int>(positions_.size()); }
  int n_garbage() const { return n_garbage_; }
  int n_apples() const { return n_apples_; }
  std::span<const Cell> positions() const { return positions_; }
  Cell position(int agent) const;
  CellContent At(Cell cell) const { return cells_[GridGeometry::Flat(cell)]; }
  std::span<const CellContent> cells() const { return cells_; }
  Rng& rng() { return rng_; }

  // Places `content` at `cell`, keeping counts in sync. Throws
  // std::invalid_argument if the content is not allowed in that half.
  void Set(Cell cell, CellContent content);
  void MoveAgent(int agent, Cell cell);

  // Recounts the grid and compares with the cached counts; also checks
  // resource locality and agent positions.
  bool CheckInvariants() const;

  // FNV-1a digest over the grid, positions, counts and RNG state.
  std::uint64_t Hash() const;

  friend bool operator==(const EnvState&, const EnvState&) = default;

 private:
  EnvParams params_;
  std::vector<CellContent> cells_;
  std::vector<Cell> positions_;
  int n_garbage_ = 0;
  int n_apples_ = 0;
  Rng rng_;
};

// Builds the grid for a new episode: apple-half cells hold an apple with
// probability initial_apple_density, garbage-half cells hold garbage with
// probability initial_garbage_density. Throws std::out_of_range for a
// placement outside the grid.
EnvState ResetEnv(const EnvParams& params, std::vector<Cell> placements,
                  std::uint64_t seed);

// Each empty garbage-half cell turns to garbage with probability delta_g and
// each empty apple-half cell turns to an apple with the growth rate for the
// garbage count at the start of the pass.
void SpawnResources(EnvState& state);

Observation Observe(const EnvState& state, int agent);

// Applies one action per agent in a random order drawn from the environment
// stream and returns the per-agent rewards (indexed by agent, not by order).
std::vector<double> ResolveActions(EnvState& state,
                                   std::span<const AgentAction> actions);

// ResolveActions followed by SpawnResources.
std::vector<double> EnvStep(EnvState& state,
                            std::span<const AgentAction> actions);

}  // namespace dilemma

#endif  // DILEMMA_ENV_H_
