// Copyright 2026 The SBPlan Authors
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

#ifndef SBPLAN_MAZE_H_
#define SBPLAN_MAZE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sbplan/rng.h"
#include "sbplan/types.h"

namespace sbplan {

enum class MazeId { kOpen, kUmaze, kMedium, kLarge };

std::string_view MazeName(MazeId id);
// Accepts "open", "umaze", "medium", "large" (and the "maze2d-" prefixed
// forms). Throws kUnknownMaze otherwise.
MazeId ParseMazeId(std::string_view name);

// Point-mass dynamics and controller constants.
inline constexpr double kDt = 0.02;
inline constexpr double kMaxAction = 1.0;
inline constexpr double kMaxSpeed = 5.0;
inline constexpr double kKp = 10.0;
inline constexpr double kKd = 2.0;

struct Cell {
  int row = 0;
  int col = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

// Occupancy grid with precomputed all-pairs shortest paths over free cells.
// x runs along columns and y along rows; cell (r, c) covers
// [c, c+1) x [r, r+1) scaled by cell_size.
class MazeSpec {
 public:
  // Parses '#' (wall) and '.' (free) rows separated by newlines. Throws
  // kInvalidArgument if the border is open, fewer than two cells are free,
  // or the free cells are not 4-connected.
  static MazeSpec FromAscii(MazeId id, std::string_view ascii, int episode_cap);

  MazeId id() const { return id_; }
  std::string_view name() const { return MazeName(id_); }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double cell_size() const { return cell_size_; }
  double goal_radius() const { return goal_radius_; }
  int episode_cap() const { return episode_cap_; }

  bool IsWall(int row, int col) const;
  bool IsWall(const Cell& c) const { return IsWall(c.row, c.col); }
  bool IsFree(const Vec2& p) const { return !IsWall(CellOf(p)); }
  Cell CellOf(const Vec2& p) const;
  Vec2 CellCenter(const Cell& c) const;
  const std::vector<Cell>& free_cells() const { return free_cells_; }

  // Breadth-first-search distance in cells; -1 if unreachable.
  int Distance(const Cell& from, const Cell& to) const;
  // First cell after `from` on a shortest path to `to`. Returns `from` when
  // from == to and std::nullopt when `to` is unreachable.
  std::optional<Cell> NextHop(const Cell& from, const Cell& to) const;

 private:
  int FreeIndex(const Cell& c) const;

  MazeId id_ = MazeId::kOpen;
  int rows_ = 0;
  int cols_ = 0;
  double cell_size_ = 1.0;
  double goal_radius_ = 0.5;
  int episode_cap_ = 600;
  std::vector<uint8_t> walls_;
  std::vector<Cell> free_cells_;
  std::vector<int> free_index_;  // grid index -> free index or -1
  std::vector<int> dist_;        // n_free x n_free
  std::vector<int> next_hop_;    // n_free x n_free, free index
};

MazeSpec MakeMaze(MazeId id);
MazeSpec MakeMaze(std::string_view id);
std::string ToAscii(const MazeSpec& spec);

struct SimState {
  Vec2 position = Vec2::Zero();
  Vec2 velocity = Vec2::Zero();
  Vec2 goal = Vec2::Zero();
  int steps_elapsed = 0;
};

struct StepResult {
  SimState state;
  double reward = 0.0;
};

Vec2 ClipAction(const Vec2& action);
double GoalReward(const MazeSpec& spec, const Vec2& position, const Vec2& goal);

// Semi-implicit Euler with axis-separated wall collisions. Actions are clipped
// to [-kMaxAction, kMaxAction] per component, never rejected.
StepResult Step(const MazeSpec& spec, const SimState& state, const Vec2& action);

// Clipped PD law a = kp (target - p) - kd v shared by every controller.
Vec2 PdAction(const Vec2& target, const Vec2& position, const Vec2& velocity);

// PD action toward the next cell center on a shortest grid path, or toward
// the goal itself once it is in the current or an adjacent cell.
Vec2 ExpertAction(const MazeSpec& spec, const SimState& state);

struct EpisodeResult {
  double total_reward = 0.0;
  int steps = 0;
  bool reached = false;
  std::optional<double> normalized_score;
};

struct StartGoal {
  Vec2 start = Vec2::Zero();
  Vec2 goal = Vec2::Zero();
};

// Distinct free cell centers, each jittered by up to +-0.25 cell.
StartGoal SampleStartGoal(const MazeSpec& spec, Rng& rng);
// The (start, goal) pair of episode `episode` under `seed`; shared by every
// policy so scores are compared over matched pairs.
StartGoal EpisodeStartGoal(const MazeSpec& spec, uint64_t seed, int episode);

EpisodeResult RunExpertEpisode(const MazeSpec& spec, const StartGoal& sg);
EpisodeResult RunRandomEpisode(const MazeSpec& spec, const StartGoal& sg,
                               Rng& rng);
Rng RandomPolicyRng(uint64_t seed, int episode);

// 100 * (total - random_ref) / (expert_ref - random_ref), unclipped.
// Throws kDegenerateReference when expert_ref <= random_ref.
double NormalizedScore(double total, double random_ref, double expert_ref);

struct ReferenceScores {
  std::string maze;
  int episode_cap = 0;
  int episodes = 0;
  uint64_t seed = 0;
  double random_ref = 0.0;
  double expert_ref = 0.0;
};

// Mean returns of the uniform-random policy and the expert over the same
// `episodes` seeded (start, goal) pairs. Requires episodes >= 100.
ReferenceScores ComputeReferenceScores(const MazeSpec& spec, int episodes,
                                       uint64_t seed);

}  // namespace sbplan

#endif  // SBPLAN_MAZE_H_
