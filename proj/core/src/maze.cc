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

#include "sbplan/maze.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

#include "sbplan/error.h"

namespace sbplan {
namespace {

constexpr std::string_view kOpenLayout =
    "#######\n"
    "#.....#\n"
    "#.....#\n"
    "#.....#\n"
    "#######\n";

constexpr std::string_view kUmazeLayout =
    "#####\n"
    "#...#\n"
    "###.#\n"
    "#...#\n"
    "#####\n";

constexpr std::string_view kMediumLayout =
    "########\n"
    "#..##..#\n"
    "#..#...#\n"
    "##...###\n"
    "#..#...#\n"
    "#.#..#.#\n"
    "#...#..#\n"
    "########\n";

constexpr std::string_view kLargeLayout =
    "############\n"
    "#....#.....#\n"
    "#.##.#.#.#.#\n"
    "#......#...#\n"
    "#.####.###.#\n"
    "#..#.#.....#\n"
    "##.#.#.#.###\n"
    "#..#...#...#\n"
    "############\n";

constexpr double kJitter = 0.25;

}  // namespace

std::string_view MazeName(MazeId id) {
  switch (id) {
    case MazeId::kOpen:
      return "open";
    case MazeId::kUmaze:
      return "umaze";
    case MazeId::kMedium:
      return "medium";
    case MazeId::kLarge:
      return "large";
  }
  return "unknown";
}

MazeId ParseMazeId(std::string_view name) {
  if (name.starts_with("maze2d-")) name.remove_prefix(7);
  if (name == "open") return MazeId::kOpen;
  if (name == "umaze") return MazeId::kUmaze;
  if (name == "medium") return MazeId::kMedium;
  if (name == "large") return MazeId::kLarge;
  throw Error(ErrorCode::kUnknownMaze, "unknown maze '" + std::string(name) + "'");
}

MazeSpec MazeSpec::FromAscii(MazeId id, std::string_view ascii,
                             int episode_cap) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(ascii)};
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) lines.push_back(line);
  }
  if (lines.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty maze layout");
  }
  MazeSpec spec;
  spec.id_ = id;
  spec.episode_cap_ = episode_cap;
  spec.rows_ = static_cast<int>(lines.size());
  spec.cols_ = static_cast<int>(lines.front().size());
  spec.walls_.assign(static_cast<size_t>(spec.rows_) * spec.cols_, 1);
  spec.free_index_.assign(spec.walls_.size(), -1);
  for (int r = 0; r < spec.rows_; ++r) {
    if (static_cast<int>(lines[r].size()) != spec.cols_) {
      throw Error(ErrorCode::kInvalidArgument, "ragged maze layout");
    }
    for (int c = 0; c < spec.cols_; ++c) {
      const char ch = lines[r][c];
      if (ch != '#' && ch != '.') {
        throw Error(ErrorCode::kInvalidArgument,
                    std::string("bad maze character '") + ch + "'");
      }
      const bool wall = ch == '#';
      const bool border =
          r == 0 || c == 0 || r == spec.rows_ - 1 || c == spec.cols_ - 1;
      if (border && !wall) {
        throw Error(ErrorCode::kInvalidArgument, "maze border must be wall");
      }
      spec.walls_[r * spec.cols_ + c] = wall ? 1 : 0;
      if (!wall) {
        spec.free_index_[r * spec.cols_ + c] =
            static_cast<int>(spec.free_cells_.size());
        spec.free_cells_.push_back({r, c});
      }
    }
  }
  const int n = static_cast<int>(spec.free_cells_.size());
  if (n < 2) {
    throw Error(ErrorCode::kInvalidArgument, "maze needs >= 2 free cells");
  }

  // All-pairs BFS; next_hop_[a*n+b] is the first step from a toward b.
  spec.dist_.assign(static_cast<size_t>(n) * n, -1);
  spec.next_hop_.assign(static_cast<size_t>(n) * n, -1);
  constexpr int kDr[4] = {-1, 1, 0, 0};
  constexpr int kDc[4] = {0, 0, -1, 1};
  for (int target = 0; target < n; ++target) {
    // BFS from the target gives each cell its distance to the target; the
    // next hop from a cell is any neighbour one step closer.
    std::vector<int> dist(n, -1);
    std::deque<int> queue{target};
    dist[target] = 0;
    while (!queue.empty()) {
      const int cur = queue.front();
      queue.pop_front();
      const Cell cc = spec.free_cells_[cur];
      for (int k = 0; k < 4; ++k) {
        const int nb = spec.FreeIndex({cc.row + kDr[k], cc.col + kDc[k]});
        if (nb >= 0 && dist[nb] < 0) {
          dist[nb] = dist[cur] + 1;
          queue.push_back(nb);
        }
      }
    }
    for (int from = 0; from < n; ++from) {
      spec.dist_[from * n + target] = dist[from];
      if (dist[from] < 0) {
        throw Error(ErrorCode::kInvalidArgument,
                    "maze free cells are not 4-connected");
      }
      if (from == target) {
        spec.next_hop_[from * n + target] = from;
        continue;
      }
      const Cell fc = spec.free_cells_[from];
      for (int k = 0; k < 4; ++k) {
        const int nb = spec.FreeIndex({fc.row + kDr[k], fc.col + kDc[k]});
        if (nb >= 0 && dist[nb] == dist[from] - 1) {
          spec.next_hop_[from * n + target] = nb;
          break;
        }
      }
    }
  }
  return spec;
}

bool MazeSpec::IsWall(int row, int col) const {
  if (row < 0 || col < 0 || row >= rows_ || col >= cols_) return true;
  return walls_[row * cols_ + col] != 0;
}

Cell MazeSpec::CellOf(const Vec2& p) const {
  return {static_cast<int>(std::floor(p.y() / cell_size_)),
          static_cast<int>(std::floor(p.x() / cell_size_))};
}

Vec2 MazeSpec::CellCenter(const Cell& c) const {
  return {(c.col + 0.5) * cell_size_, (c.row + 0.5) * cell_size_};
}

int MazeSpec::FreeIndex(const Cell& c) const {
  if (c.row < 0 || c.col < 0 || c.row >= rows_ || c.col >= cols_) return -1;
  return free_index_[c.row * cols_ + c.col];
}

int MazeSpec::Distance(const Cell& from, const Cell& to) const {
  const int a = FreeIndex(from);
  const int b = FreeIndex(to);
  if (a < 0 || b < 0) return -1;
  return dist_[a * static_cast<int>(free_cells_.size()) + b];
}

std::optional<Cell> MazeSpec::NextHop(const Cell& from, const Cell& to) const {
  const int a = FreeIndex(from);
  const int b = FreeIndex(to);
  if (a < 0 || b < 0) return std::nullopt;
  const int hop = next_hop_[a * static_cast<int>(free_cells_.size()) + b];
  if (hop < 0) return std::nullopt;
  return free_cells_[hop];
}

MazeSpec MakeMaze(MazeId id) {
  switch (id) {
    case MazeId::kOpen:
      return MazeSpec::FromAscii(id, kOpenLayout, 600);
    case MazeId::kUmaze:
      return MazeSpec::FromAscii(id, kUmazeLayout, 600);
    case MazeId::kMedium:
      return MazeSpec::FromAscii(id, kMediumLayout, 600);
    case MazeId::kLarge:
      return MazeSpec::FromAscii(id, kLargeLayout, 800);
  }
  throw Error(ErrorCode::kUnknownMaze, "unknown maze id");
}

MazeSpec MakeMaze(std::string_view id) { return MakeMaze(ParseMazeId(id)); }

std::string ToAscii(const MazeSpec& spec) {
  std::string out;
  for (int r = 0; r < spec.rows(); ++r) {
    for (int c = 0; c < spec.cols(); ++c) out += spec.IsWall(r, c) ? '#' : '.';
    out += '\n';
  }
  return out;
}

Vec2 ClipAction(const Vec2& action) {
  return action.cwiseMax(-kMaxAction).cwiseMin(kMaxAction);
}

double GoalReward(const MazeSpec& spec, const Vec2& position,
                  const Vec2& goal) {
  return (position - goal).norm() <= spec.goal_radius() ? 1.0 : 0.0;
}

StepResult Step(const MazeSpec& spec, const SimState& state,
                const Vec2& action) {
  const Vec2 a = ClipAction(action);
  SimState next = state;
  next.velocity =
      (state.velocity + a * kDt).cwiseMax(-kMaxSpeed).cwiseMin(kMaxSpeed);

  // Move one axis at a time; a blocked axis stops at the wall face (on the
  // free side) and loses its velocity component.
  const double cs = spec.cell_size();
  for (int axis = 0; axis < 2; ++axis) {
    Vec2 moved = next.position;
    moved(axis) += next.velocity(axis) * kDt;
    if (spec.IsWall(spec.CellOf(moved))) {
      const double wall_cell = std::floor(moved(axis) / cs);
      if (next.velocity(axis) > 0.0) {
        moved(axis) = std::nextafter(wall_cell * cs,
                                     -std::numeric_limits<double>::infinity());
      } else {
        moved(axis) = (wall_cell + 1.0) * cs;
      }
      next.velocity(axis) = 0.0;
    }
    next.position = moved;
  }
  next.steps_elapsed = state.steps_elapsed + 1;
  return {next, GoalReward(spec, next.position, next.goal)};
}

Vec2 PdAction(const Vec2& target, const Vec2& position, const Vec2& velocity) {
  return ClipAction(kKp * (target - position) - kKd * velocity);
}

Vec2 ExpertAction(const MazeSpec& spec, const SimState& state) {
  const Cell here = spec.CellOf(state.position);
  const Cell goal_cell = spec.CellOf(state.goal);
  const std::optional<Cell> hop = spec.NextHop(here, goal_cell);
  if (!hop) {
    throw Error(ErrorCode::kUnreachableGoal, "goal not reachable from state");
  }
  const Vec2 target =
      (*hop == goal_cell) ? state.goal : spec.CellCenter(*hop);
  return PdAction(target, state.position, state.velocity);
}

StartGoal SampleStartGoal(const MazeSpec& spec, Rng& rng) {
  const auto& cells = spec.free_cells();
  std::uniform_int_distribution<int> pick(0, static_cast<int>(cells.size()) - 1);
  std::uniform_real_distribution<double> jitter(-kJitter, kJitter);
  const int s = pick(rng);
  int g = pick(rng);
  while (g == s) g = pick(rng);
  StartGoal sg;
  sg.start = spec.CellCenter(cells[s]);
  sg.goal = spec.CellCenter(cells[g]);
  for (int i = 0; i < 2; ++i) sg.start(i) += jitter(rng) * spec.cell_size();
  for (int i = 0; i < 2; ++i) sg.goal(i) += jitter(rng) * spec.cell_size();
  return sg;
}

StartGoal EpisodeStartGoal(const MazeSpec& spec, uint64_t seed, int episode) {
  Rng rng = StreamRng(seed, static_cast<uint64_t>(episode), kEpisodeSalt);
  return SampleStartGoal(spec, rng);
}

Rng RandomPolicyRng(uint64_t seed, int episode) {
  return StreamRng(seed, static_cast<uint64_t>(episode), kRandomPolicySalt);
}

namespace {

template <typename Policy>
EpisodeResult RunEpisode(const MazeSpec& spec, const StartGoal& sg,
                         Policy&& policy) {
  SimState state;
  state.position = sg.start;
  state.goal = sg.goal;
  EpisodeResult result;
  for (int t = 0; t < spec.episode_cap(); ++t) {
    const StepResult sr = Step(spec, state, policy(state));
    state = sr.state;
    result.total_reward += sr.reward;
    if (sr.reward > 0.0) result.reached = true;
  }
  result.steps = spec.episode_cap();
  return result;
}

}  // namespace

EpisodeResult RunExpertEpisode(const MazeSpec& spec, const StartGoal& sg) {
  return RunEpisode(spec, sg, [&](const SimState& s) {
    return ExpertAction(spec, s);
  });
}

EpisodeResult RunRandomEpisode(const MazeSpec& spec, const StartGoal& sg,
                               Rng& rng) {
  std::uniform_real_distribution<double> u(-kMaxAction, kMaxAction);
  return RunEpisode(spec, sg, [&](const SimState&) {
    const double ax = u(rng);
    const double ay = u(rng);
    return Vec2(ax, ay);
  });
}

double NormalizedScore(double total, double random_ref, double expert_ref) {
  if (!(expert_ref > random_ref)) {
    throw Error(ErrorCode::kDegenerateReference,
                "expert reference must exceed random reference");
  }
  return 100.0 * (total - random_ref) / (expert_ref - random_ref);
}

ReferenceScores ComputeReferenceScores(const MazeSpec& spec, int episodes,
                                       uint64_t seed) {
  if (episodes < 100) {
    throw Error(ErrorCode::kInvalidArgument,
                "reference scores need >= 100 episodes");
  }
  ReferenceScores refs;
  refs.maze = std::string(spec.name());
  refs.episode_cap = spec.episode_cap();
  refs.episodes = episodes;
  refs.seed = seed;
  double random_sum = 0.0;
  double expert_sum = 0.0;
  for (int i = 0; i < episodes; ++i) {
    const StartGoal sg = EpisodeStartGoal(spec, seed, i);
    expert_sum += RunExpertEpisode(spec, sg).total_reward;
    Rng rng = RandomPolicyRng(seed, i);
    random_sum += RunRandomEpisode(spec, sg, rng).total_reward;
  }
  refs.expert_ref = expert_sum / episodes;
  refs.random_ref = random_sum / episodes;
  return refs;
}

}  // namespace sbplan
