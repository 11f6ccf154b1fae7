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

#include "sbplan/dataset_gen.h"

#include <algorithm>

#include "sbplan/error.h"
#include "sbplan/maze.h"

namespace sbplan {

int DefaultHorizon(std::string_view maze_id) {
  return ParseMazeId(maze_id) == MazeId::kLarge ? 384 : 256;
}

int64_t TotalStepsForTraining(int64_t training_steps, int batch,
                              int segment_reuse) {
  const int reuse = std::clamp(segment_reuse, 1, 4);
  return 50 * training_steps * batch / reuse;
}

int64_t SegmentCount(int64_t total_steps, int horizon) {
  const int stride = std::max(1, horizon / 4);
  if (total_steps < horizon) return 0;
  return (total_steps - horizon) / stride + 1;
}

Dataset Generate(const GenConfig& cfg) {
  const MazeSpec spec = MakeMaze(cfg.maze_id);
  if (cfg.horizon < 2) {
    throw Error(ErrorCode::kInvalidArgument, "horizon must be >= 2");
  }
  if (cfg.total_steps < 10LL * cfg.horizon) {
    throw Error(ErrorCode::kInvalidArgument,
                "total_steps must be >= 10 * horizon");
  }
  Rng rng = StreamRng(cfg.seed, 0, kDatasetSalt);

  Matrix log(cfg.total_steps, kTransitionDim);
  const StartGoal first = SampleStartGoal(spec, rng);
  SimState state;
  state.position = first.start;
  state.goal = first.goal;
  for (int64_t t = 0; t < cfg.total_steps; ++t) {
    if (GoalReward(spec, state.position, state.goal) > 0.0) {
      // Arrived: wander on to a fresh goal in a different cell.
      const Cell here = spec.CellOf(state.position);
      StartGoal next = SampleStartGoal(spec, rng);
      while (spec.CellOf(next.goal) == here) next = SampleStartGoal(spec, rng);
      state.goal = next.goal;
    }
    const Vec2 action = ExpertAction(spec, state);
    log(t, kActionCol) = action.x();
    log(t, kActionCol + 1) = action.y();
    log(t, kPosCol) = state.position.x();
    log(t, kPosCol + 1) = state.position.y();
    log(t, kVelCol) = state.velocity.x();
    log(t, kVelCol + 1) = state.velocity.y();
    state = Step(spec, state, action).state;
  }

  Dataset ds;
  ds.maze_id = std::string(spec.name());
  ds.stats = NormalizationStats::FitRows(log);
  const int stride = std::max(1, cfg.horizon / 4);
  const int64_t n = SegmentCount(cfg.total_steps, cfg.horizon);
  ds.trajectories.reserve(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) {
    ds.trajectories.emplace_back(
        Matrix(log.middleRows(i * stride, cfg.horizon)));
  }
  return ds;
}

Batch SampleBatch(const Dataset& dataset, int batch, Rng& rng) {
  if (dataset.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "cannot sample from empty dataset");
  }
  std::uniform_int_distribution<int> pick(
      0, static_cast<int>(dataset.trajectories.size()) - 1);
  Batch out;
  out.trajectories.reserve(batch);
  out.conditioning.reserve(batch);
  out.indices.reserve(batch);
  for (int b = 0; b < batch; ++b) {
    const int idx = pick(rng);
    Matrix x = NormalizeMatrix(dataset.trajectories[idx].data(), dataset.stats);
    out.conditioning.push_back(Conditioning::FromEndpoints(x));
    out.trajectories.push_back(std::move(x));
    out.indices.push_back(idx);
  }
  return out;
}

}  // namespace sbplan
