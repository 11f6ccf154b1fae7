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

#ifndef SBPLAN_TRAJECTORY_H_
#define SBPLAN_TRAJECTORY_H_

#include <filesystem>
#include <string>
#include <vector>

#include "sbplan/types.h"

namespace sbplan {

// A horizon x transition_dim array; each row is [action | state] for one
// timestep. Immutable after construction.
class Trajectory {
 public:
  Trajectory() = default;
  // Throws kShapeMismatch for horizon < 2, kNonFinite for NaN/Inf entries and
  // kInvalidArgument when `normalized` is set but an entry is outside [-1, 1].
  explicit Trajectory(Matrix data, bool normalized = false);

  int horizon() const { return static_cast<int>(data_.rows()); }
  int dim() const { return static_cast<int>(data_.cols()); }
  bool normalized() const { return normalized_; }
  const Matrix& data() const { return data_; }

  double operator()(int t, int d) const { return data_(t, d); }
  Vec2 Position(int t) const { return data_.block<1, 2>(t, kPosCol).transpose(); }
  Vec2 Velocity(int t) const { return data_.block<1, 2>(t, kVelCol).transpose(); }
  Vec2 Action(int t) const { return data_.block<1, 2>(t, kActionCol).transpose(); }
  Vec4 State(int t) const { return data_.block<1, 4>(t, kStateCol).transpose(); }

 private:
  Matrix data_;
  bool normalized_ = false;
};

// Per-dimension min/max used to map raw values affinely onto [-1, 1].
// Dimensions whose range is below kDegenerateRange map to the constant 0.
struct NormalizationStats {
  static constexpr double kDegenerateRange = 1e-6;

  Vector min;
  Vector max;

  int dim() const { return static_cast<int>(min.size()); }
  bool IsDegenerate(int d) const { return max(d) - min(d) < kDegenerateRange; }

  // Fits stats over every row of every trajectory. Throws kEmptyDataset when
  // there are no rows.
  static NormalizationStats Fit(const std::vector<Trajectory>& trajectories);
  static NormalizationStats FitRows(const Matrix& rows);

  double NormalizeValue(double raw, int d) const;
  double DenormalizeValue(double normalized, int d) const;

  // Raw and normalized views of the state block (columns kStateCol..).
  Vec4 NormalizeState(const Vec4& raw) const;
  Vec4 DenormalizeState(const Vec4& normalized) const;
};

Trajectory Normalize(const Trajectory& traj, const NormalizationStats& stats);
Trajectory Denormalize(const Trajectory& traj, const NormalizationStats& stats);
Matrix NormalizeMatrix(const Matrix& raw, const NormalizationStats& stats);
Matrix DenormalizeMatrix(const Matrix& normalized,
                         const NormalizationStats& stats);

// Equal-horizon trajectories in raw units plus the stats fitted on them.
struct Dataset {
  std::vector<Trajectory> trajectories;
  NormalizationStats stats;
  std::string maze_id;

  bool empty() const { return trajectories.empty(); }
  int horizon() const;
  int dim() const { return stats.dim(); }
};

// Binary layout (little-endian):
//   "SBPLAN01" | u32 n_traj | u32 horizon | u32 transition_dim
//   | f64 min[dim] | f64 max[dim] | f64 payload[n_traj*horizon*dim]
//   | u32 maze_id_len | maze_id bytes
void SaveDataset(const Dataset& dataset, const std::filesystem::path& path);
Dataset LoadDataset(const std::filesystem::path& path);

}  // namespace sbplan

#endif  // SBPLAN_TRAJECTORY_H_
