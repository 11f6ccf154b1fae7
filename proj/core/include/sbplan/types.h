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

#ifndef SBPLAN_TYPES_H_
#define SBPLAN_TYPES_H_

#include <Eigen/Core>

namespace sbplan {

// Row-major so a trajectory's rows (timesteps) are contiguous, matching the
// on-disk payload order.
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Vec2 = Eigen::Vector2d;
using Vec4 = Eigen::Vector4d;

inline constexpr int kActionDim = 2;
inline constexpr int kStateDim = 4;
inline constexpr int kTransitionDim = kActionDim + kStateDim;

// Column offsets inside a transition row [ax, ay | x, y, vx, vy].
inline constexpr int kActionCol = 0;
inline constexpr int kStateCol = kActionDim;
inline constexpr int kPosCol = kStateCol;
inline constexpr int kVelCol = kStateCol + 2;

}  // namespace sbplan

#endif  // SBPLAN_TYPES_H_
