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

#ifndef SBPLAN_PRIORS_H_
#define SBPLAN_PRIORS_H_

#include <optional>
#include <string>
#include <string_view>

#include "sbplan/denoiser.h"
#include "sbplan/prior_network.h"
#include "sbplan/rng.h"
#include "sbplan/trajectory.h"
#include "sbplan/types.h"

namespace sbplan {

enum class PriorKind { kGaussian, kStraightLine, kLearned };

std::string_view PriorKindName(PriorKind kind);
// Accepts "gaussian", "straight_line" (or "straight") and "learned".
PriorKind ParsePriorKind(std::string_view name);

// I.i.d. standard normal entries, independent of any endpoints.
Matrix GaussianPrior(int horizon, int dim, Rng& rng);

// Constant-velocity line from the start position to the goal in raw units:
// positions interpolate linearly, velocities equal the displacement over
// (horizon-1)*dt capped in norm at kMaxSpeed, actions are the displacement
// scaled to at most unit norm.
Matrix StraightLinePriorRaw(const Vec2& start_pos, const Vec2& goal_pos,
                            int horizon);

// Normalized-space version. The endpoint positions of the result are the
// given normalized values exactly.
Matrix StraightLinePrior(const Vec4& start_state, const Vec2& goal_pos,
                         int horizon, const NormalizationStats& stats);

Matrix LearnedPrior(const PriorNetwork& net, const Vec4& start_state,
                    const Vec4& goal_state);

// Produces X1 for a (start, goal) pair in normalized units.
class PriorSampler {
 public:
  PriorSampler(PriorKind kind, NormalizationStats stats, int horizon,
               int dim = kTransitionDim);
  // Learned prior; throws kMissingCheckpoint when `net` is empty.
  PriorSampler(std::optional<PriorNetwork> net, NormalizationStats stats);

  PriorKind kind() const { return kind_; }
  int horizon() const { return horizon_; }

  Matrix Sample(const Vec4& start_state, const Vec4& goal_state,
                Rng& rng) const;

 private:
  PriorKind kind_;
  NormalizationStats stats_;
  int horizon_;
  int dim_;
  std::optional<PriorNetwork> net_;
};

struct PriorCostReport {
  std::string kind;
  int samples = 0;
  double mean_seconds = 0.0;
  double denoiser_forward_seconds = 0.0;
  double ratio = 0.0;  // mean_seconds / denoiser_forward_seconds
  bool trivial = false;  // ratio < 0.01
};

// Times `n` (>= 100) prior draws against one forward pass of `reference`.
PriorCostReport MeasurePriorCost(const PriorSampler& prior, int n,
                                 const DenoiserNetwork& reference);

}  // namespace sbplan

#endif  // SBPLAN_PRIORS_H_
