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

#ifndef SBPLAN_PRIOR_NETWORK_H_
#define SBPLAN_PRIOR_NETWORK_H_

#include <cstdint>
#include <vector>

#include "sbplan/param_view.h"
#include "sbplan/types.h"

namespace sbplan {

// Two dense layers with a leaky rectifier in between, mapping the
// concatenated (start, goal) states to a whole trajectory.
class PriorNetwork {
 public:
  static constexpr double kNegativeSlope = 0.1;

  PriorNetwork(int horizon, int transition_dim = kTransitionDim,
               int state_dim = kStateDim);

  int horizon() const { return horizon_; }
  int transition_dim() const { return transition_dim_; }
  int input_dim() const { return 2 * state_dim_; }
  int output_dim() const { return horizon_ * transition_dim_; }
  uint64_t ArchHash() const;

  int num_params() const { return static_cast<int>(params_.size()); }
  Vector& params() { return params_; }
  const Vector& params() const { return params_; }
  const std::vector<ParamView>& views() const { return views_; }

  void InitRandom(uint64_t seed);

  // Output reshaped to (horizon, transition_dim).
  Matrix Forward(const Vec4& start, const Vec4& goal) const;
  // Gradient of <Forward(start, goal), upstream>, accumulated into *grad.
  void Backward(const Vec4& start, const Vec4& goal, const Matrix& upstream,
                Vector* grad) const;

 private:
  Vector Input(const Vec4& start, const Vec4& goal) const;

  int horizon_;
  int transition_dim_;
  int state_dim_;
  Vector params_;
  std::vector<ParamView> views_;
};

}  // namespace sbplan

#endif  // SBPLAN_PRIOR_NETWORK_H_
