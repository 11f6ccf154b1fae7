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

#include "sbplan/optimizer.h"

#include <cmath>

#include "sbplan/error.h"

namespace sbplan {

Adam::Adam(int num_params, const AdamConfig& config, uint64_t seed)
    : config_(config) {
  if (num_params < 0 || config.learning_rate < 0 || config.beta1 < 0 ||
      config.beta1 >= 1 || config.beta2 < 0 || config.beta2 >= 1 ||
      config.epsilon <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "bad optimizer configuration");
  }
  state_.m = Vector::Zero(num_params);
  state_.v = Vector::Zero(num_params);
  state_.seed = seed;
}

StepOutcome Adam::Step(Vector& params, const Vector& grad) {
  if (params.size() != state_.m.size() || grad.size() != state_.m.size()) {
    throw Error(ErrorCode::kShapeMismatch, "optimizer size mismatch");
  }
  if (!grad.allFinite()) {
    ++state_.skipped;
    return StepOutcome::kSkippedNonFinite;
  }
  double scale = 1.0;
  if (config_.clip_norm > 0) {
    const double norm = grad.norm();
    if (norm > config_.clip_norm) scale = config_.clip_norm / norm;
  }
  ++state_.step;
  const double b1 = config_.beta1, b2 = config_.beta2;
  state_.m = b1 * state_.m + (1 - b1) * scale * grad;
  state_.v = b2 * state_.v + (1 - b2) * (scale * grad).cwiseAbs2();
  const double c1 = 1 - std::pow(b1, static_cast<double>(state_.step));
  const double c2 = 1 - std::pow(b2, static_cast<double>(state_.step));
  params.array() -= config_.learning_rate * (state_.m.array() / c1) /
                    ((state_.v.array() / c2).sqrt() + config_.epsilon);
  return StepOutcome::kApplied;
}

}  // namespace sbplan
