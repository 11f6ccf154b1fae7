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

#ifndef SBPLAN_CONDITIONING_H_
#define SBPLAN_CONDITIONING_H_

#include <vector>

#include "sbplan/types.h"

namespace sbplan {

// Inpainting constraints: entries of the (normalized) trajectory that are held
// fixed while the sampler fills in the rest.
class Conditioning {
 public:
  struct Entry {
    int row;
    int col;
    double value;
  };

  Conditioning() = default;
  explicit Conditioning(std::vector<Entry> entries);

  // Start state at row 0 and goal state at row horizon-1, state dims only.
  // Both states are expected in normalized units.
  static Conditioning StartGoal(const Vec4& start_state, const Vec4& goal_state,
                                int horizon);
  // Conditioning taken from a target trajectory's own endpoints (training).
  static Conditioning FromEndpoints(const Matrix& target);

  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  void Apply(Matrix& x) const;
  bool SatisfiedBy(const Matrix& x) const;
  // Throws kConditioningViolated unless SatisfiedBy(x).
  void Check(const Matrix& x) const;

  // 1 for free entries, 0 for conditioned entries.
  Matrix LossMask(int rows, int cols) const;

 private:
  std::vector<Entry> entries_;
};

}  // namespace sbplan

#endif  // SBPLAN_CONDITIONING_H_
