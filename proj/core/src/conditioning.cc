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

#include "sbplan/conditioning.h"

#include <string>

#include "sbplan/error.h"

namespace sbplan {

Conditioning::Conditioning(std::vector<Entry> entries)
    : entries_(std::move(entries)) {}

Conditioning Conditioning::StartGoal(const Vec4& start_state,
                                     const Vec4& goal_state, int horizon) {
  if (horizon < 2) {
    throw Error(ErrorCode::kShapeMismatch, "horizon must be >= 2");
  }
  std::vector<Entry> entries;
  entries.reserve(2 * kStateDim);
  for (int i = 0; i < kStateDim; ++i) {
    entries.push_back({0, kStateCol + i, start_state(i)});
  }
  for (int i = 0; i < kStateDim; ++i) {
    entries.push_back({horizon - 1, kStateCol + i, goal_state(i)});
  }
  return Conditioning(std::move(entries));
}

Conditioning Conditioning::FromEndpoints(const Matrix& target) {
  const int last = static_cast<int>(target.rows()) - 1;
  return StartGoal(target.block<1, 4>(0, kStateCol).transpose(),
                   target.block<1, 4>(last, kStateCol).transpose(),
                   static_cast<int>(target.rows()));
}

void Conditioning::Apply(Matrix& x) const {
  for (const Entry& e : entries_) x(e.row, e.col) = e.value;
}

bool Conditioning::SatisfiedBy(const Matrix& x) const {
  for (const Entry& e : entries_) {
    if (x(e.row, e.col) != e.value) return false;
  }
  return true;
}

void Conditioning::Check(const Matrix& x) const {
  for (const Entry& e : entries_) {
    if (x(e.row, e.col) != e.value) {
      throw Error(ErrorCode::kConditioningViolated,
                  "entry (" + std::to_string(e.row) + ", " +
                      std::to_string(e.col) + ") drifted from its condition");
    }
  }
}

Matrix Conditioning::LossMask(int rows, int cols) const {
  Matrix mask = Matrix::Ones(rows, cols);
  for (const Entry& e : entries_) mask(e.row, e.col) = 0.0;
  return mask;
}

}  // namespace sbplan
