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

#include "sbplan/error.h"

namespace sbplan {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid_argument";
    case ErrorCode::kNonFinite:
      return "non_finite";
    case ErrorCode::kVersionMismatch:
      return "version_mismatch";
    case ErrorCode::kTruncatedFile:
      return "truncated_file";
    case ErrorCode::kShapeMismatch:
      return "shape_mismatch";
    case ErrorCode::kIo:
      return "io";
    case ErrorCode::kUnknownMaze:
      return "unknown_maze";
    case ErrorCode::kUnreachableGoal:
      return "unreachable_goal";
    case ErrorCode::kDegenerateReference:
      return "degenerate_reference";
    case ErrorCode::kEmptyDataset:
      return "empty_dataset";
    case ErrorCode::kEmptyOutput:
      return "empty_output";
    case ErrorCode::kMissingCheckpoint:
      return "missing_checkpoint";
    case ErrorCode::kCheckpointMismatch:
      return "checkpoint_mismatch";
    case ErrorCode::kStaleReference:
      return "stale_reference";
    case ErrorCode::kConditioningViolated:
      return "conditioning_violated";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace sbplan
