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

#ifndef SBPLAN_ERROR_H_
#define SBPLAN_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace sbplan {

// Every failure raised by the library carries one of these codes so callers
// (and tests) can distinguish failure modes without parsing messages.
enum class ErrorCode {
  kInvalidArgument,
  kNonFinite,
  kVersionMismatch,
  kTruncatedFile,
  kShapeMismatch,
  kIo,
  kUnknownMaze,
  kUnreachableGoal,
  kDegenerateReference,
  kEmptyDataset,
  kEmptyOutput,
  kMissingCheckpoint,
  kCheckpointMismatch,
  kStaleReference,
  kConditioningViolated,
};

std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sbplan

#endif  // SBPLAN_ERROR_H_
