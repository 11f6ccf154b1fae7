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

#ifndef SBPLAN_PARAM_VIEW_H_
#define SBPLAN_PARAM_VIEW_H_

#include <string>

namespace sbplan {

// Named slice of a flat parameter vector.
struct ParamView {
  std::string name;
  int offset = 0;
  int size = 0;
};

}  // namespace sbplan

#endif  // SBPLAN_PARAM_VIEW_H_
