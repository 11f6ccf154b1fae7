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

#ifndef SBPLAN_CHECKPOINT_H_
#define SBPLAN_CHECKPOINT_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "sbplan/denoiser.h"
#include "sbplan/prior_network.h"
#include "sbplan/types.h"

namespace sbplan {

// File layout (little-endian): "SBCKPT01" | u64 arch_hash | str kind |
// u32 horizon | u32 transition_dim | u32 n, i32 arch[n] |
// u32 m, (str key, str value)[m] | u64 n_params | f64 params[n_params].
// Strings are u32 length + bytes.
struct Checkpoint {
  std::string kind;  // "denoiser" or "prior"
  uint64_t arch_hash = 0;
  int horizon = 0;
  int transition_dim = 0;
  std::vector<int> arch;
  std::map<std::string, std::string> metadata;
  Vector params;

  // Metadata lookup; throws kCheckpointMismatch when absent.
  const std::string& Meta(const std::string& key) const;
};

void SaveCheckpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
// Throws kMissingCheckpoint when the file does not exist.
Checkpoint LoadCheckpoint(const std::filesystem::path& path);

Checkpoint MakeCheckpoint(const DenoiserNetwork& net,
                          std::map<std::string, std::string> metadata = {});
Checkpoint MakeCheckpoint(const PriorNetwork& net,
                          std::map<std::string, std::string> metadata = {});

// Rebuild networks; kCheckpointMismatch on wrong kind or architecture hash.
DenoiserNetwork DenoiserFromCheckpoint(const Checkpoint& ckpt);
PriorNetwork PriorFromCheckpoint(const Checkpoint& ckpt);

}  // namespace sbplan

#endif  // SBPLAN_CHECKPOINT_H_
