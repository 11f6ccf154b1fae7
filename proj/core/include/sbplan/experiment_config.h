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

#ifndef SBPLAN_EXPERIMENT_CONFIG_H_
#define SBPLAN_EXPERIMENT_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace sbplan {

// Sweep description. Text form is one `key = value` per line, where a value is
// an integer, a float, a "string" (quotes optional) or a [list, of, values];
// `#` starts a comment.
struct ExperimentConfig {
  std::string maze = "umaze";
  int horizon = 0;  // 0 picks the maze default
  std::string engine = "i2sb";
  std::string prior = "straight_line";
  int n_steps = 16;
  std::string schedule = "cosine";
  std::vector<int> nfe = {1, 2, 4, 8, 16};
  std::vector<int64_t> training_steps = {2000, 8000, 32000};
  int episodes = 200;
  std::vector<uint64_t> seeds = {0};
  std::string out = "runs";

  int batch = 32;
  std::vector<int> widths = {32, 64, 128};
  double learning_rate = 2e-4;
  int segment_reuse = 4;
  int reference_episodes = 200;
  uint64_t reference_seed = 1234;
  int workers = 1;
  // Keep existing checkpoints instead of retraining them.
  bool resume = false;

  static ExperimentConfig Parse(std::string_view text);
  static ExperimentConfig Load(const std::filesystem::path& path);

  // Sets one key from its text form; throws kInvalidArgument for unknown
  // keys or malformed values.
  void Set(std::string_view key, std::string_view value);
  void Validate() const;
  int EffectiveHorizon() const;
  std::string ToText() const;
};

}  // namespace sbplan

#endif  // SBPLAN_EXPERIMENT_CONFIG_H_
