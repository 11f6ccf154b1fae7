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

#ifndef SBPLAN_DATASET_GEN_H_
#define SBPLAN_DATASET_GEN_H_

#include <cstdint>
#include <string>
#include <vector>

#include "sbplan/conditioning.h"
#include "sbplan/rng.h"
#include "sbplan/trajectory.h"

namespace sbplan {

struct GenConfig {
  std::string maze_id = "umaze";
  int64_t total_steps = 0;
  int horizon = 256;
  uint64_t seed = 0;
};

// Default planning horizon per maze: 384 for large, 256 otherwise.
int DefaultHorizon(std::string_view maze_id);

// Log length needed for `training_steps` batches of size `batch`, each
// segment revisited about `segment_reuse` (capped at 4) times.
int64_t TotalStepsForTraining(int64_t training_steps, int batch,
                              int segment_reuse);

// Number of stride-horizon/4 windows in a log of `total_steps` rows.
int64_t SegmentCount(int64_t total_steps, int horizon);

// Drives the expert between uniformly drawn goals (a new goal on arrival),
// logs [action | state] rows, and slices the log into overlapping
// horizon-length windows. Stats are fitted on the whole log.
Dataset Generate(const GenConfig& cfg);

struct Batch {
  std::vector<Matrix> trajectories;         // normalized
  std::vector<Conditioning> conditioning;   // row 0 and row H-1 states
  std::vector<int> indices;                 // source segment indices
};

// Draws `batch` segments uniformly with replacement. Throws kEmptyDataset.
Batch SampleBatch(const Dataset& dataset, int batch, Rng& rng);

}  // namespace sbplan

#endif  // SBPLAN_DATASET_GEN_H_
