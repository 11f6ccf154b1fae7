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

#ifndef SBPLAN_EXPERIMENT_H_
#define SBPLAN_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sbplan/experiment_config.h"
#include "sbplan/maze.h"
#include "sbplan/planner.h"
#include "sbplan/report.h"

namespace sbplan {

// Output root: $SBPLAN_OUT when set, otherwise cfg.out.
std::filesystem::path OutputRoot(const ExperimentConfig& cfg);

// File layout under the output root.
struct RunPaths {
  std::filesystem::path root;

  std::filesystem::path Dataset(const ExperimentConfig& cfg, int64_t steps,
                                uint64_t seed) const;
  std::filesystem::path Denoiser(const ExperimentConfig& cfg,
                                 const std::string& engine, int n_steps,
                                 int64_t steps, uint64_t seed) const;
  std::filesystem::path PriorNet(const ExperimentConfig& cfg, int64_t steps,
                                 uint64_t seed) const;
  std::filesystem::path LossCsv(const std::filesystem::path& ckpt) const;
  std::filesystem::path References(const ExperimentConfig& cfg) const;
  std::filesystem::path MetricsCsv() const { return root / "metrics.csv"; }
  std::filesystem::path MetricsJson() const { return root / "metrics.json"; }
  std::filesystem::path PlotDir() const { return root / "plots"; }
  std::filesystem::path PlanDir() const { return root / "plans"; }
};

// Per-episode normalized scores of `model` on the reference (start, goal)
// pairs 0..episodes-1. Asserts the sampler used exactly `nfe` evaluations.
std::vector<double> EvaluateModel(const MazeSpec& spec,
                                  const PlanningModel& model, Engine engine,
                                  PriorKind prior, int nfe,
                                  const ReferenceScores& refs, int episodes,
                                  uint64_t plan_seed, int workers = 1);

// Writes one dataset per (training_steps, seed); returns the paths.
std::vector<std::filesystem::path> CmdGenData(const ExperimentConfig& cfg,
                                              std::ostream* log = nullptr);
// Trains every checkpoint the sweep needs; returns their paths.
std::vector<std::filesystem::path> CmdTrain(const ExperimentConfig& cfg,
                                            std::ostream* log = nullptr);
// Loads cached references or computes and caches them. Throws
// kStaleReference when the cached file's key differs from the config.
ReferenceScores CmdRefs(const ExperimentConfig& cfg,
                        std::ostream* log = nullptr);
// Evaluates the sweep, merges rows into metrics.csv/json and returns the
// rows produced by this call.
SweepReport CmdEval(const ExperimentConfig& cfg, std::ostream* log = nullptr);
// Plans one reference episode with the first seed, nfe and training_steps
// entries and writes the JSON dump; returns its path.
std::filesystem::path CmdPlan(const ExperimentConfig& cfg, int episode,
                              std::ostream* log = nullptr);
// Writes plot tables from metrics.csv. With a figure name only that figure
// is written and an empty one is an error; otherwise empty figures are
// skipped and at least one must be non-empty.
std::vector<std::filesystem::path> CmdPlotData(
    const ExperimentConfig& cfg, const std::optional<std::string>& figure,
    std::ostream* log = nullptr);

}  // namespace sbplan

#endif  // SBPLAN_EXPERIMENT_H_
