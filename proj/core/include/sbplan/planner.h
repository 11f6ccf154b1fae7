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

#ifndef SBPLAN_PLANNER_H_
#define SBPLAN_PLANNER_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "sbplan/checkpoint.h"
#include "sbplan/ddpm.h"
#include "sbplan/denoiser.h"
#include "sbplan/i2sb.h"
#include "sbplan/maze.h"
#include "sbplan/objective.h"
#include "sbplan/priors.h"
#include "sbplan/trajectory.h"

namespace sbplan {

enum class Engine { kDdpm, kI2sb };

std::string_view EngineName(Engine engine);
Engine ParseEngine(std::string_view name);

// Start and goal in raw units.
struct PlanRequest {
  Vec4 start_state = Vec4::Zero();
  Vec2 goal_position = Vec2::Zero();
  Engine engine = Engine::kI2sb;
  PriorKind prior = PriorKind::kStraightLine;
  int nfe = 1;
  uint64_t seed = 0;
};

// A trained denoiser together with everything needed to sample from it.
class PlanningModel {
 public:
  static PlanningModel Ddpm(DenoiserNetwork net, const NoiseSchedule& sched,
                            NormalizationStats stats);
  static PlanningModel I2sb(DenoiserNetwork net, const BridgeSchedule& sched,
                            PriorSampler prior, NormalizationStats stats);
  // Rebuilds a model from a denoiser checkpoint written by the training
  // harness. `prior_ckpt` is required when the model was trained with the
  // learned prior.
  static PlanningModel FromCheckpoint(
      const Checkpoint& denoiser,
      const std::optional<Checkpoint>& prior_ckpt = std::nullopt);

  Engine engine() const { return engine_; }
  int n_steps() const { return n_steps_; }
  int horizon() const { return net_->config().horizon; }
  const DenoiserNetwork& net() const { return *net_; }
  const NormalizationStats& stats() const { return stats_; }
  const NoiseSchedule& noise_schedule() const { return *noise_; }
  const BridgeSchedule& bridge_schedule() const { return *bridge_; }
  const PriorSampler& prior() const { return *prior_; }
  bool has_prior() const { return prior_.has_value(); }
  // Clamp reconstructed x0 to the normalized range while sampling (on by
  // default).
  const SampleOptions& sample_options() const { return options_; }
  void set_clip_denoised(bool clip) { options_.clip_denoised = clip; }

 private:
  PlanningModel() = default;

  Engine engine_ = Engine::kDdpm;
  int n_steps_ = 0;
  std::shared_ptr<const DenoiserNetwork> net_;
  std::optional<NoiseSchedule> noise_;
  std::optional<BridgeSchedule> bridge_;
  std::optional<PriorSampler> prior_;
  NormalizationStats stats_;
  SampleOptions options_{.clip_denoised = true};
};

// Metadata helpers for checkpoints written by the harness.
std::map<std::string, std::string> StatsMetadata(const NormalizationStats& s);
NormalizationStats StatsFromMetadata(const Checkpoint& ckpt);

// Inpainting plan in raw units. Row 0 holds the start state and the last row
// the goal position at rest, both exactly as requested. Throws
// kCheckpointMismatch when the request's engine or prior differs from the
// model and kInvalidArgument for an nfe the engine cannot run.
Trajectory Plan(const PlanRequest& req, const PlanningModel& model,
                SampleTrace* trace = nullptr);

// Open-loop execution of a raw-unit plan: a PD tracker follows the plan's
// positions, moving to the next one within kWaypointRadius or after
// episode_cap / horizon steps, and holds the final one.
inline constexpr double kWaypointRadius = 0.25;
EpisodeResult Execute(const MazeSpec& spec, const Trajectory& plan,
                      const Vec2& goal);

std::string PlanToJson(const Trajectory& plan, const PlanRequest& req,
                       const std::map<std::string, std::string>& metadata);

}  // namespace sbplan

#endif  // SBPLAN_PLANNER_H_
