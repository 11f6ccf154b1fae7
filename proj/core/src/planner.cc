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

#include "sbplan/planner.h"

#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "sbplan/error.h"

namespace sbplan {

std::string_view EngineName(Engine engine) {
  return engine == Engine::kDdpm ? "ddpm" : "i2sb";
}

Engine ParseEngine(std::string_view name) {
  if (name == "ddpm") return Engine::kDdpm;
  if (name == "i2sb" || name == "sb") return Engine::kI2sb;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown engine '" + std::string(name) + "'");
}

PlanningModel PlanningModel::Ddpm(DenoiserNetwork net,
                                  const NoiseSchedule& sched,
                                  NormalizationStats stats) {
  PlanningModel m;
  m.engine_ = Engine::kDdpm;
  m.n_steps_ = sched.n;
  m.net_ = std::make_shared<const DenoiserNetwork>(std::move(net));
  m.noise_ = sched;
  m.stats_ = std::move(stats);
  return m;
}

PlanningModel PlanningModel::I2sb(DenoiserNetwork net,
                                  const BridgeSchedule& sched,
                                  PriorSampler prior,
                                  NormalizationStats stats) {
  if (prior.horizon() != net.config().horizon) {
    throw Error(ErrorCode::kShapeMismatch, "prior and denoiser horizons differ");
  }
  PlanningModel m;
  m.engine_ = Engine::kI2sb;
  m.n_steps_ = sched.n;
  m.net_ = std::make_shared<const DenoiserNetwork>(std::move(net));
  m.bridge_ = sched;
  m.prior_ = std::move(prior);
  m.stats_ = std::move(stats);
  return m;
}

namespace {

std::string JoinDoubles(const Vector& v) {
  std::string out;
  char buf[32];
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", v(i));
    if (i) out += ' ';
    out += buf;
  }
  return out;
}

Vector SplitDoubles(const std::string& s) {
  std::istringstream in(s);
  std::vector<double> vals;
  double x;
  while (in >> x) vals.push_back(x);
  return Eigen::Map<const Vector>(vals.data(),
                                  static_cast<Eigen::Index>(vals.size()));
}

}  // namespace

std::map<std::string, std::string> StatsMetadata(const NormalizationStats& s) {
  return {{"stats_min", JoinDoubles(s.min)}, {"stats_max", JoinDoubles(s.max)}};
}

NormalizationStats StatsFromMetadata(const Checkpoint& ckpt) {
  NormalizationStats s;
  s.min = SplitDoubles(ckpt.Meta("stats_min"));
  s.max = SplitDoubles(ckpt.Meta("stats_max"));
  if (s.min.size() != ckpt.transition_dim || s.max.size() != s.min.size()) {
    throw Error(ErrorCode::kCheckpointMismatch, "bad stats in checkpoint");
  }
  return s;
}

PlanningModel PlanningModel::FromCheckpoint(
    const Checkpoint& denoiser, const std::optional<Checkpoint>& prior_ckpt) {
  const Engine engine = ParseEngine(denoiser.Meta("engine"));
  const int n = std::stoi(denoiser.Meta("n_steps"));
  NormalizationStats stats = StatsFromMetadata(denoiser);
  DenoiserNetwork net = DenoiserFromCheckpoint(denoiser);
  if (engine == Engine::kDdpm) {
    return Ddpm(std::move(net),
                MakeSchedule(n, ParseScheduleKind(denoiser.Meta("schedule"))),
                std::move(stats));
  }
  const PriorKind kind = ParsePriorKind(denoiser.Meta("prior"));
  const int horizon = net.config().horizon;
  if (kind == PriorKind::kLearned) {
    if (!prior_ckpt) {
      throw Error(ErrorCode::kMissingCheckpoint,
                  "model trained with the learned prior needs its checkpoint");
    }
    PriorSampler prior(PriorFromCheckpoint(*prior_ckpt), stats);
    return I2sb(std::move(net), MakeBridgeSchedule(n), std::move(prior),
                std::move(stats));
  }
  PriorSampler prior(kind, stats, horizon, net.config().transition_dim);
  return I2sb(std::move(net), MakeBridgeSchedule(n), std::move(prior),
              std::move(stats));
}

Trajectory Plan(const PlanRequest& req, const PlanningModel& model,
                SampleTrace* trace) {
  if (req.engine != model.engine()) {
    throw Error(ErrorCode::kCheckpointMismatch,
                "request engine " + std::string(EngineName(req.engine)) +
                    " but model is " +
                    std::string(EngineName(model.engine())));
  }
  if (req.engine == Engine::kDdpm && req.nfe != model.n_steps()) {
    throw Error(ErrorCode::kInvalidArgument,
                "ddpm needs nfe == N (" + std::to_string(model.n_steps()) +
                    "), got " + std::to_string(req.nfe));
  }
  if (req.engine == Engine::kI2sb &&
      (req.nfe < 1 || req.nfe > model.n_steps())) {
    throw Error(ErrorCode::kInvalidArgument,
                "i2sb nfe " + std::to_string(req.nfe) + " outside [1, " +
                    std::to_string(model.n_steps()) + "]");
  }
  if (req.engine == Engine::kI2sb && req.prior != model.prior().kind()) {
    throw Error(ErrorCode::kCheckpointMismatch,
                "model was trained with prior " +
                    std::string(PriorKindName(model.prior().kind())));
  }

  const int horizon = model.horizon();
  const int dim = model.net().config().transition_dim;
  const NormalizationStats& stats = model.stats();
  Vec4 goal_raw;
  goal_raw << req.goal_position, 0.0, 0.0;
  const Vec4 start_norm = stats.NormalizeState(req.start_state);
  const Vec4 goal_norm = stats.NormalizeState(goal_raw);
  const Conditioning cond =
      Conditioning::StartGoal(start_norm, goal_norm, horizon);

  Rng rng = StreamRng(req.seed, 0, kSampleSalt);
  Matrix x;
  if (req.engine == Engine::kDdpm) {
    x = DdpmSample(model.net(), model.noise_schedule(), cond, horizon, dim,
                   rng, trace, model.sample_options());
  } else {
    const Matrix x1 = model.prior().Sample(start_norm, goal_norm, rng);
    x = BridgeSample(model.net(), model.bridge_schedule(), x1, req.nfe, cond,
                     rng, trace, model.sample_options());
  }
  Matrix raw = DenormalizeMatrix(x, stats);
  raw.block<1, 4>(0, kStateCol) = req.start_state.transpose();
  raw.block<1, 4>(horizon - 1, kStateCol) = goal_raw.transpose();
  return Trajectory(std::move(raw), false);
}

EpisodeResult Execute(const MazeSpec& spec, const Trajectory& plan,
                      const Vec2& goal) {
  const int horizon = plan.horizon();
  const int budget = std::max(1, spec.episode_cap() / horizon);
  SimState state;
  state.position = plan.Position(0);
  state.velocity = plan.Velocity(0).cwiseMax(-kMaxSpeed).cwiseMin(kMaxSpeed);
  state.goal = goal;
  EpisodeResult result;
  int k = 0;
  int on_k = 0;
  for (int t = 0; t < spec.episode_cap(); ++t) {
    while (k < horizon - 1 &&
           ((plan.Position(k) - state.position).norm() < kWaypointRadius ||
            on_k >= budget)) {
      ++k;
      on_k = 0;
    }
    const Vec2 a = PdAction(plan.Position(k), state.position, state.velocity);
    const StepResult sr = Step(spec, state, a);
    state = sr.state;
    ++on_k;
    result.total_reward += sr.reward;
    if (sr.reward > 0.0) result.reached = true;
  }
  result.steps = spec.episode_cap();
  return result;
}

std::string PlanToJson(const Trajectory& plan, const PlanRequest& req,
                       const std::map<std::string, std::string>& metadata) {
  nlohmann::json j;
  j["engine"] = EngineName(req.engine);
  j["prior"] = PriorKindName(req.prior);
  j["nfe"] = req.nfe;
  j["seed"] = req.seed;
  j["start_state"] = {req.start_state(0), req.start_state(1),
                      req.start_state(2), req.start_state(3)};
  j["goal_position"] = {req.goal_position(0), req.goal_position(1)};
  j["columns"] = {"ax", "ay", "x", "y", "vx", "vy"};
  nlohmann::json rows = nlohmann::json::array();
  for (int t = 0; t < plan.horizon(); ++t) {
    nlohmann::json row = nlohmann::json::array();
    for (int d = 0; d < plan.dim(); ++d) row.push_back(plan(t, d));
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  for (const auto& [k, v] : metadata) j["metadata"][k] = v;
  return j.dump(1);
}

}  // namespace sbplan
