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

#include "sbplan/training.h"

#include "sbplan/dataset_gen.h"
#include "sbplan/error.h"
#include "sbplan/i2sb.h"

namespace sbplan {
namespace {

Vec4 EndState(const Matrix& x, int row) {
  return x.block<1, 4>(row, kStateCol).transpose();
}

}  // namespace

TrainOutcome TrainDenoiser(const Dataset& dataset, const TrainSpec& spec,
                           const PriorSampler* prior,
                           const ProgressFn& progress) {
  if (dataset.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "cannot train on an empty dataset");
  }
  if (dataset.horizon() != spec.net.horizon ||
      dataset.dim() != spec.net.transition_dim) {
    throw Error(ErrorCode::kShapeMismatch,
                "dataset horizon " + std::to_string(dataset.horizon()) +
                    " does not match model horizon " +
                    std::to_string(spec.net.horizon));
  }
  if (spec.engine == Engine::kI2sb && prior == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "bridge training needs a prior");
  }
  TrainOutcome out{DenoiserNetwork(spec.net), {}, 0};
  out.net.InitRandom(spec.seed);
  Adam adam(out.net.num_params(), spec.adam, spec.seed);
  Rng rng = StreamRng(spec.seed, 0, kTrainSalt);

  std::optional<NoiseSchedule> noise;
  std::optional<BridgeSchedule> bridge;
  if (spec.engine == Engine::kDdpm) {
    noise = MakeSchedule(spec.n_steps, spec.schedule);
  } else {
    bridge = MakeBridgeSchedule(spec.n_steps);
  }

  out.loss.reserve(static_cast<size_t>(spec.steps));
  for (int64_t step = 1; step <= spec.steps; ++step) {
    const Batch b = SampleBatch(dataset, spec.batch, rng);
    TrainingBatch tb;
    if (noise) {
      tb = MakeDdpmBatch(b.trajectories, b.conditioning, *noise, rng);
    } else {
      std::vector<Matrix> x1;
      x1.reserve(b.trajectories.size());
      for (const Matrix& x0 : b.trajectories) {
        x1.push_back(prior->Sample(EndState(x0, 0),
                                   EndState(x0, static_cast<int>(x0.rows()) - 1),
                                   rng));
      }
      tb = MakeBridgeBatch(b.trajectories, x1, b.conditioning, *bridge, rng);
    }
    const LossResult lr = LossAndGradient(out.net, tb);
    adam.Step(out.net.params(), lr.grad);
    out.loss.push_back(lr.mse);
    if (progress) progress(step, lr.mse);
  }
  out.skipped = adam.state().skipped;
  return out;
}

PriorTrainOutcome TrainPriorNetwork(const Dataset& dataset, int64_t steps,
                                    int batch, const AdamConfig& adam_cfg,
                                    uint64_t seed, const ProgressFn& progress) {
  if (dataset.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "cannot train on an empty dataset");
  }
  PriorTrainOutcome out{PriorNetwork(dataset.horizon(), dataset.dim()), {}};
  out.net.InitRandom(seed);
  Adam adam(out.net.num_params(), adam_cfg, seed);
  Rng rng = StreamRng(seed, 1, kTrainSalt);
  const int h = dataset.horizon();
  for (int64_t step = 1; step <= steps; ++step) {
    const Batch b = SampleBatch(dataset, batch, rng);
    Vector grad = Vector::Zero(out.net.num_params());
    double sse = 0.0;
    const double count = static_cast<double>(h) * dataset.dim() * batch;
    for (const Matrix& x0 : b.trajectories) {
      const Vec4 s = EndState(x0, 0);
      const Vec4 g = EndState(x0, h - 1);
      const Matrix diff = out.net.Forward(s, g) - x0;
      sse += diff.squaredNorm();
      out.net.Backward(s, g, (2.0 / count) * diff, &grad);
    }
    adam.Step(out.net.params(), grad);
    out.loss.push_back(sse / count);
    if (progress) progress(step, sse / count);
  }
  return out;
}

}  // namespace sbplan
