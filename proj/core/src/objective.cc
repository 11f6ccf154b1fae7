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

#include "sbplan/objective.h"

#include "sbplan/error.h"

namespace sbplan {
namespace {

void CheckBatch(const TrainingBatch& batch) {
  const size_t n = batch.inputs.size();
  if (n == 0 || batch.targets.size() != n || batch.masks.size() != n ||
      batch.t.size() != n) {
    throw Error(ErrorCode::kShapeMismatch, "inconsistent training batch");
  }
}

LossResult Reduce(const std::vector<Matrix>& preds, const TrainingBatch& batch,
                  std::vector<Matrix>* upstream) {
  LossResult r;
  double count = 0.0;
  for (int b = 0; b < batch.size(); ++b) {
    const Matrix diff =
        (preds[b] - batch.targets[b]).cwiseProduct(batch.masks[b]);
    r.sum_sq += diff.squaredNorm();
    count += batch.masks[b].sum();
    if (upstream) upstream->push_back(diff);
  }
  r.sum_sq /= batch.size();
  count /= batch.size();
  r.mse = count > 0 ? r.sum_sq / count : 0.0;
  if (upstream) {
    const double scale = count > 0 ? 2.0 / (count * batch.size()) : 0.0;
    for (auto& u : *upstream) u *= scale;
  }
  return r;
}

}  // namespace

LossResult EvaluateLoss(const EpsilonModel& model, const TrainingBatch& batch) {
  CheckBatch(batch);
  std::vector<Matrix> preds;
  preds.reserve(batch.size());
  for (int b = 0; b < batch.size(); ++b) {
    preds.push_back(model.Predict(batch.inputs[b], batch.t[b]));
  }
  return Reduce(preds, batch, nullptr);
}

LossResult LossAndGradient(const DenoiserNetwork& net,
                           const TrainingBatch& batch) {
  CheckBatch(batch);
  DenoiserTape tape;
  const std::vector<Matrix> preds =
      net.ForwardBatch(batch.inputs, batch.t, &tape);
  std::vector<Matrix> upstream;
  LossResult r = Reduce(preds, batch, &upstream);
  net.BackwardBatch(tape, upstream, &r.grad);
  return r;
}

}  // namespace sbplan
