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

#include "sbplan/i2sb.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "sbplan/error.h"

namespace sbplan {

double BridgeSchedule::Sigma(int t) const { return std::sqrt(sigma2(t)); }

BridgeSchedule BridgeScheduleFromBetas(const Vector& beta) {
  const int n = static_cast<int>(beta.size());
  if (n < 1) {
    throw Error(ErrorCode::kInvalidArgument, "bridge schedule needs N >= 1");
  }
  if ((beta.array() <= 0.0).any() || !beta.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "bridge betas must be positive");
  }
  BridgeSchedule s;
  s.n = n;
  s.beta = beta;
  s.sigma2 = Vector::Zero(n + 1);
  s.sigma2_bar = Vector::Zero(n + 1);
  for (int t = 1; t <= n; ++t) s.sigma2(t) = s.sigma2(t - 1) + beta(t - 1);
  for (int t = n - 1; t >= 0; --t) {
    s.sigma2_bar(t) = s.sigma2_bar(t + 1) + beta(t);
  }
  return s;
}

BridgeSchedule MakeBridgeSchedule(int n) {
  if (n < 1) {
    throw Error(ErrorCode::kInvalidArgument, "bridge schedule needs N >= 1");
  }
  Vector beta(n);
  for (int k = 1; k <= n; ++k) beta(k - 1) = std::min(k, n + 1 - k);
  beta /= beta.sum();
  return BridgeScheduleFromBetas(beta);
}

BridgeWeights BridgePosteriorWeights(double sigma2, double sigma2_bar) {
  const double total = sigma2 + sigma2_bar;
  if (!(total > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "bridge posterior undefined when both variances are zero");
  }
  BridgeWeights w;
  w.w0 = sigma2_bar / total;
  w.w1 = sigma2 / total;
  w.var = sigma2 * sigma2_bar / total;
  return w;
}

BridgeWeights BridgePosteriorWeights(const BridgeSchedule& sched, int t) {
  if (t < 0 || t > sched.n) {
    throw Error(ErrorCode::kInvalidArgument,
                "bridge time " + std::to_string(t) + " outside [0, " +
                    std::to_string(sched.n) + "]");
  }
  return BridgePosteriorWeights(sched.Sigma2(t), sched.Sigma2Bar(t));
}

BridgeMoments BridgePosterior(const Matrix& x0, const Matrix& x1, int t,
                              const BridgeSchedule& sched) {
  if (x0.rows() != x1.rows() || x0.cols() != x1.cols()) {
    throw Error(ErrorCode::kShapeMismatch, "bridge endpoints differ in shape");
  }
  const BridgeWeights w = BridgePosteriorWeights(sched, t);
  // Exact endpoints when one weight vanishes.
  if (w.w1 == 0.0) return {x0, 0.0};
  if (w.w0 == 0.0) return {x1, 0.0};
  return {w.w0 * x0 + w.w1 * x1, w.var};
}

Matrix BridgeSampleTraining(const Matrix& x0, const Matrix& x1, int t,
                            const BridgeSchedule& sched, Rng& rng) {
  BridgeMoments m = BridgePosterior(x0, x1, t, sched);
  if (m.var == 0.0) return m.mean;
  return m.mean + std::sqrt(m.var) * StandardNormal(static_cast<int>(x0.rows()),
                                                    static_cast<int>(x0.cols()),
                                                    rng);
}

TrainingBatch MakeBridgeBatch(const std::vector<Matrix>& x0,
                              const std::vector<Matrix>& x1,
                              const std::vector<Conditioning>& conditioning,
                              const BridgeSchedule& sched, Rng& rng) {
  if (x0.size() != x1.size() || x0.size() != conditioning.size()) {
    throw Error(ErrorCode::kShapeMismatch, "bridge batch size mismatch");
  }
  TrainingBatch batch;
  std::uniform_int_distribution<int> pick(1, sched.n);
  for (size_t i = 0; i < x0.size(); ++i) {
    const int t = pick(rng);
    Matrix xt = BridgeSampleTraining(x0[i], x1[i], t, sched, rng);
    for (const auto& e : conditioning[i].entries()) {
      xt(e.row, e.col) = x0[i](e.row, e.col);
    }
    batch.targets.push_back((xt - x0[i]) / sched.Sigma(t));
    batch.inputs.push_back(std::move(xt));
    batch.masks.push_back(
        conditioning[i].LossMask(static_cast<int>(x0[i].rows()),
                                 static_cast<int>(x0[i].cols())));
    batch.t.push_back(t - 1);
  }
  return batch;
}

std::vector<int> MakeTimeGrid(int n, int nfe) {
  if (nfe < 1 || nfe > n) {
    throw Error(ErrorCode::kInvalidArgument,
                "nfe " + std::to_string(nfe) + " outside [1, " +
                    std::to_string(n) + "]");
  }
  std::vector<int> grid(nfe + 1);
  for (int i = 0; i <= nfe; ++i) {
    grid[i] = static_cast<int>(
        std::lround(n * (1.0 - static_cast<double>(i) / nfe)));
  }
  return grid;
}

Matrix BridgeSampleOnGrid(const EpsilonModel& model,
                          const BridgeSchedule& sched, const Matrix& x1,
                          const std::vector<int>& grid,
                          const Conditioning& conditioning, Rng& rng,
                          SampleTrace* trace, const SampleOptions& options) {
  if (grid.size() < 2 || grid.front() != sched.n) {
    throw Error(ErrorCode::kInvalidArgument, "grid must start at N");
  }
  for (size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] >= grid[i - 1] || grid[i] < 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "grid must be strictly descending and non-negative");
    }
  }
  Matrix x = x1;
  conditioning.Apply(x);
  for (size_t i = 1; i < grid.size(); ++i) {
    const int s = grid[i - 1];
    const int t = grid[i];
    const Matrix eps_hat = model.Predict(x, s - 1);
    if (trace) ++trace->nfe;
    Matrix x0_hat = x - sched.Sigma(s) * eps_hat;
    if (options.clip_denoised) x0_hat = x0_hat.cwiseMax(-1.0).cwiseMin(1.0);
    if (t == 0) {
      x = x0_hat;
    } else {
      // Bridge between x0_hat (time 0) and x (time s).
      const double lower = sched.Sigma2(t);
      const double upper = sched.Sigma2(s) - sched.Sigma2(t);
      const BridgeWeights w = BridgePosteriorWeights(lower, upper);
      x = w.w0 * x0_hat + w.w1 * x +
          std::sqrt(w.var) * StandardNormal(static_cast<int>(x.rows()),
                                            static_cast<int>(x.cols()), rng);
    }
    conditioning.Apply(x);
    conditioning.Check(x);
    if (trace && trace->on_step) trace->on_step(t, x);
  }
  return x;
}

Matrix BridgeSample(const EpsilonModel& model, const BridgeSchedule& sched,
                    const Matrix& x1, int nfe,
                    const Conditioning& conditioning, Rng& rng,
                    SampleTrace* trace, const SampleOptions& options) {
  return BridgeSampleOnGrid(model, sched, x1, MakeTimeGrid(sched.n, nfe),
                            conditioning, rng, trace, options);
}

}  // namespace sbplan
