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

#ifndef SBPLAN_I2SB_H_
#define SBPLAN_I2SB_H_

#include <vector>

#include "sbplan/conditioning.h"
#include "sbplan/denoiser.h"
#include "sbplan/objective.h"
#include "sbplan/rng.h"
#include "sbplan/types.h"

namespace sbplan {

// beta(k-1) is the increment on step k = 1..N; sigma2 and sigma2_bar are
// indexed by grid point t = 0..N.
struct BridgeSchedule {
  int n = 0;
  Vector beta;
  Vector sigma2;
  Vector sigma2_bar;

  double Sigma2(int t) const { return sigma2(t); }
  double Sigma2Bar(int t) const { return sigma2_bar(t); }
  double Sigma(int t) const;
};

// Symmetric triangular profile, beta_k proportional to min(k, N+1-k), with
// total mass 1.
BridgeSchedule MakeBridgeSchedule(int n);
// Schedule from explicit positive increments.
BridgeSchedule BridgeScheduleFromBetas(const Vector& beta);

// Gaussian q(x_t | x0, x1) = N(w0 x0 + w1 x1, var I).
struct BridgeWeights {
  double w0 = 1.0;
  double w1 = 0.0;
  double var = 0.0;
};

// Posterior weights for variances accumulated on either side of t. Throws
// kInvalidArgument when both are zero.
BridgeWeights BridgePosteriorWeights(double sigma2, double sigma2_bar);
BridgeWeights BridgePosteriorWeights(const BridgeSchedule& sched, int t);

struct BridgeMoments {
  Matrix mean;
  double var = 0.0;
};

BridgeMoments BridgePosterior(const Matrix& x0, const Matrix& x1, int t,
                              const BridgeSchedule& sched);
Matrix BridgeSampleTraining(const Matrix& x0, const Matrix& x1, int t,
                            const BridgeSchedule& sched, Rng& rng);

// Draws t uniformly from [1, N]; target (x_t - x0) / sigma_t. Conditioned
// entries of x_t are overwritten with x0's values and excluded from the loss.
TrainingBatch MakeBridgeBatch(const std::vector<Matrix>& x0,
                              const std::vector<Matrix>& x1,
                              const std::vector<Conditioning>& conditioning,
                              const BridgeSchedule& sched, Rng& rng);

// nfe+1 descending grid points round(N * (1 - i / nfe)).
std::vector<int> MakeTimeGrid(int n, int nfe);

// Runs jumps along a strictly descending grid starting at N. Each jump
// predicts x0 from x_s and samples the bridge between it and x_s at the next
// grid time. The grid may stop above 0.
Matrix BridgeSampleOnGrid(const EpsilonModel& model,
                          const BridgeSchedule& sched, const Matrix& x1,
                          const std::vector<int>& grid,
                          const Conditioning& conditioning, Rng& rng,
                          SampleTrace* trace = nullptr,
                          const SampleOptions& options = {});

// Throws kInvalidArgument unless 1 <= nfe <= N.
Matrix BridgeSample(const EpsilonModel& model, const BridgeSchedule& sched,
                    const Matrix& x1, int nfe,
                    const Conditioning& conditioning, Rng& rng,
                    SampleTrace* trace = nullptr,
                    const SampleOptions& options = {});

}  // namespace sbplan

#endif  // SBPLAN_I2SB_H_
