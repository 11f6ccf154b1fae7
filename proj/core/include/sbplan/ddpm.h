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

#ifndef SBPLAN_DDPM_H_
#define SBPLAN_DDPM_H_

#include <optional>
#include <string_view>
#include <vector>

#include "sbplan/conditioning.h"
#include "sbplan/denoiser.h"
#include "sbplan/objective.h"
#include "sbplan/rng.h"
#include "sbplan/types.h"

namespace sbplan {

enum class ScheduleKind { kLinear, kCosine };

std::string_view ScheduleKindName(ScheduleKind kind);
ScheduleKind ParseScheduleKind(std::string_view name);

// Per-step quantities for t = 1..N, stored at index t-1.
struct NoiseSchedule {
  int n = 0;
  ScheduleKind kind = ScheduleKind::kLinear;
  Vector beta;
  Vector alpha;
  Vector alpha_bar;

  double Beta(int t) const { return beta(t - 1); }
  double Alpha(int t) const { return alpha(t - 1); }
  // AlphaBar(0) is 1.
  double AlphaBar(int t) const { return t == 0 ? 1.0 : alpha_bar(t - 1); }
  // Variance of q(x_{t-1} | x_t, x_0).
  double PosteriorVariance(int t) const;
};

inline constexpr double kMaxBeta = 0.999;
inline constexpr double kCosineOffset = 0.008;

// Linear endpoints default to 1e-4 and 0.02 scaled by 1000/N; every beta is
// capped at kMaxBeta. Explicit endpoints outside (0, 1) are rejected.
NoiseSchedule MakeSchedule(int n, ScheduleKind kind = ScheduleKind::kLinear,
                           std::optional<double> beta_min = std::nullopt,
                           std::optional<double> beta_max = std::nullopt);

// x_t = sqrt(abar_t) x0 + sqrt(1 - abar_t) eps, t in [1, N].
Matrix QSample(const Matrix& x0, int t, const Matrix& eps,
               const NoiseSchedule& sched);

// Draws t uniformly from [1, N] and eps per item; conditioned entries of x_t
// are overwritten with x0's values and excluded from the loss.
TrainingBatch MakeDdpmBatch(const std::vector<Matrix>& x0,
                            const std::vector<Conditioning>& conditioning,
                            const NoiseSchedule& sched, Rng& rng);

// Reverse mean given the noise estimate. Without clipping this is
// (x_t - beta_t / sqrt(1 - abar_t) * eps_hat) / sqrt(alpha_t); with clipping
// the implied x0 is clamped first and the mean is the q(x_{t-1} | x_t, x0)
// posterior mean.
Matrix PosteriorMean(const Matrix& xt, const Matrix& eps_hat, int t,
                     const NoiseSchedule& sched,
                     const SampleOptions& options = {});

// One ancestral step x_t -> x_{t-1}; z is unused at t = 1.
Matrix PSampleStep(const EpsilonModel& model, const Matrix& xt, int t,
                   const NoiseSchedule& sched, Rng& rng,
                   SampleTrace* trace = nullptr,
                   const SampleOptions& options = {});

// Full reverse chain from N(0, I); conditioning is applied to the initial
// iterate and after every step and checked each time.
Matrix DdpmSample(const EpsilonModel& model, const NoiseSchedule& sched,
                  const Conditioning& conditioning, int horizon, int dim,
                  Rng& rng, SampleTrace* trace = nullptr,
                  const SampleOptions& options = {});

}  // namespace sbplan

#endif  // SBPLAN_DDPM_H_
