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

#include "sbplan/ddpm.h"

#include <cmath>
#include <numbers>
#include <string>

#include "sbplan/error.h"

namespace sbplan {

std::string_view ScheduleKindName(ScheduleKind kind) {
  return kind == ScheduleKind::kLinear ? "linear" : "cosine";
}

ScheduleKind ParseScheduleKind(std::string_view name) {
  if (name == "linear") return ScheduleKind::kLinear;
  if (name == "cosine") return ScheduleKind::kCosine;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown schedule '" + std::string(name) + "'");
}

double NoiseSchedule::PosteriorVariance(int t) const {
  return Beta(t) * (1.0 - AlphaBar(t - 1)) / (1.0 - AlphaBar(t));
}

NoiseSchedule MakeSchedule(int n, ScheduleKind kind,
                           std::optional<double> beta_min,
                           std::optional<double> beta_max) {
  if (n < 1) {
    throw Error(ErrorCode::kInvalidArgument, "schedule needs N >= 1");
  }
  for (const auto& b : {beta_min, beta_max}) {
    if (b && !(*b > 0.0 && *b < 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "beta endpoint " + std::to_string(*b) + " outside (0, 1)");
    }
  }
  NoiseSchedule s;
  s.n = n;
  s.kind = kind;
  s.beta.resize(n);
  if (kind == ScheduleKind::kLinear) {
    const double scale = 1000.0 / n;
    const double lo = beta_min.value_or(1e-4 * scale);
    const double hi = beta_max.value_or(0.02 * scale);
    for (int i = 0; i < n; ++i) {
      const double b = n == 1 ? lo : lo + (hi - lo) * i / (n - 1.0);
      s.beta(i) = std::min(b, kMaxBeta);
    }
  } else {
    auto f = [n](double t) {
      const double u = (t / n + kCosineOffset) / (1.0 + kCosineOffset);
      const double c = std::cos(u * std::numbers::pi / 2.0);
      return c * c;
    };
    for (int i = 0; i < n; ++i) {
      s.beta(i) = std::min(1.0 - f(i + 1) / f(i), kMaxBeta);
    }
  }
  s.alpha = Vector::Ones(n) - s.beta;
  s.alpha_bar.resize(n);
  double prod = 1.0;
  for (int i = 0; i < n; ++i) {
    prod *= s.alpha(i);
    s.alpha_bar(i) = prod;
  }
  return s;
}

namespace {

void CheckStep(int t, const NoiseSchedule& sched, int lo) {
  if (t < lo || t > sched.n) {
    throw Error(ErrorCode::kInvalidArgument,
                "step " + std::to_string(t) + " outside [" +
                    std::to_string(lo) + ", " + std::to_string(sched.n) + "]");
  }
}

}  // namespace

Matrix QSample(const Matrix& x0, int t, const Matrix& eps,
               const NoiseSchedule& sched) {
  CheckStep(t, sched, 1);
  if (eps.rows() != x0.rows() || eps.cols() != x0.cols()) {
    throw Error(ErrorCode::kShapeMismatch, "noise shape differs from x0");
  }
  const double ab = sched.AlphaBar(t);
  return std::sqrt(ab) * x0 + std::sqrt(1.0 - ab) * eps;
}

TrainingBatch MakeDdpmBatch(const std::vector<Matrix>& x0,
                            const std::vector<Conditioning>& conditioning,
                            const NoiseSchedule& sched, Rng& rng) {
  if (x0.size() != conditioning.size()) {
    throw Error(ErrorCode::kShapeMismatch, "conditioning count mismatch");
  }
  TrainingBatch batch;
  std::uniform_int_distribution<int> pick(1, sched.n);
  for (size_t i = 0; i < x0.size(); ++i) {
    const int t = pick(rng);
    Matrix eps = StandardNormal(static_cast<int>(x0[i].rows()),
                                static_cast<int>(x0[i].cols()), rng);
    Matrix xt = QSample(x0[i], t, eps, sched);
    for (const auto& e : conditioning[i].entries()) xt(e.row, e.col) = x0[i](e.row, e.col);
    batch.inputs.push_back(std::move(xt));
    batch.targets.push_back(std::move(eps));
    batch.masks.push_back(
        conditioning[i].LossMask(static_cast<int>(x0[i].rows()),
                                 static_cast<int>(x0[i].cols())));
    batch.t.push_back(t - 1);
  }
  return batch;
}

Matrix PosteriorMean(const Matrix& xt, const Matrix& eps_hat, int t,
                     const NoiseSchedule& sched, const SampleOptions& options) {
  CheckStep(t, sched, 1);
  const double ab = sched.AlphaBar(t);
  if (!options.clip_denoised) {
    const double coef = sched.Beta(t) / std::sqrt(1.0 - ab);
    return (xt - coef * eps_hat) / std::sqrt(sched.Alpha(t));
  }
  const Matrix x0 = ((xt - std::sqrt(1.0 - ab) * eps_hat) / std::sqrt(ab))
                        .cwiseMax(-1.0)
                        .cwiseMin(1.0);
  const double ab_prev = sched.AlphaBar(t - 1);
  const double c0 = std::sqrt(ab_prev) * sched.Beta(t) / (1.0 - ab);
  const double ct = std::sqrt(sched.Alpha(t)) * (1.0 - ab_prev) / (1.0 - ab);
  return c0 * x0 + ct * xt;
}

Matrix PSampleStep(const EpsilonModel& model, const Matrix& xt, int t,
                   const NoiseSchedule& sched, Rng& rng, SampleTrace* trace,
                   const SampleOptions& options) {
  CheckStep(t, sched, 1);
  const Matrix eps_hat = model.Predict(xt, t - 1);
  if (trace) ++trace->nfe;
  Matrix mean = PosteriorMean(xt, eps_hat, t, sched, options);
  if (t > 1) {
    mean += std::sqrt(sched.PosteriorVariance(t)) *
            StandardNormal(static_cast<int>(xt.rows()),
                           static_cast<int>(xt.cols()), rng);
  }
  return mean;
}

Matrix DdpmSample(const EpsilonModel& model, const NoiseSchedule& sched,
                  const Conditioning& conditioning, int horizon, int dim,
                  Rng& rng, SampleTrace* trace, const SampleOptions& options) {
  Matrix x = StandardNormal(horizon, dim, rng);
  conditioning.Apply(x);
  for (int t = sched.n; t >= 1; --t) {
    x = PSampleStep(model, x, t, sched, rng, trace, options);
    conditioning.Apply(x);
    conditioning.Check(x);
    if (trace && trace->on_step) trace->on_step(t - 1, x);
  }
  return x;
}

}  // namespace sbplan
