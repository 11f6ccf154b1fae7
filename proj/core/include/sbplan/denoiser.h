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

#ifndef SBPLAN_DENOISER_H_
#define SBPLAN_DENOISER_H_

#include <cstdint>
#include <memory>
#include <vector>

#include "sbplan/param_view.h"
#include "sbplan/types.h"

namespace sbplan {

// Anything that maps a noisy (horizon x dim) iterate and a step index in
// [0, N) to a noise estimate of the same shape. Samplers only see this.
class EpsilonModel {
 public:
  virtual ~EpsilonModel() = default;
  virtual Matrix Predict(const Matrix& x, int t) const = 0;
};

struct DenoiserConfig {
  int horizon = 256;
  int transition_dim = kTransitionDim;
  std::vector<int> widths = {32, 64, 128};
  int kernel = 5;
  int groups = 8;
  int time_dim = 32;
  int time_hidden = 128;

  // Throws kInvalidArgument / kShapeMismatch on unusable settings.
  void Validate() const;
  uint64_t ArchHash() const;
};

class DenoiserTape;

class DenoiserNetwork : public EpsilonModel {
 public:
  explicit DenoiserNetwork(const DenoiserConfig& config);

  const DenoiserConfig& config() const { return config_; }
  int num_params() const { return static_cast<int>(params_.size()); }
  Vector& params() { return params_; }
  const Vector& params() const { return params_; }
  const std::vector<ParamView>& views() const;
  // Returns the named view; throws kInvalidArgument if absent.
  const ParamView& view(const std::string& name) const;

  void InitRandom(uint64_t seed);

  // Checks 0 <= t < n_steps and the input shape.
  Matrix Forward(const Matrix& x, int t, int n_steps) const;
  Matrix Predict(const Matrix& x, int t) const override;

  // Gradient of <Forward(x, t), upstream> with respect to the parameters.
  Vector Backward(const Matrix& x, int t, const Matrix& upstream) const;

  // Batched evaluation. When `tape` is non-null it records what
  // BackwardBatch needs.
  std::vector<Matrix> ForwardBatch(const std::vector<Matrix>& xs,
                                   const std::vector<int>& ts,
                                   DenoiserTape* tape) const;
  // Accumulates into *grad (resized and zeroed if empty).
  void BackwardBatch(const DenoiserTape& tape,
                     const std::vector<Matrix>& upstream, Vector* grad) const;

 private:
  struct Layers;
  void CheckInput(const Matrix& x) const;

  DenoiserConfig config_;
  std::shared_ptr<const Layers> layers_;
  Vector params_;
};

class DenoiserTape {
 public:
  DenoiserTape();
  ~DenoiserTape();
  DenoiserTape(DenoiserTape&&) noexcept;
  DenoiserTape& operator=(DenoiserTape&&) noexcept;

 private:
  friend class DenoiserNetwork;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace sbplan

#endif  // SBPLAN_DENOISER_H_
