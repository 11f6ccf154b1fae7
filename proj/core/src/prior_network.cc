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

#include "sbplan/prior_network.h"

#include <cmath>
#include <string>

#include "nn_layers.h"
#include "sbplan/error.h"
#include "sbplan/rng.h"

namespace sbplan {
namespace {

nn::Linear Fc1(const PriorNetwork& net) {
  nn::Linear l{net.input_dim(), net.output_dim()};
  l.w_off = net.views()[0].offset;
  l.b_off = net.views()[1].offset;
  return l;
}

nn::Linear Fc2(const PriorNetwork& net) {
  nn::Linear l{net.output_dim(), net.output_dim()};
  l.w_off = net.views()[2].offset;
  l.b_off = net.views()[3].offset;
  return l;
}

}  // namespace

PriorNetwork::PriorNetwork(int horizon, int transition_dim, int state_dim)
    : horizon_(horizon), transition_dim_(transition_dim),
      state_dim_(state_dim) {
  if (horizon < 2 || transition_dim < 1 || state_dim != 4) {
    throw Error(ErrorCode::kShapeMismatch, "bad prior network shape");
  }
  nn::ParamLayout layout;
  nn::Linear fc1{input_dim(), output_dim()};
  fc1.Register(layout, "fc1");
  nn::Linear fc2{output_dim(), output_dim()};
  fc2.Register(layout, "fc2");
  views_ = layout.views();
  params_ = Vector::Zero(layout.total());
}

uint64_t PriorNetwork::ArchHash() const {
  uint64_t h = 0x84222325cbf29ce4ULL;
  for (int v : {horizon_, transition_dim_, state_dim_}) {
    h = MixBits(h ^ static_cast<uint64_t>(v));
  }
  return h;
}

void PriorNetwork::InitRandom(uint64_t seed) {
  Rng rng = StreamRng(seed, 0, kInitSalt);
  Fc1(*this).Init(params_.data(), rng);
  Fc2(*this).Init(params_.data(), rng);
}

Vector PriorNetwork::Input(const Vec4& start, const Vec4& goal) const {
  Vector in(input_dim());
  in << start, goal;
  return in;
}

Matrix PriorNetwork::Forward(const Vec4& start, const Vec4& goal) const {
  const double* p = params_.data();
  Matrix h = Fc1(*this).Forward(p, Input(start, goal));
  h = h.unaryExpr([](double v) { return v > 0 ? v : kNegativeSlope * v; });
  Matrix y = Fc2(*this).Forward(p, h);
  return Eigen::Map<const Matrix>(y.data(), horizon_, transition_dim_);
}

void PriorNetwork::Backward(const Vec4& start, const Vec4& goal,
                            const Matrix& upstream, Vector* grad) const {
  if (upstream.rows() != horizon_ || upstream.cols() != transition_dim_) {
    throw Error(ErrorCode::kShapeMismatch, "prior upstream shape mismatch");
  }
  if (grad->size() == 0) *grad = Vector::Zero(num_params());
  const double* p = params_.data();
  const nn::Linear fc1 = Fc1(*this);
  const nn::Linear fc2 = Fc2(*this);
  const Matrix in = Input(start, goal);
  const Matrix pre = fc1.Forward(p, in);
  const Matrix h =
      pre.unaryExpr([](double v) { return v > 0 ? v : kNegativeSlope * v; });
  const Matrix dy =
      Eigen::Map<const Matrix>(upstream.data(), output_dim(), 1);
  Matrix dh = fc2.Backward(p, grad->data(), h, dy);
  dh = dh.binaryExpr(pre, [](double g, double v) {
    return v > 0 ? g : kNegativeSlope * g;
  });
  fc1.Backward(p, grad->data(), in, dh);
}

}  // namespace sbplan
