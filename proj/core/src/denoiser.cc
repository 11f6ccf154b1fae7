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

#include "sbplan/denoiser.h"

#include <string>

#include "nn_layers.h"
#include "sbplan/error.h"
#include "sbplan/rng.h"

namespace sbplan {

using nn::Act;

void DenoiserConfig::Validate() const {
  if (horizon < 4 || horizon % 4 != 0) {
    throw Error(ErrorCode::kShapeMismatch,
                "horizon must be a positive multiple of 4, got " +
                    std::to_string(horizon));
  }
  if (transition_dim < 1) {
    throw Error(ErrorCode::kInvalidArgument, "transition_dim must be >= 1");
  }
  if (widths.size() != 3) {
    throw Error(ErrorCode::kInvalidArgument, "expected three channel widths");
  }
  for (int w : widths) {
    if (w < groups || w % groups != 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "channel width " + std::to_string(w) +
                      " not divisible by group count");
    }
  }
  if (kernel < 1 || kernel % 2 == 0) {
    throw Error(ErrorCode::kInvalidArgument, "kernel must be odd");
  }
  if (time_dim < 4 || time_dim % 2 != 0 || time_hidden < 1) {
    throw Error(ErrorCode::kInvalidArgument, "bad time embedding size");
  }
}

uint64_t DenoiserConfig::ArchHash() const {
  uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](int64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= static_cast<uint64_t>(v >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  mix(horizon);
  mix(transition_dim);
  for (int w : widths) mix(w);
  mix(kernel);
  mix(groups);
  mix(time_dim);
  mix(time_hidden);
  return h;
}

struct DenoiserNetwork::Layers {
  nn::ParamLayout layout;
  nn::Linear time1, time2;
  nn::ResBlock res0, res1, res2, mid, up2_res, up1_res, up0_res;
  nn::Conv1d down0, down1, up2_conv, up1_conv, out;
  nn::ConvBlock final_block;

  explicit Layers(const DenoiserConfig& c) {
    const int d = c.transition_dim;
    const int w0 = c.widths[0], w1 = c.widths[1], w2 = c.widths[2];
    const int k = c.kernel, g = c.groups, td = c.time_dim;
    time1 = {c.time_dim, c.time_hidden};
    time1.Register(layout, "time.fc1");
    time2 = {c.time_hidden, c.time_dim};
    time2.Register(layout, "time.fc2");
    res0.Register(layout, "down0.res", d, w0, k, g, td);
    down0 = {w0, w0, 3, 2, 1};
    down0.Register(layout, "down0.pool");
    res1.Register(layout, "down1.res", w0, w1, k, g, td);
    down1 = {w1, w1, 3, 2, 1};
    down1.Register(layout, "down1.pool");
    res2.Register(layout, "down2.res", w1, w2, k, g, td);
    mid.Register(layout, "mid.res", w2, w2, k, g, td);
    up2_res.Register(layout, "up2.res", 2 * w2, w1, k, g, td);
    up2_conv = {w1, w1, 3, 1, 1};
    up2_conv.Register(layout, "up2.upsample");
    up1_res.Register(layout, "up1.res", 2 * w1, w0, k, g, td);
    up1_conv = {w0, w0, 3, 1, 1};
    up1_conv.Register(layout, "up1.upsample");
    up0_res.Register(layout, "up0.res", 2 * w0, w0, k, g, td);
    final_block.Register(layout, "final.block", w0, w0, k, g);
    out = {w0, d, 1, 1, 0};
    out.Register(layout, "final.out");
  }
};

struct DenoiserTape::Impl {
  std::vector<int> ts;
  int batch = 0;
  Matrix emb, t2, temb;  // t2 feeds the second time layer
  nn::MishCache m1, m3;
  nn::ResBlock::Cache res0, res1, res2, mid, up2_res, up1_res, up0_res;
  nn::Conv1d::Cache down0, down1, up2_conv, up1_conv, out;
  nn::ConvBlock::Cache final_block;
};

DenoiserTape::DenoiserTape() : impl_(std::make_unique<Impl>()) {}
DenoiserTape::~DenoiserTape() = default;
DenoiserTape::DenoiserTape(DenoiserTape&&) noexcept = default;
DenoiserTape& DenoiserTape::operator=(DenoiserTape&&) noexcept = default;

DenoiserNetwork::DenoiserNetwork(const DenoiserConfig& config)
    : config_(config) {
  config_.Validate();
  layers_ = std::make_shared<const Layers>(config_);
  params_ = Vector::Zero(layers_->layout.total());
}

const std::vector<ParamView>& DenoiserNetwork::views() const {
  return layers_->layout.views();
}

const ParamView& DenoiserNetwork::view(const std::string& name) const {
  for (const auto& v : views()) {
    if (v.name == name) return v;
  }
  throw Error(ErrorCode::kInvalidArgument, "no parameter view named " + name);
}

void DenoiserNetwork::InitRandom(uint64_t seed) {
  Rng rng = StreamRng(seed, 0, kInitSalt);
  const Layers& l = *layers_;
  double* p = params_.data();
  l.time1.Init(p, rng);
  l.time2.Init(p, rng);
  l.res0.Init(p, rng);
  l.down0.Init(p, rng);
  l.res1.Init(p, rng);
  l.down1.Init(p, rng);
  l.res2.Init(p, rng);
  l.mid.Init(p, rng);
  l.up2_res.Init(p, rng);
  l.up2_conv.Init(p, rng);
  l.up1_res.Init(p, rng);
  l.up1_conv.Init(p, rng);
  l.up0_res.Init(p, rng);
  l.final_block.Init(p, rng);
  l.out.Init(p, rng);
}

void DenoiserNetwork::CheckInput(const Matrix& x) const {
  if (x.rows() != config_.horizon || x.cols() != config_.transition_dim) {
    throw Error(ErrorCode::kShapeMismatch,
                "denoiser input is " + std::to_string(x.rows()) + "x" +
                    std::to_string(x.cols()) + ", expected " +
                    std::to_string(config_.horizon) + "x" +
                    std::to_string(config_.transition_dim));
  }
}

Matrix DenoiserNetwork::Forward(const Matrix& x, int t, int n_steps) const {
  if (t < 0 || t >= n_steps) {
    throw Error(ErrorCode::kInvalidArgument,
                "timestep " + std::to_string(t) + " outside [0, " +
                    std::to_string(n_steps) + ")");
  }
  return Predict(x, t);
}

Matrix DenoiserNetwork::Predict(const Matrix& x, int t) const {
  return ForwardBatch({x}, {t}, nullptr).front();
}

Vector DenoiserNetwork::Backward(const Matrix& x, int t,
                                 const Matrix& upstream) const {
  DenoiserTape tape;
  ForwardBatch({x}, {t}, &tape);
  Vector grad;
  BackwardBatch(tape, {upstream}, &grad);
  return grad;
}

std::vector<Matrix> DenoiserNetwork::ForwardBatch(
    const std::vector<Matrix>& xs, const std::vector<int>& ts,
    DenoiserTape* tape) const {
  if (xs.size() != ts.size() || xs.empty()) {
    throw Error(ErrorCode::kShapeMismatch, "batch inputs and timesteps differ");
  }
  const Layers& l = *layers_;
  const double* p = params_.data();
  const int batch = static_cast<int>(xs.size());
  const int horizon = config_.horizon;
  const int dim = config_.transition_dim;
  DenoiserTape::Impl* c = tape ? tape->impl_.get() : nullptr;

  Matrix emb = nn::SinusoidalEmbedding(ts, config_.time_dim);
  Matrix t1 = l.time1.Forward(p, emb);
  Matrix t2 = nn::MishForward(t1, c ? &c->m1 : nullptr);
  Matrix t3 = l.time2.Forward(p, t2);
  Matrix temb = nn::MishForward(t3, c ? &c->m3 : nullptr);

  Act x;
  x.batch = batch;
  x.length = horizon;
  x.v.resize(dim, static_cast<Eigen::Index>(batch) * horizon);
  for (int b = 0; b < batch; ++b) {
    CheckInput(xs[b]);
    x.v.middleCols(b * horizon, horizon) = xs[b].transpose();
  }

  Act h0 = l.res0.Forward(p, x, temb, c ? &c->res0 : nullptr);
  Act h1 = l.res1.Forward(p, l.down0.Forward(p, h0, c ? &c->down0 : nullptr),
                          temb, c ? &c->res1 : nullptr);
  Act h2 = l.res2.Forward(p, l.down1.Forward(p, h1, c ? &c->down1 : nullptr),
                          temb, c ? &c->res2 : nullptr);
  Act m = l.mid.Forward(p, h2, temb, c ? &c->mid : nullptr);
  Act u = l.up2_res.Forward(p, nn::ConcatChannels(m, h2), temb,
                            c ? &c->up2_res : nullptr);
  u = l.up2_conv.Forward(p, nn::Upsample2(u), c ? &c->up2_conv : nullptr);
  u = l.up1_res.Forward(p, nn::ConcatChannels(u, h1), temb,
                        c ? &c->up1_res : nullptr);
  u = l.up1_conv.Forward(p, nn::Upsample2(u), c ? &c->up1_conv : nullptr);
  u = l.up0_res.Forward(p, nn::ConcatChannels(u, h0), temb,
                        c ? &c->up0_res : nullptr);
  u = l.final_block.Forward(p, u, c ? &c->final_block : nullptr);
  Act y = l.out.Forward(p, u, c ? &c->out : nullptr);

  if (c) {
    c->ts = ts;
    c->batch = batch;
    c->emb = std::move(emb);
    c->t2 = std::move(t2);
    c->temb = std::move(temb);
  }

  std::vector<Matrix> outs(batch);
  for (int b = 0; b < batch; ++b) {
    outs[b] = y.v.middleCols(b * horizon, horizon).transpose();
  }
  return outs;
}

void DenoiserNetwork::BackwardBatch(const DenoiserTape& tape,
                                    const std::vector<Matrix>& upstream,
                                    Vector* grad) const {
  const DenoiserTape::Impl& c = *tape.impl_;
  if (static_cast<int>(upstream.size()) != c.batch) {
    throw Error(ErrorCode::kShapeMismatch, "upstream batch size mismatch");
  }
  if (grad->size() == 0) *grad = Vector::Zero(num_params());
  if (grad->size() != num_params()) {
    throw Error(ErrorCode::kShapeMismatch, "gradient buffer size mismatch");
  }
  const Layers& l = *layers_;
  const double* p = params_.data();
  double* g = grad->data();
  const int horizon = config_.horizon;
  const int w0 = config_.widths[0], w1 = config_.widths[1],
            w2 = config_.widths[2];

  Act dy;
  dy.batch = c.batch;
  dy.length = horizon;
  dy.v.resize(config_.transition_dim,
              static_cast<Eigen::Index>(c.batch) * horizon);
  for (int b = 0; b < c.batch; ++b) {
    CheckInput(upstream[b]);
    dy.v.middleCols(b * horizon, horizon) = upstream[b].transpose();
  }

  Matrix d_temb = Matrix::Zero(c.temb.rows(), c.temb.cols());
  Act du = l.out.Backward(p, g, c.out, dy);
  du = l.final_block.Backward(p, g, c.final_block, du);
  Act dc = l.up0_res.Backward(p, g, c.up0_res, du, &d_temb);
  Act dup, dh0;
  nn::SplitChannels(dc, w0, &dup, &dh0);
  du = nn::Upsample2Backward(l.up1_conv.Backward(p, g, c.up1_conv, dup));
  dc = l.up1_res.Backward(p, g, c.up1_res, du, &d_temb);
  Act dh1;
  nn::SplitChannels(dc, w1, &dup, &dh1);
  du = nn::Upsample2Backward(l.up2_conv.Backward(p, g, c.up2_conv, dup));
  dc = l.up2_res.Backward(p, g, c.up2_res, du, &d_temb);
  Act dm, dh2;
  nn::SplitChannels(dc, w2, &dm, &dh2);
  dh2.v += l.mid.Backward(p, g, c.mid, dm, &d_temb).v;
  Act dd = l.res2.Backward(p, g, c.res2, dh2, &d_temb);
  dh1.v += l.down1.Backward(p, g, c.down1, dd).v;
  dd = l.res1.Backward(p, g, c.res1, dh1, &d_temb);
  dh0.v += l.down0.Backward(p, g, c.down0, dd).v;
  l.res0.Backward(p, g, c.res0, dh0, &d_temb);

  Matrix dt3 = nn::MishBackward(c.m3, d_temb);
  Matrix dt2 = l.time2.Backward(p, g, c.t2, dt3);
  Matrix dt1 = nn::MishBackward(c.m1, dt2);
  l.time1.Backward(p, g, c.emb, dt1);
}

}  // namespace sbplan
