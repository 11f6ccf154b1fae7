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

#include "nn_layers.h"

#include <cmath>

namespace sbplan::nn {

void InitUniform(double* p, int n, int fan_in, Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
  std::uniform_real_distribution<double> u(-bound, bound);
  for (int i = 0; i < n; ++i) p[i] = u(rng);
}

// ---------------------------------------------------------------------------
// Conv1d

void Conv1d::Register(ParamLayout& layout, const std::string& name) {
  w_off = layout.Add(name + ".weight", cout * cin * kernel);
  b_off = layout.Add(name + ".bias", cout);
}

void Conv1d::Init(double* params, Rng& rng) const {
  InitUniform(params + w_off, cout * cin * kernel, cin * kernel, rng);
  InitUniform(params + b_off, cout, cin * kernel, rng);
}

Act Conv1d::Forward(const double* params, const Act& x, Cache* cache) const {
  const int length = x.length;
  const int batch = x.batch;
  const int out_len = OutLength(length);
  ConstMap w(params + w_off, cout, cin * kernel);
  Eigen::Map<const Vector> bias(params + b_off, cout);

  Act y;
  y.batch = batch;
  y.length = out_len;
  if (pointwise()) {
    y.v.noalias() = w * x.v;
    if (cache) cache->cols = x.v;
  } else {
    Matrix cols = Matrix::Zero(cin * kernel, batch * out_len);
    for (int ci = 0; ci < cin; ++ci) {
      const double* src = x.v.row(ci).data();
      for (int j = 0; j < kernel; ++j) {
        double* dst = cols.row(ci * kernel + j).data();
        for (int b = 0; b < batch; ++b) {
          const double* s = src + b * length;
          double* d = dst + b * out_len;
          for (int o = 0; o < out_len; ++o) {
            const int i = o * stride - pad + j;
            if (i >= 0 && i < length) d[o] = s[i];
          }
        }
      }
    }
    y.v.noalias() = w * cols;
    if (cache) cache->cols = std::move(cols);
  }
  y.v.colwise() += bias;
  if (cache) {
    cache->in_length = length;
    cache->batch = batch;
  }
  return y;
}

Act Conv1d::Backward(const double* params, double* grad, const Cache& cache,
                     const Act& dy) const {
  ConstMap w(params + w_off, cout, cin * kernel);
  MutMap dw(grad + w_off, cout, cin * kernel);
  Eigen::Map<Vector> db(grad + b_off, cout);
  dw.noalias() += dy.v * cache.cols.transpose();
  db += dy.v.rowwise().sum();

  Act dx;
  dx.batch = cache.batch;
  dx.length = cache.in_length;
  if (pointwise()) {
    dx.v.noalias() = w.transpose() * dy.v;
    return dx;
  }
  const Matrix dcols = w.transpose() * dy.v;
  const int length = cache.in_length;
  const int out_len = dy.length;
  dx.v = Matrix::Zero(cin, cache.batch * length);
  for (int ci = 0; ci < cin; ++ci) {
    double* dst = dx.v.row(ci).data();
    for (int j = 0; j < kernel; ++j) {
      const double* src = dcols.row(ci * kernel + j).data();
      for (int b = 0; b < cache.batch; ++b) {
        double* d = dst + b * length;
        const double* s = src + b * out_len;
        for (int o = 0; o < out_len; ++o) {
          const int i = o * stride - pad + j;
          if (i >= 0 && i < length) d[i] += s[o];
        }
      }
    }
  }
  return dx;
}

// ---------------------------------------------------------------------------
// GroupNorm

void GroupNorm::Register(ParamLayout& layout, const std::string& name) {
  g_off = layout.Add(name + ".gamma", channels);
  b_off = layout.Add(name + ".beta", channels);
}

void GroupNorm::Init(double* params) const {
  for (int c = 0; c < channels; ++c) {
    params[g_off + c] = 1.0;
    params[b_off + c] = 0.0;
  }
}

Act GroupNorm::Forward(const double* params, const Act& x,
                       Cache* cache) const {
  const int cg = channels / groups;
  const int length = x.length;
  Matrix xhat(x.v.rows(), x.v.cols());
  std::vector<double> inv_std(static_cast<size_t>(x.batch) * groups);
  for (int b = 0; b < x.batch; ++b) {
    for (int g = 0; g < groups; ++g) {
      const auto blk = x.v.block(g * cg, b * length, cg, length);
      const double mean = blk.mean();
      const double var = (blk.array() - mean).square().mean();
      const double inv = 1.0 / std::sqrt(var + kEps);
      xhat.block(g * cg, b * length, cg, length) =
          (blk.array() - mean) * inv;
      inv_std[b * groups + g] = inv;
    }
  }
  Eigen::Map<const Vector> gamma(params + g_off, channels);
  Eigen::Map<const Vector> beta(params + b_off, channels);
  Act y;
  y.batch = x.batch;
  y.length = length;
  y.v = xhat;
  y.v.array().colwise() *= gamma.array();
  y.v.colwise() += beta;
  if (cache) {
    cache->xhat = std::move(xhat);
    cache->inv_std = std::move(inv_std);
  }
  return y;
}

Act GroupNorm::Backward(const double* params, double* grad, const Cache& cache,
                        const Act& dy) const {
  const int cg = channels / groups;
  const int length = dy.length;
  Eigen::Map<const Vector> gamma(params + g_off, channels);
  Eigen::Map<Vector> dgamma(grad + g_off, channels);
  Eigen::Map<Vector> dbeta(grad + b_off, channels);
  dgamma += (dy.v.array() * cache.xhat.array()).rowwise().sum().matrix();
  dbeta += dy.v.rowwise().sum();

  Matrix dxhat = dy.v;
  dxhat.array().colwise() *= gamma.array();
  Act dx;
  dx.batch = dy.batch;
  dx.length = length;
  dx.v.resize(dy.v.rows(), dy.v.cols());
  const double m = static_cast<double>(cg) * length;
  for (int b = 0; b < dy.batch; ++b) {
    for (int g = 0; g < groups; ++g) {
      const auto dxh = dxhat.block(g * cg, b * length, cg, length).array();
      const auto xh = cache.xhat.block(g * cg, b * length, cg, length).array();
      const double sum_dxh = dxh.sum();
      const double sum_dxh_xh = (dxh * xh).sum();
      const double inv = cache.inv_std[b * groups + g];
      dx.v.block(g * cg, b * length, cg, length) =
          (inv / m) * (m * dxh - sum_dxh - xh * sum_dxh_xh);
    }
  }
  return dx;
}

// ---------------------------------------------------------------------------
// Mish

// tanh(softplus(x)) = n / (n + 2) with n = e^x (e^x + 2), which needs a
// single exponential. Inputs are capped at 20 where the ratio is 1 in double.
namespace {
using RowArray =
    Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

RowArray MishGate(const Matrix& x, RowArray* ex) {
  *ex = x.array().min(20.0).exp();
  const RowArray n = *ex * (*ex + 2.0);
  return n / (n + 2.0);
}
}  // namespace

Matrix MishForward(const Matrix& x, MishCache* cache) {
  RowArray ex;
  Matrix y = (x.array() * MishGate(x, &ex)).matrix();
  if (cache) cache->x = x;
  return y;
}

Matrix MishBackward(const MishCache& cache, const Matrix& dy) {
  RowArray ex;
  const RowArray t = MishGate(cache.x, &ex);
  const RowArray sig = ex / (1.0 + ex);
  return (dy.array() *
          (t + cache.x.array() * (1.0 - t.square()) * sig))
      .matrix();
}

// ---------------------------------------------------------------------------
// Linear

void Linear::Register(ParamLayout& layout, const std::string& name) {
  w_off = layout.Add(name + ".weight", out * in);
  b_off = layout.Add(name + ".bias", out);
}

void Linear::Init(double* params, Rng& rng) const {
  InitUniform(params + w_off, out * in, in, rng);
  InitUniform(params + b_off, out, in, rng);
}

Matrix Linear::Forward(const double* params, const Matrix& x) const {
  ConstMap w(params + w_off, out, in);
  Eigen::Map<const Vector> bias(params + b_off, out);
  Matrix y = w * x;
  y.colwise() += bias;
  return y;
}

Matrix Linear::Backward(const double* params, double* grad, const Matrix& x,
                        const Matrix& dy) const {
  ConstMap w(params + w_off, out, in);
  MutMap dw(grad + w_off, out, in);
  Eigen::Map<Vector> db(grad + b_off, out);
  dw.noalias() += dy * x.transpose();
  db += dy.rowwise().sum();
  return w.transpose() * dy;
}

// ---------------------------------------------------------------------------
// ConvBlock / ResBlock

void ConvBlock::Register(ParamLayout& layout, const std::string& name,
                         int cin, int cout, int kernel, int groups) {
  conv.cin = cin;
  conv.cout = cout;
  conv.kernel = kernel;
  conv.pad = kernel / 2;
  conv.Register(layout, name + ".conv");
  norm.channels = cout;
  norm.groups = groups;
  norm.Register(layout, name + ".norm");
}

void ConvBlock::Init(double* params, Rng& rng) const {
  conv.Init(params, rng);
  norm.Init(params);
}

Act ConvBlock::Forward(const double* params, const Act& x, Cache* cache) const {
  Act h = conv.Forward(params, x, cache ? &cache->conv : nullptr);
  h = norm.Forward(params, h, cache ? &cache->norm : nullptr);
  h.v = MishForward(h.v, cache ? &cache->mish : nullptr);
  return h;
}

Act ConvBlock::Backward(const double* params, double* grad, const Cache& cache,
                        const Act& dy) const {
  Act d = dy;
  d.v = MishBackward(cache.mish, dy.v);
  d = norm.Backward(params, grad, cache.norm, d);
  return conv.Backward(params, grad, cache.conv, d);
}

void ResBlock::Register(ParamLayout& layout, const std::string& name, int cin,
                        int cout, int kernel, int groups, int time_dim) {
  block0.Register(layout, name + ".block0", cin, cout, kernel, groups);
  block1.Register(layout, name + ".block1", cout, cout, kernel, groups);
  time_proj.in = time_dim;
  time_proj.out = cout;
  time_proj.Register(layout, name + ".time");
  if (cin != cout) {
    residual.emplace();
    residual->cin = cin;
    residual->cout = cout;
    residual->Register(layout, name + ".residual");
  }
}

void ResBlock::Init(double* params, Rng& rng) const {
  block0.Init(params, rng);
  block1.Init(params, rng);
  time_proj.Init(params, rng);
  if (residual) residual->Init(params, rng);
}

Act ResBlock::Forward(const double* params, const Act& x, const Matrix& temb,
                      Cache* cache) const {
  Act h = block0.Forward(params, x, cache ? &cache->b0 : nullptr);
  const Matrix tp = time_proj.Forward(params, temb);
  for (int b = 0; b < h.batch; ++b) {
    h.v.middleCols(b * h.length, h.length).colwise() += tp.col(b);
  }
  Act out = block1.Forward(params, h, cache ? &cache->b1 : nullptr);
  if (residual) {
    out.v += residual->Forward(params, x, cache ? &cache->res : nullptr).v;
  } else {
    out.v += x.v;
  }
  if (cache) {
    cache->x.batch = x.batch;
    cache->x.length = x.length;
    cache->temb = temb;
  }
  return out;
}

Act ResBlock::Backward(const double* params, double* grad, const Cache& cache,
                       const Act& dy, Matrix* d_temb) const {
  Act dh = block1.Backward(params, grad, cache.b1, dy);
  Matrix dtp(dh.channels(), dh.batch);
  for (int b = 0; b < dh.batch; ++b) {
    dtp.col(b) = dh.v.middleCols(b * dh.length, dh.length).rowwise().sum();
  }
  *d_temb += time_proj.Backward(params, grad, cache.temb, dtp);
  Act dx = block0.Backward(params, grad, cache.b0, dh);
  if (residual) {
    dx.v += residual->Backward(params, grad, cache.res, dy).v;
  } else {
    dx.v += dy.v;
  }
  return dx;
}

// ---------------------------------------------------------------------------
// Shape helpers

Act Upsample2(const Act& x) {
  Act y;
  y.batch = x.batch;
  y.length = 2 * x.length;
  y.v.resize(x.v.rows(), static_cast<Eigen::Index>(y.batch) * y.length);
  for (int c = 0; c < x.v.rows(); ++c) {
    const double* s = x.v.row(c).data();
    double* d = y.v.row(c).data();
    for (int i = 0; i < x.batch * x.length; ++i) {
      d[2 * i] = s[i];
      d[2 * i + 1] = s[i];
    }
  }
  return y;
}

Act Upsample2Backward(const Act& dy) {
  Act dx;
  dx.batch = dy.batch;
  dx.length = dy.length / 2;
  dx.v.resize(dy.v.rows(), static_cast<Eigen::Index>(dx.batch) * dx.length);
  for (int c = 0; c < dy.v.rows(); ++c) {
    const double* s = dy.v.row(c).data();
    double* d = dx.v.row(c).data();
    for (int i = 0; i < dx.batch * dx.length; ++i) d[i] = s[2 * i] + s[2 * i + 1];
  }
  return dx;
}

Act ConcatChannels(const Act& a, const Act& b) {
  Act y;
  y.batch = a.batch;
  y.length = a.length;
  y.v.resize(a.v.rows() + b.v.rows(), a.v.cols());
  y.v.topRows(a.v.rows()) = a.v;
  y.v.bottomRows(b.v.rows()) = b.v;
  return y;
}

void SplitChannels(const Act& d, int first_channels, Act* da, Act* db) {
  da->batch = db->batch = d.batch;
  da->length = db->length = d.length;
  da->v = d.v.topRows(first_channels);
  db->v = d.v.bottomRows(d.v.rows() - first_channels);
}

Matrix SinusoidalEmbedding(const std::vector<int>& timesteps, int dim) {
  const int half = dim / 2;
  const double scale = std::log(10000.0) / std::max(1, half - 1);
  Matrix emb(dim, static_cast<Eigen::Index>(timesteps.size()));
  for (size_t b = 0; b < timesteps.size(); ++b) {
    for (int i = 0; i < half; ++i) {
      const double arg = timesteps[b] * std::exp(-scale * i);
      emb(i, b) = std::sin(arg);
      emb(half + i, b) = std::cos(arg);
    }
  }
  return emb;
}

}  // namespace sbplan::nn
