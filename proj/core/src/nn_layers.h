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

#ifndef SBPLAN_SRC_NN_LAYERS_H_
#define SBPLAN_SRC_NN_LAYERS_H_

#include <optional>
#include <string>
#include <vector>

#include "sbplan/param_view.h"
#include "sbplan/rng.h"
#include "sbplan/types.h"

// Minimal layer kit for the temporal UNet. Activations are (channels,
// batch*length) row-major matrices; sample b occupies columns
// [b*length, (b+1)*length). Parameters live in one flat buffer and every
// layer remembers its offsets into it.
namespace sbplan::nn {

using ParamView = sbplan::ParamView;

class ParamLayout {
 public:
  int Add(const std::string& name, int size) {
    const int off = total_;
    views_.push_back({name, off, size});
    total_ += size;
    return off;
  }
  int total() const { return total_; }
  const std::vector<ParamView>& views() const { return views_; }

 private:
  int total_ = 0;
  std::vector<ParamView> views_;
};

using ConstMap = Eigen::Map<const Matrix>;
using MutMap = Eigen::Map<Matrix>;

struct Act {
  Matrix v;
  int batch = 0;
  int length = 0;
  int channels() const { return static_cast<int>(v.rows()); }
};

// Kaiming-uniform style init, U(-1/sqrt(fan_in), 1/sqrt(fan_in)).
void InitUniform(double* p, int n, int fan_in, Rng& rng);

struct Conv1d {
  int cin = 0, cout = 0, kernel = 1, stride = 1, pad = 0;
  int w_off = 0, b_off = 0;

  struct Cache {
    Matrix cols;  // im2col buffer (or the input itself for 1x1 convs)
    int in_length = 0;
    int batch = 0;
  };

  void Register(ParamLayout& layout, const std::string& name);
  void Init(double* params, Rng& rng) const;
  int OutLength(int length) const { return (length + 2 * pad - kernel) / stride + 1; }
  bool pointwise() const { return kernel == 1 && stride == 1 && pad == 0; }

  Act Forward(const double* params, const Act& x, Cache* cache) const;
  Act Backward(const double* params, double* grad, const Cache& cache,
               const Act& dy) const;
};

struct GroupNorm {
  int channels = 0, groups = 1;
  int g_off = 0, b_off = 0;
  static constexpr double kEps = 1e-5;

  struct Cache {
    Matrix xhat;
    std::vector<double> inv_std;  // per (sample, group)
  };

  void Register(ParamLayout& layout, const std::string& name);
  void Init(double* params) const;
  Act Forward(const double* params, const Act& x, Cache* cache) const;
  Act Backward(const double* params, double* grad, const Cache& cache,
               const Act& dy) const;
};

struct MishCache {
  Matrix x;
};
Matrix MishForward(const Matrix& x, MishCache* cache);
Matrix MishBackward(const MishCache& cache, const Matrix& dy);

// Dense layer over column vectors: (in, batch) -> (out, batch).
struct Linear {
  int in = 0, out = 0;
  int w_off = 0, b_off = 0;

  void Register(ParamLayout& layout, const std::string& name);
  void Init(double* params, Rng& rng) const;
  Matrix Forward(const double* params, const Matrix& x) const;
  // Returns d/dx; `x` is the forward input.
  Matrix Backward(const double* params, double* grad, const Matrix& x,
                  const Matrix& dy) const;
};

// Conv(k) -> GroupNorm -> Mish.
struct ConvBlock {
  Conv1d conv;
  GroupNorm norm;

  struct Cache {
    Conv1d::Cache conv;
    GroupNorm::Cache norm;
    MishCache mish;
  };

  void Register(ParamLayout& layout, const std::string& name, int cin,
                int cout, int kernel, int groups);
  void Init(double* params, Rng& rng) const;
  Act Forward(const double* params, const Act& x, Cache* cache) const;
  Act Backward(const double* params, double* grad, const Cache& cache,
               const Act& dy) const;
};

// Two ConvBlocks with a per-channel time-embedding bias added after the first
// and a residual connection (1x1 conv when the width changes).
struct ResBlock {
  ConvBlock block0, block1;
  Linear time_proj;
  std::optional<Conv1d> residual;

  struct Cache {
    ConvBlock::Cache b0, b1;
    Conv1d::Cache res;
    Act x;  // shape of the block input
    Matrix temb;
  };

  void Register(ParamLayout& layout, const std::string& name, int cin,
                int cout, int kernel, int groups, int time_dim);
  void Init(double* params, Rng& rng) const;
  // `temb` is the Mish-activated embedding, (time_dim, batch).
  Act Forward(const double* params, const Act& x, const Matrix& temb,
              Cache* cache) const;
  // Accumulates the embedding gradient into *d_temb.
  Act Backward(const double* params, double* grad, const Cache& cache,
               const Act& dy, Matrix* d_temb) const;
};

Act Upsample2(const Act& x);
Act Upsample2Backward(const Act& dy);
Act ConcatChannels(const Act& a, const Act& b);
void SplitChannels(const Act& d, int first_channels, Act* da, Act* db);

// Sinusoidal embedding of per-sample timestep indices, (dim, batch).
Matrix SinusoidalEmbedding(const std::vector<int>& timesteps, int dim);

}  // namespace sbplan::nn

#endif  // SBPLAN_SRC_NN_LAYERS_H_
