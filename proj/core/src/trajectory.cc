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

#include "sbplan/trajectory.h"

#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include "binary_io.h"
#include "sbplan/error.h"
#include "sbplan/rng.h"

namespace sbplan {
namespace internal {

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

void WriteFileAtomic(const std::filesystem::path& path,
                     std::string_view bytes) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error(ErrorCode::kIo, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace internal

namespace {

constexpr char kDatasetMagic[] = "SBPLAN01";
constexpr size_t kMagicLen = 8;
// Rounding allowance for values normalized with the stats fitted on them.
constexpr double kRangeSlack = 1e-12;

void CheckFinite(const Matrix& m) {
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (!std::isfinite(m(r, c))) {
        throw Error(ErrorCode::kNonFinite,
                    "non-finite entry at row " + std::to_string(r) +
                        ", dimension " + std::to_string(c));
      }
    }
  }
}

void CheckStatsDim(const Matrix& m, const NormalizationStats& stats) {
  if (m.cols() != stats.dim()) {
    throw Error(ErrorCode::kShapeMismatch,
                "trajectory has " + std::to_string(m.cols()) +
                    " dims, stats have " + std::to_string(stats.dim()));
  }
}

}  // namespace

Matrix StandardNormal(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix out(rows, cols);
  for (Eigen::Index i = 0; i < out.size(); ++i) out.data()[i] = normal(rng);
  return out;
}

Trajectory::Trajectory(Matrix data, bool normalized)
    : data_(std::move(data)), normalized_(normalized) {
  if (data_.rows() < 2) {
    throw Error(ErrorCode::kShapeMismatch,
                "horizon must be >= 2, got " + std::to_string(data_.rows()));
  }
  CheckFinite(data_);
  if (normalized_ && data_.cwiseAbs().maxCoeff() > 1.0 + kRangeSlack) {
    throw Error(ErrorCode::kInvalidArgument,
                "normalized trajectory has entries outside [-1, 1]");
  }
}

NormalizationStats NormalizationStats::FitRows(const Matrix& rows) {
  if (rows.rows() == 0) {
    throw Error(ErrorCode::kEmptyDataset, "cannot fit stats on zero rows");
  }
  CheckFinite(rows);
  NormalizationStats stats;
  stats.min = rows.colwise().minCoeff().transpose();
  stats.max = rows.colwise().maxCoeff().transpose();
  return stats;
}

NormalizationStats NormalizationStats::Fit(
    const std::vector<Trajectory>& trajectories) {
  if (trajectories.empty()) {
    throw Error(ErrorCode::kEmptyDataset, "cannot fit stats on no data");
  }
  const int dim = trajectories.front().dim();
  NormalizationStats stats;
  stats.min = Vector::Constant(dim, std::numeric_limits<double>::infinity());
  stats.max = Vector::Constant(dim, -std::numeric_limits<double>::infinity());
  for (const Trajectory& t : trajectories) {
    if (t.dim() != dim) {
      throw Error(ErrorCode::kShapeMismatch, "mixed transition dims");
    }
    stats.min = stats.min.cwiseMin(t.data().colwise().minCoeff().transpose());
    stats.max = stats.max.cwiseMax(t.data().colwise().maxCoeff().transpose());
  }
  return stats;
}

double NormalizationStats::NormalizeValue(double raw, int d) const {
  if (!std::isfinite(raw)) {
    throw Error(ErrorCode::kNonFinite,
                "non-finite value in dimension " + std::to_string(d));
  }
  if (IsDegenerate(d)) return 0.0;
  return 2.0 * (raw - min(d)) / (max(d) - min(d)) - 1.0;
}

double NormalizationStats::DenormalizeValue(double normalized, int d) const {
  if (!std::isfinite(normalized)) {
    throw Error(ErrorCode::kNonFinite,
                "non-finite value in dimension " + std::to_string(d));
  }
  if (IsDegenerate(d)) return 0.5 * (min(d) + max(d));
  return (normalized + 1.0) * 0.5 * (max(d) - min(d)) + min(d);
}

Vec4 NormalizationStats::NormalizeState(const Vec4& raw) const {
  Vec4 out;
  for (int i = 0; i < kStateDim; ++i) out(i) = NormalizeValue(raw(i), kStateCol + i);
  return out;
}

Vec4 NormalizationStats::DenormalizeState(const Vec4& normalized) const {
  Vec4 out;
  for (int i = 0; i < kStateDim; ++i) {
    out(i) = DenormalizeValue(normalized(i), kStateCol + i);
  }
  return out;
}

Matrix NormalizeMatrix(const Matrix& raw, const NormalizationStats& stats) {
  CheckStatsDim(raw, stats);
  Matrix out(raw.rows(), raw.cols());
  for (int r = 0; r < raw.rows(); ++r) {
    for (int d = 0; d < raw.cols(); ++d) {
      out(r, d) = stats.NormalizeValue(raw(r, d), d);
    }
  }
  return out;
}

Matrix DenormalizeMatrix(const Matrix& normalized,
                         const NormalizationStats& stats) {
  CheckStatsDim(normalized, stats);
  Matrix out(normalized.rows(), normalized.cols());
  for (int r = 0; r < normalized.rows(); ++r) {
    for (int d = 0; d < normalized.cols(); ++d) {
      out(r, d) = stats.DenormalizeValue(normalized(r, d), d);
    }
  }
  return out;
}

Trajectory Normalize(const Trajectory& traj, const NormalizationStats& stats) {
  return Trajectory(NormalizeMatrix(traj.data(), stats), /*normalized=*/true);
}

Trajectory Denormalize(const Trajectory& traj,
                       const NormalizationStats& stats) {
  return Trajectory(DenormalizeMatrix(traj.data(), stats),
                    /*normalized=*/false);
}

int Dataset::horizon() const {
  return trajectories.empty() ? 0 : trajectories.front().horizon();
}

void SaveDataset(const Dataset& dataset, const std::filesystem::path& path) {
  const int dim = dataset.stats.dim();
  const int horizon = dataset.horizon();
  for (const Trajectory& t : dataset.trajectories) {
    if (t.horizon() != horizon || t.dim() != dim) {
      throw Error(ErrorCode::kShapeMismatch,
                  "dataset trajectories disagree in shape");
    }
  }
  internal::ByteWriter w;
  w.Raw(std::string_view(kDatasetMagic, kMagicLen));
  w.U32(static_cast<uint32_t>(dataset.trajectories.size()));
  w.U32(static_cast<uint32_t>(horizon));
  w.U32(static_cast<uint32_t>(dim));
  w.F64s(dataset.stats.min.data(), dim);
  w.F64s(dataset.stats.max.data(), dim);
  for (const Trajectory& t : dataset.trajectories) {
    w.F64s(t.data().data(), static_cast<size_t>(t.data().size()));
  }
  w.String(dataset.maze_id);
  internal::WriteFileAtomic(path, w.bytes());
}

Dataset LoadDataset(const std::filesystem::path& path) {
  internal::ByteReader r(internal::ReadFile(path));
  if (r.remaining() < kMagicLen) {
    throw Error(ErrorCode::kTruncatedFile, "file shorter than header");
  }
  if (r.Raw(kMagicLen) != std::string_view(kDatasetMagic, kMagicLen)) {
    throw Error(ErrorCode::kVersionMismatch,
                "expected header SBPLAN01 in " + path.string());
  }
  const uint32_t n_traj = r.U32();
  const uint32_t horizon = r.U32();
  const uint32_t dim = r.U32();
  if (dim == 0 || (n_traj > 0 && horizon < 2)) {
    throw Error(ErrorCode::kShapeMismatch,
                "invalid shape (" + std::to_string(n_traj) + ", " +
                    std::to_string(horizon) + ", " + std::to_string(dim) + ")");
  }
  Dataset ds;
  ds.stats.min.resize(dim);
  ds.stats.max.resize(dim);
  r.F64s(ds.stats.min.data(), dim);
  r.F64s(ds.stats.max.data(), dim);
  const size_t per_traj = static_cast<size_t>(horizon) * dim;
  // The payload plus the trailing maze id must fit exactly.
  if (r.remaining() < per_traj * n_traj * sizeof(double) + sizeof(uint32_t)) {
    throw Error(ErrorCode::kTruncatedFile,
                "payload shorter than header counts in " + path.string());
  }
  ds.trajectories.reserve(n_traj);
  for (uint32_t i = 0; i < n_traj; ++i) {
    Matrix m(horizon, dim);
    r.F64s(m.data(), per_traj);
    ds.trajectories.emplace_back(std::move(m));
  }
  ds.maze_id = r.String();
  if (!r.AtEnd()) {
    throw Error(ErrorCode::kShapeMismatch,
                std::to_string(r.remaining()) +
                    " trailing bytes disagree with header counts");
  }
  return ds;
}

}  // namespace sbplan
