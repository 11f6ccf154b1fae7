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

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include <gtest/gtest.h>

#include "sbplan/rng.h"
#include "sbplan/trajectory.h"
#include "support/test_support.h"

namespace sbplan {
namespace {

using testing::TempDir;
using testing::UniformMatrix;

NormalizationStats SimpleStats() {
  NormalizationStats s;
  s.min = Vector(6);
  s.max = Vector(6);
  s.min << -1.0, -1.0, 0.5, 0.5, -5.0, -5.0;
  s.max << 1.0, 1.0, 4.5, 3.5, 5.0, 5.0;
  return s;
}

Dataset RandomDataset(int n, int horizon, uint64_t seed) {
  Dataset ds;
  ds.maze_id = "umaze";
  for (int i = 0; i < n; ++i) {
    ds.trajectories.emplace_back(
        UniformMatrix(horizon, 6, -3.0, 3.0, seed + i));
  }
  ds.stats = NormalizationStats::Fit(ds.trajectories);
  return ds;
}

TEST(TrajectoryTest, RejectsShortHorizon) {
  EXPECT_SBPLAN_ERROR(Trajectory(Matrix::Zero(1, 6)), kShapeMismatch);
}

TEST(TrajectoryTest, RejectsNonFiniteEntries) {
  Matrix m = Matrix::Zero(4, 6);
  m(2, 3) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_SBPLAN_ERROR(Trajectory{m}, kNonFinite);
  m(2, 3) = std::numeric_limits<double>::infinity();
  EXPECT_SBPLAN_ERROR(Trajectory{m}, kNonFinite);
}

TEST(TrajectoryTest, NormalizedFlagRequiresUnitRange) {
  Matrix m = Matrix::Zero(3, 6);
  m(1, 1) = 1.5;
  EXPECT_SBPLAN_ERROR(Trajectory(m, true), kInvalidArgument);
  EXPECT_NO_THROW(Trajectory(m, false));
}

TEST(TrajectoryTest, Accessors) {
  Matrix m(2, 6);
  m << 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12;
  const Trajectory t(m);
  EXPECT_EQ(t.horizon(), 2);
  EXPECT_EQ(t.dim(), 6);
  EXPECT_EQ(t.Action(1), Vec2(7, 8));
  EXPECT_EQ(t.Position(0), Vec2(3, 4));
  EXPECT_EQ(t.Velocity(0), Vec2(5, 6));
  EXPECT_EQ(t.State(1), Vec4(9, 10, 11, 12));
}

TEST(NormalizeTest, MinMapsToMinusOneAndMidpointToZero) {
  const NormalizationStats s = SimpleStats();
  for (int d = 0; d < 6; ++d) {
    EXPECT_EQ(s.NormalizeValue(s.min(d), d), -1.0);
    EXPECT_EQ(s.NormalizeValue(s.max(d), d), 1.0);
    EXPECT_NEAR(s.NormalizeValue(0.5 * (s.min(d) + s.max(d)), d), 0.0, 1e-15);
  }
}

TEST(NormalizeTest, DenormalizeEndpoints) {
  const NormalizationStats s = SimpleStats();
  for (int d = 0; d < 6; ++d) {
    EXPECT_EQ(s.DenormalizeValue(-1.0, d), s.min(d));
    EXPECT_EQ(s.DenormalizeValue(1.0, d), s.max(d));
  }
}

TEST(NormalizeTest, RoundTripOnRandomTrajectories) {
  for (int i = 0; i < 100; ++i) {
    const Matrix raw = UniformMatrix(32, 6, -3.0, 3.0, 1000 + i);
    std::vector<Trajectory> one{Trajectory(raw)};
    const NormalizationStats s = NormalizationStats::Fit(one);
    const Trajectory back = Denormalize(Normalize(one[0], s), s);
    const double err = ((back.data() - raw).array().abs() /
                        raw.array().abs().max(1.0))
                           .maxCoeff();
    ASSERT_LE(err, 1e-12) << "trajectory " << i;
  }
}

TEST(NormalizeTest, FittedDataLiesInUnitRange) {
  const Dataset ds = RandomDataset(5, 16, 7);
  for (const Trajectory& t : ds.trajectories) {
    const Trajectory n = Normalize(t, ds.stats);
    EXPECT_TRUE(n.normalized());
    EXPECT_GE(n.data().minCoeff(), -1.0);
    EXPECT_LE(n.data().maxCoeff(), 1.0);
  }
}

TEST(NormalizeTest, DegenerateDimensionMapsToZero) {
  Matrix m = UniformMatrix(8, 6, -1.0, 1.0, 3);
  m.col(4).setConstant(2.5);
  m(3, 4) += 1e-9;
  std::vector<Trajectory> v{Trajectory(m)};
  const NormalizationStats s = NormalizationStats::Fit(v);
  EXPECT_TRUE(s.IsDegenerate(4));
  EXPECT_FALSE(s.IsDegenerate(0));
  const Trajectory n = Normalize(v[0], s);
  EXPECT_TRUE((n.data().col(4).array() == 0.0).all());
  EXPECT_TRUE(std::isfinite(s.DenormalizeValue(0.3, 4)));
}

TEST(NormalizeTest, NonFiniteInputReportsDimension) {
  const NormalizationStats s = SimpleStats();
  try {
    s.NormalizeValue(std::numeric_limits<double>::infinity(), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonFinite);
    EXPECT_NE(std::string(e.what()).find("dimension 3"), std::string::npos);
  }
  EXPECT_SBPLAN_ERROR(s.DenormalizeValue(std::nan(""), 0), kNonFinite);
}

TEST(NormalizeTest, DimensionMismatchRejected) {
  const NormalizationStats s = SimpleStats();
  EXPECT_SBPLAN_ERROR(NormalizeMatrix(Matrix::Zero(3, 5), s), kShapeMismatch);
}

TEST(NormalizeTest, StateHelpersUseStateColumns) {
  const NormalizationStats s = SimpleStats();
  const Vec4 raw(2.5, 2.0, 0.0, 5.0);
  const Vec4 n = s.NormalizeState(raw);
  EXPECT_DOUBLE_EQ(n(0), 0.0);
  EXPECT_DOUBLE_EQ(n(1), 0.0);
  EXPECT_DOUBLE_EQ(n(3), 1.0);
  EXPECT_TRUE(s.DenormalizeState(n).isApprox(raw, 1e-14));
}

TEST(StatsTest, FitOnEmptyInputFails) {
  EXPECT_SBPLAN_ERROR(NormalizationStats::Fit({}), kEmptyDataset);
  EXPECT_SBPLAN_ERROR(NormalizationStats::FitRows(Matrix(0, 6)),
                      kEmptyDataset);
}

TEST(DatasetIoTest, RoundTripIsBitExact) {
  TempDir dir;
  const Dataset ds = RandomDataset(3, 256, 11);
  SaveDataset(ds, dir / "a.sbd");
  const Dataset back = LoadDataset(dir / "a.sbd");
  ASSERT_EQ(back.trajectories.size(), 3u);
  EXPECT_EQ(back.maze_id, "umaze");
  EXPECT_EQ(back.horizon(), 256);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(std::memcmp(back.trajectories[i].data().data(),
                          ds.trajectories[i].data().data(),
                          sizeof(double) * 256 * 6),
              0);
  }
  EXPECT_EQ(back.stats.min, ds.stats.min);
  EXPECT_EQ(back.stats.max, ds.stats.max);

  // Saving the loaded copy reproduces the file byte for byte.
  SaveDataset(back, dir / "b.sbd");
  std::ifstream a(dir / "a.sbd", std::ios::binary);
  std::ifstream b(dir / "b.sbd", std::ios::binary);
  const std::string sa((std::istreambuf_iterator<char>(a)), {});
  const std::string sb((std::istreambuf_iterator<char>(b)), {});
  EXPECT_EQ(sa, sb);
}

TEST(DatasetIoTest, EmptyDatasetKeepsStats) {
  TempDir dir;
  Dataset ds;
  ds.stats = SimpleStats();
  ds.maze_id = "open";
  SaveDataset(ds, dir / "e.sbd");
  const Dataset back = LoadDataset(dir / "e.sbd");
  EXPECT_TRUE(back.empty());
  EXPECT_EQ(back.stats.min, ds.stats.min);
  EXPECT_EQ(back.stats.max, ds.stats.max);
  EXPECT_EQ(back.maze_id, "open");
}

std::string ReadBytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), {});
}

void WriteBytes(const std::filesystem::path& p, const std::string& s) {
  std::ofstream out(p, std::ios::binary);
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

TEST(DatasetIoTest, CorruptedHeaderIsVersionMismatch) {
  TempDir dir;
  SaveDataset(RandomDataset(1, 8, 2), dir / "d.sbd");
  std::string bytes = ReadBytes(dir / "d.sbd");
  bytes[7] = '9';
  WriteBytes(dir / "d.sbd", bytes);
  EXPECT_SBPLAN_ERROR(LoadDataset(dir / "d.sbd"), kVersionMismatch);
}

TEST(DatasetIoTest, TruncatedPayloadIsDistinctError) {
  TempDir dir;
  SaveDataset(RandomDataset(2, 8, 2), dir / "d.sbd");
  const std::string bytes = ReadBytes(dir / "d.sbd");
  WriteBytes(dir / "d.sbd", bytes.substr(0, bytes.size() / 2));
  EXPECT_SBPLAN_ERROR(LoadDataset(dir / "d.sbd"), kTruncatedFile);
  WriteBytes(dir / "d.sbd", bytes.substr(0, 5));
  EXPECT_SBPLAN_ERROR(LoadDataset(dir / "d.sbd"), kTruncatedFile);
}

TEST(DatasetIoTest, ShapeDisagreementIsDistinctError) {
  TempDir dir;
  SaveDataset(RandomDataset(2, 8, 2), dir / "d.sbd");
  WriteBytes(dir / "d.sbd", ReadBytes(dir / "d.sbd") + std::string(16, 'x'));
  EXPECT_SBPLAN_ERROR(LoadDataset(dir / "d.sbd"), kShapeMismatch);

  Dataset mixed = RandomDataset(2, 8, 2);
  mixed.trajectories.emplace_back(Matrix::Zero(9, 6));
  EXPECT_SBPLAN_ERROR(SaveDataset(mixed, dir / "m.sbd"), kShapeMismatch);
}

TEST(DatasetIoTest, MissingFileIsIoError) {
  TempDir dir;
  EXPECT_SBPLAN_ERROR(LoadDataset(dir / "nope.sbd"), kIo);
}

TEST(RngTest, StreamsAreReproducibleAndDistinct) {
  Rng a = StreamRng(5, 3, kEpisodeSalt);
  Rng b = StreamRng(5, 3, kEpisodeSalt);
  Rng c = StreamRng(5, 4, kEpisodeSalt);
  Rng d = StreamRng(5, 3, kTrainSalt);
  const auto va = a();
  EXPECT_EQ(va, b());
  EXPECT_NE(va, c());
  EXPECT_NE(va, d());
}

}  // namespace
}  // namespace sbplan
