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

#include <gtest/gtest.h>

#include "sbplan/dataset_gen.h"
#include "sbplan/maze.h"
#include "sbplan/priors.h"
#include "support/test_support.h"

namespace sbplan {
namespace {

const Dataset& UmazeData() {
  static const Dataset ds = [] {
    GenConfig cfg;
    cfg.maze_id = "umaze";
    cfg.horizon = 32;
    cfg.total_steps = 3000;
    cfg.seed = 1;
    return Generate(cfg);
  }();
  return ds;
}

Vec2 Cols(const Matrix& x, int row, int col) {
  return x.block<1, 2>(row, col).transpose();
}

TEST(PriorKindTest, Names) {
  EXPECT_EQ(ParsePriorKind("gaussian"), PriorKind::kGaussian);
  EXPECT_EQ(ParsePriorKind("straight"), PriorKind::kStraightLine);
  EXPECT_EQ(ParsePriorKind("straight_line"), PriorKind::kStraightLine);
  EXPECT_EQ(ParsePriorKind("learned"), PriorKind::kLearned);
  EXPECT_EQ(PriorKindName(PriorKind::kStraightLine), "straight_line");
  EXPECT_SBPLAN_ERROR(ParsePriorKind("spline"), kInvalidArgument);
}

TEST(GaussianPriorTest, MomentsAndShape) {
  Rng rng(3);
  const Matrix x = GaussianPrior(5000, 6, rng);
  ASSERT_EQ(x.rows(), 5000);
  ASSERT_EQ(x.cols(), 6);
  const double mean = x.mean();
  const double var = x.array().square().mean() - mean * mean;
  EXPECT_LT(std::abs(mean), 0.01);
  EXPECT_LT(std::abs(var - 1.0), 0.02);
}

TEST(GaussianPriorTest, IgnoresEndpoints) {
  const PriorSampler p(PriorKind::kGaussian, UmazeData().stats, 32);
  Rng a(9), b(9);
  const Matrix x = p.Sample(Vec4(-0.9, -0.9, 0, 0), Vec4(0.9, 0.9, 0, 0), a);
  const Matrix y = p.Sample(Vec4(0.3, 0.1, 0.2, 0), Vec4(-0.2, 0.5, 0, 0), b);
  EXPECT_EQ(x, y);
  EXPECT_EQ(x.rows(), 32);
  EXPECT_EQ(x.cols(), kTransitionDim);
}

TEST(StraightLinePriorTest, CoincidentEndpointsAreStationary) {
  const Vec2 p(2.3, 1.7);
  const Matrix x = StraightLinePriorRaw(p, p, 16);
  for (int t = 0; t < 16; ++t) {
    EXPECT_DOUBLE_EQ(x(t, kPosCol), p.x());
    EXPECT_DOUBLE_EQ(x(t, kPosCol + 1), p.y());
    EXPECT_EQ(Cols(x, t, kVelCol).norm(), 0.0);
    EXPECT_EQ(Cols(x, t, kActionCol).norm(), 0.0);
  }
}

TEST(StraightLinePriorTest, EvenlySpacedPositions) {
  const Vec2 a(1.5, 1.5), b(3.5, 2.5);
  const int h = 9;
  const Matrix x = StraightLinePriorRaw(a, b, h);
  EXPECT_EQ(Cols(x, 0, kPosCol), a);
  EXPECT_EQ(Cols(x, h - 1, kPosCol), b);
  const Vec2 mid = Cols(x, h / 2, kPosCol);
  EXPECT_LT((mid - 0.5 * (a + b)).norm(), 1e-15);
  const Vec2 step = (b - a) / (h - 1);
  for (int t = 1; t < h; ++t) {
    const Vec2 d = Cols(x, t, kPosCol) - Cols(x, t - 1, kPosCol);
    EXPECT_LT((d - step).norm(), 1e-14) << t;
  }
  // Velocities are constant and actions point along the line.
  for (int t = 0; t < h; ++t) {
    EXPECT_LE(Cols(x, t, kVelCol).norm(), kMaxSpeed + 1e-12);
    EXPECT_LE(Cols(x, t, kActionCol).norm(), 1.0 + 1e-12);
    EXPECT_EQ(x.row(t).segment(kVelCol, 2), x.row(0).segment(kVelCol, 2));
  }
  const Vec2 act = Cols(x, 0, kActionCol);
  EXPECT_NEAR(act.normalized().dot((b - a).normalized()), 1.0, 1e-12);
}

TEST(StraightLinePriorTest, SpeedIsCapped) {
  const Matrix x = StraightLinePriorRaw(Vec2(1.5, 1.5), Vec2(10.5, 7.5), 2);
  EXPECT_NEAR(Cols(x, 0, kVelCol).norm(), kMaxSpeed, 1e-12);
  EXPECT_SBPLAN_ERROR(StraightLinePriorRaw(Vec2::Zero(), Vec2::Ones(), 1),
                      kShapeMismatch);
}

TEST(StraightLinePriorTest, NormalizedEndpointsExact) {
  const NormalizationStats& stats = UmazeData().stats;
  const PriorSampler p(PriorKind::kStraightLine, stats, 32);
  Rng rng(0);
  for (int i = 0; i < 50; ++i) {
    const Matrix ends = testing::UniformMatrix(2, 4, -1, 1, 100 + i);
    const Vec4 s = ends.row(0).transpose();
    const Vec4 g = ends.row(1).transpose();
    const Matrix x = p.Sample(s, g, rng);
    EXPECT_EQ(x(0, kPosCol), s(0));
    EXPECT_EQ(x(0, kPosCol + 1), s(1));
    EXPECT_EQ(x(31, kPosCol), g(0));
    EXPECT_EQ(x(31, kPosCol + 1), g(1));
    EXPECT_TRUE(x.allFinite());
  }
}

TEST(LearnedPriorTest, RequiresNetwork) {
  EXPECT_SBPLAN_ERROR(
      PriorSampler(PriorKind::kLearned, UmazeData().stats, 32),
      kMissingCheckpoint);
  EXPECT_SBPLAN_ERROR(PriorSampler(std::nullopt, UmazeData().stats),
                      kMissingCheckpoint);
}

TEST(LearnedPriorTest, DeterministicAndFiniteOverCellPairs) {
  PriorNetwork net(32);
  net.InitRandom(4);
  const NormalizationStats& stats = UmazeData().stats;
  const PriorSampler p(net, stats);
  EXPECT_EQ(p.kind(), PriorKind::kLearned);
  EXPECT_EQ(p.horizon(), 32);
  const MazeSpec spec = MakeMaze("umaze");
  Rng a(1), b(2);
  for (const Cell& from : spec.free_cells()) {
    for (const Cell& to : spec.free_cells()) {
      Vec4 s, g;
      s << spec.CellCenter(from), 0, 0;
      g << spec.CellCenter(to), 0, 0;
      const Vec4 sn = stats.NormalizeState(s);
      const Vec4 gn = stats.NormalizeState(g);
      const Matrix x = p.Sample(sn, gn, a);
      ASSERT_EQ(x.rows(), 32);
      ASSERT_TRUE(x.allFinite());
      ASSERT_EQ(x, p.Sample(sn, gn, b));
    }
  }
}

TEST(PriorCostTest, ReportFields) {
  DenoiserNetwork ref(testing::TinyConfig(32));
  ref.InitRandom(0);
  const PriorSampler p(PriorKind::kStraightLine, UmazeData().stats, 32);
  EXPECT_SBPLAN_ERROR(MeasurePriorCost(p, 99, ref), kInvalidArgument);
  const PriorCostReport r = MeasurePriorCost(p, 100, ref);
  EXPECT_EQ(r.kind, "straight_line");
  EXPECT_EQ(r.samples, 100);
  EXPECT_GT(r.mean_seconds, 0.0);
  EXPECT_GT(r.denoiser_forward_seconds, 0.0);
  EXPECT_DOUBLE_EQ(r.ratio, r.mean_seconds / r.denoiser_forward_seconds);
  EXPECT_EQ(r.trivial, r.ratio < 0.01);
}

TEST(PriorCostTest, ClosedFormPriorsAreTrivialNextToFullNetwork) {
  DenoiserConfig cfg;
  cfg.horizon = 128;
  DenoiserNetwork ref(cfg);
  ref.InitRandom(0);
  for (PriorKind kind : {PriorKind::kGaussian, PriorKind::kStraightLine}) {
    const PriorSampler p(kind, UmazeData().stats, 128);
    const PriorCostReport r = MeasurePriorCost(p, 1000, ref);
    EXPECT_TRUE(r.trivial) << r.kind << " ratio " << r.ratio;
  }
}

}  // namespace
}  // namespace sbplan
