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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "sbplan/checkpoint.h"
#include "sbplan/ddpm.h"
#include "sbplan/denoiser.h"
#include "sbplan/objective.h"
#include "sbplan/optimizer.h"
#include "sbplan/prior_network.h"
#include "sbplan/rng.h"
#include "support/test_support.h"

namespace sbplan {
namespace {

using testing::TempDir;
using testing::TinyConfig;
using testing::UniformMatrix;

double RelErr(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-5});
}

// Central differences of <f(params), upstream> on `coords` random
// coordinates; returns the worst relative error against `analytic`.
template <typename Eval>
double WorstFdError(Vector& params, const Vector& analytic, int coords,
                    uint64_t seed, Eval&& eval) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(params.size()) - 1);
  const double h = 1e-6;
  double worst = 0.0;
  for (int k = 0; k < coords; ++k) {
    const int i = pick(rng);
    const double orig = params(i);
    params(i) = orig + h;
    const double fp = eval();
    params(i) = orig - h;
    const double fm = eval();
    params(i) = orig;
    worst = std::max(worst, RelErr((fp - fm) / (2 * h), analytic(i)));
  }
  return worst;
}

TEST(DenoiserConfigTest, Validation) {
  DenoiserConfig c = TinyConfig();
  EXPECT_NO_THROW(c.Validate());
  c.horizon = 18;
  EXPECT_SBPLAN_ERROR(c.Validate(), kShapeMismatch);
  c = TinyConfig();
  c.widths = {8, 16};
  EXPECT_SBPLAN_ERROR(c.Validate(), kInvalidArgument);
  c = TinyConfig();
  c.widths = {8, 16, 18};
  EXPECT_SBPLAN_ERROR(c.Validate(), kInvalidArgument);
  c = TinyConfig();
  c.kernel = 4;
  EXPECT_SBPLAN_ERROR(c.Validate(), kInvalidArgument);
  c = TinyConfig();
  c.time_dim = 7;
  EXPECT_SBPLAN_ERROR(c.Validate(), kInvalidArgument);
  EXPECT_SBPLAN_ERROR(DenoiserNetwork{TinyConfig(10)}, kShapeMismatch);
}

TEST(DenoiserConfigTest, PlanningHorizonsAreSupported) {
  for (int h : {256, 384}) {
    DenoiserConfig c;
    c.horizon = h;
    EXPECT_NO_THROW(c.Validate());
  }
}

TEST(DenoiserConfigTest, ArchHashTracksShape) {
  DenoiserConfig a = TinyConfig();
  DenoiserConfig b = TinyConfig();
  EXPECT_EQ(a.ArchHash(), b.ArchHash());
  b.widths[2] = 32;
  EXPECT_NE(a.ArchHash(), b.ArchHash());
  b = TinyConfig(32);
  EXPECT_NE(a.ArchHash(), b.ArchHash());
}

TEST(DenoiserTest, DefaultParameterCountBelowBound) {
  const DenoiserNetwork net{DenoiserConfig{}};
  EXPECT_LT(net.num_params(), 2000000);
  EXPECT_GT(net.num_params(), 100000);
  int covered = 0;
  for (const ParamView& v : net.views()) covered += v.size;
  EXPECT_EQ(covered, net.num_params());
}

TEST(DenoiserTest, OutputBiasOnlyGivesConstantOutput) {
  DenoiserNetwork net(TinyConfig());
  net.params().setZero();
  const ParamView& bias = net.view("final.out.bias");
  ASSERT_EQ(bias.size, 6);
  for (int i = 0; i < 6; ++i) net.params()(bias.offset + i) = 0.1 * (i + 1);
  const Matrix y = net.Forward(UniformMatrix(16, 6, -1, 1, 3), 2, 10);
  for (int r = 0; r < 16; ++r) {
    for (int d = 0; d < 6; ++d) EXPECT_DOUBLE_EQ(y(r, d), 0.1 * (d + 1));
  }
}

TEST(DenoiserTest, DeterministicAndTimeSensitive) {
  DenoiserNetwork net(TinyConfig());
  net.InitRandom(7);
  const Matrix x = UniformMatrix(16, 6, -1, 1, 4);
  EXPECT_EQ(net.Forward(x, 3, 16), net.Forward(x, 3, 16));
  const double diff = (net.Forward(x, 0, 16) - net.Forward(x, 15, 16))
                          .cwiseAbs()
                          .maxCoeff();
  EXPECT_GT(diff, 0.0);
  DenoiserNetwork same(TinyConfig());
  same.InitRandom(7);
  EXPECT_EQ(same.params(), net.params());
}

TEST(DenoiserTest, ShapeAndTimestepErrors) {
  DenoiserNetwork net(TinyConfig());
  net.InitRandom(1);
  EXPECT_SBPLAN_ERROR(net.Forward(Matrix::Zero(16, 5), 0, 4), kShapeMismatch);
  EXPECT_SBPLAN_ERROR(net.Forward(Matrix::Zero(20, 6), 0, 4), kShapeMismatch);
  EXPECT_SBPLAN_ERROR(net.Forward(Matrix::Zero(16, 6), 4, 4), kInvalidArgument);
  EXPECT_SBPLAN_ERROR(net.Forward(Matrix::Zero(16, 6), -1, 4), kInvalidArgument);
  EXPECT_SBPLAN_ERROR(net.Backward(Matrix::Zero(16, 6), 0, Matrix::Zero(16, 5)),
                      kShapeMismatch);
  EXPECT_SBPLAN_ERROR(net.view("nope"), kInvalidArgument);
}

TEST(DenoiserTest, ZeroUpstreamGivesZeroGradient) {
  DenoiserNetwork net(TinyConfig());
  net.InitRandom(2);
  const Vector g =
      net.Backward(UniformMatrix(16, 6, -1, 1, 5), 1, Matrix::Zero(16, 6));
  EXPECT_EQ(g.size(), net.num_params());
  EXPECT_EQ(g.cwiseAbs().maxCoeff(), 0.0);
}

TEST(DenoiserTest, FiniteDifferenceAgreement) {
  DenoiserNetwork net(TinyConfig());
  net.InitRandom(11);
  // Non-zero biases and norm affine terms so every path carries gradient.
  Rng rng(12);
  net.params() += 0.05 * StandardNormal(net.num_params(), 1, rng);
  const Matrix x = UniformMatrix(16, 6, -1, 1, 6);
  const Matrix up = UniformMatrix(16, 6, -1, 1, 7);
  const Vector g = net.Backward(x, 3, up);
  const double worst = WorstFdError(net.params(), g, 200, 13, [&] {
    return (net.Predict(x, 3).array() * up.array()).sum();
  });
  EXPECT_LE(worst, 1e-4);
}

TEST(DenoiserTest, BatchPathMatchesSingleSample) {
  DenoiserNetwork net(TinyConfig());
  net.InitRandom(3);
  std::vector<Matrix> xs, ups;
  std::vector<int> ts = {0, 5, 2};
  for (int i = 0; i < 3; ++i) {
    xs.push_back(UniformMatrix(16, 6, -1, 1, 20 + i));
    ups.push_back(UniformMatrix(16, 6, -1, 1, 30 + i));
  }
  DenoiserTape tape;
  const std::vector<Matrix> ys = net.ForwardBatch(xs, ts, &tape);
  Vector g;
  net.BackwardBatch(tape, ups, &g);
  Vector expected = Vector::Zero(net.num_params());
  for (int i = 0; i < 3; ++i) {
    EXPECT_TRUE(ys[i].isApprox(net.Predict(xs[i], ts[i]), 1e-12));
    expected += net.Backward(xs[i], ts[i], ups[i]);
  }
  EXPECT_TRUE(g.isApprox(expected, 1e-10));
  ups.pop_back();
  Vector g2;
  EXPECT_SBPLAN_ERROR(net.BackwardBatch(tape, ups, &g2), kShapeMismatch);
}

TEST(DenoiserTest, FiniteOutputsAndGradientsOnFuzzedInputs) {
  DenoiserNetwork net(TinyConfig());
  net.InitRandom(5);
  for (int i = 0; i < 100; ++i) {
    const Matrix x = UniformMatrix(16, 6, -2, 2, 100 + i);
    const Matrix y = net.Predict(x, i % 8);
    ASSERT_TRUE(y.allFinite());
    if (i % 4 == 0) {
      const Matrix xu = UniformMatrix(16, 6, -1, 1, 300 + i);
      ASSERT_TRUE(net.Backward(xu, i % 8, y).allFinite());
    }
  }
}

TEST(PriorNetworkTest, ShapeAndZeroWeights) {
  PriorNetwork p(16);
  EXPECT_EQ(p.input_dim(), 8);
  EXPECT_EQ(p.output_dim(), 96);
  EXPECT_EQ(p.num_params(), 8 * 96 + 96 + 96 * 96 + 96);
  p.params().setZero();
  const Matrix y = p.Forward(Vec4(0.1, 0.2, 0.3, 0.4), Vec4(-1, 1, 0, 0));
  EXPECT_EQ(y.rows(), 16);
  EXPECT_EQ(y.cols(), 6);
  EXPECT_EQ(y.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_SBPLAN_ERROR(PriorNetwork(1), kShapeMismatch);
}

TEST(PriorNetworkTest, LeakySlopeOnNegativePreactivations) {
  PriorNetwork p(2, 1);
  // fc1 (2x8) picks start x into unit 0 and goal x into unit 1; fc2 is the
  // identity.
  p.params().setZero();
  const ParamView& w1 = p.views()[0];
  const ParamView& w2 = p.views()[2];
  p.params()(w1.offset + 0) = 1.0;
  p.params()(w1.offset + 8 + 4) = 1.0;
  p.params()(w2.offset + 0) = 1.0;
  p.params()(w2.offset + 3) = 1.0;
  const Matrix y = p.Forward(Vec4(-2, 0, 0, 0), Vec4(3, 0, 0, 0));
  EXPECT_DOUBLE_EQ(y(0, 0), -2.0 * PriorNetwork::kNegativeSlope);
  EXPECT_DOUBLE_EQ(y(1, 0), 3.0);
  EXPECT_SBPLAN_ERROR(PriorNetwork(4, 6, 3), kShapeMismatch);
}

TEST(PriorNetworkTest, FiniteDifferenceAgreement) {
  PriorNetwork p(16);
  p.InitRandom(4);
  Rng rng(5);
  p.params() += 0.05 * StandardNormal(p.num_params(), 1, rng);
  const Vec4 s(0.3, -0.5, 0.1, 0.0);
  const Vec4 g(-0.7, 0.6, 0.0, 0.0);
  const Matrix up = UniformMatrix(16, 6, -1, 1, 8);
  Vector grad = Vector::Zero(p.num_params());
  p.Backward(s, g, up, &grad);
  const double worst = WorstFdError(p.params(), grad, 200, 9, [&] {
    return (p.Forward(s, g).array() * up.array()).sum();
  });
  EXPECT_LE(worst, 1e-4);
  EXPECT_SBPLAN_ERROR(p.Backward(s, g, Matrix::Zero(15, 6), &grad),
                      kShapeMismatch);
}

TEST(AdamTest, ZeroGradientLeavesParametersUnchanged) {
  Vector params = Vector::LinSpaced(10, -1, 1);
  const Vector before = params;
  Adam adam(10);
  for (int i = 0; i < 5; ++i) {
    EXPECT_EQ(adam.Step(params, Vector::Zero(10)), StepOutcome::kApplied);
  }
  EXPECT_EQ(params, before);
  EXPECT_EQ(adam.state().step, 5);
}

TEST(AdamTest, FirstStepMovesByLearningRate) {
  Vector params = Vector::Zero(3);
  AdamConfig cfg;
  cfg.clip_norm = 0.0;
  Adam adam(3, cfg);
  Vector g(3);
  g << 0.5, -2.0, 1e-3;
  adam.Step(params, g);
  // Bias-corrected first step is lr * g / (|g| + eps).
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(params(i), -cfg.learning_rate * g(i) / (std::abs(g(i)) + 1e-8),
                1e-15);
  }
}

TEST(AdamTest, ClipsGlobalNorm) {
  AdamConfig cfg;
  cfg.beta1 = 0.0;
  cfg.beta2 = 0.0;
  cfg.epsilon = 1e-12;
  cfg.learning_rate = 1.0;
  // With both decays at zero the step is about sign(g) per entry, so
  // clipping is observed through the moment buffers instead.
  Adam adam(2, cfg);
  Vector params = Vector::Zero(2);
  adam.Step(params, Vector::Constant(2, 30.0));
  EXPECT_NEAR(adam.state().m.norm(), 1.0, 1e-12);
  EXPECT_SBPLAN_ERROR(Adam(2, AdamConfig{.epsilon = 0.0}), kInvalidArgument);
}

TEST(AdamTest, NonFiniteGradientSkippedAndCounted) {
  Vector params = Vector::Ones(4);
  Adam adam(4);
  Vector g = Vector::Ones(4);
  g(2) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(adam.Step(params, g), StepOutcome::kSkippedNonFinite);
  g(2) = std::numeric_limits<double>::infinity();
  EXPECT_EQ(adam.Step(params, g), StepOutcome::kSkippedNonFinite);
  EXPECT_EQ(params, Vector::Ones(4));
  EXPECT_EQ(adam.state().skipped, 2);
  EXPECT_EQ(adam.state().m.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_SBPLAN_ERROR(adam.Step(params, Vector::Ones(3)), kShapeMismatch);
}

TEST(AdamTest, DefaultsMatchTrainerState) {
  const AdamConfig c;
  EXPECT_EQ(c.learning_rate, 2e-4);
  EXPECT_EQ(c.beta1, 0.9);
  EXPECT_EQ(c.beta2, 0.999);
  EXPECT_EQ(c.epsilon, 1e-8);
  EXPECT_EQ(c.clip_norm, 1.0);
  AdamConfig bad;
  bad.learning_rate = -1.0;
  EXPECT_SBPLAN_ERROR(Adam(3, bad), kInvalidArgument);
}

TrainingBatch FixedBatch(const NoiseSchedule& sched, uint64_t seed) {
  Rng rng(seed);
  std::vector<Matrix> x0;
  std::vector<Conditioning> cond;
  for (int i = 0; i < 4; ++i) {
    x0.push_back(UniformMatrix(16, 6, -1, 1, seed + i));
    cond.push_back(Conditioning::FromEndpoints(x0.back()));
  }
  return MakeDdpmBatch(x0, cond, sched, rng);
}

TEST(ObjectiveTest, GradientMatchesFiniteDifferenceOfMse) {
  DenoiserNetwork net(TinyConfig());
  net.InitRandom(21);
  const TrainingBatch batch = FixedBatch(MakeSchedule(8), 40);
  const LossResult lr = LossAndGradient(net, batch);
  EXPECT_NEAR(lr.mse, EvaluateLoss(net, batch).mse, 1e-14);
  const double worst = WorstFdError(net.params(), lr.grad, 60, 22, [&] {
    return EvaluateLoss(net, batch).mse;
  });
  EXPECT_LE(worst, 1e-4);
}

TEST(TrainingTest, IdenticalRunsGiveIdenticalParameters) {
  auto run = [] {
    DenoiserNetwork net(TinyConfig());
    net.InitRandom(1);
    Adam adam(net.num_params());
    const NoiseSchedule sched = MakeSchedule(8);
    for (int s = 0; s < 100; ++s) {
      adam.Step(net.params(), LossAndGradient(net, FixedBatch(sched, s)).grad);
    }
    return net.params();
  };
  EXPECT_EQ(run(), run());
}

TEST(TrainingTest, OverfitsOneBatch) {
  DenoiserNetwork net(TinyConfig());
  net.InitRandom(2);
  AdamConfig cfg;
  cfg.learning_rate = 2e-3;
  Adam adam(net.num_params(), cfg);
  const TrainingBatch batch = FixedBatch(MakeSchedule(8), 77);
  const double initial = EvaluateLoss(net, batch).mse;
  for (int s = 0; s < 200; ++s) {
    adam.Step(net.params(), LossAndGradient(net, batch).grad);
  }
  EXPECT_LT(EvaluateLoss(net, batch).mse, 0.5 * initial);
}

TEST(CheckpointTest, DenoiserRoundTrip) {
  TempDir dir;
  DenoiserNetwork net(TinyConfig());
  net.InitRandom(9);
  SaveCheckpoint(MakeCheckpoint(net, {{"engine", "ddpm"}}), dir / "d.ckpt");
  const Checkpoint ck = LoadCheckpoint(dir / "d.ckpt");
  EXPECT_EQ(ck.kind, "denoiser");
  EXPECT_EQ(ck.Meta("engine"), "ddpm");
  EXPECT_SBPLAN_ERROR(ck.Meta("missing"), kCheckpointMismatch);
  const DenoiserNetwork back = DenoiserFromCheckpoint(ck);
  EXPECT_EQ(back.params(), net.params());
  EXPECT_EQ(back.config().ArchHash(), net.config().ArchHash());
  EXPECT_SBPLAN_ERROR(PriorFromCheckpoint(ck), kCheckpointMismatch);
}

TEST(CheckpointTest, PriorRoundTrip) {
  TempDir dir;
  PriorNetwork p(8);
  p.InitRandom(3);
  SaveCheckpoint(MakeCheckpoint(p), dir / "p.ckpt");
  const PriorNetwork back = PriorFromCheckpoint(LoadCheckpoint(dir / "p.ckpt"));
  EXPECT_EQ(back.params(), p.params());
  EXPECT_SBPLAN_ERROR(DenoiserFromCheckpoint(LoadCheckpoint(dir / "p.ckpt")),
                      kCheckpointMismatch);
}

TEST(CheckpointTest, ErrorsAreDistinct) {
  TempDir dir;
  EXPECT_SBPLAN_ERROR(LoadCheckpoint(dir / "none.ckpt"), kMissingCheckpoint);
  DenoiserNetwork net(TinyConfig());
  Checkpoint ck = MakeCheckpoint(net);
  ck.arch_hash ^= 1;
  EXPECT_SBPLAN_ERROR(DenoiserFromCheckpoint(ck), kCheckpointMismatch);
  ck = MakeCheckpoint(net);
  ck.params.conservativeResize(ck.params.size() - 1);
  EXPECT_SBPLAN_ERROR(DenoiserFromCheckpoint(ck), kCheckpointMismatch);

  SaveCheckpoint(MakeCheckpoint(net), dir / "a.ckpt");
  std::string bytes;
  {
    std::ifstream in(dir / "a.ckpt", std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), {});
  }
  auto write = [&](const std::string& s) {
    std::ofstream out(dir / "b.ckpt", std::ios::binary);
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
  };
  std::string bad = bytes;
  bad[0] = 'X';
  write(bad);
  EXPECT_SBPLAN_ERROR(LoadCheckpoint(dir / "b.ckpt"), kVersionMismatch);
  write(bytes.substr(0, bytes.size() - 8));
  EXPECT_SBPLAN_ERROR(LoadCheckpoint(dir / "b.ckpt"), kTruncatedFile);
  write(bytes + "xx");
  EXPECT_SBPLAN_ERROR(LoadCheckpoint(dir / "b.ckpt"), kShapeMismatch);
}

}  // namespace
}  // namespace sbplan
