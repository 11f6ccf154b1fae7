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

#ifndef SBPLAN_TESTS_SUPPORT_TEST_SUPPORT_H_
#define SBPLAN_TESTS_SUPPORT_TEST_SUPPORT_H_

#include <atomic>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <utility>

#include <gtest/gtest.h>

#include "sbplan/denoiser.h"
#include "sbplan/error.h"
#include "sbplan/types.h"

namespace sbplan::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("sbplan_test_" + std::to_string(rd()) + "_" +
             std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

// Epsilon model backed by a lambda.
class FnModel : public EpsilonModel {
 public:
  using Fn = std::function<Matrix(const Matrix&, int)>;
  explicit FnModel(Fn fn) : fn_(std::move(fn)) {}
  Matrix Predict(const Matrix& x, int t) const override { return fn_(x, t); }

 private:
  Fn fn_;
};

inline FnModel ZeroModel() {
  return FnModel([](const Matrix& x, int) {
    return Matrix::Zero(x.rows(), x.cols()).eval();
  });
}

// eps_hat = a * x + b elementwise.
inline FnModel LinearModel(double a, double b) {
  return FnModel([a, b](const Matrix& x, int) {
    return (a * x.array() + b).matrix().eval();
  });
}

// Small network that still exercises every layer.
inline DenoiserConfig TinyConfig(int horizon = 16) {
  DenoiserConfig c;
  c.horizon = horizon;
  c.widths = {8, 16, 16};
  c.groups = 4;
  c.time_dim = 8;
  c.time_hidden = 16;
  return c;
}

inline Matrix UniformMatrix(int rows, int cols, double lo, double hi,
                            uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

}  // namespace sbplan::testing

// Asserts that `stmt` throws sbplan::Error with the given code.
#define EXPECT_SBPLAN_ERROR(stmt, error_code)                          \
  do {                                                                 \
    try {                                                              \
      stmt;                                                            \
      ADD_FAILURE() << "expected " #error_code " from " #stmt;         \
    } catch (const ::sbplan::Error& e) {                               \
      EXPECT_EQ(e.code(), ::sbplan::ErrorCode::error_code) << e.what(); \
    }                                                                  \
  } while (0)

#endif  // SBPLAN_TESTS_SUPPORT_TEST_SUPPORT_H_
