// Copyright 2026 The sdmf Authors
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

#include "sdmf/domain.h"

#include <gtest/gtest.h>

#include <random>

#include "test_support.h"

namespace sdmf {
namespace {

Matrix M(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix out(rows.size(), rows.begin()->size());
  int i = 0;
  for (const auto& r : rows) {
    int c = 0;
    for (double v : r) out(i, c++) = v;
    ++i;
  }
  return out;
}

TEST(PackStateTest, SingleBinScalar) {
  SmootherState x = PackState({{M({{2}}), M({{3}})}});
  ASSERT_EQ(x.size(), 2);
  EXPECT_EQ(x.values()[0], 2.0);
  EXPECT_EQ(x.values()[1], 3.0);
}

TEST(PackStateTest, TwoBinsAreTimeMajor) {
  SmootherState x = PackState({{M({{0}}), M({{1}})}, {M({{2}}), M({{3}})}});
  ASSERT_EQ(x.size(), 4);
  for (int l = 0; l < 4; ++l) EXPECT_EQ(x.values()[l], l);
}

TEST(PackStateTest, LayoutAccessor) {
  SmootherState x(3, 4, 2);
  for (Eigen::Index l = 0; l < x.size(); ++l) x.values()[l] = static_cast<double>(l);
  for (int t = 0; t < 3; ++t)
    for (int part = 0; part < 2; ++part)
      for (int i = 0; i < 4; ++i)
        for (int c = 0; c < 2; ++c) {
          const auto p = static_cast<SmootherState::Part>(part);
          EXPECT_EQ(x.index(t, p, i, c), t * 16 + part * 8 + i * 2 + c);
          EXPECT_EQ(x.block(t, p)(i, c), x.values()[x.index(t, p, i, c)]);
        }
}

TEST(PackStateTest, DimensionMismatchThrows) {
  EXPECT_THROW(PackState({{M({{0}}), M({{1}})}, {M({{2, 3}}), M({{3, 4}})}}),
               InputError);
  EXPECT_THROW(PackState({{M({{0, 1}}), M({{1}})}}), InputError);
}

TEST(UnpackStateTest, Examples) {
  SmootherState one(1, 1, 1, (Vector(2) << 2, 3).finished());
  auto b = UnpackState(one, 0);
  EXPECT_EQ(b.velocity(0, 0), 2.0);
  EXPECT_EQ(b.position(0, 0), 3.0);

  SmootherState two(2, 1, 1, (Vector(4) << 0, 1, 2, 3).finished());
  b = UnpackState(two, 1);
  EXPECT_EQ(b.velocity(0, 0), 2.0);
  EXPECT_EQ(b.position(0, 0), 3.0);
  EXPECT_THROW(UnpackState(two, 2), InputError);
  EXPECT_THROW(UnpackState(two, -1), InputError);
}

TEST(PackStateTest, RoundTripOverRandomShapes) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int N = 1 + rng() % 5, m = 1 + rng() % 7, k = 1 + rng() % 4;
    SmootherState x(N, m, k, testing::RandomVector(2 * N * m * k, rng()));
    std::vector<StateBlocks> blocks;
    for (int t = 0; t < N; ++t) blocks.push_back(UnpackState(x, t));
    SmootherState y = PackState(blocks);
    EXPECT_EQ(y.values(), x.values());
    for (int t = 0; t < N; ++t) {
      auto b = UnpackState(y, t);
      EXPECT_EQ(b.velocity, blocks[t].velocity);
      EXPECT_EQ(b.position, blocks[t].position);
    }
  }
}

TEST(SmootherStateTest, RejectsWrongLength) {
  EXPECT_THROW(SmootherState(2, 2, 2, Vector::Zero(15)), InputError);
}

TEST(ProcessNoiseTest, UnitStep) {
  const auto block = MakeProcessNoiseBlock(1.0);
  Eigen::Matrix2d q;
  q << 1.0, 0.5, 0.5, 1.0 / 3.0;
  EXPECT_TRUE(block.q.isApprox(q, 1e-15));
  // Frozen from a numeric inverse of q.
  Eigen::Matrix2d q_inv;
  q_inv << 4.0, -6.0, -6.0, 12.0;
  EXPECT_LE((block.q_inv - q_inv).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((block.q_inv - q.inverse()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ProcessNoiseTest, InverseIdentity) {
  const auto block = MakeProcessNoiseBlock(2.0);
  EXPECT_LE((block.q * block.q_inv - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(),
            1e-12);
}

TEST(ProcessNoiseTest, SymmetricPositiveDefinite) {
  for (double dt : {0.1, 1.0, 10.0}) {
    const auto block = MakeProcessNoiseBlock(dt);
    EXPECT_EQ(block.q(0, 1), block.q(1, 0));
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(block.q);
    EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0) << "dt=" << dt;
    EXPECT_LE((block.q * block.q_inv - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff(),
              1e-10)
        << "dt=" << dt;
  }
}

TEST(ProcessNoiseTest, RejectsNonPositiveStep) {
  EXPECT_THROW(MakeProcessNoiseBlock(0.0), InputError);
  EXPECT_THROW(MakeProcessNoiseBlock(-1.0), InputError);
}

TEST(SmootherConfigTest, Validation) {
  SmootherConfig ok;
  EXPECT_NO_THROW(ok.Validate());
  auto expect_bad = [](auto mutate) {
    SmootherConfig c;
    mutate(c);
    EXPECT_THROW(c.Validate(), InputError);
  };
  expect_bad([](SmootherConfig& c) { c.dt = 0.0; });
  expect_bad([](SmootherConfig& c) { c.dt = -1.0; });
  expect_bad([](SmootherConfig& c) { c.sigma = 0.0; });
  expect_bad([](SmootherConfig& c) { c.gamma = 0.0; });
  expect_bad([](SmootherConfig& c) { c.grad_tol = 0.0; });
  expect_bad([](SmootherConfig& c) { c.lambda = -1e-3; });
  expect_bad([](SmootherConfig& c) { c.k = 0; });
  expect_bad([](SmootherConfig& c) { c.lbfgs_memory = 0; });
  expect_bad([](SmootherConfig& c) { c.max_iter = 0; });
}

TEST(RatingsTimelineTest, SortsAndRejectsDuplicates) {
  RatingsTimeline r(3, 3, {{{2, 0, 1.0, 0}, {0, 1, 2.0, 0}}, {}});
  EXPECT_EQ(r.bin(0)[0].user, 0);
  EXPECT_EQ(r.counts(), (std::vector<int>{2, 0}));
  EXPECT_EQ(r.total_count(), 2);
  EXPECT_THROW(RatingsTimeline(3, 3, {{{0, 1, 1.0, 0}, {0, 1, 2.0, 0}}}), InputError);
  EXPECT_THROW(RatingsTimeline(3, 3, {{{3, 1, 1.0, 0}}}), InputError);
}

TEST(TrustTimelineTest, DegreesAreRowSums) {
  TrustTimeline tr(3, {{{0, 1, 2.0}, {2, 1, 0.5}}});
  const Vector d = tr.degrees(0);
  EXPECT_DOUBLE_EQ(d[0], 2.0);
  EXPECT_DOUBLE_EQ(d[1], 2.5);
  EXPECT_DOUBLE_EQ(d[2], 0.5);
  EXPECT_THROW(TrustTimeline(3, {{{1, 1, 1.0}}}), InputError);
  EXPECT_THROW(TrustTimeline(3, {{{0, 1, -1.0}}}), InputError);
}

}  // namespace
}  // namespace sdmf
