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

#ifndef SDMF_DOMAIN_H_
#define SDMF_DOMAIN_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace sdmf {

// Row-major so that a user's (or item's) latent vector is contiguous, which
// matches the state layout below.
using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<Matrix>;
using ConstMatrixMap = Eigen::Map<const Matrix>;
using Vector = Eigen::VectorXd;

// Bad input: malformed files, inconsistent dimensions, invalid parameters.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical breakdown: non-finite objective terms, optimizer failure.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RatingObservation {
  int user = 0;
  int item = 0;
  double value = 0.0;
  int bin = 0;
};

// Sparse per-bin ratings. Bins are kept sorted by (user, item) and contain no
// duplicate keys.
class RatingsTimeline {
 public:
  RatingsTimeline() = default;
  RatingsTimeline(int num_users, int num_items,
                  std::vector<std::vector<RatingObservation>> bins);

  int num_users() const { return num_users_; }
  int num_items() const { return num_items_; }
  int num_bins() const { return static_cast<int>(bins_.size()); }

  const std::vector<RatingObservation>& bin(int t) const;
  int count(int t) const { return static_cast<int>(bin(t).size()); }
  std::vector<int> counts() const;
  int64_t total_count() const;

 private:
  int num_users_ = 0;
  int num_items_ = 0;
  std::vector<std::vector<RatingObservation>> bins_;
};

struct WeightedEdge {
  int a = 0;
  int b = 0;
  double weight = 1.0;

  friend bool operator==(const WeightedEdge&, const WeightedEdge&) = default;
};

// Per-bin undirected trust graphs, stored as edge lists with a < b. Edge sets
// are cumulative: every edge of bin t is also present in bin t + 1.
class TrustTimeline {
 public:
  TrustTimeline() = default;
  TrustTimeline(int num_users, std::vector<std::vector<WeightedEdge>> graphs);

  int num_users() const { return num_users_; }
  int num_bins() const { return static_cast<int>(graphs_.size()); }
  const std::vector<WeightedEdge>& edges(int t) const;
  // Row sums of W_t.
  Vector degrees(int t) const;

  // An empty timeline (no edges) with the given shape.
  static TrustTimeline Empty(int num_users, int num_bins);

 private:
  int num_users_ = 0;
  std::vector<std::vector<WeightedEdge>> graphs_;
};

struct FactorPair {
  Matrix U;  // m x k
  Matrix V;  // n x k

  int rank() const { return static_cast<int>(U.cols()); }
};

using FactorTimeline = std::vector<FactorPair>;

// Checks uniform shapes across bins; throws InputError otherwise.
void ValidateFactorTimeline(const FactorTimeline& factors);

// Flat decision vector stacking (velocity, position) blocks for every bin.
//   index(t, part, i, c) = t * 2mk + part * mk + i * k + c
// with part 0 the velocity block and part 1 the position block.
class SmootherState {
 public:
  enum Part : int { kVelocity = 0, kPosition = 1 };

  SmootherState() = default;
  SmootherState(int num_bins, int num_users, int rank);
  SmootherState(int num_bins, int num_users, int rank, Vector values);

  int num_bins() const { return num_bins_; }
  int num_users() const { return num_users_; }
  int rank() const { return rank_; }
  int64_t block_size() const { return int64_t{num_users_} * rank_; }
  int64_t size() const { return values_.size(); }

  int64_t index(int t, Part part, int i, int c) const {
    return t * 2 * block_size() + part * block_size() + int64_t{i} * rank_ + c;
  }

  Vector& values() { return values_; }
  const Vector& values() const { return values_; }

  MatrixMap block(int t, Part part);
  ConstMatrixMap block(int t, Part part) const;

 private:
  int num_bins_ = 0;
  int num_users_ = 0;
  int rank_ = 0;
  Vector values_;
};

// Velocity and position matrices of one bin.
struct StateBlocks {
  Matrix velocity;
  Matrix position;
};

SmootherState PackState(const std::vector<StateBlocks>& blocks);
StateBlocks UnpackState(const SmootherState& state, int t);

// Per-coordinate process covariance of the constant-velocity model together
// with its closed-form inverse.
struct ProcessNoiseBlock {
  Eigen::Matrix2d q;
  Eigen::Matrix2d q_inv;
};

ProcessNoiseBlock MakeProcessNoiseBlock(double dt);

struct SmootherConfig {
  int k = 5;
  double dt = 1.0;
  double sigma = 1.0;
  double lambda = 0.0;
  double gamma = 1.0;
  int max_iter = 500;
  int lbfgs_memory = 10;
  double grad_tol = 1e-6;
  // Alternating-least-squares sweeps for the static initialization.
  int init_iters = 30;
  bool align_factors = true;
  uint64_t seed = 0;

  // Throws InputError when any constraint is violated.
  void Validate() const;
};

// Deterministic 64-bit mixer used to derive per-bin / per-run seeds.
uint64_t MixSeed(uint64_t seed, uint64_t stream);

}  // namespace sdmf

#endif  // SDMF_DOMAIN_H_
