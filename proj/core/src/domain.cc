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

#include <algorithm>
#include <cmath>
#include <string>

namespace sdmf {

namespace {

bool KeyLess(const RatingObservation& a, const RatingObservation& b) {
  return a.user != b.user ? a.user < b.user : a.item < b.item;
}

}  // namespace

RatingsTimeline::RatingsTimeline(
    int num_users, int num_items,
    std::vector<std::vector<RatingObservation>> bins)
    : num_users_(num_users), num_items_(num_items), bins_(std::move(bins)) {
  if (num_users < 0 || num_items < 0) {
    throw InputError("RatingsTimeline: negative dimensions");
  }
  for (int t = 0; t < num_bins(); ++t) {
    auto& obs = bins_[t];
    for (auto& o : obs) {
      if (o.user < 0 || o.user >= num_users || o.item < 0 ||
          o.item >= num_items) {
        throw InputError("RatingsTimeline: observation index out of range in bin " +
                         std::to_string(t));
      }
      if (!std::isfinite(o.value)) {
        throw InputError("RatingsTimeline: non-finite rating in bin " +
                         std::to_string(t));
      }
      o.bin = t;
    }
    std::sort(obs.begin(), obs.end(), KeyLess);
    for (size_t l = 1; l < obs.size(); ++l) {
      if (obs[l - 1].user == obs[l].user && obs[l - 1].item == obs[l].item) {
        throw InputError("RatingsTimeline: duplicate (user, item) in bin " +
                         std::to_string(t));
      }
    }
  }
}

const std::vector<RatingObservation>& RatingsTimeline::bin(int t) const {
  if (t < 0 || t >= num_bins()) {
    throw InputError("RatingsTimeline: bin " + std::to_string(t) +
                     " out of range");
  }
  return bins_[t];
}

std::vector<int> RatingsTimeline::counts() const {
  std::vector<int> out;
  out.reserve(bins_.size());
  for (const auto& b : bins_) out.push_back(static_cast<int>(b.size()));
  return out;
}

int64_t RatingsTimeline::total_count() const {
  int64_t total = 0;
  for (const auto& b : bins_) total += static_cast<int64_t>(b.size());
  return total;
}

TrustTimeline::TrustTimeline(int num_users,
                             std::vector<std::vector<WeightedEdge>> graphs)
    : num_users_(num_users), graphs_(std::move(graphs)) {
  for (int t = 0; t < num_bins(); ++t) {
    auto& edges = graphs_[t];
    for (auto& e : edges) {
      if (e.a == e.b) {
        throw InputError("TrustTimeline: self loop in bin " + std::to_string(t));
      }
      if (e.a > e.b) std::swap(e.a, e.b);
      if (e.a < 0 || e.b >= num_users) {
        throw InputError("TrustTimeline: user index out of range in bin " +
                         std::to_string(t));
      }
      if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
        throw InputError("TrustTimeline: negative or non-finite weight in bin " +
                         std::to_string(t));
      }
    }
    std::sort(edges.begin(), edges.end(),
              [](const WeightedEdge& x, const WeightedEdge& y) {
                return x.a != y.a ? x.a < y.a : x.b < y.b;
              });
    for (size_t l = 1; l < edges.size(); ++l) {
      if (edges[l - 1].a == edges[l].a && edges[l - 1].b == edges[l].b) {
        throw InputError("TrustTimeline: duplicate edge in bin " +
                         std::to_string(t));
      }
    }
  }
}

const std::vector<WeightedEdge>& TrustTimeline::edges(int t) const {
  if (t < 0 || t >= num_bins()) {
    throw InputError("TrustTimeline: bin " + std::to_string(t) +
                     " out of range");
  }
  return graphs_[t];
}

Vector TrustTimeline::degrees(int t) const {
  Vector d = Vector::Zero(num_users_);
  for (const auto& e : edges(t)) {
    d[e.a] += e.weight;
    d[e.b] += e.weight;
  }
  return d;
}

TrustTimeline TrustTimeline::Empty(int num_users, int num_bins) {
  return TrustTimeline(num_users,
                       std::vector<std::vector<WeightedEdge>>(num_bins));
}

void ValidateFactorTimeline(const FactorTimeline& factors) {
  if (factors.empty()) return;
  const auto& first = factors.front();
  if (first.U.cols() != first.V.cols()) {
    throw InputError("FactorTimeline: U and V ranks differ");
  }
  for (size_t t = 0; t < factors.size(); ++t) {
    const auto& f = factors[t];
    if (f.U.rows() != first.U.rows() || f.U.cols() != first.U.cols() ||
        f.V.rows() != first.V.rows() || f.V.cols() != first.V.cols()) {
      throw InputError("FactorTimeline: non-uniform shape at bin " +
                       std::to_string(t));
    }
    if (!f.U.allFinite() || !f.V.allFinite()) {
      throw InputError("FactorTimeline: non-finite factor at bin " +
                       std::to_string(t));
    }
  }
}

SmootherState::SmootherState(int num_bins, int num_users, int rank)
    : SmootherState(num_bins, num_users, rank,
                    Vector::Zero(int64_t{2} * num_bins * num_users * rank)) {}

SmootherState::SmootherState(int num_bins, int num_users, int rank,
                             Vector values)
    : num_bins_(num_bins),
      num_users_(num_users),
      rank_(rank),
      values_(std::move(values)) {
  if (num_bins < 0 || num_users < 0 || rank < 0) {
    throw InputError("SmootherState: negative dimensions");
  }
  if (values_.size() != int64_t{2} * num_bins * num_users * rank) {
    throw InputError("SmootherState: expected length " +
                     std::to_string(int64_t{2} * num_bins * num_users * rank) +
                     ", got " + std::to_string(values_.size()));
  }
}

MatrixMap SmootherState::block(int t, Part part) {
  if (t < 0 || t >= num_bins_) {
    throw InputError("SmootherState: bin " + std::to_string(t) +
                     " out of range");
  }
  return MatrixMap(values_.data() + index(t, part, 0, 0), num_users_, rank_);
}

ConstMatrixMap SmootherState::block(int t, Part part) const {
  if (t < 0 || t >= num_bins_) {
    throw InputError("SmootherState: bin " + std::to_string(t) +
                     " out of range");
  }
  return ConstMatrixMap(values_.data() + index(t, part, 0, 0), num_users_,
                        rank_);
}

SmootherState PackState(const std::vector<StateBlocks>& blocks) {
  if (blocks.empty()) return SmootherState(0, 0, 0);
  const int m = static_cast<int>(blocks.front().position.rows());
  const int k = static_cast<int>(blocks.front().position.cols());
  SmootherState state(static_cast<int>(blocks.size()), m, k);
  for (int t = 0; t < state.num_bins(); ++t) {
    const auto& b = blocks[t];
    if (b.velocity.rows() != m || b.velocity.cols() != k ||
        b.position.rows() != m || b.position.cols() != k) {
      throw InputError("PackState: dimension mismatch at bin " +
                       std::to_string(t));
    }
    state.block(t, SmootherState::kVelocity) = b.velocity;
    state.block(t, SmootherState::kPosition) = b.position;
  }
  return state;
}

StateBlocks UnpackState(const SmootherState& state, int t) {
  return {state.block(t, SmootherState::kVelocity),
          state.block(t, SmootherState::kPosition)};
}

ProcessNoiseBlock MakeProcessNoiseBlock(double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw InputError("process noise: dt must be positive and finite");
  }
  const double dt2 = dt * dt;
  const double dt3 = dt2 * dt;
  ProcessNoiseBlock block;
  block.q << dt, dt2 / 2.0, dt2 / 2.0, dt3 / 3.0;
  // det(q) = dt^4 / 12.
  const double scale = 12.0 / (dt2 * dt2);
  block.q_inv << scale * dt3 / 3.0, -scale * dt2 / 2.0, -scale * dt2 / 2.0,
      scale * dt;
  return block;
}

void SmootherConfig::Validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw InputError(std::string("SmootherConfig: ") + what);
  };
  require(k >= 1, "k must be >= 1");
  require(dt > 0.0 && std::isfinite(dt), "dt must be > 0");
  require(sigma > 0.0 && std::isfinite(sigma), "sigma must be > 0");
  require(lambda >= 0.0 && std::isfinite(lambda), "lambda must be >= 0");
  require(gamma > 0.0 && std::isfinite(gamma), "gamma must be > 0");
  require(max_iter >= 1, "max_iter must be >= 1");
  require(lbfgs_memory >= 1, "lbfgs_memory must be >= 1");
  require(grad_tol > 0.0 && std::isfinite(grad_tol), "grad_tol must be > 0");
  require(init_iters >= 1, "init_iters must be >= 1");
}

uint64_t MixSeed(uint64_t seed, uint64_t stream) {
  // splitmix64 finalizer over the combined word.
  uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace sdmf
