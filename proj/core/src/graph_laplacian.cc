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

#include "sdmf/graph_laplacian.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace sdmf {

LaplacianOperator BuildLaplacian(int num_users,
                                 const std::vector<WeightedEdge>& edges) {
  if (num_users < 0) throw InputError("BuildLaplacian: negative user count");
  LaplacianOperator op;
  op.degrees_ = Vector::Zero(num_users);
  std::set<std::pair<int, int>> seen;
  std::vector<int> row_count(num_users, 0);
  for (const auto& e : edges) {
    if (e.a < 0 || e.b < 0 || e.a >= num_users || e.b >= num_users) {
      throw InputError("BuildLaplacian: edge endpoint out of range");
    }
    if (e.a == e.b) throw InputError("BuildLaplacian: self loop");
    if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) {
      throw InputError("BuildLaplacian: negative or non-finite weight");
    }
    if (!seen.emplace(std::minmax(e.a, e.b)).second) {
      throw InputError("BuildLaplacian: pair (" + std::to_string(e.a) + ", " +
                       std::to_string(e.b) +
                       ") listed twice; adjacency would not be symmetric");
    }
    op.edges_.push_back({std::min(e.a, e.b), std::max(e.a, e.b), e.weight});
    op.degrees_[e.a] += e.weight;
    op.degrees_[e.b] += e.weight;
    ++row_count[e.a];
    ++row_count[e.b];
  }
  op.row_start_.assign(num_users + 1, 0);
  for (int i = 0; i < num_users; ++i) {
    op.row_start_[i + 1] = op.row_start_[i] + row_count[i];
  }
  op.col_.resize(op.row_start_[num_users]);
  op.weight_.resize(op.row_start_[num_users]);
  std::vector<int> fill(op.row_start_.begin(), op.row_start_.end() - 1);
  for (const auto& e : op.edges_) {
    op.col_[fill[e.a]] = e.b;
    op.weight_[fill[e.a]++] = e.weight;
    op.col_[fill[e.b]] = e.a;
    op.weight_[fill[e.b]++] = e.weight;
  }
  return op;
}

std::vector<LaplacianOperator> BuildLaplacians(const TrustTimeline& trust) {
  std::vector<LaplacianOperator> out;
  out.reserve(trust.num_bins());
  for (int t = 0; t < trust.num_bins(); ++t) {
    out.push_back(BuildLaplacian(trust.num_users(), trust.edges(t)));
  }
  return out;
}

void LaplacianOperator::ApplyInto(const Eigen::Ref<const Matrix>& U,
                                  Eigen::Ref<Matrix> out) const {
  if (U.rows() != num_users() || out.rows() != num_users() ||
      out.cols() != U.cols()) {
    throw InputError("LaplacianOperator: expected " + std::to_string(num_users()) +
                     " rows, got " + std::to_string(U.rows()));
  }
  for (int i = 0; i < num_users(); ++i) {
    auto row = out.row(i);
    row = degrees_[i] * U.row(i);
    for (int l = row_start_[i]; l < row_start_[i + 1]; ++l) {
      row -= weight_[l] * U.row(col_[l]);
    }
  }
}

Matrix LaplacianOperator::Apply(const Eigen::Ref<const Matrix>& U) const {
  Matrix out(U.rows(), U.cols());
  ApplyInto(U, out);
  return out;
}

double LaplacianOperator::Quadratic(const Eigen::Ref<const Matrix>& U) const {
  if (U.rows() != num_users()) {
    throw InputError("LaplacianOperator: expected " + std::to_string(num_users()) +
                     " rows, got " + std::to_string(U.rows()));
  }
  double total = 0.0;
  for (const auto& e : edges_) {
    total += e.weight * (U.row(e.a) - U.row(e.b)).squaredNorm();
  }
  return total;
}

Vector ApplySocialBlock(const std::vector<LaplacianOperator>& laplacians,
                        const SmootherState& x) {
  if (static_cast<int>(laplacians.size()) != x.num_bins()) {
    throw InputError("ApplySocialBlock: " + std::to_string(laplacians.size()) +
                     " Laplacians for " + std::to_string(x.num_bins()) + " bins");
  }
  SmootherState out(x.num_bins(), x.num_users(), x.rank());
  for (int t = 0; t < x.num_bins(); ++t) {
    laplacians[t].ApplyInto(x.block(t, SmootherState::kPosition),
                            out.block(t, SmootherState::kPosition));
  }
  return std::move(out.values());
}

}  // namespace sdmf
