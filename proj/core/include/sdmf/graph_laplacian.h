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

#ifndef SDMF_GRAPH_LAPLACIAN_H_
#define SDMF_GRAPH_LAPLACIAN_H_

#include <vector>

#include "sdmf/domain.h"

namespace sdmf {

// Unnormalized graph Laplacian L = D - W of an undirected weighted graph,
// applied matrix-free. The adjacency is stored in compressed rows with both
// directions of every edge.
class LaplacianOperator {
 public:
  LaplacianOperator() = default;

  int num_users() const { return static_cast<int>(degrees_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  const Vector& degrees() const { return degrees_; }
  const std::vector<WeightedEdge>& edges() const { return edges_; }

  // L U, cost O((m + q) k).
  Matrix Apply(const Eigen::Ref<const Matrix>& U) const;
  // out = L U without allocating; `out` must be m x k and not alias U.
  void ApplyInto(const Eigen::Ref<const Matrix>& U, Eigen::Ref<Matrix> out) const;

  // tr(U^T L U) = sum over edges of w_ab * |U_a - U_b|^2.
  double Quadratic(const Eigen::Ref<const Matrix>& U) const;

  friend LaplacianOperator BuildLaplacian(int num_users,
                                          const std::vector<WeightedEdge>& edges);

 private:
  Vector degrees_;
  std::vector<int> row_start_;
  std::vector<int> col_;
  std::vector<double> weight_;
  std::vector<WeightedEdge> edges_;
};

// Edges are undirected; each unordered pair may appear at most once (either
// orientation). Throws InputError on negative weights, self loops, duplicate
// pairs (which would make W asymmetric as given) or out-of-range users.
LaplacianOperator BuildLaplacian(int num_users,
                                 const std::vector<WeightedEdge>& edges);

std::vector<LaplacianOperator> BuildLaplacians(const TrustTimeline& trust);

// Block-diagonal social operator on a smoother state: zero on velocity blocks
// and L_t U_t on the position block of bin t.
Vector ApplySocialBlock(const std::vector<LaplacianOperator>& laplacians,
                        const SmootherState& x);

}  // namespace sdmf

#endif  // SDMF_GRAPH_LAPLACIAN_H_
