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

#ifndef SDMF_SMOOTHER_OPS_H_
#define SDMF_SMOOTHER_OPS_H_

// Matrix-free operators of the trajectory smoothing objective
//
//   f(x) = 1/(2 sigma^2) |H x - z|^2 + 1/2 |G x - w|^2_{Q^-1} + lambda/2 x'Lx
//
// over the stacked state x = (x_1, ..., x_N), x_t = (velocity_t, position_t):
//   H  block diagonal, H_t x_t = A_t (V_t (x) I) position_t, i.e. one inner
//      product <U_t[i], V_t[j]> per observed rating;
//   G  block lower bidiagonal with identity diagonal and -G_t below it, where
//      G_t maps (u', u) to (u', dt u' + u) per coordinate;
//   Q  block diagonal, Q (x) I_{mk} with the 2x2 constant-velocity covariance;
//   L  block diagonal, zero on velocities and L_t on positions;
//   w  zero except the first block, G_1 x_0 with x_0 = (0, U_0 anchor).
// Every application costs O(N k (m + p + q)); no dense operator is formed.

#include <optional>
#include <vector>

#include "sdmf/domain.h"
#include "sdmf/graph_laplacian.h"

namespace sdmf {

class SmootherProblem {
 public:
  // `trust` may be omitted for a social-free problem, in which case the
  // Laplacian term is absent regardless of config.lambda. `anchor_position`
  // is U_0 of the anchor x_0 = (0, U_0); it defaults to factors[0].U.
  SmootherProblem(const RatingsTimeline& train, FactorTimeline factors,
                  std::optional<TrustTimeline> trust, const SmootherConfig& config,
                  std::optional<Matrix> anchor_position = std::nullopt);

  int num_bins() const { return num_bins_; }
  int num_users() const { return num_users_; }
  int num_items() const { return num_items_; }
  int rank() const { return rank_; }
  int64_t state_size() const { return int64_t{2} * num_bins_ * num_users_ * rank_; }
  int64_t num_observations() const { return z_.size(); }

  const SmootherConfig& config() const { return config_; }
  const ProcessNoiseBlock& noise() const { return noise_; }
  const FactorTimeline& factors() const { return factors_; }
  const Matrix& item_factors(int t) const { return factors_[t].V; }
  bool has_social() const { return !laplacians_.empty(); }
  const std::vector<LaplacianOperator>& laplacians() const { return laplacians_; }
  const Matrix& anchor_position() const { return anchor_; }

  // Observations of bin t occupy [offset(t), offset(t + 1)).
  int64_t offset(int t) const { return offsets_[t]; }
  int obs_user(int64_t l) const { return obs_user_[l]; }
  int obs_item(int64_t l) const { return obs_item_[l]; }
  const Vector& z() const { return z_; }
  // Anchor vector w (state-shaped).
  const Vector& w() const { return w_; }

  // Warm start: positions from the static factors, zero velocities.
  SmootherState InitialState() const;

  // Throws InputError unless `x` has state_size() entries.
  void CheckState(const Vector& x) const;

 private:
  int num_bins_ = 0;
  int num_users_ = 0;
  int num_items_ = 0;
  int rank_ = 0;
  SmootherConfig config_;
  ProcessNoiseBlock noise_;
  FactorTimeline factors_;
  std::vector<LaplacianOperator> laplacians_;
  Matrix anchor_;
  std::vector<int64_t> offsets_;
  std::vector<int> obs_user_;
  std::vector<int> obs_item_;
  Vector z_;
  Vector w_;
};

// H x: predicted rating for every training observation, in bin order.
Vector ApplyMeasurement(const SmootherProblem& problem, const Vector& x);
// H* r: zero on velocity blocks.
Vector ApplyMeasurementAdjoint(const SmootherProblem& problem, const Vector& r);
// G x.
Vector ApplyProcess(const SmootherProblem& problem, const Vector& x);
// G^T r.
Vector ApplyProcessAdjoint(const SmootherProblem& problem, const Vector& r);
// Q^-1 r, applying the 2x2 inverse to each (velocity, position) pair.
Vector ApplyQInv(const SmootherProblem& problem, const Vector& r);
// Q r (used to verify ApplyQInv).
Vector ApplyQ(const SmootherProblem& problem, const Vector& r);
// L x, without the lambda factor; zero if the problem is social-free.
Vector ApplySocial(const SmootherProblem& problem, const Vector& x);

struct ObjectiveTerms {
  double measurement = 0.0;  // 1/(2 sigma^2) |Hx - z|^2
  double process = 0.0;      // 1/2 |Gx - w|^2_{Q^-1}
  double social = 0.0;       // lambda/2 x'Lx

  double total() const { return measurement + process + social; }
};

// Throws NumericalError naming the term if any term is non-finite.
ObjectiveTerms ObjectiveBreakdown(const SmootherProblem& problem, const Vector& x);
double Objective(const SmootherProblem& problem, const Vector& x);

// (1/sigma^2) H*(Hx - z) + G^T Q^-1 (Gx - w) + lambda L x.
Vector Gradient(const SmootherProblem& problem, const Vector& x);

// Fused evaluation sharing the residuals; `grad` may be null.
double ObjectiveAndGradient(const SmootherProblem& problem, const Vector& x,
                            Vector* grad);

}  // namespace sdmf

#endif  // SDMF_SMOOTHER_OPS_H_
