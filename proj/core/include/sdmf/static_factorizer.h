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

#ifndef SDMF_STATIC_FACTORIZER_H_
#define SDMF_STATIC_FACTORIZER_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sdmf/domain.h"
#include "sdmf/ingest.h"

namespace sdmf {

struct FactorizeOptions {
  int max_sweeps = 30;
  // Stop once the relative objective change over a sweep drops below this.
  double rel_tol = 1e-6;
  // When positive, stop only once the gradient norm reaches this (or
  // max_sweeps runs out); rel_tol is ignored.
  double grad_tol = 0.0;
};

struct FactorizeResult {
  FactorPair factors;
  // Penalized objective at the initial point and after every half-step
  // (U update, then V update).
  std::vector<double> objective_trace;
  int sweeps = 0;
  double grad_norm = 0.0;
};

// Alternating ridge regression for
//   min_{U,V} 1/2 |z - A(U V^T)|^2 + gamma/2 (|U|_F^2 + |V|_F^2).
// Each half-step solves (V_O^T V_O + gamma I) u_i = V_O^T z_O exactly for
// every user (and symmetrically for items), so the objective never increases.
FactorizeResult FactorizeBin(std::span<const RatingObservation> observations,
                             int num_users, int num_items, int k, double gamma,
                             const FactorizeOptions& options, uint64_t seed);

double PenalizedObjective(std::span<const RatingObservation> observations,
                          const FactorPair& factors, double gamma);

// Norm of the gradient of PenalizedObjective with respect to (U, V).
double PenalizedGradientNorm(std::span<const RatingObservation> observations,
                             const FactorPair& factors, double gamma);

// Rotates `current` by the orthogonal R minimizing |V_cur R - V_ref|_F.
// The product U V^T is unchanged.
FactorPair AlignFactorPair(const FactorPair& current, const FactorPair& reference);

// Static factorization of every training bin. Bins without training data get
// zero factors (a warning is appended to `warnings` if given). With
// config.align_factors each non-empty bin is aligned to the previous
// non-empty one.
FactorTimeline InitTimeline(const SplitTimeline& split,
                            const SmootherConfig& config,
                            std::vector<std::string>* warnings = nullptr);

}  // namespace sdmf

#endif  // SDMF_STATIC_FACTORIZER_H_
