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

#include "sdmf/static_factorizer.h"

#include <cmath>
#include <limits>

#include "sdmf/random.h"

namespace sdmf {

namespace {

struct Entry {
  int other;
  double value;
};

// Compressed adjacency of the bipartite observation graph from one side.
struct SideLists {
  std::vector<int> start;
  std::vector<Entry> entries;
};

SideLists BuildLists(std::span<const RatingObservation> obs, int count,
                     bool by_user) {
  SideLists lists;
  lists.start.assign(count + 1, 0);
  for (const auto& o : obs) ++lists.start[(by_user ? o.user : o.item) + 1];
  for (int i = 0; i < count; ++i) lists.start[i + 1] += lists.start[i];
  lists.entries.resize(obs.size());
  std::vector<int> fill(lists.start.begin(), lists.start.end() - 1);
  for (const auto& o : obs) {
    const int row = by_user ? o.user : o.item;
    lists.entries[fill[row]++] = {by_user ? o.item : o.user, o.value};
  }
  return lists;
}

// Per-row ridge solve of `target` given the fixed `other` factor.
void RidgeHalfStep(const SideLists& lists, const Matrix& other, double gamma,
                   Matrix& target) {
  const Eigen::Index k = target.cols();
  Eigen::MatrixXd gram(k, k);
  Eigen::VectorXd rhs(k);
  for (Eigen::Index i = 0; i < target.rows(); ++i) {
    gram.setZero();
    rhs.setZero();
    for (int l = lists.start[i]; l < lists.start[i + 1]; ++l) {
      const auto& e = lists.entries[l];
      const auto v = other.row(e.other).transpose();
      gram.selfadjointView<Eigen::Lower>().rankUpdate(v);
      rhs += e.value * v;
    }
    gram.diagonal().array() += gamma;
    target.row(i) =
        gram.selfadjointView<Eigen::Lower>().llt().solve(rhs).transpose();
  }
}

void CheckObservations(std::span<const RatingObservation> observations,
                       int num_users, int num_items) {
  for (const auto& o : observations) {
    if (o.user < 0 || o.user >= num_users || o.item < 0 || o.item >= num_items) {
      throw InputError("FactorizeBin: observation index out of range");
    }
  }
}

}  // namespace

double PenalizedObjective(std::span<const RatingObservation> observations,
                          const FactorPair& factors, double gamma) {
  double misfit = 0.0;
  for (const auto& o : observations) {
    const double r = o.value - factors.U.row(o.user).dot(factors.V.row(o.item));
    misfit += r * r;
  }
  return 0.5 * misfit +
         0.5 * gamma * (factors.U.squaredNorm() + factors.V.squaredNorm());
}

double PenalizedGradientNorm(std::span<const RatingObservation> observations,
                             const FactorPair& factors, double gamma) {
  Matrix gu = gamma * factors.U;
  Matrix gv = gamma * factors.V;
  for (const auto& o : observations) {
    const double r = o.value - factors.U.row(o.user).dot(factors.V.row(o.item));
    gu.row(o.user) -= r * factors.V.row(o.item);
    gv.row(o.item) -= r * factors.U.row(o.user);
  }
  return std::sqrt(gu.squaredNorm() + gv.squaredNorm());
}

FactorizeResult FactorizeBin(std::span<const RatingObservation> observations,
                             int num_users, int num_items, int k, double gamma,
                             const FactorizeOptions& options, uint64_t seed) {
  if (k <= 0) throw InputError("FactorizeBin: k must be >= 1");
  if (!(gamma > 0.0)) throw InputError("FactorizeBin: gamma must be > 0");
  if (observations.empty()) throw InputError("FactorizeBin: empty bin");
  if (num_users <= 0 || num_items <= 0) {
    throw InputError("FactorizeBin: non-positive dimensions");
  }
  CheckObservations(observations, num_users, num_items);

  FactorizeResult result;
  auto& f = result.factors;
  f.U.resize(num_users, k);
  f.V.resize(num_items, k);
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(static_cast<double>(k));
  FillGaussian(f.U, scale, rng);
  FillGaussian(f.V, scale, rng);

  const SideLists by_user = BuildLists(observations, num_users, true);
  const SideLists by_item = BuildLists(observations, num_items, false);

  double previous = PenalizedObjective(observations, f, gamma);
  result.objective_trace.push_back(previous);
  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    RidgeHalfStep(by_user, f.V, gamma, f.U);
    result.objective_trace.push_back(PenalizedObjective(observations, f, gamma));
    RidgeHalfStep(by_item, f.U, gamma, f.V);
    const double current = PenalizedObjective(observations, f, gamma);
    result.objective_trace.push_back(current);
    result.sweeps = sweep + 1;
    if (!std::isfinite(current)) {
      throw NumericalError("FactorizeBin: objective became non-finite");
    }
    if (options.grad_tol > 0.0) {
      if (PenalizedGradientNorm(observations, f, gamma) <= options.grad_tol) break;
    } else if (std::abs(previous - current) <
               options.rel_tol * std::max(std::abs(previous),
                                          std::numeric_limits<double>::min())) {
      break;
    }
    previous = current;
  }
  result.grad_norm = PenalizedGradientNorm(observations, f, gamma);
  return result;
}

FactorPair AlignFactorPair(const FactorPair& current, const FactorPair& reference) {
  if (current.V.rows() != reference.V.rows() ||
      current.V.cols() != reference.V.cols() ||
      current.U.cols() != current.V.cols()) {
    throw InputError("AlignFactorPair: dimension mismatch");
  }
  const Eigen::MatrixXd cross = current.V.transpose() * reference.V;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(cross,
                                        Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::MatrixXd rotation = svd.matrixU() * svd.matrixV().transpose();
  return {current.U * rotation, current.V * rotation};
}

FactorTimeline InitTimeline(const SplitTimeline& split,
                            const SmootherConfig& config,
                            std::vector<std::string>* warnings) {
  config.Validate();
  const auto& train = split.train;
  const int m = train.num_users();
  const int n = train.num_items();
  FactorizeOptions options;
  options.max_sweeps = config.init_iters;

  FactorTimeline factors(train.num_bins());
  int reference = -1;
  for (int t = 0; t < train.num_bins(); ++t) {
    const auto& obs = train.bin(t);
    if (obs.empty()) {
      factors[t] = {Matrix::Zero(m, config.k), Matrix::Zero(n, config.k)};
      if (warnings) {
        warnings->push_back("bin " + std::to_string(t) +
                            " has no training ratings; using zero factors");
      }
      continue;
    }
    factors[t] = FactorizeBin(obs, m, n, config.k, config.gamma, options,
                              MixSeed(config.seed, 1000 + t))
                     .factors;
    if (config.align_factors && reference >= 0) {
      factors[t] = AlignFactorPair(factors[t], factors[reference]);
    }
    reference = t;
  }
  return factors;
}

}  // namespace sdmf
