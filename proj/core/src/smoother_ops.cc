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

#include "sdmf/smoother_ops.h"

#include <cmath>
#include <string>

namespace sdmf {

SmootherProblem::SmootherProblem(const RatingsTimeline& train,
                                 FactorTimeline factors,
                                 std::optional<TrustTimeline> trust,
                                 const SmootherConfig& config,
                                 std::optional<Matrix> anchor_position)
    : config_(config), factors_(std::move(factors)) {
  config_.Validate();
  num_bins_ = train.num_bins();
  num_users_ = train.num_users();
  num_items_ = train.num_items();
  if (num_bins_ == 0) throw InputError("SmootherProblem: no time bins");
  if (static_cast<int>(factors_.size()) != num_bins_) {
    throw InputError("SmootherProblem: " + std::to_string(factors_.size()) +
                     " factor pairs for " + std::to_string(num_bins_) + " bins");
  }
  ValidateFactorTimeline(factors_);
  rank_ = factors_.front().rank();
  if (rank_ != config_.k) {
    throw InputError("SmootherProblem: factor rank " + std::to_string(rank_) +
                     " differs from config k " + std::to_string(config_.k));
  }
  if (factors_.front().U.rows() != num_users_ ||
      factors_.front().V.rows() != num_items_) {
    throw InputError("SmootherProblem: factor shapes do not match the ratings");
  }
  if (trust) {
    if (trust->num_users() != num_users_ || trust->num_bins() != num_bins_) {
      throw InputError("SmootherProblem: trust timeline shape mismatch");
    }
    laplacians_ = BuildLaplacians(*trust);
  }
  anchor_ = anchor_position ? std::move(*anchor_position) : factors_.front().U;
  if (anchor_.rows() != num_users_ || anchor_.cols() != rank_) {
    throw InputError("SmootherProblem: anchor position must be m x k");
  }
  noise_ = MakeProcessNoiseBlock(config_.dt);

  offsets_.assign(num_bins_ + 1, 0);
  for (int t = 0; t < num_bins_; ++t) offsets_[t + 1] = offsets_[t] + train.count(t);
  obs_user_.resize(offsets_.back());
  obs_item_.resize(offsets_.back());
  z_.resize(offsets_.back());
  for (int t = 0; t < num_bins_; ++t) {
    int64_t l = offsets_[t];
    for (const auto& o : train.bin(t)) {
      obs_user_[l] = o.user;
      obs_item_[l] = o.item;
      z_[l] = o.value;
      ++l;
    }
  }

  // w = (G_1 x_0, 0, ..., 0) with x_0 = (0, anchor): G_1 x_0 = (0, anchor).
  SmootherState w(num_bins_, num_users_, rank_);
  w.block(0, SmootherState::kPosition) = anchor_;
  w_ = std::move(w.values());
}

SmootherState SmootherProblem::InitialState() const {
  SmootherState x(num_bins_, num_users_, rank_);
  for (int t = 0; t < num_bins_; ++t) {
    x.block(t, SmootherState::kPosition) = factors_[t].U;
  }
  return x;
}

void SmootherProblem::CheckState(const Vector& x) const {
  if (x.size() != state_size()) {
    throw InputError("smoother state has length " + std::to_string(x.size()) +
                     ", expected " + std::to_string(state_size()));
  }
}

namespace {

int64_t BlockSize(const SmootherProblem& p) {
  return int64_t{p.num_users()} * p.rank();
}

// Shared kernel: objective terms and (optionally) the gradient in one pass.
ObjectiveTerms Evaluate(const SmootherProblem& p, const Vector& x, Vector* grad) {
  p.CheckState(x);
  const int k = p.rank();
  const int64_t bs = BlockSize(p);
  const int64_t stride = 2 * bs;
  const double inv_s2 = 1.0 / (p.config().sigma * p.config().sigma);
  const double dt = p.config().dt;
  const auto& qi = p.noise().q_inv;
  // Cholesky factor of Q^-1 so the process term is a sum of squares.
  const double l00 = std::sqrt(qi(0, 0));
  const double l10 = qi(1, 0) / l00;
  const double l11 = std::sqrt(qi(1, 1) - l10 * l10);

  if (grad) grad->setZero(x.size());
  const double* xs = x.data();
  double* gs = grad ? grad->data() : nullptr;
  ObjectiveTerms terms;

  // Measurement.
  double misfit = 0.0;
  for (int t = 0; t < p.num_bins(); ++t) {
    const double* pos = xs + t * stride + bs;
    double* gpos = gs ? gs + t * stride + bs : nullptr;
    const double* V = p.item_factors(t).data();
    for (int64_t l = p.offset(t); l < p.offset(t + 1); ++l) {
      const double* u = pos + int64_t{p.obs_user(l)} * k;
      const double* v = V + int64_t{p.obs_item(l)} * k;
      double pred = 0.0;
      for (int c = 0; c < k; ++c) pred += u[c] * v[c];
      const double r = pred - p.z()[l];
      misfit += r * r;
      if (gpos) {
        double* g = gpos + int64_t{p.obs_user(l)} * k;
        const double scaled = inv_s2 * r;
        for (int c = 0; c < k; ++c) g[c] += scaled * v[c];
      }
    }
  }
  terms.measurement = 0.5 * inv_s2 * misfit;

  // Process: e_t = x_t - G_t x_{t-1} (t > 0), e_0 = x_0 - w_0.
  double process = 0.0;
  const double* w = p.w().data();
  for (int t = 0; t < p.num_bins(); ++t) {
    const double* vel = xs + t * stride;
    const double* pos = vel + bs;
    const double* pvel = t > 0 ? vel - stride : nullptr;
    const double* ppos = t > 0 ? pos - stride : nullptr;
    for (int64_t b = 0; b < bs; ++b) {
      double ev, ep;
      if (t > 0) {
        ev = vel[b] - pvel[b];
        ep = pos[b] - (dt * pvel[b] + ppos[b]);
      } else {
        ev = vel[b] - w[b];
        ep = pos[b] - w[bs + b];
      }
      const double s0 = l00 * ev + l10 * ep;
      const double s1 = l11 * ep;
      process += s0 * s0 + s1 * s1;
      if (gs) {
        const double qv = qi(0, 0) * ev + qi(0, 1) * ep;
        const double qp = qi(1, 0) * ev + qi(1, 1) * ep;
        double* g = gs + t * stride;
        g[b] += qv;
        g[bs + b] += qp;
        if (t > 0) {
          double* gprev = g - stride;
          gprev[b] -= qv + dt * qp;
          gprev[bs + b] -= qp;
        }
      }
    }
  }
  terms.process = 0.5 * process;

  // Social.
  if (p.has_social()) {
    const double lambda = p.config().lambda;
    double quad = 0.0;
    Matrix lu(p.num_users(), k);
    for (int t = 0; t < p.num_bins(); ++t) {
      ConstMatrixMap pos(xs + t * stride + bs, p.num_users(), k);
      quad += p.laplacians()[t].Quadratic(pos);
      if (gs) {
        p.laplacians()[t].ApplyInto(pos, lu);
        MatrixMap gpos(gs + t * stride + bs, p.num_users(), k);
        gpos += lambda * lu;
      }
    }
    terms.social = 0.5 * lambda * quad;
  }

  if (!std::isfinite(terms.measurement)) {
    throw NumericalError("objective: measurement term is non-finite");
  }
  if (!std::isfinite(terms.process)) {
    throw NumericalError("objective: process term is non-finite");
  }
  if (!std::isfinite(terms.social)) {
    throw NumericalError("objective: social term is non-finite");
  }
  if (grad && !grad->allFinite()) {
    throw NumericalError("gradient is non-finite");
  }
  return terms;
}

}  // namespace

Vector ApplyMeasurement(const SmootherProblem& p, const Vector& x) {
  p.CheckState(x);
  const int k = p.rank();
  const int64_t bs = BlockSize(p);
  Vector out(p.num_observations());
  for (int t = 0; t < p.num_bins(); ++t) {
    const double* pos = x.data() + 2 * t * bs + bs;
    const double* V = p.item_factors(t).data();
    for (int64_t l = p.offset(t); l < p.offset(t + 1); ++l) {
      const double* u = pos + int64_t{p.obs_user(l)} * k;
      const double* v = V + int64_t{p.obs_item(l)} * k;
      double pred = 0.0;
      for (int c = 0; c < k; ++c) pred += u[c] * v[c];
      out[l] = pred;
    }
  }
  return out;
}

Vector ApplyMeasurementAdjoint(const SmootherProblem& p, const Vector& r) {
  if (r.size() != p.num_observations()) {
    throw InputError("ApplyMeasurementAdjoint: residual has length " +
                     std::to_string(r.size()) + ", expected " +
                     std::to_string(p.num_observations()));
  }
  const int k = p.rank();
  const int64_t bs = BlockSize(p);
  Vector out = Vector::Zero(p.state_size());
  for (int t = 0; t < p.num_bins(); ++t) {
    double* pos = out.data() + 2 * t * bs + bs;
    const double* V = p.item_factors(t).data();
    for (int64_t l = p.offset(t); l < p.offset(t + 1); ++l) {
      double* u = pos + int64_t{p.obs_user(l)} * k;
      const double* v = V + int64_t{p.obs_item(l)} * k;
      for (int c = 0; c < k; ++c) u[c] += r[l] * v[c];
    }
  }
  return out;
}

Vector ApplyProcess(const SmootherProblem& p, const Vector& x) {
  p.CheckState(x);
  const int64_t bs = BlockSize(p);
  const double dt = p.config().dt;
  Vector out = x;
  for (int t = 1; t < p.num_bins(); ++t) {
    double* o = out.data() + 2 * t * bs;
    const double* prev = x.data() + 2 * (t - 1) * bs;
    for (int64_t b = 0; b < bs; ++b) {
      o[b] -= prev[b];
      o[bs + b] -= dt * prev[b] + prev[bs + b];
    }
  }
  return out;
}

Vector ApplyProcessAdjoint(const SmootherProblem& p, const Vector& r) {
  p.CheckState(r);
  const int64_t bs = BlockSize(p);
  const double dt = p.config().dt;
  Vector out = r;
  for (int t = 0; t + 1 < p.num_bins(); ++t) {
    double* o = out.data() + 2 * t * bs;
    const double* next = r.data() + 2 * (t + 1) * bs;
    for (int64_t b = 0; b < bs; ++b) {
      o[b] -= next[b] + dt * next[bs + b];
      o[bs + b] -= next[bs + b];
    }
  }
  return out;
}

namespace {

Vector ApplyPairwise(const SmootherProblem& p, const Vector& r,
                     const Eigen::Matrix2d& block) {
  p.CheckState(r);
  const int64_t bs = BlockSize(p);
  Vector out(r.size());
  for (int t = 0; t < p.num_bins(); ++t) {
    const double* in = r.data() + 2 * t * bs;
    double* o = out.data() + 2 * t * bs;
    for (int64_t b = 0; b < bs; ++b) {
      o[b] = block(0, 0) * in[b] + block(0, 1) * in[bs + b];
      o[bs + b] = block(1, 0) * in[b] + block(1, 1) * in[bs + b];
    }
  }
  return out;
}

}  // namespace

Vector ApplyQInv(const SmootherProblem& p, const Vector& r) {
  return ApplyPairwise(p, r, p.noise().q_inv);
}

Vector ApplyQ(const SmootherProblem& p, const Vector& r) {
  return ApplyPairwise(p, r, p.noise().q);
}

Vector ApplySocial(const SmootherProblem& p, const Vector& x) {
  p.CheckState(x);
  if (!p.has_social()) return Vector::Zero(x.size());
  return ApplySocialBlock(
      p.laplacians(), SmootherState(p.num_bins(), p.num_users(), p.rank(), x));
}

ObjectiveTerms ObjectiveBreakdown(const SmootherProblem& p, const Vector& x) {
  return Evaluate(p, x, nullptr);
}

double Objective(const SmootherProblem& p, const Vector& x) {
  return Evaluate(p, x, nullptr).total();
}

Vector Gradient(const SmootherProblem& p, const Vector& x) {
  Vector g;
  Evaluate(p, x, &g);
  return g;
}

double ObjectiveAndGradient(const SmootherProblem& p, const Vector& x,
                            Vector* grad) {
  return Evaluate(p, x, grad).total();
}

}  // namespace sdmf
