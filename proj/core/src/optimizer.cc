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

#include "sdmf/optimizer.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>
#include <optional>

#include "sdmf/io_util.h"
#include "sdmf/random.h"

namespace sdmf {

const char* StatusName(LbfgsStatus status) {
  switch (status) {
    case LbfgsStatus::kConverged:
      return "converged";
    case LbfgsStatus::kMaxIterations:
      return "max_iter";
    case LbfgsStatus::kLineSearchFailed:
      return "line_search_failed";
  }
  return "unknown";
}

namespace {

struct Point {
  double alpha = 0.0;
  double f = 0.0;
  double slope = 0.0;  // directional derivative g(x + alpha d).d
  Vector x;
  Vector g;
};

class LineSearch {
 public:
  LineSearch(const ObjectiveFunction& fn, const LbfgsOptions& options,
             const Vector& x, double f0, const Vector& d, double slope0,
             int* evaluations)
      : fn_(fn), options_(options), x_(x), f0_(f0), d_(d), slope0_(slope0),
        evaluations_(evaluations) {}

  // Strong-Wolfe search (bracketing, then zoom with safeguarded cubic
  // interpolation).
  std::optional<Point> Run(double alpha) {
    Point prev{0.0, f0_, slope0_, {}, {}};
    for (int i = 0; i < options_.max_line_search; ++i) {
      Point cur = Eval(alpha);
      if (!SufficientDecrease(cur) || (i > 0 && cur.f >= prev.f)) {
        return Zoom(prev, cur);
      }
      if (std::abs(cur.slope) <= -options_.c2 * slope0_) return cur;
      if (cur.slope >= 0.0) return Zoom(cur, prev);
      prev = std::move(cur);
      alpha *= 2.0;
    }
    return std::nullopt;
  }

 private:
  Point Eval(double alpha) {
    Point p;
    p.alpha = alpha;
    p.x = x_ + alpha * d_;
    p.f = fn_(p.x, &p.g);
    ++*evaluations_;
    if (!std::isfinite(p.f) || !p.g.allFinite()) {
      throw NumericalError("L-BFGS: objective or gradient is non-finite");
    }
    p.slope = p.g.dot(d_);
    return p;
  }

  bool SufficientDecrease(const Point& p) const {
    return p.f <= f0_ + options_.c1 * p.alpha * slope0_ && p.f < f0_;
  }

  // Minimizer of the cubic interpolating f and slope at a and b, if it is
  // well defined.
  static std::optional<double> Cubic(const Point& a, const Point& b) {
    const double d1 = a.slope + b.slope - 3.0 * (a.f - b.f) / (a.alpha - b.alpha);
    const double disc = d1 * d1 - a.slope * b.slope;
    if (disc < 0.0) return std::nullopt;
    const double d2 = std::copysign(std::sqrt(disc), b.alpha - a.alpha);
    const double denom = b.slope - a.slope + 2.0 * d2;
    if (denom == 0.0) return std::nullopt;
    const double t = b.alpha - (b.alpha - a.alpha) * (b.slope + d2 - d1) / denom;
    if (!std::isfinite(t)) return std::nullopt;
    return t;
  }

  std::optional<Point> Zoom(Point lo, Point hi) {
    for (int i = 0; i < options_.max_line_search; ++i) {
      const double lo_a = std::min(lo.alpha, hi.alpha);
      const double hi_a = std::max(lo.alpha, hi.alpha);
      const double width = hi_a - lo_a;
      if (width <= 1e-16 * std::max(1.0, hi_a)) return std::nullopt;
      double alpha = 0.5 * (lo_a + hi_a);
      if (auto c = Cubic(lo, hi)) {
        alpha = std::clamp(*c, lo_a + 0.1 * width, hi_a - 0.1 * width);
      }
      Point cur = Eval(alpha);
      if (!SufficientDecrease(cur) || cur.f >= lo.f) {
        hi = std::move(cur);
      } else {
        if (std::abs(cur.slope) <= -options_.c2 * slope0_) return cur;
        if (cur.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
        lo = std::move(cur);
      }
    }
    // Fall back to the best sufficient-decrease point seen, if any.
    if (lo.alpha > 0.0 && SufficientDecrease(lo)) return lo;
    return std::nullopt;
  }

  const ObjectiveFunction& fn_;
  const LbfgsOptions& options_;
  const Vector& x_;
  double f0_;
  const Vector& d_;
  double slope0_;
  int* evaluations_;
};

}  // namespace

LbfgsResult LbfgsMinimize(const ObjectiveFunction& fn, Vector x0,
                          const LbfgsOptions& options) {
  if (options.memory < 1) throw InputError("L-BFGS: memory must be >= 1");
  if (options.max_iter < 0) throw InputError("L-BFGS: max_iter must be >= 0");
  if (!(options.grad_tol > 0.0)) throw InputError("L-BFGS: grad_tol must be > 0");

  LbfgsResult result;
  result.x = std::move(x0);
  result.f = fn(result.x, &result.grad);
  result.evaluations = 1;
  if (!std::isfinite(result.f) || !result.grad.allFinite()) {
    throw NumericalError("L-BFGS: objective or gradient is non-finite at x0");
  }
  result.trace.push_back({0, result.f, result.grad.norm(), 0.0});

  struct Pair {
    Vector s, y;
    double rho;
  };
  std::deque<Pair> memory;
  std::vector<double> alpha_buf(options.memory);

  auto converged = [&] {
    return result.grad.norm() / std::max(1.0, result.x.norm()) <= options.grad_tol;
  };

  result.status = LbfgsStatus::kMaxIterations;
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    if (converged()) {
      result.status = LbfgsStatus::kConverged;
      break;
    }
    // Two-loop recursion for d = -H g.
    Vector d = -result.grad;
    for (int i = static_cast<int>(memory.size()) - 1; i >= 0; --i) {
      alpha_buf[i] = memory[i].rho * memory[i].s.dot(d);
      d -= alpha_buf[i] * memory[i].y;
    }
    if (!memory.empty()) {
      const auto& last = memory.back();
      d *= last.s.dot(last.y) / last.y.squaredNorm();
    }
    for (size_t i = 0; i < memory.size(); ++i) {
      const double beta = memory[i].rho * memory[i].y.dot(d);
      d += (alpha_buf[i] - beta) * memory[i].s;
    }
    double slope = result.grad.dot(d);
    if (!(slope < 0.0)) {
      memory.clear();
      d = -result.grad;
      slope = -result.grad.squaredNorm();
    }
    const double alpha0 = memory.empty() ? std::min(1.0, 1.0 / d.norm()) : 1.0;

    LineSearch search(fn, options, result.x, result.f, d, slope,
                      &result.evaluations);
    std::optional<Point> step = search.Run(alpha0);
    if (!step) {
      result.status = LbfgsStatus::kLineSearchFailed;
      break;
    }
    Vector s = step->x - result.x;
    Vector y = step->g - result.grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (static_cast<int>(memory.size()) == options.memory) memory.pop_front();
      memory.push_back({std::move(s), std::move(y), 1.0 / sy});
    }
    result.x = std::move(step->x);
    result.grad = std::move(step->g);
    result.f = step->f;
    result.iterations = iter;
    result.trace.push_back({iter, result.f, result.grad.norm(), step->alpha});
  }
  if (result.status == LbfgsStatus::kMaxIterations && converged()) {
    result.status = LbfgsStatus::kConverged;
  }
  return result;
}

void WriteTraceCsv(const std::filesystem::path& path,
                   const std::vector<TraceEntry>& trace) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file: " + path.string());
  out << "iter,f,grad_norm,step\n";
  for (const auto& e : trace) {
    out << e.iter << ',' << FormatReal(e.f) << ',' << FormatReal(e.grad_norm)
        << ',' << FormatReal(e.step) << '\n';
  }
}

FiniteDiffReport FiniteDiffCheck(const ObjectiveFunction& fn, const Vector& x,
                                 const FiniteDiffOptions& options) {
  if (!(options.step > 0.0)) throw InputError("finite differences: step must be > 0");
  Vector g;
  fn(x, &g);
  FiniteDiffReport report;
  const double h = options.step;
  Vector probe = x;

  if (x.size() <= options.directional_threshold) {
    Vector fd(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      probe[i] = x[i] + h;
      const double fp = fn(probe, nullptr);
      probe[i] = x[i] - h;
      const double fm = fn(probe, nullptr);
      probe[i] = x[i];
      fd[i] = (fp - fm) / (2.0 * h);
    }
    const double scale = std::max({g.lpNorm<Eigen::Infinity>(),
                                   fd.lpNorm<Eigen::Infinity>(),
                                   std::numeric_limits<double>::min()});
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double err = std::abs(fd[i] - g[i]) / scale;
      if (err > report.max_rel_error || report.worst < 0) {
        report.max_rel_error = err;
        report.worst = i;
      }
    }
    return report;
  }

  report.directional = true;
  Rng rng(options.seed);
  std::normal_distribution<double> normal;
  const double scale = std::max(g.norm(), std::numeric_limits<double>::min());
  for (int r = 0; r < options.num_directions; ++r) {
    Vector d(x.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = normal(rng);
    d.normalize();
    const double fp = fn(x + h * d, nullptr);
    const double fm = fn(x - h * d, nullptr);
    const double fd = (fp - fm) / (2.0 * h);
    const double err = std::abs(fd - g.dot(d)) / scale;
    if (err > report.max_rel_error || report.worst < 0) {
      report.max_rel_error = err;
      report.worst = r;
    }
  }
  return report;
}

}  // namespace sdmf
