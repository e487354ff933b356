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

#ifndef SDMF_OPTIMIZER_H_
#define SDMF_OPTIMIZER_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "sdmf/domain.h"

namespace sdmf {

// Returns f(x) and, when `grad` is non-null, writes the gradient into it.
using ObjectiveFunction = std::function<double(const Vector& x, Vector* grad)>;

struct LbfgsOptions {
  int memory = 10;
  int max_iter = 500;
  // Stop when |g| / max(1, |x|) <= grad_tol.
  double grad_tol = 1e-6;
  // Strong Wolfe constants.
  double c1 = 1e-4;
  double c2 = 0.9;
  // Function evaluations allowed per line search.
  int max_line_search = 40;
};

enum class LbfgsStatus {
  kConverged,
  kMaxIterations,
  // No step satisfying the Wolfe conditions was found; x is the best iterate.
  kLineSearchFailed,
};

const char* StatusName(LbfgsStatus status);

struct TraceEntry {
  int iter = 0;
  double f = 0.0;
  double grad_norm = 0.0;
  double step = 0.0;
};

struct LbfgsResult {
  Vector x;
  double f = 0.0;
  Vector grad;
  LbfgsStatus status = LbfgsStatus::kMaxIterations;
  int iterations = 0;
  int evaluations = 0;
  // Entry 0 is the starting point (step 0); one entry per accepted step.
  std::vector<TraceEntry> trace;
};

// Limited-memory BFGS with a strong-Wolfe line search. Every accepted step
// strictly decreases f. Throws NumericalError if f or g is non-finite.
LbfgsResult LbfgsMinimize(const ObjectiveFunction& fn, Vector x0,
                          const LbfgsOptions& options = {});

// CSV with header "iter,f,grad_norm,step".
void WriteTraceCsv(const std::filesystem::path& path,
                   const std::vector<TraceEntry>& trace);

struct FiniteDiffOptions {
  double step = 1e-5;
  // States longer than this are checked along random unit directions.
  int64_t directional_threshold = 10000;
  int num_directions = 20;
  uint64_t seed = 0;
};

struct FiniteDiffReport {
  double max_rel_error = 0.0;
  // Coordinate (or direction number) with the largest discrepancy.
  int64_t worst = -1;
  bool directional = false;
};

// Central differences against the analytic gradient. Discrepancies are
// normwise relative: per coordinate |fd_i - g_i| / max(|g|_inf, |fd|_inf),
// per unit direction d |fd_d - g.d| / |g|_2.
FiniteDiffReport FiniteDiffCheck(const ObjectiveFunction& fn, const Vector& x,
                                 const FiniteDiffOptions& options = {});

}  // namespace sdmf

#endif  // SDMF_OPTIMIZER_H_
