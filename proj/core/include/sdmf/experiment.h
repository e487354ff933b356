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

#ifndef SDMF_EXPERIMENT_H_
#define SDMF_EXPERIMENT_H_

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "sdmf/domain.h"
#include "sdmf/ingest.h"
#include "sdmf/optimizer.h"

namespace sdmf {

enum class ModelKind { kStatic, kDynamic, kDynamicSocial };

const char* ModelName(ModelKind model);

struct RmseReport {
  // NaN for bins without test ratings.
  std::vector<double> per_bin;
  // sqrt(sum_t p_t mse_t / sum_t p_t) over bins with p_t > 0; NaN if none.
  double weighted = 0.0;
};

// Prediction for test rating (i, j) in bin t is <U_t[i], V_t[j]>.
RmseReport EvaluateRmse(const FactorTimeline& factors, const RatingsTimeline& test);

// Replaces every U_t by the position block of the smoothed state.
FactorTimeline WithSmoothedUsers(const FactorTimeline& factors,
                                 const SmootherState& state);

struct ExperimentResult {
  ModelKind model = ModelKind::kStatic;
  int k = 0;
  double lambda = 0.0;
  std::vector<double> rmse_per_bin;
  double rmse_weighted = 0.0;
  double wall_seconds = 0.0;
  SmootherConfig config;
  uint64_t seed = 0;
  std::string status = "ok";
};

ExperimentResult RunStatic(const SplitTimeline& split, const SmootherConfig& config,
                           FactorTimeline* factors_out = nullptr);

struct DynamicRun {
  ExperimentResult result;
  LbfgsResult optimization;
  FactorTimeline smoothed;
};

// Smooths the user factors with the item factors fixed to the static ones.
// `trust` null gives the social-free model. `initial` reuses precomputed
// static factors (they must come from InitTimeline with the same config).
DynamicRun RunDynamic(const SplitTimeline& split, const TrustTimeline* trust,
                      const SmootherConfig& config, double lambda,
                      const FactorTimeline* initial = nullptr);

struct SweepOptions {
  // Worker threads over k values; rows are identical for any thread count.
  int threads = 1;
  // When false, wall_seconds is reported as 0 so output is reproducible.
  bool record_timing = true;
};

// Per k: one static row, one dynamic (lambda = 0) row, and one
// dynamic_social row per lambda. Failures are recorded in the row status.
std::vector<ExperimentResult> Sweep(const SplitTimeline& split,
                                    const TrustTimeline& trust,
                                    const std::vector<int>& ks,
                                    const std::vector<double>& lambdas,
                                    const SmootherConfig& config,
                                    const SweepOptions& options = {});

// Columns: model,k,lambda,rmse_weighted,rmse_bin_0..rmse_bin_{N-1},
// wall_seconds,seed,status.
void WriteResultsCsv(std::ostream& out, const std::vector<ExperimentResult>& rows,
                     int num_bins);

struct SynthConfig {
  int m = 200;
  int n = 300;
  int k = 5;
  int N = 8;
  int samples_per_bin = 6000;
  int trust_edges = 600;
  double eta = 0.05;
  double noise_std = 0.5;
  double dt = 1.0;
  double position_std = 1.0;
  double velocity_std = 0.1;
  double velocity_noise_std = 0.02;
  double process_noise_std = 0.05;
  // Share of trust edges present from bin 0; the rest appear uniformly later.
  double initial_edge_fraction = 0.5;
  double train_fraction = 0.5;
  uint64_t seed = 0;
};

struct SynthData {
  RatingsTimeline ratings;  // all sampled ratings
  SplitTimeline split;
  TrustTimeline trust;
  Matrix V;                    // n x k
  std::vector<Matrix> U;       // per bin, m x k
  std::vector<Matrix> velocity;  // per bin, m x k
};

// Ground truth evolves as
//   U_{t+1} = (I - eta L_t)(U_t + dt Udot_t) + process noise
//   Udot_{t+1} = Udot_t + velocity noise
// and ratings are <U_t[i], V[j]> + N(0, noise_std^2) on uniformly sampled
// distinct (user, item) pairs. Throws InputError if the consensus step could
// expand (spectral radius of I - eta L_t above 1).
SynthData SynthGenerate(const SynthConfig& config);

// Canonical directory plus truth_U_<t>.mat and truth_V.mat.
void WriteSynthBundle(const std::filesystem::path& dir, const SynthData& data);

struct OverlapStats {
  int64_t intersection = 0;
  int64_t trust_edges = 0;
  int64_t similarity_edges = 0;
  // |trust & sim| / |trust | sim|; 1 when both are empty.
  double jaccard = 0.0;
  std::vector<int> sampled_users;
};

// Compares trust edges with a rating-similarity graph (edge when
// <U_i, U_j> > threshold) on a seeded sample of users.
OverlapStats GraphOverlap(const std::vector<WeightedEdge>& trust_edges,
                          const Matrix& U, double threshold, int sample_users,
                          uint64_t seed);

}  // namespace sdmf

#endif  // SDMF_EXPERIMENT_H_
