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

#include "sdmf/experiment.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>
#include <thread>
#include <unordered_set>

#include "sdmf/graph_laplacian.h"
#include "sdmf/io_util.h"
#include "sdmf/random.h"
#include "sdmf/smoother_ops.h"
#include "sdmf/static_factorizer.h"

namespace sdmf {

namespace fs = std::filesystem;

namespace {

double SecondsSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

}  // namespace

const char* ModelName(ModelKind model) {
  switch (model) {
    case ModelKind::kStatic:
      return "static";
    case ModelKind::kDynamic:
      return "dynamic";
    case ModelKind::kDynamicSocial:
      return "dynamic_social";
  }
  return "unknown";
}

RmseReport EvaluateRmse(const FactorTimeline& factors, const RatingsTimeline& test) {
  if (static_cast<int>(factors.size()) != test.num_bins()) {
    throw InputError("EvaluateRmse: " + std::to_string(factors.size()) +
                     " factor pairs for " + std::to_string(test.num_bins()) +
                     " test bins");
  }
  ValidateFactorTimeline(factors);
  RmseReport report;
  double weighted_sse = 0.0;
  int64_t total = 0;
  for (int t = 0; t < test.num_bins(); ++t) {
    const auto& f = factors[t];
    if (f.U.rows() != test.num_users() || f.V.rows() != test.num_items()) {
      throw InputError("EvaluateRmse: factor shape does not match test data");
    }
    const auto& obs = test.bin(t);
    if (obs.empty()) {
      report.per_bin.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    double sse = 0.0;
    for (const auto& o : obs) {
      const double r = f.U.row(o.user).dot(f.V.row(o.item)) - o.value;
      sse += r * r;
    }
    report.per_bin.push_back(std::sqrt(sse / static_cast<double>(obs.size())));
    // p_t * mse_t = sse_t.
    weighted_sse += sse;
    total += static_cast<int64_t>(obs.size());
  }
  report.weighted = total > 0 ? std::sqrt(weighted_sse / static_cast<double>(total))
                              : std::numeric_limits<double>::quiet_NaN();
  return report;
}

FactorTimeline WithSmoothedUsers(const FactorTimeline& factors,
                                 const SmootherState& state) {
  if (static_cast<int>(factors.size()) != state.num_bins()) {
    throw InputError("WithSmoothedUsers: bin count mismatch");
  }
  FactorTimeline out = factors;
  for (int t = 0; t < state.num_bins(); ++t) {
    if (out[t].U.rows() != state.num_users() || out[t].U.cols() != state.rank()) {
      throw InputError("WithSmoothedUsers: shape mismatch");
    }
    out[t].U = state.block(t, SmootherState::kPosition);
  }
  return out;
}

ExperimentResult RunStatic(const SplitTimeline& split, const SmootherConfig& config,
                           FactorTimeline* factors_out) {
  const auto start = std::chrono::steady_clock::now();
  FactorTimeline factors = InitTimeline(split, config);
  const RmseReport rmse = EvaluateRmse(factors, split.test);
  ExperimentResult result;
  result.model = ModelKind::kStatic;
  result.k = config.k;
  result.lambda = 0.0;
  result.rmse_per_bin = rmse.per_bin;
  result.rmse_weighted = rmse.weighted;
  result.config = config;
  result.seed = config.seed;
  result.wall_seconds = SecondsSince(start);
  if (factors_out) *factors_out = std::move(factors);
  return result;
}

DynamicRun RunDynamic(const SplitTimeline& split, const TrustTimeline* trust,
                      const SmootherConfig& config, double lambda,
                      const FactorTimeline* initial) {
  const auto start = std::chrono::steady_clock::now();
  SmootherConfig cfg = config;
  cfg.lambda = lambda;
  cfg.Validate();
  FactorTimeline factors = initial ? *initial : InitTimeline(split, cfg);

  const SmootherProblem problem(
      split.train, factors,
      trust ? std::optional<TrustTimeline>(*trust) : std::nullopt, cfg);
  LbfgsOptions options;
  options.memory = cfg.lbfgs_memory;
  options.max_iter = cfg.max_iter;
  options.grad_tol = cfg.grad_tol;

  DynamicRun run;
  run.optimization = LbfgsMinimize(
      [&problem](const Vector& x, Vector* g) {
        return ObjectiveAndGradient(problem, x, g);
      },
      problem.InitialState().values(), options);
  const SmootherState state(problem.num_bins(), problem.num_users(),
                            problem.rank(), run.optimization.x);
  run.smoothed = WithSmoothedUsers(factors, state);
  const RmseReport rmse = EvaluateRmse(run.smoothed, split.test);

  auto& r = run.result;
  r.model = (trust && lambda > 0.0) ? ModelKind::kDynamicSocial : ModelKind::kDynamic;
  r.k = cfg.k;
  r.lambda = lambda;
  r.rmse_per_bin = rmse.per_bin;
  r.rmse_weighted = rmse.weighted;
  r.config = cfg;
  r.seed = cfg.seed;
  r.status = StatusName(run.optimization.status);
  r.wall_seconds = SecondsSince(start);
  return run;
}

std::vector<ExperimentResult> Sweep(const SplitTimeline& split,
                                    const TrustTimeline& trust,
                                    const std::vector<int>& ks,
                                    const std::vector<double>& lambdas,
                                    const SmootherConfig& config,
                                    const SweepOptions& options) {
  if (ks.empty() || lambdas.empty()) {
    throw InputError("sweep: ks and lambdas must be non-empty");
  }
  const size_t per_k = 2 + lambdas.size();
  std::vector<ExperimentResult> rows(ks.size() * per_k);

  auto failed_row = [&](ModelKind model, int k, double lambda,
                        const std::exception& e) {
    ExperimentResult r;
    r.model = model;
    r.k = k;
    r.lambda = lambda;
    r.rmse_weighted = std::numeric_limits<double>::quiet_NaN();
    r.rmse_per_bin.assign(split.test.num_bins(),
                          std::numeric_limits<double>::quiet_NaN());
    r.config = config;
    r.seed = config.seed;
    r.status = std::string("error: ") + e.what();
    return r;
  };

  auto run_k = [&](size_t ki) {
    SmootherConfig cfg = config;
    cfg.k = ks[ki];
    ExperimentResult* out = rows.data() + ki * per_k;
    FactorTimeline factors;
    bool have_factors = false;
    try {
      out[0] = RunStatic(split, cfg, &factors);
      have_factors = true;
    } catch (const std::exception& e) {
      out[0] = failed_row(ModelKind::kStatic, cfg.k, 0.0, e);
    }
    auto dynamic_row = [&](const TrustTimeline* tr, double lambda,
                           ModelKind model) {
      try {
        // Static initialization time is charged to the static row only.
        return RunDynamic(split, tr, cfg, lambda,
                          have_factors ? &factors : nullptr)
            .result;
      } catch (const std::exception& e) {
        return failed_row(model, cfg.k, lambda, e);
      }
    };
    out[1] = dynamic_row(nullptr, 0.0, ModelKind::kDynamic);
    for (size_t li = 0; li < lambdas.size(); ++li) {
      out[2 + li] = dynamic_row(&trust, lambdas[li], ModelKind::kDynamicSocial);
      out[2 + li].model = ModelKind::kDynamicSocial;
    }
  };

  const int threads = std::max(1, std::min<int>(options.threads,
                                                static_cast<int>(ks.size())));
  if (threads == 1) {
    for (size_t ki = 0; ki < ks.size(); ++ki) run_k(ki);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (size_t ki = next++; ki < ks.size(); ki = next++) run_k(ki);
      });
    }
    for (auto& th : pool) th.join();
  }
  if (!options.record_timing) {
    for (auto& r : rows) r.wall_seconds = 0.0;
  }
  return rows;
}

void WriteResultsCsv(std::ostream& out, const std::vector<ExperimentResult>& rows,
                     int num_bins) {
  out << "model,k,lambda,rmse_weighted";
  for (int t = 0; t < num_bins; ++t) out << ",rmse_bin_" << t;
  out << ",wall_seconds,seed,status\n";
  for (const auto& r : rows) {
    out << ModelName(r.model) << ',' << r.k << ',' << FormatReal(r.lambda) << ','
        << FormatReal(r.rmse_weighted);
    for (int t = 0; t < num_bins; ++t) {
      const double v = t < static_cast<int>(r.rmse_per_bin.size())
                           ? r.rmse_per_bin[t]
                           : std::numeric_limits<double>::quiet_NaN();
      out << ',' << FormatReal(v);
    }
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    out << ',' << FormatReal(r.wall_seconds) << ',' << r.seed << ',' << status
        << '\n';
  }
}

namespace {

// Largest Laplacian eigenvalue by power iteration (L is PSD).
double LaplacianSpectralRadius(const LaplacianOperator& L, uint64_t seed) {
  const int m = L.num_users();
  if (m == 0 || L.num_edges() == 0) return 0.0;
  Rng rng(seed);
  Matrix v(m, 1);
  FillGaussian(v, 1.0, rng);
  v /= v.norm();
  double estimate = 0.0;
  for (int it = 0; it < 1000; ++it) {
    Matrix lv = L.Apply(v);
    const double next = lv.norm();
    if (next == 0.0) return 0.0;
    v = lv / next;
    if (std::abs(next - estimate) <= 1e-10 * next) return next;
    estimate = next;
  }
  return estimate;
}

}  // namespace

SynthData SynthGenerate(const SynthConfig& c) {
  if (c.m <= 1 || c.n <= 0 || c.k <= 0 || c.N <= 0 || c.samples_per_bin <= 0 ||
      c.trust_edges < 0) {
    throw InputError("synth: counts must be positive");
  }
  if (int64_t{c.samples_per_bin} > int64_t{c.m} * c.n) {
    throw InputError("synth: samples_per_bin exceeds m * n");
  }
  if (int64_t{c.trust_edges} > int64_t{c.m} * (c.m - 1) / 2) {
    throw InputError("synth: more trust edges than user pairs");
  }
  if (!(c.eta >= 0.0) || !(c.noise_std >= 0.0) || !(c.dt > 0.0)) {
    throw InputError("synth: eta and noise_std must be >= 0, dt > 0");
  }

  Rng rng(c.seed);
  SynthData data;

  // Trust edges with creation bins; cumulative per-bin graphs.
  std::set<std::pair<int, int>> chosen;
  std::vector<std::vector<WeightedEdge>> graphs(c.N);
  std::vector<std::pair<std::pair<int, int>, int>> created;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  while (static_cast<int>(chosen.size()) < c.trust_edges) {
    const int a = static_cast<int>(UniformBelow(rng, c.m));
    const int b = static_cast<int>(UniformBelow(rng, c.m));
    if (a == b) continue;
    auto key = std::minmax(a, b);
    if (!chosen.insert(key).second) continue;
    const int t0 = (c.N == 1 || unit(rng) < c.initial_edge_fraction)
                       ? 0
                       : 1 + static_cast<int>(UniformBelow(rng, c.N - 1));
    created.push_back({key, t0});
  }
  for (const auto& [key, t0] : created) {
    for (int t = t0; t < c.N; ++t) graphs[t].push_back({key.first, key.second, 1.0});
  }
  data.trust = TrustTimeline(c.m, std::move(graphs));
  const auto laplacians = BuildLaplacians(data.trust);
  for (int t = 0; t < c.N; ++t) {
    // rho(I - eta L) <= 1 iff eta * lambda_max(L) <= 2. Gershgorin gives
    // lambda_max <= 2 max degree; fall back to power iteration otherwise.
    const double dmax =
        laplacians[t].num_users() ? laplacians[t].degrees().maxCoeff() : 0.0;
    if (c.eta * 2.0 * dmax <= 2.0) continue;
    const double lmax = LaplacianSpectralRadius(laplacians[t], MixSeed(c.seed, 77));
    if (c.eta * lmax > 2.0 * (1.0 + 1e-9)) {
      throw InputError("synth: eta too large; I - eta L has spectral radius " +
                       std::to_string(c.eta * lmax - 1.0) + " > 1 in bin " +
                       std::to_string(t));
    }
  }

  data.V.resize(c.n, c.k);
  FillGaussian(data.V, 1.0 / std::sqrt(static_cast<double>(c.k)), rng);
  Matrix U(c.m, c.k), Udot(c.m, c.k), noise(c.m, c.k);
  FillGaussian(U, c.position_std, rng);
  FillGaussian(Udot, c.velocity_std, rng);
  for (int t = 0; t < c.N; ++t) {
    data.U.push_back(U);
    data.velocity.push_back(Udot);
    if (t + 1 == c.N) break;
    Matrix moved = U + c.dt * Udot;
    U = moved - c.eta * laplacians[t].Apply(moved);
    FillGaussian(noise, c.process_noise_std, rng);
    U += noise;
    FillGaussian(noise, c.velocity_noise_std, rng);
    Udot += noise;
  }

  std::normal_distribution<double> rating_noise(0.0, c.noise_std);
  std::vector<std::vector<RatingObservation>> bins(c.N);
  for (int t = 0; t < c.N; ++t) {
    std::unordered_set<int64_t> taken;
    while (static_cast<int>(bins[t].size()) < c.samples_per_bin) {
      const int i = static_cast<int>(UniformBelow(rng, c.m));
      const int j = static_cast<int>(UniformBelow(rng, c.n));
      if (!taken.insert(int64_t{i} * c.n + j).second) continue;
      double value = data.U[t].row(i).dot(data.V.row(j));
      if (c.noise_std > 0.0) value += rating_noise(rng);
      bins[t].push_back({i, j, value, t});
    }
  }
  data.ratings = RatingsTimeline(c.m, c.n, std::move(bins));
  data.split = SplitTrainTest(data.ratings, c.train_fraction, c.seed);
  return data;
}

void WriteSynthBundle(const fs::path& dir, const SynthData& data) {
  BinnedData binned;
  binned.ratings = data.ratings;
  binned.trust = data.trust;
  for (int i = 0; i < data.ratings.num_users(); ++i) {
    binned.users.names.push_back("u" + std::to_string(i));
  }
  for (int j = 0; j < data.ratings.num_items(); ++j) {
    binned.items.names.push_back("i" + std::to_string(j));
  }
  WriteCanonical(dir, binned);
  for (size_t t = 0; t < data.U.size(); ++t) {
    WriteMatrix(dir / ("truth_U_" + std::to_string(t) + ".mat"), data.U[t]);
  }
  WriteMatrix(dir / "truth_V.mat", data.V);
}

OverlapStats GraphOverlap(const std::vector<WeightedEdge>& trust_edges,
                          const Matrix& U, double threshold, int sample_users,
                          uint64_t seed) {
  const int m = static_cast<int>(U.rows());
  if (sample_users < 0 || sample_users > m) {
    throw InputError("graph overlap: sample_users must lie in [0, m]");
  }
  std::vector<int> users(m);
  for (int i = 0; i < m; ++i) users[i] = i;
  Rng rng(seed);
  FisherYatesShuffle(users, rng);
  users.resize(sample_users);
  std::sort(users.begin(), users.end());
  std::vector<char> in_sample(m, 0);
  for (int u : users) in_sample[u] = 1;

  std::set<std::pair<int, int>> trust;
  for (const auto& e : trust_edges) {
    if (e.a < 0 || e.b < 0 || e.a >= m || e.b >= m) {
      throw InputError("graph overlap: trust edge out of range");
    }
    if (in_sample[e.a] && in_sample[e.b] && e.a != e.b) {
      trust.insert(std::minmax(e.a, e.b));
    }
  }
  OverlapStats stats;
  for (size_t x = 0; x < users.size(); ++x) {
    for (size_t y = x + 1; y < users.size(); ++y) {
      if (U.row(users[x]).dot(U.row(users[y])) > threshold) {
        ++stats.similarity_edges;
        if (trust.count({users[x], users[y]})) ++stats.intersection;
      }
    }
  }
  stats.trust_edges = static_cast<int64_t>(trust.size());
  const int64_t uni = stats.trust_edges + stats.similarity_edges - stats.intersection;
  stats.jaccard = uni == 0 ? 1.0
                           : static_cast<double>(stats.intersection) /
                                 static_cast<double>(uni);
  stats.sampled_users = std::move(users);
  return stats;
}

}  // namespace sdmf
