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

// End-to-end acceptance suite. Prints one PASS/FAIL/SKIP line per criterion
// and exits nonzero if any criterion fails.
//
// Criterion 10 runs only when SDMF_EPINIONS_DIR points at a directory holding
// ratings.tsv, trust.tsv and cutoffs.txt (SDMF_EPINIONS_DATE_FORMAT selects
// iso, days or unix; default iso).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sdmf/experiment.h"
#include "sdmf/ingest.h"
#include "sdmf/optimizer.h"
#include "sdmf/smoother_ops.h"
#include "sdmf/static_factorizer.h"
#include "test_support.h"

namespace sdmf {
namespace {

using testing::AssembleDense;
using testing::MakeRandomProblem;
using testing::ProblemSpec;
using testing::RandomVector;
using testing::RelativeError;

enum class Verdict { kPass, kFail, kSkip };

struct Outcome {
  Verdict verdict;
  std::string detail;
};

Outcome Check(bool ok, const std::string& detail) {
  return {ok ? Verdict::kPass : Verdict::kFail, detail};
}

std::string Fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

ProblemSpec TinySpec(std::mt19937_64& rng) {
  ProblemSpec s;
  s.m = 1 + rng() % 6;
  s.n = 1 + rng() % 5;
  s.k = 1 + rng() % 2;
  s.N = 1 + rng() % 4;
  s.obs_per_bin = 1 + rng() % (s.m * s.n);
  s.edges = s.m > 1 ? rng() % (s.m * (s.m - 1) / 2 + 1) : 0;
  const double lambdas[] = {0.0, 0.01, 1.0};
  s.lambda = lambdas[rng() % 3];
  s.sigma = 0.5 + (rng() % 100) / 100.0;
  s.dt = 0.5 + (rng() % 3) * 0.5;
  s.seed = rng();
  return s;
}

ObjectiveFunction SmootherObjective(const SmootherProblem& p) {
  return [&p](const Vector& x, Vector* g) { return ObjectiveAndGradient(p, x, g); };
}

Outcome GradientCorrectness() {
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  const double lambdas[] = {0.0, 0.01, 1.0};
  for (int trial = 0; trial < 20; ++trial) {
    ProblemSpec s;
    s.m = 2 + rng() % 29;
    s.n = 2 + rng() % 19;
    s.k = 1 + rng() % 3;
    s.N = 1 + rng() % 5;
    s.obs_per_bin = 1 + rng() % (s.m * s.n / 2 + 1);
    s.edges = rng() % (2 * s.m);
    s.lambda = lambdas[trial % 3];
    s.seed = rng();
    const auto rp = MakeRandomProblem(s);
    const Vector x = RandomVector(rp.problem->state_size(), rng());
    worst = std::max(worst, FiniteDiffCheck(SmootherObjective(*rp.problem), x).max_rel_error);
  }
  return Check(worst <= 1e-6, "max_rel_error " + Fmt(worst) + " over 20 problems (tol 1e-6)");
}

Outcome DenseEquivalence() {
  std::mt19937_64 rng(1002);
  double worst_f = 0.0, worst_g = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto rp = MakeRandomProblem(TinySpec(rng));
    const auto dense = AssembleDense(rp);
    const Vector x = RandomVector(rp.problem->state_size(), rng());
    Vector g;
    const double f = ObjectiveAndGradient(*rp.problem, x, &g);
    worst_f = std::max(worst_f, RelativeError(f, dense.Objective(x)));
    worst_g = std::max(worst_g, RelativeError(g, dense.Gradient(x)));
  }
  return Check(worst_f <= 1e-10 && worst_g <= 1e-10,
               "objective " + Fmt(worst_f) + ", gradient " + Fmt(worst_g) +
                   " relative over 100 instances (tol 1e-10)");
}

Outcome OptimizerExactness() {
  std::mt19937_64 rng(1003);
  double worst_gap = 0.0;
  std::map<std::string, int> statuses;
  for (int trial = 0; trial < 30; ++trial) {
    const auto rp = MakeRandomProblem(TinySpec(rng));
    const auto dense = AssembleDense(rp);
    const Vector xstar = dense.Minimizer();
    LbfgsOptions options;
    options.grad_tol = 1e-10;
    options.max_iter = 5000;
    const auto r = LbfgsMinimize(SmootherObjective(*rp.problem),
                                 rp.problem->InitialState().values(), options);
    ++statuses[StatusName(r.status)];
    worst_gap = std::max(worst_gap, dense.Objective(r.x) - dense.Objective(xstar));
  }
  std::string counts;
  for (const auto& [name, n] : statuses) counts += " " + name + "=" + std::to_string(n);
  return Check(worst_gap <= 1e-8,
               "max objective gap " + Fmt(worst_gap) + " over 30 instances (tol 1e-8);" + counts);
}

Outcome AdjointIdentities() {
  std::mt19937_64 rng(1004);
  double worst_h = 0.0, worst_g = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    ProblemSpec s = TinySpec(rng);
    s.m += rng() % 20;
    s.n += rng() % 20;
    s.k += rng() % 3;
    s.N += rng() % 4;
    s.obs_per_bin = 1 + rng() % (s.m * s.n);
    const auto rp = MakeRandomProblem(s);
    const auto& p = *rp.problem;
    const Vector x = RandomVector(p.state_size(), rng());
    const Vector y = RandomVector(p.state_size(), rng());
    const Vector r = RandomVector(p.num_observations(), rng());
    worst_h = std::max(worst_h, RelativeError(ApplyMeasurement(p, x).dot(r),
                                              x.dot(ApplyMeasurementAdjoint(p, r))));
    worst_g = std::max(worst_g,
                       RelativeError(ApplyProcess(p, x).dot(y), x.dot(ApplyProcessAdjoint(p, y))));
  }
  return Check(worst_h <= 1e-10 && worst_g <= 1e-10,
               "measurement " + Fmt(worst_h) + ", process " + Fmt(worst_g) +
                   " relative over 100 trials (tol 1e-10)");
}

Outcome LambdaZeroEquivalence() {
  int mismatches = 0;
  size_t total_iters = 0;
  for (uint64_t seed : {1005, 1006, 1007}) {
    SynthConfig sc;
    sc.m = 40;
    sc.n = 50;
    sc.k = 3;
    sc.N = 4;
    sc.samples_per_bin = 600;
    sc.trust_edges = 80;
    sc.seed = seed;
    const SynthData data = SynthGenerate(sc);
    SmootherConfig c;
    c.k = 3;
    c.seed = seed;
    const DynamicRun social = RunDynamic(data.split, &data.trust, c, 0.0);
    const DynamicRun plain = RunDynamic(data.split, nullptr, c, 0.0);
    const auto& a = social.optimization.trace;
    const auto& b = plain.optimization.trace;
    bool same = a.size() == b.size() && social.optimization.x == plain.optimization.x &&
                social.result.rmse_weighted == plain.result.rmse_weighted;
    for (size_t i = 0; same && i < a.size(); ++i) {
      same = a[i].f == b[i].f && a[i].grad_norm == b[i].grad_norm && a[i].step == b[i].step;
    }
    mismatches += !same;
    total_iters += a.size();
  }
  return Check(mismatches == 0, std::to_string(mismatches) + " of 3 runs differ (" +
                                    std::to_string(total_iters) +
                                    " trace entries compared exactly)");
}

Outcome StaticStationarity() {
  std::mt19937_64 rng(1008);
  double worst_balance = 0.0, worst_rise = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 8 + rng() % 20, n = 6 + rng() % 20, k = 1 + rng() % 3;
    std::set<std::pair<int, int>> taken;
    std::vector<RatingObservation> obs;
    std::uniform_real_distribution<double> rating(1.0, 5.0);
    while (static_cast<int>(taken.size()) < m * n / 2) {
      const int i = rng() % m, j = rng() % n;
      if (taken.insert({i, j}).second) obs.push_back({i, j, rating(rng), 0});
    }
    FactorizeOptions options;
    options.max_sweeps = 20000;
    options.grad_tol = 1e-8;
    const auto result = FactorizeBin(obs, m, n, k, 0.5, options, rng());
    const double nu = result.factors.U.norm(), nv = result.factors.V.norm();
    worst_balance = std::max(worst_balance, std::abs(nu - nv) / nu);
    const auto& trace = result.objective_trace;
    for (size_t s = 1; s < trace.size(); ++s) {
      worst_rise = std::max(worst_rise, (trace[s] - trace[s - 1]) / trace[s - 1]);
    }
  }
  // Rises within the last few ulps of the objective are summation roundoff.
  return Check(worst_balance <= 1e-3 && worst_rise <= 1e-12,
               "norm imbalance " + Fmt(worst_balance) + " (tol 1e-3), largest relative rise " +
                   Fmt(worst_rise) + " over 10 problems");
}

// Criteria 7 and 8 share one sweep per seed.
struct SyntheticStudy {
  std::vector<double> static_rmse, dynamic_rmse, best_social_rmse;
  int u_shaped = 0;
  int seeds = 0;
  std::vector<int> failed_rows;
};

const std::vector<double> kLambdaGrid{1e-5, 1e-4, 1e-3, 0.01, 0.1, 1.0};

SyntheticStudy RunSyntheticStudy() {
  SyntheticStudy study;
  // Model hyperparameters were fixed on pilot seeds 1-3; the seeds evaluated
  // here are disjoint from those.
  SmootherConfig c;
  c.k = 5;
  c.sigma = 2.0;
  c.gamma = 5.0;
  for (uint64_t seed = 101; seed <= 110; ++seed) {
    SynthConfig sc;  // m=200, n=300, k=5, N=8, eta=0.05, noise 0.5, 30 ratings/user/bin
    sc.seed = seed;
    const SynthData data = SynthGenerate(sc);
    c.seed = seed;
    const auto rows = Sweep(data.split, data.trust, {5}, kLambdaGrid, c);
    double st = NAN, dyn = NAN, best = INFINITY, best_interior = INFINITY, at_one = NAN;
    for (const auto& r : rows) {
      if (r.status.rfind("error", 0) == 0 || r.status == "line_search_failed") {
        study.failed_rows.push_back(static_cast<int>(seed));
      }
      if (r.model == ModelKind::kStatic) st = r.rmse_weighted;
      if (r.model == ModelKind::kDynamic) dyn = r.rmse_weighted;
      if (r.model == ModelKind::kDynamicSocial) {
        best = std::min(best, r.rmse_weighted);
        if (r.lambda < 1.0) best_interior = std::min(best_interior, r.rmse_weighted);
        if (r.lambda == 1.0) at_one = r.rmse_weighted;
      }
    }
    study.static_rmse.push_back(st);
    study.dynamic_rmse.push_back(dyn);
    study.best_social_rmse.push_back(best);
    study.u_shaped += at_one > best_interior;
    ++study.seeds;
    std::cout << "  seed " << seed << ": static " << Fmt(st) << ", dynamic " << Fmt(dyn)
              << ", best social " << Fmt(best) << ", lambda=1 " << Fmt(at_one) << '\n';
  }
  return study;
}

Outcome SyntheticOrdering(const SyntheticStudy& s) {
  const double st = Median(s.static_rmse), dyn = Median(s.dynamic_rmse),
               soc = Median(s.best_social_rmse);
  const double gap_dyn = (st - dyn) / st, gap_soc = (dyn - soc) / dyn;
  // Flagged rows are reported, not gated: they are best iterates that stalled
  // at the roundoff floor of the objective just above grad_tol.
  return Check(gap_dyn >= 0.01 && gap_soc >= 0.01,
               "median static " + Fmt(st) + " > dynamic " + Fmt(dyn) + " (gap " +
                   Fmt(100 * gap_dyn) + "%) > social " + Fmt(soc) + " (gap " +
                   Fmt(100 * gap_soc) + "%); need both gaps >= 1%; flagged rows " +
                   std::to_string(s.failed_rows.size()));
}

Outcome LambdaUShape(const SyntheticStudy& s) {
  return Check(s.u_shaped >= 8, "rmse(lambda=1) above best interior lambda in " +
                                    std::to_string(s.u_shaped) + " of " +
                                    std::to_string(s.seeds) + " seeds (need >= 8)");
}

// Gradient problem with per-bin observation count and edge set held fixed.
std::unique_ptr<SmootherProblem> ScalingProblem(int N, int k, RatingsTimeline* train,
                                                FactorTimeline* factors,
                                                TrustTimeline* trust) {
  const int m = 1000, n = 800, p = 10000, q = 4000;
  std::mt19937_64 rng(1009);
  std::normal_distribution<double> normal;
  std::vector<std::vector<RatingObservation>> bins(N);
  factors->clear();
  for (int t = 0; t < N; ++t) {
    std::set<std::pair<int, int>> taken;
    while (static_cast<int>(taken.size()) < p) {
      const int i = rng() % m, j = rng() % n;
      if (taken.insert({i, j}).second) bins[t].push_back({i, j, 1.0 + normal(rng), t});
    }
    FactorPair f{Matrix(m, k), Matrix(n, k)};
    for (Eigen::Index a = 0; a < f.U.size(); ++a) f.U.data()[a] = normal(rng);
    for (Eigen::Index a = 0; a < f.V.size(); ++a) f.V.data()[a] = normal(rng);
    factors->push_back(std::move(f));
  }
  *train = RatingsTimeline(m, n, std::move(bins));
  std::set<std::pair<int, int>> chosen;
  while (static_cast<int>(chosen.size()) < q) {
    int a = rng() % m, b = rng() % m;
    if (a == b) continue;
    chosen.insert({std::min(a, b), std::max(a, b)});
  }
  std::vector<WeightedEdge> edges;
  for (const auto& [a, b] : chosen) edges.push_back({a, b, 1.0});
  *trust = TrustTimeline(m, std::vector<std::vector<WeightedEdge>>(N, edges));
  SmootherConfig c;
  c.k = k;
  c.lambda = 0.1;
  return std::make_unique<SmootherProblem>(*train, *factors, *trust, c);
}

double MedianGradientSeconds(int N, int k) {
  RatingsTimeline train;
  FactorTimeline factors;
  TrustTimeline trust;
  const auto problem = ScalingProblem(N, k, &train, &factors, &trust);
  const Vector x = RandomVector(problem->state_size(), 1010);
  Vector g = Gradient(*problem, x);  // warm-up
  std::vector<double> seconds;
  for (int rep = 0; rep < 50; ++rep) {
    const auto start = std::chrono::steady_clock::now();
    g = Gradient(*problem, x);
    seconds.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
  }
  return Median(seconds);
}

// Least-squares line through (x, y); returns slope and the largest residual.
std::pair<double, double> AffineFit(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  double worst = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    worst = std::max(worst, std::abs(y[i] - (intercept + slope * x[i])));
  }
  return {slope, worst};
}

Outcome ComplexityScaling() {
  std::string detail;
  bool ok = true;
  // The residual is measured against the time added by one grid step of the
  // smallest spacing, i.e. slope * 10 bins or slope * 5 factors.
  const auto check = [&](const char* name, const std::vector<double>& xs,
                         const std::vector<double>& ys, double spacing) {
    const auto [slope, resid] = AffineFit(xs, ys);
    const bool pass = slope > 0 && resid <= 0.3 * slope * spacing;
    ok = ok && pass;
    detail += std::string(name) + " times";
    for (double y : ys) detail += " " + Fmt(1e3 * y) + "ms";
    detail += " residual/(slope*step) " + Fmt(resid / (slope * spacing)) + "; ";
  };
  const std::vector<double> Ns{10, 20, 40}, ks{5, 10, 20};
  std::vector<double> tn, tk;
  for (double N : Ns) tn.push_back(MedianGradientSeconds(static_cast<int>(N), 5));
  for (double k : ks) tk.push_back(MedianGradientSeconds(10, static_cast<int>(k)));
  check("N", Ns, tn, 10.0);
  check("k", ks, tk, 5.0);
  detail += "tol 0.3";
  return Check(ok, detail);
}

Outcome EpinionsCounts() {
  const char* dir_env = std::getenv("SDMF_EPINIONS_DIR");
  if (!dir_env || !*dir_env) {
    return {Verdict::kSkip, "set SDMF_EPINIONS_DIR to the original dumps to run"};
  }
  const std::filesystem::path dir(dir_env);
  auto rf = FormatDescriptor::RatingsTsv();
  auto tf = FormatDescriptor::TrustTsv();
  if (const char* fmt = std::getenv("SDMF_EPINIONS_DATE_FORMAT")) {
    const std::string f(fmt);
    const DateFormat d = f == "days"   ? DateFormat::kDays
                         : f == "unix" ? DateFormat::kUnixSeconds
                                       : DateFormat::kIso;
    rf.date_format = tf.date_format = d;
  }
  const auto ratings = ParseRatings(dir / "ratings.tsv", rf);
  const auto trust = ParseTrust(dir / "trust.tsv", tf);
  const auto cutoffs = ParseCutoffs(dir / "cutoffs.txt");
  const BinnedData binned =
      BinTimelines(FilterMinRatings(ratings.rows, 10), trust.rows, cutoffs);
  const int N = binned.ratings.num_bins();
  const int64_t m = binned.ratings.num_users(), n = binned.ratings.num_items(),
                p = binned.ratings.total_count(),
                q = N > 0 ? static_cast<int64_t>(binned.trust.edges(N - 1).size()) : 0;
  std::ostringstream detail;
  detail << "m " << m << " n " << n << " ratings " << p << " edges " << q << " N " << N
         << " (expected 22164 305301 975449 264022 11)";

  if (std::getenv("SDMF_EPINIONS_RMSE")) {
    // Reported for comparison only.
    const SplitTimeline split = SplitTrainTest(binned.ratings, 0.5, 0);
    SmootherConfig c;
    c.k = 15;
    FactorTimeline init;
    const auto st = RunStatic(split, c, &init);
    const auto soc = RunDynamic(split, &binned.trust, c, 0.01, &init);
    detail << "; rmse static " << Fmt(st.rmse_weighted) << " (reference 3.3352), social k=15 "
           << "lambda=0.01 " << Fmt(soc.result.rmse_weighted) << " (reference 3.2783)";
  }
  return Check(m == 22164 && n == 305301 && p == 975449 && q == 264022 && N == 11,
               detail.str());
}

}  // namespace
}  // namespace sdmf

int main() {
  using sdmf::Outcome;
  using sdmf::Verdict;
  int failures = 0;
  const auto report = [&](int id, const char* name, const std::function<Outcome()>& run) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {Verdict::kFail, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const char* tag = o.verdict == Verdict::kPass ? "PASS" : o.verdict == Verdict::kFail ? "FAIL"
                                                                                          : "SKIP";
    failures += o.verdict == Verdict::kFail;
    std::printf("%s criterion %d %s: %s [%.1fs]\n", tag, id, name, o.detail.c_str(), secs);
    std::fflush(stdout);
  };

  report(1, "gradient correctness", sdmf::GradientCorrectness);
  report(2, "dense-oracle equivalence", sdmf::DenseEquivalence);
  report(3, "optimizer exactness", sdmf::OptimizerExactness);
  report(4, "adjoint identities", sdmf::AdjointIdentities);
  report(5, "lambda=0 equivalence", sdmf::LambdaZeroEquivalence);
  report(6, "static stationarity balance", sdmf::StaticStationarity);

  std::printf("synthetic study (10 seeds, k=5, lambda grid 1e-5..1):\n");
  std::optional<sdmf::SyntheticStudy> study;
  std::string study_error;
  try {
    study = sdmf::RunSyntheticStudy();
  } catch (const std::exception& e) {
    study_error = e.what();
  }
  const auto from_study = [&](Outcome (*fn)(const sdmf::SyntheticStudy&)) {
    return [&, fn]() -> Outcome {
      if (!study) return {Verdict::kFail, "exception: " + study_error};
      return fn(*study);
    };
  };
  report(7, "synthetic ordering", from_study(sdmf::SyntheticOrdering));
  report(8, "lambda U-shape", from_study(sdmf::LambdaUShape));
  report(9, "complexity scaling", sdmf::ComplexityScaling);
  report(10, "reference dataset counts", sdmf::EpinionsCounts);

  std::printf("%s: %d criterion failure(s)\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
