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

#include "sdmf_tools/cli.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sdmf/domain.h"
#include "sdmf/experiment.h"
#include "sdmf/ingest.h"
#include "sdmf/io_util.h"
#include "sdmf/optimizer.h"
#include "sdmf/random.h"
#include "sdmf/smoother_ops.h"
#include "sdmf/static_factorizer.h"

namespace sdmf::cli {
namespace {

namespace fs = std::filesystem;

constexpr const char* kConfigHelp =
    "Flat key=value file; keys are long flag names without dashes. "
    "Flags given on the command line take precedence.";

struct DataOptions {
  std::string data;
  double train_fraction = 0.5;
};

void AddConfig(CLI::App* sub, std::string& path) {
  sub->add_option("--config", path, kConfigHelp);
}

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// Fills options of `sub` that were not given on the command line from a flat
// key=value file. Blank lines and lines starting with '#' are skipped.
void ApplyConfig(CLI::App* sub, const std::string& path) {
  if (path.empty()) return;
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config file: " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = Trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    const std::string where = path + ":" + std::to_string(line_no);
    if (eq == std::string::npos) throw InputError(where + ": expected key=value");
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config") {
      throw InputError(where + ": unknown key '" + key + "' for command " + sub->get_name());
    }
    if (opt->count() > 0) continue;
    try {
      if (opt->get_expected_min() == 0) {
        opt->add_result(opt->get_flag_value("--" + key, value));
      } else if (opt->get_delimiter() != '\0') {
        for (const auto& part : CLI::detail::split(value, opt->get_delimiter())) {
          opt->add_result(Trim(part));
        }
      } else {
        opt->add_result(value);
      }
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw InputError(where + ": " + key + ": " + e.what());
    }
  }
}

void AddData(CLI::App* sub, DataOptions& d) {
  sub->add_option("--data", d.data,
                  "Canonical binned directory (ratings_bin_<t>.tsv, trust_bin_<t>.tsv, "
                  "meta.txt, optional users.map / items.map)")
      ->required();
  sub->add_option("--train-fraction", d.train_fraction,
                  "Per-bin share of ratings used for training")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
}

// Options shared by every command that builds factors.
void AddModel(CLI::App* sub, SmootherConfig& c, bool smoother) {
  sub->add_option("--k", c.k, "Latent rank")->capture_default_str();
  sub->add_option("--gamma", c.gamma, "Frobenius penalty of the static factorization")
      ->capture_default_str();
  sub->add_option("--init-iters", c.init_iters, "Alternating sweeps per bin")
      ->capture_default_str();
  sub->add_flag_callback("--no-align", [&c] { c.align_factors = false; },
                         "Skip Procrustes alignment of consecutive bins");
  sub->add_option("--seed", c.seed, "Seed for the split and all initialization")
      ->capture_default_str();
  if (!smoother) return;
  sub->add_option("--sigma", c.sigma, "Rating noise standard deviation")
      ->capture_default_str();
  sub->add_option("--dt", c.dt, "Time step between bins")->capture_default_str();
  sub->add_option("--max-iter", c.max_iter, "L-BFGS iteration limit")
      ->capture_default_str();
  sub->add_option("--memory", c.lbfgs_memory, "L-BFGS memory")->capture_default_str();
  sub->add_option("--grad-tol", c.grad_tol,
                  "Stop when |grad| / max(1, |x|) falls below this")
      ->capture_default_str();
}

struct Loaded {
  BinnedData data;
  SplitTimeline split;
};

Loaded Load(const DataOptions& d, uint64_t seed) {
  Loaded l{ReadCanonical(d.data), {}};
  l.split = SplitTrainTest(l.data.ratings, d.train_fraction, seed);
  return l;
}

void PrintRmse(std::ostream& out, const std::string& label, const std::vector<double>& per_bin,
               double weighted) {
  out << label << " rmse_weighted " << FormatReal(weighted) << '\n';
  for (size_t t = 0; t < per_bin.size(); ++t) {
    out << "  bin " << t << ' ' << FormatReal(per_bin[t]) << '\n';
  }
}

// ---------------------------------------------------------------------------

struct IngestArgs {
  std::string ratings, trust, cutoffs, out, date_format = "iso";
  int min_ratings = 10;
  int skip_header = 0;
};

int Ingest(const IngestArgs& a, std::ostream& out, std::ostream& err) {
  static const std::map<std::string, DateFormat> kFormats{
      {"iso", DateFormat::kIso}, {"days", DateFormat::kDays}, {"unix", DateFormat::kUnixSeconds}};
  auto rf = FormatDescriptor::RatingsTsv();
  auto tf = FormatDescriptor::TrustTsv();
  rf.date_format = tf.date_format = kFormats.at(a.date_format);
  rf.skip_header_lines = tf.skip_header_lines = a.skip_header;

  const auto ratings = ParseRatings(a.ratings, rf);
  const auto trust = ParseTrust(a.trust, tf);
  for (const auto* diag : {&ratings.diagnostics, &trust.diagnostics}) {
    for (const auto& line : *diag) err << "warning: " << line << '\n';
  }
  const auto cutoffs = ParseCutoffs(a.cutoffs);
  const auto kept = FilterMinRatings(ratings.rows, a.min_ratings);
  const BinnedData binned = BinTimelines(kept, trust.rows, cutoffs);
  WriteCanonical(a.out, binned);

  const int N = binned.ratings.num_bins();
  out << "m " << binned.ratings.num_users() << '\n'
      << "n " << binned.ratings.num_items() << '\n'
      << "N " << N << '\n'
      << "ratings " << binned.ratings.total_count() << '\n'
      << "edges " << (N > 0 ? binned.trust.edges(N - 1).size() : 0) << '\n';
  return kExitOk;
}

int Factorize(const DataOptions& d, const SmootherConfig& c, const std::string& out_dir,
              std::ostream& out, std::ostream& err) {
  c.Validate();
  const Loaded l = Load(d, c.seed);
  std::vector<std::string> warnings;
  const FactorTimeline factors = InitTimeline(l.split, c, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  const RmseReport rmse = EvaluateRmse(factors, l.split.test);
  if (!out_dir.empty()) WriteFactorTimeline(out_dir, factors);
  PrintRmse(out, "static", rmse.per_bin, rmse.weighted);
  return kExitOk;
}

struct SmoothArgs {
  double lambda = 0.0;
  bool no_social = false;
  std::string init, trace, out;
};

int Smooth(const DataOptions& d, const SmootherConfig& c, const SmoothArgs& a,
           std::ostream& out, std::ostream& err) {
  SmootherConfig cfg = c;
  cfg.lambda = a.lambda;
  cfg.Validate();
  const Loaded l = Load(d, cfg.seed);
  std::optional<FactorTimeline> init;
  if (!a.init.empty()) {
    init = ReadFactorTimeline(a.init);
  } else {
    std::vector<std::string> warnings;
    init = InitTimeline(l.split, cfg, &warnings);
    for (const auto& w : warnings) err << "warning: " << w << '\n';
  }
  const TrustTimeline* trust = a.no_social ? nullptr : &l.data.trust;
  const DynamicRun run = RunDynamic(l.split, trust, cfg, a.lambda, &*init);
  if (!a.trace.empty()) WriteTraceCsv(a.trace, run.optimization.trace);
  if (!a.out.empty()) WriteFactorTimeline(a.out, run.smoothed);

  out << "model " << ModelName(run.result.model) << '\n'
      << "status " << run.result.status << '\n'
      << "iterations " << run.optimization.iterations << '\n'
      << "objective " << FormatReal(run.optimization.f) << '\n';
  PrintRmse(out, ModelName(run.result.model), run.result.rmse_per_bin,
            run.result.rmse_weighted);
  if (run.optimization.status == LbfgsStatus::kLineSearchFailed) {
    err << "error: line search failed; reported factors are the best iterate\n";
    return kExitNumerical;
  }
  return kExitOk;
}

int Evaluate(const DataOptions& d, uint64_t seed, const std::string& factors_dir,
             bool on_train, std::ostream& out) {
  const Loaded l = Load(d, seed);
  const FactorTimeline factors = ReadFactorTimeline(factors_dir);
  const RmseReport rmse = EvaluateRmse(factors, on_train ? l.split.train : l.split.test);
  PrintRmse(out, on_train ? "train" : "test", rmse.per_bin, rmse.weighted);
  return kExitOk;
}

struct SweepArgs {
  std::vector<int> ks{5, 10, 15, 20};
  std::vector<double> lambdas{1e-5, 1e-4, 1e-3, 0.01, 0.1, 1.0};
  int threads = 1;
  bool no_timing = false;
  std::string out;
};

int RunSweep(const DataOptions& d, const SmootherConfig& c, const SweepArgs& a,
             std::ostream& out, std::ostream& err) {
  c.Validate();
  const Loaded l = Load(d, c.seed);
  SweepOptions options;
  options.threads = a.threads;
  options.record_timing = !a.no_timing;
  const auto rows = Sweep(l.split, l.data.trust, a.ks, a.lambdas, c, options);
  const int N = l.split.test.num_bins();
  if (a.out.empty()) {
    WriteResultsCsv(out, rows, N);
  } else {
    std::ofstream file(a.out);
    if (!file) throw InputError("cannot write file: " + a.out);
    WriteResultsCsv(file, rows, N);
    out << "wrote " << rows.size() << " rows to " << a.out << '\n';
  }
  int failed = 0;
  for (const auto& r : rows) {
    if (r.status.rfind("error", 0) == 0 || r.status == "line_search_failed") {
      err << "error: " << ModelName(r.model) << " k=" << r.k
          << " lambda=" << FormatReal(r.lambda) << ": " << r.status << '\n';
      ++failed;
    }
  }
  return failed ? kExitNumerical : kExitOk;
}

int Synth(const SynthConfig& s, const std::string& out_dir, std::ostream& out) {
  const SynthData data = SynthGenerate(s);
  WriteSynthBundle(out_dir, data);
  int64_t edges = s.N > 0 ? data.trust.edges(s.N - 1).size() : 0;
  out << "m " << s.m << "\nn " << s.n << "\nN " << s.N << "\nratings "
      << data.ratings.total_count() << "\nedges " << edges << '\n';
  return kExitOk;
}

struct CheckgradArgs {
  std::string data;
  double lambda = 0.1;
  double step = 1e-5;
  double tol = 1e-6;
  SynthConfig synth;
};

int Checkgrad(const CheckgradArgs& a, const SmootherConfig& c, std::ostream& out,
              std::ostream& err) {
  SmootherConfig cfg = c;
  cfg.lambda = a.lambda;
  cfg.Validate();
  SplitTimeline split;
  TrustTimeline trust;
  if (!a.data.empty()) {
    Loaded l = Load({a.data, 0.5}, cfg.seed);
    split = std::move(l.split);
    trust = std::move(l.data.trust);
  } else {
    SynthConfig s = a.synth;
    s.k = cfg.k;
    s.seed = cfg.seed;
    SynthData data = SynthGenerate(s);
    split = std::move(data.split);
    trust = std::move(data.trust);
  }
  std::vector<std::string> warnings;
  const FactorTimeline factors = InitTimeline(split, cfg, &warnings);
  for (const auto& w : warnings) err << "warning: " << w << '\n';
  const SmootherProblem problem(split.train, factors, trust, cfg);

  // Perturb the warm start so velocities and residuals are all nonzero.
  Vector x = problem.InitialState().values();
  Rng rng(MixSeed(cfg.seed, 7));
  std::normal_distribution<double> normal(0.0, 0.1);
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] += normal(rng);

  FiniteDiffOptions options;
  options.step = a.step;
  options.seed = cfg.seed;
  const auto report = FiniteDiffCheck(
      [&](const Vector& v, Vector* g) { return ObjectiveAndGradient(problem, v, g); }, x,
      options);
  out << "state_size " << x.size() << '\n'
      << "mode " << (report.directional ? "directional" : "per-coordinate") << '\n'
      << "max_rel_error " << FormatReal(report.max_rel_error) << '\n';
  if (!(report.max_rel_error <= a.tol)) {
    err << "error: gradient check exceeds tolerance " << FormatReal(a.tol) << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}

struct OverlapArgs {
  int bin = 2;
  double threshold = 0.5;
  int sample_users = 500;
};

int Overlap(const DataOptions& d, const SmootherConfig& c, const OverlapArgs& a,
            std::ostream& out) {
  c.Validate();
  const Loaded l = Load(d, c.seed);
  if (a.bin < 0 || a.bin >= l.split.train.num_bins()) {
    throw InputError("--bin " + std::to_string(a.bin) + " is outside [0, " +
                     std::to_string(l.split.train.num_bins()) + ")");
  }
  const FactorTimeline factors = InitTimeline(l.split, c);
  const int sample = std::min(a.sample_users, l.split.train.num_users());
  const auto stats = GraphOverlap(l.data.trust.edges(a.bin), factors[a.bin].U, a.threshold,
                                  sample, c.seed);
  out << "sampled_users " << stats.sampled_users.size() << '\n'
      << "trust_edges " << stats.trust_edges << '\n'
      << "similarity_edges " << stats.similarity_edges << '\n'
      << "intersection " << stats.intersection << '\n'
      << "jaccard " << FormatReal(stats.jaccard) << '\n';
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dynamic matrix factorization with trust-graph smoothing"};
  app.name("sdmf");
  app.require_subcommand(1);
  std::string config_path;

  // ingest
  IngestArgs ingest;
  auto* ingest_cmd = app.add_subcommand(
      "ingest",
      "Parse raw ratings (user<TAB>item<TAB>rating<TAB>date) and trust "
      "(user<TAB>user<TAB>date) files, filter, bin by cutoffs, and write the "
      "canonical directory");
  AddConfig(ingest_cmd, config_path);
  ingest_cmd->add_option("--ratings", ingest.ratings, "Raw ratings file")->required();
  ingest_cmd->add_option("--trust", ingest.trust, "Raw trust file")->required();
  ingest_cmd->add_option("--cutoffs", ingest.cutoffs,
                         "One cutoff per line (ISO date or day count), strictly increasing")
      ->required();
  ingest_cmd->add_option("--min-ratings", ingest.min_ratings,
                         "Keep users with strictly more ratings than this")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  ingest_cmd->add_option("--date-format", ingest.date_format, "Date column format")
      ->check(CLI::IsMember({"iso", "days", "unix"}))
      ->capture_default_str();
  ingest_cmd->add_option("--skip-header", ingest.skip_header,
                         "Leading lines to skip in both raw files")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  ingest_cmd->add_option("--out", ingest.out, "Output directory")->required();

  // factorize
  DataOptions fact_data;
  SmootherConfig fact_cfg;
  std::string fact_out;
  auto* fact_cmd = app.add_subcommand(
      "factorize",
      "Static per-bin factorization; writes U_<t>.mat / V_<t>.mat and prints test RMSE");
  AddConfig(fact_cmd, config_path);
  AddData(fact_cmd, fact_data);
  AddModel(fact_cmd, fact_cfg, false);
  fact_cmd->add_option("--out", fact_out, "Factor checkpoint directory");

  // smooth
  DataOptions smooth_data;
  SmootherConfig smooth_cfg;
  SmoothArgs smooth;
  auto* smooth_cmd = app.add_subcommand(
      "smooth",
      "Minimize the smoothing objective with L-BFGS from the static warm start; prints "
      "status, objective and test RMSE. Exit 1 if the line search fails");
  AddConfig(smooth_cmd, config_path);
  AddData(smooth_cmd, smooth_data);
  AddModel(smooth_cmd, smooth_cfg, true);
  smooth_cmd->add_option("--lambda", smooth.lambda, "Trust-graph weight")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  smooth_cmd->add_flag("--no-social", smooth.no_social,
                       "Build the problem without the trust-graph term");
  smooth_cmd->add_option("--init", smooth.init,
                         "Factor checkpoint to use instead of a fresh static factorization");
  smooth_cmd->add_option("--trace", smooth.trace,
                         "Write the optimizer trace CSV (iter,f,grad_norm,step)");
  smooth_cmd->add_option("--out", smooth.out, "Write smoothed factors here");

  // evaluate
  DataOptions eval_data;
  uint64_t eval_seed = 0;
  std::string eval_factors;
  bool eval_train = false;
  auto* eval_cmd = app.add_subcommand(
      "evaluate", "Per-bin and weighted RMSE of a factor checkpoint on the held-out split");
  AddConfig(eval_cmd, config_path);
  AddData(eval_cmd, eval_data);
  eval_cmd->add_option("--seed", eval_seed, "Split seed")->capture_default_str();
  eval_cmd->add_option("--factors", eval_factors, "Factor checkpoint directory")->required();
  eval_cmd->add_flag("--on-train", eval_train, "Score the training split instead");

  // sweep
  DataOptions sweep_data;
  SmootherConfig sweep_cfg;
  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand(
      "sweep",
      "Static, dynamic and dynamic_social runs over a grid of ranks and lambdas. CSV "
      "columns: model,k,lambda,rmse_weighted,rmse_bin_0..,wall_seconds,seed,status");
  AddConfig(sweep_cmd, config_path);
  AddData(sweep_cmd, sweep_data);
  AddModel(sweep_cmd, sweep_cfg, true);
  sweep_cmd->add_option("--ks", sweep.ks, "Comma-separated ranks")
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--lambdas", sweep.lambdas, "Comma-separated trust weights")
      ->delimiter(',')
      ->capture_default_str();
  sweep_cmd->add_option("--threads", sweep.threads, "Worker threads over ranks")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep_cmd->add_flag("--no-timing", sweep.no_timing,
                      "Report wall_seconds as 0 so output is byte-reproducible");
  sweep_cmd->add_option("--out", sweep.out, "CSV path (standard output if omitted)");

  // synth
  SynthConfig synth;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand(
      "synth",
      "Generate socially coupled synthetic data in the canonical layout plus "
      "truth_U_<t>.mat and truth_V.mat");
  AddConfig(synth_cmd, config_path);
  synth_cmd->add_option("--m", synth.m, "Users")->capture_default_str();
  synth_cmd->add_option("--n", synth.n, "Items")->capture_default_str();
  synth_cmd->add_option("--k", synth.k, "Latent rank")->capture_default_str();
  synth_cmd->add_option("--N", synth.N, "Time bins")->capture_default_str();
  synth_cmd->add_option("--samples-per-bin", synth.samples_per_bin, "Ratings per bin")
      ->capture_default_str();
  synth_cmd->add_option("--trust-edges", synth.trust_edges, "Trust edges in the final bin")
      ->capture_default_str();
  synth_cmd->add_option("--eta", synth.eta, "Consensus pull per bin")->capture_default_str();
  synth_cmd->add_option("--noise-std", synth.noise_std, "Rating noise")->capture_default_str();
  synth_cmd->add_option("--dt", synth.dt, "Time step")->capture_default_str();
  synth_cmd->add_option("--train-fraction", synth.train_fraction, "Per-bin training share")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed, "Generator seed")->capture_default_str();
  synth_cmd->add_option("--out", synth_out, "Output directory")->required();

  // checkgrad
  CheckgradArgs check;
  check.synth.m = 20;
  check.synth.n = 15;
  check.synth.N = 4;
  check.synth.samples_per_bin = 120;
  check.synth.trust_edges = 30;
  SmootherConfig check_cfg;
  check_cfg.k = 3;
  auto* check_cmd = app.add_subcommand(
      "checkgrad",
      "Compare the analytic gradient with central finite differences at a perturbed warm "
      "start; uses a small synthetic problem unless --data is given. Exit 1 above --tol");
  AddConfig(check_cmd, config_path);
  check_cmd->add_option("--data", check.data, "Canonical binned directory");
  AddModel(check_cmd, check_cfg, true);
  check_cmd->add_option("--lambda", check.lambda, "Trust-graph weight")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  check_cmd->add_option("--step", check.step, "Finite-difference step")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  check_cmd->add_option("--tol", check.tol, "Largest acceptable relative error")
      ->capture_default_str();
  check_cmd->add_option("--m", check.synth.m, "Synthetic users")->capture_default_str();
  check_cmd->add_option("--n", check.synth.n, "Synthetic items")->capture_default_str();
  check_cmd->add_option("--N", check.synth.N, "Synthetic bins")->capture_default_str();

  // overlap
  DataOptions overlap_data;
  SmootherConfig overlap_cfg;
  OverlapArgs overlap;
  auto* overlap_cmd = app.add_subcommand(
      "overlap",
      "Compare one bin's trust edges with a similarity graph (<U_i, U_j> > threshold) "
      "on sampled users of the static factors");
  AddConfig(overlap_cmd, config_path);
  AddData(overlap_cmd, overlap_data);
  AddModel(overlap_cmd, overlap_cfg, false);
  overlap_cmd->add_option("--bin", overlap.bin, "Bin index")->capture_default_str();
  overlap_cmd->add_option("--threshold", overlap.threshold, "Similarity threshold")
      ->capture_default_str();
  overlap_cmd->add_option("--sample-users", overlap.sample_users,
                          "Users sampled (capped at m)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    for (auto* sub : app.get_subcommands()) ApplyConfig(sub, config_path);
    if (ingest_cmd->parsed()) return Ingest(ingest, out, err);
    if (fact_cmd->parsed()) return Factorize(fact_data, fact_cfg, fact_out, out, err);
    if (smooth_cmd->parsed()) return Smooth(smooth_data, smooth_cfg, smooth, out, err);
    if (eval_cmd->parsed()) return Evaluate(eval_data, eval_seed, eval_factors, eval_train, out);
    if (sweep_cmd->parsed()) return RunSweep(sweep_data, sweep_cfg, sweep, out, err);
    if (synth_cmd->parsed()) return Synth(synth, synth_out, out);
    if (check_cmd->parsed()) return Checkgrad(check, check_cfg, out, err);
    if (overlap_cmd->parsed()) return Overlap(overlap_data, overlap_cfg, overlap, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitInput;
}

}  // namespace sdmf::cli
