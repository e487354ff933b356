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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.h"

namespace sdmf::cli {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code = -1;
  std::string out, err;
};

CliRun Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sdmf");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void Spit(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

// Line of `text` starting with `prefix`, or empty.
std::string LineWith(const std::string& text, const std::string& prefix) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (line.rfind(prefix, 0) == 0) return line;
  return "";
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new fs::path(testing::ScratchDir("cli"));
    const CliRun r = Cli({"synth", "--out", (*dir_ / "syn").string(), "--m", "30", "--n", "40",
                       "--N", "3", "--samples-per-bin", "400", "--trust-edges", "40",
                       "--seed", "5"});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  static void TearDownTestSuite() {
    fs::remove_all(*dir_);
    delete dir_;
  }
  static std::string Syn() { return (*dir_ / "syn").string(); }
  static fs::path Dir() { return *dir_; }

 private:
  static fs::path* dir_;
};

fs::path* CliTest::dir_ = nullptr;

TEST_F(CliTest, SynthWritesCanonicalBundle) {
  EXPECT_EQ(Slurp(fs::path(Syn()) / "meta.txt").rfind("m 30\nn 40\nN 3\n", 0), 0u);
  EXPECT_TRUE(fs::exists(fs::path(Syn()) / "truth_V.mat"));
  EXPECT_TRUE(fs::exists(fs::path(Syn()) / "truth_U_2.mat"));
}

TEST_F(CliTest, IngestTinyFixture) {
  const fs::path raw = Dir() / "raw";
  fs::create_directories(raw);
  Spit(raw / "ratings.tsv",
       "alice\tbook\t4\t2001-01-01\n"
       "alice\tfilm\t2\t2001-06-01\n"
       "bob\tbook\t5\t2001-02-01\n"
       "carol\tgame\t3\t2002-01-01\n"
       "not a row\n");
  Spit(raw / "trust.tsv", "alice\tbob\t2001-01-15\nbob\tcarol\t2001-12-31\n");
  Spit(raw / "cutoffs.txt", "2001-03-01\n2001-09-01\n");
  const fs::path out = Dir() / "ingested";
  const CliRun r = Cli({"ingest", "--ratings", (raw / "ratings.tsv").string(), "--trust",
                     (raw / "trust.tsv").string(), "--cutoffs", (raw / "cutoffs.txt").string(),
                     "--min-ratings", "0", "--out", out.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "m 3\nn 3\nN 3\nratings 4\nedges 2\n");
  EXPECT_EQ(Slurp(out / "meta.txt").rfind("m 3\nn 3\nN 3\n", 0), 0u);
  EXPECT_NE(r.err.find("warning"), std::string::npos);

  // The strict filter drops everyone with a single rating.
  const CliRun filtered =
      Cli({"ingest", "--ratings", (raw / "ratings.tsv").string(), "--trust",
           (raw / "trust.tsv").string(), "--cutoffs", (raw / "cutoffs.txt").string(),
           "--min-ratings", "1", "--out", (Dir() / "filtered").string()});
  ASSERT_EQ(filtered.code, 0) << filtered.err;
  EXPECT_EQ(LineWith(filtered.out, "m "), "m 1");
}

TEST_F(CliTest, MissingFileIsInputErrorNamingPath) {
  const std::string missing = (Dir() / "nope" / "ratings.tsv").string();
  const CliRun r = Cli({"ingest", "--ratings", missing, "--trust", missing, "--cutoffs", missing,
                     "--out", (Dir() / "x").string()});
  EXPECT_EQ(r.code, kExitInput);
  EXPECT_NE(r.err.find(missing), std::string::npos) << r.err;
  const CliRun d = Cli({"factorize", "--data", (Dir() / "absent").string()});
  EXPECT_EQ(d.code, kExitInput);
  EXPECT_NE(d.err.find("absent"), std::string::npos) << d.err;
}

TEST_F(CliTest, BadArgumentsAreInputErrors) {
  EXPECT_EQ(Cli({}).code, kExitInput);
  EXPECT_EQ(Cli({"smooth"}).code, kExitInput);
  EXPECT_EQ(Cli({"smooth", "--data", Syn(), "--k", "zero"}).code, kExitInput);
  EXPECT_EQ(Cli({"smooth", "--data", Syn(), "--sigma", "0"}).code, kExitInput);
  EXPECT_EQ(Cli({"frobnicate"}).code, kExitInput);
}

TEST_F(CliTest, HelpDocumentsEveryFlag) {
  for (const std::string cmd :
       {"ingest", "factorize", "smooth", "evaluate", "sweep", "synth", "checkgrad", "overlap"}) {
    const CliRun r = Cli({cmd, "--help"});
    EXPECT_EQ(r.code, 0) << cmd;
    EXPECT_NE(r.out.find("--config"), std::string::npos) << cmd;
  }
  const CliRun smooth = Cli({"smooth", "--help"});
  for (const std::string flag : {"--data", "--k", "--lambda", "--sigma", "--dt", "--gamma",
                                 "--seed", "--out", "--no-social", "--trace"}) {
    EXPECT_NE(smooth.out.find(flag), std::string::npos) << flag;
  }
  const CliRun sweep = Cli({"sweep", "--help"});
  for (const std::string flag : {"--ks", "--lambdas", "--threads", "--no-timing"}) {
    EXPECT_NE(sweep.out.find(flag), std::string::npos) << flag;
  }
}

TEST_F(CliTest, CheckgradPassesOnSyntheticProblem) {
  const CliRun r = Cli({"checkgrad", "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string line = LineWith(r.out, "max_rel_error ");
  ASSERT_FALSE(line.empty());
  EXPECT_LE(std::stod(line.substr(14)), 1e-6);
  const CliRun on_data = Cli({"checkgrad", "--data", Syn(), "--k", "2", "--lambda", "1"});
  EXPECT_EQ(on_data.code, 0) << on_data.err;
}

TEST_F(CliTest, SweepSingleCellHasThreeRowsAndIsReproducible) {
  const fs::path a = Dir() / "sweep_a.csv", b = Dir() / "sweep_b.csv";
  for (const auto& p : {a, b}) {
    const CliRun r = Cli({"sweep", "--data", Syn(), "--ks", "5", "--lambdas", "0.01",
                       "--no-timing", "--max-iter", "50", "--out", p.string()});
    ASSERT_EQ(r.code, 0) << r.err;
  }
  const std::string csv = Slurp(a);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_EQ(csv.rfind("model,k,lambda,rmse_weighted,rmse_bin_0,rmse_bin_1,rmse_bin_2,"
                      "wall_seconds,seed,status\n",
                      0),
            0u);
  EXPECT_EQ(csv, Slurp(b));
}

TEST_F(CliTest, LambdaZeroMatchesDynamicOnlyMode) {
  const CliRun zero = Cli({"smooth", "--data", Syn(), "--k", "2", "--lambda", "0"});
  const CliRun none = Cli({"smooth", "--data", Syn(), "--k", "2", "--no-social"});
  ASSERT_EQ(zero.code, 0) << zero.err;
  ASSERT_EQ(none.code, 0) << none.err;
  EXPECT_FALSE(LineWith(zero.out, "dynamic rmse_weighted").empty());
  EXPECT_EQ(LineWith(zero.out, "dynamic rmse_weighted"),
            LineWith(none.out, "dynamic rmse_weighted"));
}

TEST_F(CliTest, FactorizeThenEvaluateAgree) {
  const fs::path ckpt = Dir() / "ckpt";
  const CliRun f = Cli({"factorize", "--data", Syn(), "--k", "2", "--seed", "4", "--out",
                     ckpt.string()});
  ASSERT_EQ(f.code, 0) << f.err;
  const CliRun e = Cli({"evaluate", "--data", Syn(), "--seed", "4", "--factors", ckpt.string()});
  ASSERT_EQ(e.code, 0) << e.err;
  EXPECT_EQ(LineWith(f.out, "static rmse_weighted").substr(7),
            LineWith(e.out, "test rmse_weighted").substr(5));

  const fs::path sm = Dir() / "smoothed", trace = Dir() / "trace.csv";
  const CliRun s = Cli({"smooth", "--data", Syn(), "--k", "2", "--seed", "4", "--lambda", "0.1",
                     "--init", ckpt.string(), "--out", sm.string(), "--trace",
                     trace.string()});
  ASSERT_EQ(s.code, 0) << s.err;
  EXPECT_EQ(Slurp(trace).rfind("iter,f,grad_norm,step\n0,", 0), 0u);
  const CliRun es = Cli({"evaluate", "--data", Syn(), "--seed", "4", "--factors", sm.string()});
  EXPECT_EQ(LineWith(s.out, "dynamic_social rmse_weighted").substr(15),
            LineWith(es.out, "test rmse_weighted").substr(5));
}

TEST_F(CliTest, ConfigFilePrecedence) {
  const fs::path cfg = Dir() / "smooth.cfg";
  Spit(cfg, "# smoother settings\nk = 2\nlambda=0.5\n");
  const CliRun from_file = Cli({"smooth", "--data", Syn(), "--config", cfg.string()});
  const CliRun explicit_flags = Cli({"smooth", "--data", Syn(), "--k", "2", "--lambda", "0.5"});
  ASSERT_EQ(from_file.code, 0) << from_file.err;
  EXPECT_EQ(from_file.out, explicit_flags.out);

  const CliRun overridden =
      Cli({"smooth", "--data", Syn(), "--config", cfg.string(), "--lambda", "0"});
  const CliRun plain = Cli({"smooth", "--data", Syn(), "--k", "2", "--lambda", "0"});
  EXPECT_EQ(overridden.out, plain.out);

  Spit(cfg, "kk=2\n");
  const CliRun unknown = Cli({"smooth", "--data", Syn(), "--config", cfg.string()});
  EXPECT_EQ(unknown.code, kExitInput);
  EXPECT_NE(unknown.err.find("kk"), std::string::npos);
}

TEST_F(CliTest, OverlapReportsStatistics) {
  const CliRun r = Cli({"overlap", "--data", Syn(), "--k", "2", "--bin", "1", "--threshold",
                     "0.3", "--sample-users", "1000"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(LineWith(r.out, "sampled_users"), "sampled_users 30");
  EXPECT_FALSE(LineWith(r.out, "jaccard").empty());
  EXPECT_EQ(Cli({"overlap", "--data", Syn(), "--bin", "9"}).code, kExitInput);
}

TEST_F(CliTest, SynthIsByteIdentical) {
  for (const char* name : {"s1", "s2"}) {
    ASSERT_EQ(Cli({"synth", "--out", (Dir() / name).string(), "--m", "10", "--n", "12",
                   "--N", "2", "--samples-per-bin", "50", "--trust-edges", "8", "--seed", "9"})
                  .code,
              0);
  }
  for (const auto& entry : fs::directory_iterator(Dir() / "s1")) {
    EXPECT_EQ(Slurp(entry.path()), Slurp(Dir() / "s2" / entry.path().filename()))
        << entry.path().filename();
  }
}

}  // namespace
}  // namespace sdmf::cli
