#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "frecl/csv_io.hpp"

namespace fs = std::filesystem;
namespace io = frecl::io;

namespace {

struct Outcome {
  int code = -1;
  std::string output;
};

Outcome run(const std::string& args) {
  const std::string cmd = std::string("\"") + FRECL_CLI_PATH + "\" " + args + " 2>&1";
  Outcome o;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return o;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), static_cast<int>(buf.size()), pipe)) o.output += buf.data();
  const int status = pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::vector<std::string> lines(const fs::path& p) {
  std::ifstream is(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("frecl_cli_test_" + std::to_string(getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string d(const std::string& sub = "") const { return "\"" + (dir_ / sub).string() + "\""; }

  void simulate(int m = 60) {
    const Outcome o = run("simulate --seed 3 --m " + std::to_string(m) + " --p 1 --snr 8 --out " + d("sim"));
    ASSERT_EQ(o.code, 0) << o.output;
  }

  fs::path dir_;
};

const char* kFast = " --lambda 100 --penalty second-difference --basis-count 8 ";

}  // namespace

TEST_F(Cli, SimulateWritesSchema) {
  const Outcome o = run("simulate --seed 1 --out " + d("sim"));
  ASSERT_EQ(o.code, 0) << o.output;
  const auto truth = io::read_partition_file((dir_ / "sim" / "truth.csv").string());
  EXPECT_EQ(truth.partition.size(), 300u);
  for (int l : truth.partition.labels()) {
    EXPECT_GE(l, 0);
    EXPECT_LE(l, 2);
  }
  EXPECT_EQ(truth.partition.nonempty_count(), 3);
  const auto y = io::read_curves_file((dir_ / "sim" / "Y.csv").string());
  EXPECT_EQ(y.curves.rows(), 300);
  EXPECT_EQ(y.ids, truth.ids);
  EXPECT_TRUE(fs::exists(dir_ / "sim" / "X1.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "sim" / "manifest.json"));
}

TEST_F(Cli, ClusterWritesAllOutputs) {
  simulate();
  const Outcome o = run("cluster --manifest " + d("sim/manifest.json") + " --seed 5 --runs 4" + kFast + "--out " + d("out"));
  ASSERT_EQ(o.code, 0) << o.output;
  const auto a = io::read_partition_file((dir_ / "out" / "assignments.csv").string());
  EXPECT_EQ(a.partition.size(), 60u);
  const auto diag = lines(dir_ / "out" / "diagnostics.csv");
  ASSERT_EQ(diag.size(), 5u);
  EXPECT_EQ(diag[0], "run,seed,iterations,converged,mse,k_final,ari_to_final");
  std::ifstream cm(dir_ / "out" / "consensus.csv");
  EXPECT_EQ(io::read_count_matrix(cm).rows(), 60);
}

TEST_F(Cli, ConfigFileSuppliesSubcommandOptions) {
  simulate();
  {
    std::ofstream cfg(dir_ / "cfg.json");
    cfg << "{\"manifest\": \"" << (dir_ / "sim" / "manifest.json").string() << "\", \"seed\": 5, \"runs\": 2, "
        << "\"lambda\": 100, \"penalty\": \"second-difference\", \"basis-count\": 8}";
  }
  const Outcome o = run("--config " + d("cfg.json") + " cluster --out " + d("out"));
  ASSERT_EQ(o.code, 0) << o.output;
  EXPECT_EQ(lines(dir_ / "out" / "diagnostics.csv").size(), 3u);
}

TEST_F(Cli, RejectsKLargerThanM) {
  simulate();
  const Outcome o = run("cluster --manifest " + d("sim/manifest.json") + " --seed 1 --k 61 --runs 1 --out " + d("out"));
  EXPECT_EQ(o.code, 2) << o.output;
}

TEST_F(Cli, MetricsOnSmallExample) {
  {
    std::ofstream a(dir_ / "a.csv"), b(dir_ / "b.csv"), c(dir_ / "c.csv");
    a << "id,cluster\n1,1\n2,1\n3,2\n4,2\n";
    b << "id,cluster\n1,1\n2,2\n3,1\n4,2\n";
    c << "id,cluster\n1,1\n2,2\n3,1\n";
  }
  Outcome o = run("metrics " + d("a.csv") + " " + d("b.csv") + " --csv " + d("m.csv"));
  ASSERT_EQ(o.code, 0) << o.output;
  const auto at = o.output.find("ARI ");
  ASSERT_NE(at, std::string::npos) << o.output;
  EXPECT_NEAR(std::stod(o.output.substr(at + 4)), -0.5, 1e-12);
  EXPECT_TRUE(fs::exists(dir_ / "m.csv"));
  o = run("metrics " + d("a.csv") + " " + d("c.csv"));
  EXPECT_EQ(o.code, 2) << o.output;
}

TEST_F(Cli, ParseErrorsExitTwo) {
  EXPECT_EQ(run("simulate").code, 2);
  EXPECT_EQ(run("simulate --seed 1 --noise pink").code, 2);
  EXPECT_EQ(run("no-such-command").code, 2);
  EXPECT_EQ(run("--help").code, 0);
  EXPECT_EQ(run("cluster --manifest /nonexistent.json --seed 1").code, 2);
}

TEST_F(Cli, BaselineRequiresTruthAndWritesSweep) {
  simulate();
  EXPECT_EQ(run("baseline --manifest " + d("sim/manifest.json") + " --out " + d("out")).code, 2);
  const Outcome o = run("baseline --manifest " + d("sim/manifest.json") + " --truth " + d("sim/truth.csv") +
                        " --s-max 5 --restarts 2 --out " + d("out"));
  ASSERT_EQ(o.code, 0) << o.output;
  const auto rows = lines(dir_ / "out" / "baseline.csv");
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_EQ(rows[0], "s,ari,best");
}

TEST_F(Cli, TraceRowsPerIteration) {
  simulate();
  Outcome o = run("trace --manifest " + d("sim/manifest.json") + " --truth " + d("sim/truth.csv") + " --runs 3" + kFast +
                  "--out " + d("out"));
  ASSERT_EQ(o.code, 0) << o.output;
  auto rows = lines(dir_ / "out" / "trace.csv");
  ASSERT_GE(rows.size(), 4u);
  EXPECT_EQ(rows[0], "run,iteration,ari,mse,k");
  o = run("trace --manifest " + d("sim/manifest.json") + " --runs 1" + kFast + "--out " + d("out2"));
  ASSERT_EQ(o.code, 0) << o.output;
  rows = lines(dir_ / "out2" / "trace.csv");
  ASSERT_GE(rows.size(), 2u);
  EXPECT_NE(rows[1].find("NA"), std::string::npos);
}

TEST_F(Cli, ElbowTable) {
  simulate();
  const Outcome o =
      run("elbow --manifest " + d("sim/manifest.json") + " --k-values 1,3 --runs 2" + kFast + "--out " + d("out"));
  ASSERT_EQ(o.code, 0) << o.output;
  const auto rows = lines(dir_ / "out" / "elbow.csv");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], "K_requested,K_final,MSE");
}

TEST_F(Cli, OutputDirectoryFromEnvironment) {
  const std::string cmd = "FRECL_OUTPUT_DIR=" + d("env") + " \"" + FRECL_CLI_PATH + "\" simulate --seed 2 --m 10 >/dev/null 2>&1";
  fs::create_directories(dir_ / "env");
  ASSERT_EQ(std::system(cmd.c_str()), 0);
  EXPECT_TRUE(fs::exists(dir_ / "env" / "truth.csv"));
}
