// Exercises the dalbench executable end to end.

#include "dal/bench.hpp"

#include <gtest/gtest.h>
#include <json.hpp>
#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

namespace fs = std::filesystem;

struct CliRun {
  int status = -1;
  std::string out;
};

// stdout is captured; stderr is discarded.
CliRun dalbench(const std::string& args) {
  const std::string cmd = std::string(DALBENCH_PATH) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  while (std::fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
  const int raw = ::pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

class Cli : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = fs::temp_directory_path() / "dal_cli_test";
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  static void TearDownTestSuite() { fs::remove_all(dir_); }
  static std::string path(const std::string& name) { return (dir_ / name).string(); }
  static fs::path dir_;
};

fs::path Cli::dir_;

TEST_F(Cli, GenNormalFamilyDefaults) {
  const CliRun r = dalbench("gen --family normal --m 128 --seed 7 --out " + path("p.dalp"));
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("m=128 n=512 lambda=0.025"), std::string::npos) << r.out;
  EXPECT_EQ(fs::file_size(path("p.dalp")), 32u + 8u * (128u * 512u + 128u + 512u));
}

TEST_F(Cli, GenLargeScaleLambdaRule) {
  const CliRun r = dalbench("gen --family largescale --n 4096 --seed 1 --out " + path("ls.dalp"));
  ASSERT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("m=1024 n=4096 lambda=0.025"), std::string::npos) << r.out;
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(dalbench("gen --family normal --seed 1 --out " + path("x.dalp")).status, 2);
  EXPECT_EQ(dalbench("gen --family gaussian --m 8").status, 2);
  EXPECT_EQ(dalbench("gen --family largescale --n 1000000 --out " + path("x.dalp")).status, 2);
  EXPECT_EQ(dalbench("frobnicate").status, 2);
  EXPECT_EQ(dalbench("").status, 2);
  EXPECT_EQ(dalbench("solve " + path("p.dalp") + " --solver fista").status, 2);
  EXPECT_EQ(dalbench("bench --family normal --sizes 8 --seeds 3-1 --out " + path("b.csv")).status, 2);
}

TEST_F(Cli, DataErrors) {
  {
    std::ofstream bad(path("corrupt.dalp"), std::ios::binary);
    bad << "DALP garbage";
  }
  EXPECT_EQ(dalbench("solve " + path("corrupt.dalp")).status, 3);
  EXPECT_EQ(dalbench("solve " + path("does_not_exist.dalp")).status, 3);
  EXPECT_EQ(dalbench("gen --family normal --m 8 --out " + path("no/such/dir/p.dalp")).status, 3);
}

TEST_F(Cli, DominatedLambdaSolve) {
  ASSERT_EQ(dalbench("gen --family normal --m 16 --lambda 1000 --out " + path("dom.dalp")).status, 0);
  for (const char* solver : {"dal-chol", "dal-cg", "ist", "ist-bb"}) {
    const CliRun r = dalbench("solve " + path("dom.dalp") + " --solver " + solver);
    ASSERT_EQ(r.status, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j["converged"].get<bool>());
    EXPECT_EQ(j["nnz_fraction"].get<double>(), 0.0);
    const bool dal = std::string(solver).rfind("dal", 0) == 0;
    EXPECT_EQ(j["outer_iters"].get<int>(), dal ? 1 : 0) << solver;
  }
}

TEST_F(Cli, VariantsAgreeAndToleranceHonored) {
  ASSERT_EQ(dalbench("gen --family normal --m 64 --seed 3 --out " + path("v.dalp")).status, 0);
  const auto run = [&](const std::string& extra) {
    const CliRun r = dalbench("solve " + path("v.dalp") + " --seed 3 --family normal " + extra);
    EXPECT_EQ(r.status, 0);
    return nlohmann::json::parse(r.out);
  };
  const auto chol = run("--solver dal-chol --tol 1e-6");
  const auto cg = run("--solver dal-cg --tol 1e-6");
  const double fc = chol["primal_value"].get<double>();
  const double fg = cg["primal_value"].get<double>();
  EXPECT_LE(std::abs(fc - fg) / fc, 1e-6);
  EXPECT_EQ(chol["seed"].get<int>(), 3);
  EXPECT_EQ(chol["family"], "normal");

  for (const char* solver : {"dal-chol", "dal-cg", "ist", "ist-bb"}) {
    const auto j = run(std::string("--solver ") + solver + " --tol 1e-3");
    EXPECT_TRUE(j["converged"].get<bool>());
    EXPECT_LE(j["final_gap"].get<double>(), 1e-3);
  }
  const auto random_start = run("--solver dal-cg --w-init random:5");
  EXPECT_TRUE(random_start["converged"].get<bool>());
  EXPECT_EQ(dalbench("solve " + path("v.dalp") + " --w-init sometimes").status, 2);

  const auto capped = run("--solver dal-cg --tol 1e-14 --max-outer 1");
  EXPECT_FALSE(capped["converged"].get<bool>());
}

TEST_F(Cli, BenchWritesRowsAndAggregate) {
  const std::string out = path("bench.csv");
  const CliRun r = dalbench("bench --family poor --sizes 16,32 --seeds 1-3 --solvers dal-cg,ist-bb --workers 2 --out " + out);
  ASSERT_EQ(r.status, 0);
  std::ifstream in(out, std::ios::binary);
  const auto records = dal::bench::read_records_csv(in);
  EXPECT_EQ(records.size(), 12u);
  std::ifstream agg(out + ".agg.csv", std::ios::binary);
  std::string header;
  std::getline(agg, header);
  EXPECT_EQ(header.rfind("solver,family,m,n,runs", 0), 0u);
  int rows = 0;
  for (std::string line; std::getline(agg, line);) rows += !line.empty();
  EXPECT_EQ(rows, 4);
}

}  // namespace
