#include <gtest/gtest.h>

#include <json.hpp>

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <lrt/io.hpp>

#include "lrt_cli/cli.hpp"
#include "test_support.hpp"

namespace lrt {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run_subcommand(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("lrt_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string write(const std::string& name, const PointSet& p,
                    PointFormat fmt = PointFormat::csv) {
    const fs::path path = dir_ / name;
    save_points(path, p, fmt);
    return path.string();
  }

  fs::path dir_;
};

TEST_F(CliTest, ThinKhReturnsHalf) {
  const std::string in = write("p16.csv", testing::uniform_points(16, 2, 1));
  const CliRun r =
      run({"thin", "--input", in, "--algo", "kh", "--delta", "0.5", "--nout", "8", "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["outputs"]["indices"].size(), 8u);
  EXPECT_EQ(j["seed"], 7);
  EXPECT_TRUE(j["counters"].contains("kernel_evals"));
  EXPECT_TRUE(j["counters"].contains("flops_estimate"));
  EXPECT_TRUE(j.contains("wall_ns"));
  EXPECT_EQ(j["config"]["algo"], "kh");
}

TEST_F(CliTest, SeedDeterminesOutput) {
  const std::string in = write("p64.f64", testing::uniform_points(64, 2, 2), PointFormat::f64le);
  const std::vector<std::string> args{"thin", "--input", in, "--algo", "gsc", "--g", "1", "--seed",
                                      "3"};
  const Json a = Json::parse(run(args).out), b = Json::parse(run(args).out);
  EXPECT_EQ(a["outputs"], b["outputs"]);
  EXPECT_EQ(a["outputs"]["indices"].size(), 16u);
}

TEST_F(CliTest, UnknownFlagIsUsageError) {
  const CliRun r = run({"thin", "--bogus"});
  EXPECT_EQ(r.code, 2);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
}

TEST_F(CliTest, MissingSizeIsUsageError) {
  const std::string in = write("p.csv", testing::uniform_points(16, 2, 1));
  EXPECT_EQ(run({"thin", "--input", in, "--algo", "rkh"}).code, 2);
  EXPECT_EQ(run({"thin", "--input", in, "--algo", "khc"}).code, 2);
}

TEST_F(CliTest, RuntimeErrorsExitOne) {
  EXPECT_EQ(run({"thin", "--input", (dir_ / "missing.csv").string()}).code, 1);
  const std::string in = write("p.csv", testing::uniform_points(20, 2, 1));
  EXPECT_EQ(run({"thin", "--input", in, "--algo", "khc", "--g", "0"}).code, 1);
}

TEST_F(CliTest, PadTruncate) {
  const std::string in = write("p.csv", testing::uniform_points(70, 2, 1));
  const CliRun r = run({"thin", "--input", in, "--algo", "khc", "--g", "0", "--pad", "truncate"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.err.find("warning"), std::string::npos);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["outputs"]["n_in"], 64);
  EXPECT_EQ(j["outputs"]["indices"].size(), 8u);
}

TEST_F(CliTest, MmdFromThinReport) {
  const std::string in = write("p.csv", testing::uniform_points(32, 2, 4));
  const CliRun t = run({"thin", "--input", in, "--algo", "rkh", "--nout", "8", "--report-mmd"});
  ASSERT_EQ(t.code, 0);
  const fs::path report = dir_ / "thin.json";
  std::ofstream(report) << t.out;
  const CliRun m = run({"mmd", "--input", in, "--coreset-file", report.string()});
  ASSERT_EQ(m.code, 0) << m.err;
  EXPECT_NEAR(Json::parse(m.out)["outputs"]["mmd"].get<double>(),
              Json::parse(t.out)["outputs"]["mmd"].get<double>(), 1e-12);
}

TEST_F(CliTest, KmsSpectrumEpsrank) {
  const std::string in = write("p.csv", testing::uniform_points(16, 2, 5));
  const CliRun k = run({"kms", "--input", in, "--indices", "0,1,2,3", "--queries", "4,5"});
  ASSERT_EQ(k.code, 0) << k.err;
  EXPECT_EQ(Json::parse(k.out)["outputs"]["num_queries"], 2);
  const CliRun s = run({"spectrum", "--input", in, "--top", "3"});
  ASSERT_EQ(s.code, 0);
  EXPECT_EQ(Json::parse(s.out)["outputs"]["eigenvalues"].size(), 3u);
  const CliRun e = run({"epsrank", "--input", in, "--eps", "0", "100"});
  ASSERT_EQ(e.code, 0);
  const Json ranks = Json::parse(e.out)["outputs"]["ranks"];
  EXPECT_EQ(ranks[0]["rank"], 2);
  EXPECT_EQ(ranks[1]["rank"], 0);
}

TEST_F(CliTest, AttentionFullLevelExact) {
  const std::string q = write("q.csv", testing::normal_points(4, 3, 1));
  const std::string k = write("k.csv", testing::normal_points(16, 3, 2));
  const std::string v = write("v.csv", testing::normal_points(16, 2, 3));
  const CliRun r = run({"attn", "--queries", q, "--keys", k, "--values", v, "--g", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_LE(j["outputs"]["max_err"].get<double>(), 1e-12);
  EXPECT_EQ(j["outputs"]["T_hat"].size(), 4u);
}

TEST_F(CliTest, ReorderSim) {
  const CliRun r = run({"reorder-sim", "--loss", "ls", "--ordering", "lkh", "--epochs", "3",
                        "--n", "32", "--d", "4", "--seed", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["outputs"]["losses"].size(), 4u);
}

TEST_F(CliTest, CttAndSubsample) {
  const std::string x = write("x.csv", testing::normal_points(64, 2, 1));
  const std::string y = write("y.csv", testing::normal_points(64, 2, 2));
  const CliRun r = run({"ctt", "--x", x, "--y", y, "--s", "2", "--g", "0", "--B", "9"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["outputs"]["permuted"].size(), 9u);
  const CliRun s = run({"ctt", "--x", x, "--y", y, "--subsample", "16", "--B", "9"});
  ASSERT_EQ(s.code, 0) << s.err;
  const std::string xe = write("xe.csv", testing::normal_points(64, 3, 3));
  const std::string ye = write("ye.csv", testing::normal_points(64, 3, 4));
  const CliRun d = run({"ctt", "--x", x, "--y", y, "--x-embed", xe, "--y-embed", ye, "--kernel",
                        "deep:eps=0.5,eta_q=1,eta_kappa=1", "--s", "2", "--B", "9"});
  ASSERT_EQ(d.code, 0) << d.err;
  EXPECT_EQ(run({"ctt", "--x", x, "--y", y, "--x-embed", xe}).code, 2);
}

TEST_F(CliTest, BenchAndValidate) {
  const CliRun b = run({"bench", "--algo", "khc", "--g", "0", "--n", "64", "--repeats", "2"});
  ASSERT_EQ(b.code, 0) << b.err;
  EXPECT_EQ(Json::parse(b.out)["outputs"]["runs"].size(), 2u);
  const CliRun v = run({"validate", "prop21", "--n", "64", "--nout", "16", "--draws", "4000",
                        "--tol", "0.1"});
  ASSERT_EQ(v.code, 0) << v.err;
  const Json j = Json::parse(v.out);
  EXPECT_TRUE(j["outputs"]["pass"].get<bool>());
  EXPECT_TRUE(j["outputs"].contains("relative_error"));
  EXPECT_EQ(run({"validate"}).code, 2);
}

}  // namespace
}  // namespace lrt
