#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "subspec/ensembles.hpp"
#include "subspec/oracle.hpp"

namespace {

namespace fs = std::filesystem;

struct Run {
  int code = -1;
  std::string out;
};

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("subspec_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run cli(const std::string& args) {
  const fs::path out = scratch() / "stdout.txt";
  const std::string cmd = std::string(SUBSPEC_CLI_PATH) + " " + args + " > " + out.string() +
                          " 2> " + (scratch() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  return r;
}

TEST(Cli, GenRwCovariance) {
  const auto path = scratch() / "rw.txt";
  ASSERT_EQ(cli("gen rw-covariance --n 100 --out " + path.string()).code, 0);
  EXPECT_EQ(subspec::load_matrix(path.string()), subspec::rw_covariance(100));
}

TEST(Cli, GenHalfOnes) {
  const auto r = cli("gen half-ones --n 4");
  ASSERT_EQ(r.code, 0);
  std::istringstream in(r.out);
  EXPECT_EQ(subspec::read_matrix(in), subspec::half_ones_diagonal(4));
}

TEST(Cli, GenRandomIsDeterministic) {
  const auto a = cli("gen random --n 8 --seed 7");
  const auto b = cli("gen random --n 8 --seed 7");
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out, cli("gen random --n 8 --seed 8").out);
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(cli("").code, 2);
  EXPECT_EQ(cli("frobnicate").code, 2);
  EXPECT_EQ(cli("gen").code, 2);
  EXPECT_EQ(cli("gen nonsense --n 4").code, 2);
  EXPECT_EQ(cli("estimate --ensemble rw-covariance --n 10 --k 11").code, 2);
  EXPECT_EQ(cli("estimate --ensemble rw-covariance --n 10 --k 3 --mode sideways").code, 2);
  EXPECT_EQ(cli("estimate --ensemble rw-covariance --n 10 --k 3 --samples 0").code, 2);
  EXPECT_EQ(cli("fig1 --n 30 --k 5 --exclude-top 5 --pairs 2").code, 2);
  EXPECT_EQ(cli("estimate --matrix /nonexistent/file --k 2").code, 2);
  EXPECT_EQ(cli("oracle --ensemble rw-covariance --n 40 --k 20").code, 2);
  EXPECT_EQ(cli("estimate --ensemble random-general --n 6 --k 2 --mode eigen").code, 2);
}

TEST(Cli, VerifySelfTestFails) {
  EXPECT_EQ(cli("verify --n 4 --corrupt-kernel").code, 1);
}

TEST(Cli, VerifyDefaultPasses) {
  const auto r = cli("verify");
  EXPECT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.contains("config"));
}

TEST(Cli, OracleHalfOnes) {
  const auto r = cli("oracle --ensemble half-ones --n 4 --k 2");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["supnorm_distribution"]["mean"].get<double>(), 1.0 / 6.0, 1e-15);
  EXPECT_EQ(j["metadata"]["index_base"].get<int>(), 1);
}

TEST(Cli, OracleFullSetIsPointMass) {
  const auto r = cli("oracle --ensemble random --n 5 --k 5");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  const auto& atoms = j["supnorm_distribution"]["atoms"];
  ASSERT_EQ(atoms.size(), 1u);
  EXPECT_EQ(atoms[0]["value"].get<double>(), 0.0);
}

TEST(Cli, EstimateConstantMatrix) {
  const auto path = scratch() / "const.txt";
  {
    std::ofstream f(path);
    f << "4 4 real\n3 0 0 0\n0 3 0 0\n0 0 3 0\n0 0 0 3\n";
  }
  const auto r = cli("estimate --matrix " + path.string() + " --k 2 --samples 50");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(nlohmann::json::parse(r.out)["report"]["mean_supnorm"].get<double>(), 0.0);
}

TEST(Cli, EstimateSingularOnRectangular) {
  const auto path = scratch() / "rect.txt";
  std::ofstream(path) << "3 5 real\n1 2 3 4 5\n0 1 0 1 0\n2 2 1 0 -1\n";
  EXPECT_EQ(cli("estimate --matrix " + path.string() + " --k 2 --mode singular --samples 30").code, 0);
}

TEST(Cli, EstimateHalfOnesMatchesOracle) {
  const auto r = cli("estimate --ensemble half-ones --n 256 --k 64 --samples 10000 --seed 3");
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  const auto dist = subspec::halfones_supnorm_distribution(256, 64);
  const double sigma = std::sqrt(dist.variance() / 10000.0);
  EXPECT_NEAR(j["report"]["mean_supnorm"].get<double>(), subspec::halfones_exact_mean(256, 64),
              3 * sigma);
}

TEST(Cli, ThreadCountDoesNotChangeOutput) {
  const std::string cmds[] = {
      "estimate --ensemble random --n 12 --k 4 --samples 400 --seed 5",
      "estimate --ensemble rw-covariance --n 12 --k 4 --samples 400 --format csv",
      "fig1 --pairs 40",
      "oracle --ensemble rw-covariance --n 9 --k 3 --x 1 --x 4",
  };
  for (const auto& c : cmds) {
    const auto a = cli(c + " --threads 1");
    const auto b = cli(c + " --threads 4");
    ASSERT_EQ(a.code, 0) << c;
    EXPECT_EQ(a.out, b.out) << c;
  }
}

TEST(Cli, KsIdenticalFiles) {
  const auto path = scratch() / "ks.txt";
  ASSERT_EQ(cli("gen rw-covariance --n 10 --out " + path.string()).code, 0);
  const auto r = cli("ks " + path.string() + " " + path.string());
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["ks"]["statistic"].get<double>(), 0.0);
  EXPECT_EQ(j["ks"]["p_value"].get<double>(), 1.0);
}

}  // namespace
