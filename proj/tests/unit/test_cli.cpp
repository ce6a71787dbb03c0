#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kkscatter/cli.hpp"
#include "kkscatter/scattering.hpp"

using namespace kkscatter;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string l;
  while (std::getline(ss, l)) out.push_back(l);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST(Cli, ScatterMatchesGoldenFile) {
  const CliRun r = run({"scatter", "--delta", "-100", "--phi", "0", "--il", "1", "--ir", "1.15"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto got = lines(r.out);
  const auto want = lines(read_file(std::string(KKSCATTER_SOURCE_DIR) + "/tests/golden/scatter.csv"));
  ASSERT_EQ(got.size(), 2u);
  ASSERT_EQ(want.size(), 2u);
  EXPECT_EQ(got[0], want[0]);
  const auto g = split(got[1]);
  const auto w = split(want[1]);
  ASSERT_EQ(g.size(), w.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double a = std::stod(g[i]);
    const double b = std::stod(w[i]);
    EXPECT_NEAR(a, b, 1e-9 * std::max(1.0, std::fabs(b))) << "column " << i;
  }
}

TEST(Cli, UnknownFigureIsAConfigError) {
  const CliRun r = run({"figure", "BOGUS"});
  EXPECT_EQ(r.code, kExitConfigError);
  EXPECT_NE(r.err.find("unknown figure id"), std::string::npos);
}

TEST(Cli, FigureWritesRequestedColumns) {
  const auto path = (std::filesystem::temp_directory_path() / "kkscatter_fig2g.csv").string();
  const CliRun r = run({"figure", "FIG2G", "--out", path, "--axis", "delta0=-300:300:7"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(read_file(path));
  ASSERT_EQ(l.size(), 8u);
  EXPECT_EQ(l[0], "delta0,r_l,r_r,t");
  std::filesystem::remove(path);
}

TEST(Cli, JsonOutput) {
  const CliRun r = run({"--format", "json", "kkmetric", "--delta", "-150", "-50"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["data"]["delta"].size(), 2u);
  EXPECT_EQ(j["data"]["phase_class"][0], "UNBROKEN");
  EXPECT_EQ(j["metadata"]["numerics.kk_resolution"], "4096");
}

TEST(Cli, AnglesAreDegrees) {
  const CliRun r = run({"coeffs", "--delta", "-100", "--theta", "30", "--precision", "15"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto row = split(lines(r.out)[1]);
  const MediumParams p;
  const auto c = coefficients(p, -100.0, IncidenceGeometry::for_medium(p, M_PI / 6), Discretization{});
  EXPECT_NEAR(std::stod(row[1]), 30.0, 1e-12);
  EXPECT_NEAR(std::stod(row[4]), c.coeffs.r_r(), 1e-12);
  EXPECT_EQ(run({"coeffs", "--delta", "-100", "--theta", "95"}).code, kExitConfigError);
}

TEST(Cli, ConvergenceFailureExitCode) {
  const auto path = (std::filesystem::temp_directory_path() / "kkscatter_tight.cfg").string();
  std::ofstream(path) << "[numerics]\nrel_tol = 1e-300\n";
  const CliRun r = run({"--config", path, "scatter", "--delta", "-100"});
  EXPECT_EQ(r.code, kExitConvergenceError);
  EXPECT_NE(r.err.find("convergence"), std::string::npos);
  std::filesystem::remove(path);
}

TEST(Cli, ConfigErrors) {
  EXPECT_EQ(run({"--config", "/nonexistent.cfg", "scatter", "--delta", "0"}).code,
            kExitConfigError);
  EXPECT_EQ(run({"scatter"}).code, kExitConfigError);
  EXPECT_EQ(run({"frobnicate"}).code, kExitConfigError);
  EXPECT_EQ(run({"amax", "--delta", "-50", "--rule", "EQ11"}).code, kExitConfigError);
  ::setenv("KKSCATTER_MEDIUM_COLOUR", "blue", 1);
  EXPECT_EQ(run({"scatter", "--delta", "0"}).code, kExitConfigError);
  ::unsetenv("KKSCATTER_MEDIUM_COLOUR");
}

TEST(Cli, EnvironmentOverridesMedium) {
  ::setenv("KKSCATTER_MEDIUM_DELTA0", "-200", 1);
  const CliRun r = run({"coeffs", "--delta", "100"});
  ::unsetenv("KKSCATTER_MEDIUM_DELTA0");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto row = split(lines(r.out)[1]);
  // mirrored medium: the suppressed side moves to the right
  EXPECT_LT(std::stod(row[4]), 0.1 * std::stod(row[2]));
}

TEST(Cli, CpaAndAmaxRun) {
  const CliRun cpa = run({"--delta0", "100", "cpa", "--delta", "-50", "--theta", "20"});
  ASSERT_EQ(cpa.code, 0) << cpa.err;
  EXPECT_EQ(lines(cpa.out).size(), 3u);
  const CliRun amax = run({"--delta0", "100", "--config", std::string(KKSCATTER_SOURCE_DIR) + "/config/default.cfg",
                        "amax", "--delta", "-50"});
  ASSERT_EQ(amax.code, 0) << amax.err;
  const auto row = split(lines(amax.out)[1]);
  EXPECT_GT(std::stod(row[1]), 0.99);
}

TEST(Cli, ProfileAndSelftest) {
  const CliRun p = run({"profile", "--delta", "-100", "--layers", "16"});
  ASSERT_EQ(p.code, 0) << p.err;
  EXPECT_EQ(lines(p.out).size(), 17u);
  EXPECT_EQ(lines(p.out)[0], "x,re_chi,im_chi,re_n,im_n");
  const CliRun s = run({"selftest"});
  EXPECT_EQ(s.code, 0) << s.out;
  EXPECT_EQ(s.out.find("FAIL"), std::string::npos);
}

TEST(Cli, FigureThetaAxisIsInDegrees) {
  const CliRun r = run({"figure", "FIG5C", "--axis", "theta=0:60:3", "--axis", "phi=0:1:2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto l = lines(r.out);
  ASSERT_EQ(l.size(), 7u);
  EXPECT_EQ(l[0], "theta_deg,phi,absorption");
  EXPECT_NEAR(std::stod(split(l[3])[0]), 30.0, 1e-9);
  EXPECT_NEAR(std::stod(split(l[5])[0]), 60.0, 1e-9);
}
