// Copyright 2026 The overlap authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>
#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "overlap/analytic.hpp"
#include "overlap/cli.hpp"
#include "overlap/io.hpp"

namespace fs = std::filesystem;
using overlap::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::vector<std::vector<double>> parse_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) row.push_back(std::stod(field));
    rows.push_back(row);
  }
  return rows;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1))
    ++n;
  return n;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("overlap-cli-" + std::to_string(getpid()) + "-" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(call({}).code, 1);
  EXPECT_EQ(call({"bogus"}).code, 1);
  EXPECT_EQ(call({"scaling"}).code, 1);  // --dim is required
  EXPECT_EQ(call({"scaling", "--dim", "1", "--method", "magic"}).code, 1);
  EXPECT_EQ(call({"scaling", "--dim", "1", "--tol", "-1"}).code, 1);
  EXPECT_EQ(call({"simulate", "--dim", "1", "--out-prefix", path("x")}).code, 1);  // no seed
  EXPECT_EQ(call({"--help"}).code, 0);
}

TEST_F(CliTest, ScalingTableStartsAtOne) {
  const Result r = call({"scaling", "--dim", "1", "--xi-min", "0", "--xi-max", "3", "--points", "61"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "xi,phi,error_estimate");
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 61u);
  EXPECT_EQ(rows.front()[0], 0.0);
  EXPECT_EQ(rows.front()[1], 1.0);
  EXPECT_DOUBLE_EQ(rows.back()[0], 3.0);
  EXPECT_NEAR(rows[2][1], 0.98857978723178254, 1e-10);  // xi = 0.1
}

TEST_F(CliTest, ScalingDivergesAtFourDimensions) {
  for (const char* d : {"4", "5.5"}) {
    const Result r = call({"scaling", "--dim", d});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("no scaling function exists for d >= 4"), std::string::npos) << r.err;
    EXPECT_TRUE(r.out.empty());
  }
}

TEST_F(CliTest, ScalingSeriesMatchesExpansion) {
  const Result r = call({"scaling", "--dim", "2", "--method", "series", "--xi-max", "0.2"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const auto& row : parse_csv(r.out))
    EXPECT_EQ(row[1], overlap::analytic::phi_series(row[0], 2)) << row[0];
}

TEST_F(CliTest, ScalingWritesFile) {
  const std::string out = path("phi.csv");
  ASSERT_EQ(call({"scaling", "--dim", "3", "--points", "5", "--out", out}).code, 0);
  EXPECT_EQ(parse_csv(slurp(out)).size(), 5u);
  EXPECT_FALSE(fs::exists(out + ".tmp"));
}

TEST_F(CliTest, SimulateIsByteIdenticalOnRepeat) {
  const std::vector<std::string> base{"simulate", "--dim", "1", "--radius", "5", "--steps",
                                      "1024", "--reals", "4096", "--seed", "7"};
  auto a = base, b = base;
  a.insert(a.end(), {"--out-prefix", path("a")});
  b.insert(b.end(), {"--out-prefix", path("b"), "--workers", "3"});
  ASSERT_EQ(call(a).code, 0);
  ASSERT_EQ(call(b).code, 0);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_FALSE(slurp(path("a.csv")).empty());
  const auto manifest = nlohmann::json::parse(slurp(path("a.manifest.json")));
  EXPECT_EQ(manifest["master_seed"], 7);
  EXPECT_EQ(manifest["separations"], nlohmann::json::array({5}));
}

TEST_F(CliTest, SimulateDefaultsToFourRadii) {
  ASSERT_EQ(call({"simulate", "--dim", "1", "--steps", "4", "--reals", "2", "--seed", "1",
                  "--out-prefix", path("d")})
                .code,
            0);
  const auto manifest = nlohmann::json::parse(slurp(path("d.manifest.json")));
  EXPECT_EQ(manifest["separations"], nlohmann::json::array({5, 10, 20, 50}));
  EXPECT_EQ(manifest["radii"], nlohmann::json::array({0, 5, 10, 20, 50}));
}

TEST_F(CliTest, SimulateOneStepEnumerationValue) {
  ASSERT_EQ(call({"simulate", "--dim", "1", "--radius", "0", "--steps", "1", "--reals", "1048576",
                  "--seed", "3", "--out-prefix", path("e")})
                .code,
            0);
  std::ifstream in(path("e.csv"));
  const auto result = overlap::io::read_results_csv(in);
  const auto& row = result.row(0, 1);
  EXPECT_NEAR(row.mean_w2, 1.5, 3.0 * row.stderr_w2);
}

TEST_F(CliTest, SimulateFailureLeavesNoFiles) {
  const std::string prefix = path("missing-dir/out");
  EXPECT_EQ(call({"simulate", "--dim", "1", "--radius", "5", "--steps", "8", "--reals", "4",
                  "--seed", "1", "--out-prefix", prefix})
                .code,
            1);
  EXPECT_EQ(call({"simulate", "--dim", "1", "--steps", "0", "--seed", "1", "--out-prefix",
                  path("zero")})
                .code,
            1);
  EXPECT_TRUE(fs::is_empty(dir_));
}

TEST_F(CliTest, CompareAnalyticAgainstAnalyticPasses) {
  // Synthetic results whose ratios are exactly Phi_1, with zero errors.
  std::ofstream csv(path("synthetic.csv"));
  csv << overlap::io::kResultsHeader << '\n';
  for (std::int64_t R : {0, 4}) {
    for (std::int64_t t = 4; t <= 4096; t *= 2) {
      const double xi = R / std::sqrt(2.0 * t);
      const double base = 1.0;  // keeps the ratio free of rounding
      const double w2 = base * overlap::analytic::phi({xi, 1.0, {}}).phi;
      csv << "1," << R << ',' << t << ',' << overlap::io::format_real(xi) << ','
          << overlap::io::format_real(w2) << ",0," << overlap::io::format_real(base) << ",0,100\n";
    }
  }
  csv.close();
  const Result r = call({"compare", "--results", path("synthetic.csv"), "--out", path("rep.csv")});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
  const auto rows = parse_csv(slurp(path("rep.csv")));
  ASSERT_FALSE(rows.empty());
  for (const auto& row : rows) EXPECT_EQ(row.back(), 0.0);  // pull column
}

TEST_F(CliTest, CompareRefusesFourDimensions) {
  ASSERT_EQ(call({"simulate", "--dim", "4", "--radius", "2", "--steps", "16", "--reals", "8",
                  "--seed", "1", "--out-prefix", path("d4")})
                .code,
            0);
  const Result r = call({"compare", "--results", path("d4.csv")});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("no scaling function"), std::string::npos);
}

TEST_F(CliTest, CompareFailsOnMismatch) {
  // R = 5 measured against the d = 1 curve but generated in d = 3 data
  // relabelled as d = 1: clearly inconsistent.
  ASSERT_EQ(call({"simulate", "--dim", "3", "--radius", "3", "--steps", "512", "--reals", "2000",
                  "--seed", "2", "--out-prefix", path("d3")})
                .code,
            0);
  std::string text = slurp(path("d3.csv"));
  std::string relabelled;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  relabelled += line + "\n";
  while (std::getline(in, line)) relabelled += "1" + line.substr(1) + "\n";
  std::ofstream(path("fake.csv")) << relabelled;
  const Result r = call({"compare", "--results", path("fake.csv")});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.out.find("FAIL"), std::string::npos);
  EXPECT_EQ(call({"compare", "--results", path("nope.csv")}).code, 1);
}

TEST_F(CliTest, PersistenceOneDimension) {
  const Result r = call({"persistence", "--dim", "1", "--steps", "4096", "--reals", "65536",
                         "--seed", "5", "--out", path("q.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(slurp(path("q.csv")));
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows[0][0], 1.0);
  EXPECT_EQ(rows[0][1], 1.0);
  const auto pos = r.out.find("slope");
  ASSERT_NE(pos, std::string::npos);
  const double slope = std::stod(r.out.substr(r.out.find("]: ") + 3));
  EXPECT_NEAR(slope, -0.5, 0.05);
}

TEST_F(CliTest, PersistenceThreeDimensionsIsTransient) {
  const Result r = call({"persistence", "--dim", "3", "--steps", "4096", "--reals", "4000",
                         "--seed", "5", "--out", path("q3.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = parse_csv(slurp(path("q3.csv")));
  const double q_end = rows.back()[1];
  EXPECT_GT(q_end, 0.0);
  EXPECT_LT(q_end, 1.0);
  EXPECT_NEAR(q_end, 0.66, 0.05);  // 1 - return probability of the cubic lattice (0.3405)
}

TEST_F(CliTest, PlotSingleAnalyticCurve) {
  const std::string svg = path("a.svg");
  ASSERT_EQ(call({"plot", "--analytic", "--dim", "1", "--out", svg}).code, 0);
  const std::string text = slurp(svg);
  EXPECT_EQ(count(text, "<polyline"), 1u);
  EXPECT_NE(text.find(">xi<"), std::string::npos);
  EXPECT_NE(text.find(">Phi<"), std::string::npos);
  EXPECT_EQ(text.rfind("<svg", 0) == 0 || text.rfind("<?xml", 0) == 0, true);
}

TEST_F(CliTest, PlotFourSeriesWithOverlay) {
  ASSERT_EQ(call({"simulate", "--dim", "2", "--steps", "256", "--reals", "32", "--seed", "1",
                  "--out-prefix", path("s")})
                .code,
            0);
  const std::string svg = path("f.svg");
  ASSERT_EQ(call({"plot", "--results", path("s.csv"), "--analytic", "--logx", "--out", svg}).code, 0);
  const std::string text = slurp(svg);
  EXPECT_EQ(count(text, "<g class=\"series\""), 5u);
  EXPECT_EQ(count(text, "<polyline"), 1u);
  EXPECT_EQ(count(text, "class=\"legend\""), 5u);

  const std::string again = path("g.svg");
  ASSERT_EQ(call({"plot", "--results", path("s.csv"), "--analytic", "--logx", "--out", again}).code,
            0);
  EXPECT_EQ(slurp(again), text);
}

TEST_F(CliTest, PlotScalingCsvAndErrors) {
  ASSERT_EQ(call({"scaling", "--dim", "2", "--points", "20", "--out", path("p.csv")}).code, 0);
  ASSERT_EQ(call({"plot", "--results", path("p.csv"), "--out", path("p.svg")}).code, 0);
  EXPECT_EQ(count(slurp(path("p.svg")), "<polyline"), 1u);

  std::ofstream(path("empty.csv")).close();
  EXPECT_EQ(call({"plot", "--results", path("empty.csv"), "--out", path("e.svg")}).code, 1);
  EXPECT_FALSE(fs::exists(path("e.svg")));
  std::ofstream(path("bad.csv")) << "xi,phi\n0.1,abc\n";
  EXPECT_EQ(call({"plot", "--results", path("bad.csv"), "--out", path("b.svg")}).code, 1);
  std::ofstream(path("bad2.csv")) << overlap::io::kResultsHeader << "\n1,2\n";
  EXPECT_EQ(call({"plot", "--results", path("bad2.csv"), "--out", path("c.svg")}).code, 1);
  EXPECT_EQ(call({"plot", "--analytic", "--dim", "4", "--out", path("d.svg")}).code, 2);
}
