// Copyright 2026 The Authors.
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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "dispatch/cli.h"
#include "dispatch/errors.h"

namespace dispatch {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "dispatch");
  std::ostringstream out, err;
  const int code = RunCli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("dispatch_cli_") +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string Path(const std::string& name) const { return (dir_ / name).string(); }
  void Write(const std::string& name, const std::string& text) const {
    std::ofstream(dir_ / name) << text;
  }
  void GenerateSmallCity() {
    const auto r = Cli({"gen-synthetic", "--out", Path("city"), "--rows", "5",
                        "--cols", "5", "--couriers", "6", "--restaurants", "8",
                        "--orders-per-day", "150", "--seed", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
  }

  fs::path dir_;
};

TEST_F(CliTest, GenSyntheticWritesRunnableCity) {
  GenerateSmallCity();
  for (const char* f : {"orders.csv", "rates.csv", "couriers.csv", "config.ini"}) {
    EXPECT_TRUE(fs::exists(dir_ / "city" / f)) << f;
  }
  const auto v = Cli({"validate", "--config", Path("city/config.ini")});
  EXPECT_EQ(v.code, 0) << v.err;
  EXPECT_NE(v.out.find("ok:"), std::string::npos);
}

TEST_F(CliTest, RunAllWritesReportsAndImprovementTable) {
  GenerateSmallCity();
  const auto r = Cli({"run", "--config", Path("city/config.ini"), "--out",
                      Path("run"), "--mode", "all"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* mode : {"proposed", "greedy", "bundling"}) {
    EXPECT_TRUE(fs::exists(dir_ / "run" / (std::string("report_") + mode + ".txt")));
    EXPECT_TRUE(fs::exists(dir_ / "run" / (std::string("series_") + mode + ".csv")));
    EXPECT_TRUE(fs::exists(dir_ / "run" / (std::string("plan_") + mode + ".csv")));
  }
  EXPECT_TRUE(fs::exists(dir_ / "run" / "routes_proposed.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "run" / "manifest.ini"));
  const std::string table = Slurp(dir_ / "run" / "improvement.csv");
  std::istringstream lines(table);
  std::string line;
  int rows = 0;
  std::getline(lines, line);
  EXPECT_EQ(line, "baseline,metric,baseline_value,proposed_value,improvement_pct");
  while (std::getline(lines, line)) ++rows;
  EXPECT_EQ(rows, 2 * 4);
}

TEST_F(CliTest, SweepRelocationWritesFourByThreeMatrix) {
  GenerateSmallCity();
  const auto r = Cli({"sweep", "--config", Path("city/config.ini"), "--out",
                      Path("sweep"), "--mode", "all", "--sweep-relocation",
                      "1,3,5,7"});
  ASSERT_EQ(r.code, 0) << r.err;
  int reports = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir_ / "sweep")) {
    const std::string name = e.path().filename().string();
    if (name.rfind("report_", 0) == 0) ++reports;
  }
  EXPECT_EQ(reports, 4 * 3);
  for (const char* km : {"1", "3", "5", "7"}) {
    EXPECT_TRUE(fs::is_directory(dir_ / "sweep" / (std::string("relocation_") + km)));
  }
  EXPECT_TRUE(fs::exists(dir_ / "sweep" / "improvement.csv"));
  std::istringstream summary(Slurp(dir_ / "sweep" / "sweep_summary.csv"));
  std::string line;
  int rows = -1;
  while (std::getline(summary, line)) ++rows;
  EXPECT_EQ(rows, 12);
}

TEST_F(CliTest, SweepIsByteIdenticalOnRerun) {
  GenerateSmallCity();
  for (const char* out : {"a", "b"}) {
    ASSERT_EQ(Cli({"sweep", "--config", Path("city/config.ini"), "--out",
                   Path(out), "--sweep-capacity", "1,2"})
                  .code,
              0);
  }
  for (const auto& e : fs::recursive_directory_iterator(dir_ / "a")) {
    if (!e.is_regular_file()) continue;
    const auto rel = fs::relative(e.path(), dir_ / "a");
    if (rel == "manifest.ini") continue;
    EXPECT_EQ(Slurp(e.path()), Slurp(dir_ / "b" / rel)) << rel;
  }
}

TEST_F(CliTest, DumpFlowOnOneOrderShowsOneChain) {
  Write("orders.csv",
        "order_id,timestamp,pickup_cell,dropoff_cell,fee\n1,1704067200,0,2,50\n");
  Write("couriers.csv", "courier_id,cell,capacity\n1,1,1\n");
  Write("run.ini",
        "[grid]\nrows = 1\ncols = 3\n[simulator]\ninterval_count = 4\n"
        "[input]\norders = orders.csv\ncouriers = couriers.csv\n");
  const auto r = Cli({"run", "--config", Path("run.ini"), "--out", Path("out"),
                      "--dump-flow"});
  ASSERT_EQ(r.code, 0) << r.err;
  const fs::path dump = dir_ / "out" / "flows" / "flow_0_0.csv";
  ASSERT_TRUE(fs::exists(dump));
  std::istringstream in(Slurp(dump));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "src,dst,capacity,cost,flow");
  std::vector<std::pair<int, int>> used;
  std::string summary;
  while (std::getline(in, line)) {
    if (line.rfind("#", 0) == 0) {
      summary = line;
      continue;
    }
    int src, dst;
    double cap, cost, flow;
    char c;
    std::istringstream row(line);
    row >> src >> c >> dst >> c >> cap >> c >> cost >> c >> flow;
    if (flow > 0) {
      EXPECT_EQ(flow, 1.0);
      used.emplace_back(src, dst);
    }
  }
  // S -> courier -> restaurant -> drop-off -> T, in arc order.
  ASSERT_EQ(used.size(), 4u);
  for (std::size_t i = 1; i < used.size(); ++i) {
    EXPECT_EQ(used[i - 1].second, used[i].first);
  }
  EXPECT_EQ(summary, "# flow_value=1 total_cost=-48");
  const std::string report = Slurp(dir_ / "out" / "report_proposed.txt");
  EXPECT_NE(report.find("profit = 44\n"), std::string::npos);
}

TEST_F(CliTest, MissingInputNamesThePath) {
  const std::string missing = Path("nowhere/orders.csv");
  Write("run.ini", "[grid]\nrows = 3\ncols = 3\n");
  const auto r = Cli({"run", "--config", Path("run.ini"), "--orders", missing,
                      "--out", Path("out")});
  EXPECT_NE(r.code, 0);
  EXPECT_NE(r.err.find(missing), std::string::npos) << r.err;

  const auto c = Cli({"run", "--config", Path("absent.ini"), "--out", Path("out")});
  EXPECT_NE(c.code, 0);
  EXPECT_NE(c.err.find(Path("absent.ini")), std::string::npos) << c.err;
}

TEST_F(CliTest, ExitCodes) {
  EXPECT_EQ(Cli({}).code, kExitUsage);
  EXPECT_EQ(Cli({"frobnicate"}).code, kExitUsage);
  Write("orders.csv",
        "order_id,timestamp,pickup_cell,dropoff_cell,fee\n1,1704067200,0,99,50\n");
  Write("run.ini", "[grid]\nrows = 3\ncols = 3\n[input]\norders = orders.csv\n");
  EXPECT_EQ(Cli({"run", "--config", Path("run.ini"), "--out", Path("o"), "--mode",
                 "fastest"})
                .code,
            kExitUsage);
  const auto bad = Cli({"run", "--config", Path("run.ini"), "--out", Path("o")});
  EXPECT_EQ(bad.code, kExitData);
  EXPECT_NE(bad.err.find(":2:"), std::string::npos) << bad.err;
  EXPECT_EQ(Cli({"sweep", "--config", Path("run.ini"), "--out", Path("o")}).code,
            kExitUsage);
  Write("bad.ini", "[grid]\nrows = 0\n");
  EXPECT_EQ(Cli({"validate", "--config", Path("bad.ini")}).code, kExitUsage);
}

TEST(GeoToCellTest, ProjectsFromSouthWestCorner) {
  const Grid grid(10, 10, 2.0);
  constexpr double kKmPerDegree = 6371.0088 * std::numbers::pi / 180.0;
  EXPECT_EQ(GeoToCell(0.0, 0.0, 0.0, 0.0, grid), CellId{0});
  // 3 km north and 5 km east: row 1, column 2.
  EXPECT_EQ(GeoToCell(3.0 / kKmPerDegree, 5.0 / kKmPerDegree, 0.0, 0.0, grid),
            CellId{12});
  EXPECT_THROW(GeoToCell(-0.01, 0.0, 0.0, 0.0, grid), DataError);
  EXPECT_THROW(GeoToCell(21.0 / kKmPerDegree, 0.0, 0.0, 0.0, grid), DataError);

  std::vector<std::string> args{"dispatch", "geo-to-cell", "--lat",
                                std::to_string(3.0 / kKmPerDegree), "--lon",
                                std::to_string(5.0 / kKmPerDegree),
                                "--origin-lat", "0", "--origin-lon", "0"};
  std::ostringstream out, err;
  EXPECT_EQ(RunCli(args, out, err), kExitOk);
  EXPECT_EQ(out.str(), "12\n");
}

}  // namespace
}  // namespace dispatch
