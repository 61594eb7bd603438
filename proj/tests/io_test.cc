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

#include <filesystem>
#include <functional>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "dispatch/errors.h"
#include "dispatch/io.h"
#include "dispatch/scenario.h"

namespace dispatch {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("dispatch_io_" + std::to_string(::testing::UnitTest::GetInstance()
                                                 ->random_seed()) +
             "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  fs::path Write(const std::string& name, const std::string& text) const {
    std::ofstream(path_ / name) << text;
    return path_ / name;
  }

 private:
  fs::path path_;
};

std::string DataErrorMessage(const std::function<void()>& f) {
  try {
    f();
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

OrderLog Read(const std::string& text, int count = 96) {
  std::istringstream in(text);
  return ReadOrders(in, "orders.csv", Grid(4, 4), 15, count);
}

constexpr char kHeader[] = "order_id,timestamp,pickup_cell,dropoff_cell,fee\n";

TEST(ParseTimestampTest, Formats) {
  EXPECT_EQ(ParseTimestamp("1704067200"), 1704067200);
  EXPECT_EQ(ParseTimestamp("2024-01-01T00:00:00Z"), 1704067200);
  EXPECT_EQ(ParseTimestamp("2024-01-01 12:30"), 1704067200 + 12 * 3600 + 1800);
  EXPECT_EQ(ParseTimestamp("1970-01-01T00:00:01"), 1);
  EXPECT_THROW(ParseTimestamp("2024-02-30T00:00"), DataError);
  EXPECT_THROW(ParseTimestamp("noon"), DataError);
  EXPECT_THROW(ParseTimestamp("2024-01-01T25:00"), DataError);
}

TEST(ReadOrdersTest, EmptyLogHasNoIntervals) {
  OrderLog log = Read(kHeader);
  EXPECT_TRUE(log.orders.empty());
  EXPECT_TRUE(log.restaurants.empty());
}

TEST(ReadOrdersTest, BucketsTenMinutesApartTogether) {
  OrderLog log = Read(std::string(kHeader) +
                      "1,2024-01-01T12:01:00Z,0,5,30\n"
                      "2,2024-01-01T12:11:00Z,3,5,31.5\n"
                      "# comment\n\n"
                      "3,2024-01-01T12:16:00Z,0,6,32\n");
  ASSERT_EQ(log.orders.size(), 3u);
  EXPECT_EQ(log.day_start, 1704067200);
  EXPECT_EQ(log.orders[0].placed_at.index, 48);
  EXPECT_EQ(log.orders[1].placed_at.index, 48);
  EXPECT_EQ(log.orders[2].placed_at.index, 49);
  EXPECT_EQ(log.orders[1].fee, 31.5);
  EXPECT_EQ(log.orders[1].restaurant_id, 3);
  ASSERT_EQ(log.restaurants.size(), 2u);
  EXPECT_EQ(log.restaurants[1].cell, CellId{3});
}

TEST(ReadOrdersTest, SortsByIntervalThenId) {
  OrderLog log = Read(std::string(kHeader) +
                      "9,1704070800,0,5,30\n"
                      "4,1704067200,0,5,30\n"
                      "2,1704070810,0,5,30\n");
  ASSERT_EQ(log.orders.size(), 3u);
  EXPECT_EQ(log.orders[0].id, 4);
  EXPECT_EQ(log.orders[1].id, 2);
  EXPECT_EQ(log.orders[2].id, 9);
}

TEST(ReadOrdersTest, ErrorsNameTheLine) {
  const std::string h = kHeader;
  EXPECT_NE(DataErrorMessage([&] { Read(h + "1,1704067200,0,5,30\n2,x,0,5,30\n"); })
                .find("orders.csv:3"),
            std::string::npos);
  EXPECT_NE(DataErrorMessage([&] { Read(h + "1,1704067200,0,16,30\n"); })
                .find("orders.csv:2"),
            std::string::npos);
  EXPECT_NE(DataErrorMessage([&] { Read(h + "1,1704067200,0,5\n"); })
                .find("orders.csv:2"),
            std::string::npos);
  EXPECT_NE(DataErrorMessage([&] {
              Read(h + "1,1704067200,0,5,30\n1,1704067200,0,5,30\n");
            }).find("duplicate"),
            std::string::npos);
  EXPECT_NE(DataErrorMessage([&] { Read(h + "1,1704067200,0,5,0\n"); })
                .find("fee"),
            std::string::npos);
  EXPECT_NE(DataErrorMessage([&] {
              Read(h + "1,1704067200,0,5,30\n2,1704078000,0,5,30\n", 8);
            }).find("orders.csv:3"),
            std::string::npos);
  EXPECT_NE(DataErrorMessage([&] { Read("id,when\n"); }).find("header"),
            std::string::npos);
}

TEST(ReadOrdersTest, RoundTripKeepsBucketing) {
  SyntheticCityParams params;
  params.orders_per_day = 500;
  SyntheticCity city = BuildSyntheticCity(params);
  std::vector<Order> orders = SampleOrders(city, params, 9);
  ASSERT_FALSE(orders.empty());
  std::ostringstream out;
  WriteOrders(out, orders, city.restaurants, 1704067200, 15);
  std::istringstream in(out.str());
  OrderLog log = ReadOrders(in, "rt", city.world.grid, 15, 96);
  ASSERT_EQ(log.orders.size(), orders.size());
  for (std::size_t i = 0; i < orders.size(); ++i) {
    EXPECT_EQ(log.orders[i].id, orders[i].id);
    EXPECT_EQ(log.orders[i].placed_at, orders[i].placed_at);
    EXPECT_EQ(log.orders[i].dropoff, orders[i].dropoff);
    EXPECT_EQ(log.orders[i].restaurant_id, orders[i].restaurant_id);
    EXPECT_EQ(log.orders[i].fee, orders[i].fee);
  }
  std::ostringstream again;
  WriteOrders(again, log.orders, log.restaurants, log.day_start, 15);
  EXPECT_EQ(again.str(), out.str());
}

TEST(FileReadersTest, GraphRatesCouriers) {
  TempDir dir;
  auto graph = dir.Write("g.csv", "src_cell,dst_cell,distance_km\n0,1,1.5\n");
  auto edges = ReadGraphFile(graph);
  ASSERT_EQ(edges.size(), 1u);
  EXPECT_EQ(edges[0].km, 1.5);

  std::ostringstream rates_text;
  const std::vector<OdRate> rates{{CellId{0}, CellId{3}, 0.25}};
  WriteRates(rates_text, rates);
  auto back = ReadRatesFile(dir.Write("r.csv", rates_text.str()));
  ASSERT_EQ(back.size(), 1u);
  EXPECT_EQ(back[0].base_rate, 0.25);
  EXPECT_THROW(ReadRatesFile(dir.Write(
                   "bad.csv", "origin_cell,dest_cell,base_rate_per_interval\n0,1,-1\n")),
               DataError);

  std::ostringstream fleet_text;
  const std::vector<Courier> fleet{{3, CellId{7}, 2, CourierStatus::kIdle}};
  WriteCouriers(fleet_text, fleet);
  auto couriers = ReadCouriersFile(dir.Write("c.csv", fleet_text.str()));
  ASSERT_EQ(couriers.size(), 1u);
  EXPECT_EQ(couriers[0].location, CellId{7});
  EXPECT_EQ(couriers[0].capacity, 2);

  const std::string missing = (dir.path() / "nope.csv").string();
  EXPECT_NE(DataErrorMessage([&] { ReadGraphFile(missing); }).find(missing),
            std::string::npos);
}

TEST(RunConfigTest, LoadResolvesPathsAndRejectsUnknownKeys) {
  TempDir dir;
  auto path = dir.Write("run.ini",
                        "[grid]\nrows = 5\ncols = 4\n"
                        "[allocation]\ndetour_threshold = 1.25\ntwo_phase = true\n"
                        "sla_minutes = 45\n"
                        "[routing]\nrelocation_distance_km = 3\n"
                        "[fleet]\ncapacity = 2\n"
                        "[input]\norders = data/o.csv\n");
  RunConfig c = LoadRunConfig(path);
  EXPECT_EQ(c.sim.rows, 5);
  EXPECT_EQ(c.sim.cols, 4);
  EXPECT_EQ(c.sim.detour_threshold, 1.25);
  EXPECT_TRUE(c.sim.two_phase);
  EXPECT_EQ(c.sla_minutes, 45.0);
  EXPECT_EQ(c.sim.relocation_distance_km, 3.0);
  EXPECT_EQ(c.sim.courier_capacity, 2);
  EXPECT_EQ(c.orders_path, dir.path() / "data/o.csv");

  EXPECT_THROW(LoadRunConfig(dir.Write("bad.ini", "[grid]\ncolour = red\n")),
               UsageError);
  EXPECT_THROW(LoadRunConfig(dir.Write("bad2.ini", "[grid]\nrows = many\n")),
               UsageError);
  EXPECT_THROW(LoadRunConfig(dir.path() / "absent.ini"), DataError);
}

TEST(RunConfigTest, WriteThenLoadRoundTrips) {
  TempDir dir;
  RunConfig c = DefaultRunConfig();
  c.sim.rows = 7;
  c.sim.detour_threshold = 1.75;
  c.sim.exclude_repositioning_cost = true;
  c.sim.predictor.kind = PredictorKind::kReplayOracle;
  c.sla_minutes = 30;
  c.orders_path = dir.path() / "o.csv";
  std::ostringstream out;
  WriteRunConfig(out, c);
  RunConfig back = LoadRunConfig(dir.Write("echo.ini", out.str()));
  std::ostringstream again;
  WriteRunConfig(again, back);
  EXPECT_EQ(out.str(), again.str());
  EXPECT_EQ(back.sim.rows, 7);
  EXPECT_EQ(back.sim.predictor.kind, PredictorKind::kReplayOracle);
}

TEST(ReportWritersTest, SeriesAndPlanHeaders) {
  MetricsReport r;
  IntervalMetrics m;
  m.interval = 3;
  m.vehicle_count = 2;
  m.delivered = 4;
  m.profit = 12.5;
  m.service_minutes_sum = 40;
  r.series.push_back(m);
  std::ostringstream series;
  WriteSeries(series, r);
  EXPECT_EQ(series.str(),
            "interval,vehicle_count,orders_served,profit,mean_service_minutes\n"
            "3,2,4,12.5,10\n");
  std::ostringstream plan;
  const std::vector<PlanRow> rows{{1, 2, 3, 4, 1, 2.0, 4.0, 50}};
  WritePlan(plan, rows);
  EXPECT_EQ(plan.str(),
            "interval,courier_id,restaurant_id,order_id,seq_in_batch,pickup_km,"
            "leg_km,fee\n1,2,3,4,1,2,4,50\n");
  std::ostringstream routes;
  const std::vector<RouteRow> steps{{0, 5, 1, CellId{3}, CellId{4}, 1.5}};
  WriteRoutes(routes, steps);
  EXPECT_EQ(routes.str(),
            "interval,courier_id,step,from_cell,to_cell,gain\n0,5,1,3,4,1.5\n");
}

}  // namespace
}  // namespace dispatch
