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

// Delimited-text readers and writers: order logs, graph fixtures, rate
// tables, fleets, run configs and reports.

#ifndef DISPATCH_IO_H_
#define DISPATCH_IO_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dispatch/allocation.h"
#include "dispatch/demand.h"
#include "dispatch/grid.h"
#include "dispatch/simulator.h"

namespace dispatch {

struct OrderRecord {
  int order_id = 0;
  std::int64_t timestamp = 0;  // epoch seconds, UTC
  CellId pickup;
  CellId dropoff;
  double fee = 0.0;
};

// Accepts epoch seconds or ISO-8601 `YYYY-MM-DDTHH:MM[:SS][Z]`. Throws
// DataError otherwise.
std::int64_t ParseTimestamp(std::string_view text);

struct OrderLog {
  // Midnight UTC of the earliest record's day.
  std::int64_t day_start = 0;
  // Sorted by (placed_at, id). Restaurant ids are pickup cell indices.
  std::vector<Order> orders;
  std::vector<Restaurant> restaurants;
};

// Reads `order_id,timestamp,pickup_cell,dropoff_cell,fee` and buckets each
// record into interval floor((t - day_start) / interval). Throws DataError
// naming the line on malformed rows, cells outside the grid, duplicate ids
// or records past the horizon.
OrderLog ReadOrders(std::istream& in, std::string_view source, const Grid& grid,
                    int interval_minutes, int interval_count);
OrderLog ReadOrdersFile(const std::filesystem::path& path, const Grid& grid,
                        int interval_minutes, int interval_count);

// Timestamps are written as the start of each order's interval.
void WriteOrders(std::ostream& out, std::span<const Order> orders,
                 std::span<const Restaurant> restaurants, std::int64_t day_start,
                 int interval_minutes);

// `src_cell,dst_cell,distance_km`.
std::vector<EdgeOverride> ReadGraphFile(const std::filesystem::path& path);

// `origin_cell,dest_cell,base_rate_per_interval`.
std::vector<OdRate> ReadRatesFile(const std::filesystem::path& path);
void WriteRates(std::ostream& out, std::span<const OdRate> rates);

// `courier_id,cell,capacity`.
std::vector<Courier> ReadCouriersFile(const std::filesystem::path& path);
void WriteCouriers(std::ostream& out, std::span<const Courier> couriers);

// Everything a run needs, as read from the config file and flags.
struct RunConfig {
  SimConfig sim;
  PeakProfile peaks;
  std::optional<double> sla_minutes;
  int courier_count = 40;
  std::filesystem::path orders_path;
  std::filesystem::path graph_path;
  std::filesystem::path rates_path;
  std::filesystem::path couriers_path;
};

// INI file with sections grid, demand, routing, allocation, simulator,
// fleet and input. Relative input paths resolve against the file's
// directory. Throws UsageError on unknown keys or bad values, DataError
// when the file cannot be read.
RunConfig LoadRunConfig(const std::filesystem::path& path);
RunConfig DefaultRunConfig();
void WriteRunConfig(std::ostream& out, const RunConfig& config);

void WriteReport(std::ostream& out, const MetricsReport& report,
                 const RunConfig& config);
// `interval,vehicle_count,orders_served,profit,mean_service_minutes`.
void WriteSeries(std::ostream& out, const MetricsReport& report);
// `interval,courier_id,restaurant_id,order_id,seq_in_batch,pickup_km,leg_km,fee`.
void WritePlan(std::ostream& out, std::span<const PlanRow> rows);
// `interval,courier_id,step,from_cell,to_cell,gain`.
void WriteRoutes(std::ostream& out, std::span<const RouteRow> rows);

}  // namespace dispatch

#endif  // DISPATCH_IO_H_
