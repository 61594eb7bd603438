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

#include "dispatch/io.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "dispatch/errors.h"

namespace dispatch {
namespace {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> Split(std::string_view line, char sep = ',') {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    fields.push_back(Trim(line.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

template <typename T>
std::optional<T> ParseNumber(std::string_view text) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) return std::nullopt;
  return value;
}

struct CsvRow {
  int line = 0;
  std::vector<std::string_view> fields;
};

// Holds the text the rows point into.
struct CsvTable {
  std::vector<std::string> lines;
  std::vector<CsvRow> rows;
};

CsvTable ReadCsv(std::istream& in, std::string_view source,
                 std::string_view header) {
  CsvTable table;
  std::string line;
  while (std::getline(in, line)) table.lines.push_back(line);
  std::size_t i = 0;
  while (i < table.lines.size() && Trim(table.lines[i]).empty()) ++i;
  if (i == table.lines.size()) {
    throw DataError(fmt::format("{}: missing header '{}'", source, header));
  }
  if (Trim(table.lines[i]) != header) {
    throw DataError(fmt::format("{}:{}: expected header '{}', got '{}'", source,
                                i + 1, header, Trim(table.lines[i])));
  }
  const std::size_t width = Split(header).size();
  for (++i; i < table.lines.size(); ++i) {
    const std::string_view text = Trim(table.lines[i]);
    if (text.empty() || text.front() == '#') continue;
    CsvRow row{static_cast<int>(i + 1), Split(text)};
    if (row.fields.size() != width) {
      throw DataError(fmt::format("{}:{}: expected {} fields, got {}", source,
                                  row.line, width, row.fields.size()));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

template <typename T>
T Field(const CsvRow& row, std::size_t i, std::string_view source,
        std::string_view name) {
  auto v = ParseNumber<T>(row.fields[i]);
  if (!v) {
    throw DataError(fmt::format("{}:{}: bad {} '{}'", source, row.line, name,
                                row.fields[i]));
  }
  return *v;
}

std::ifstream OpenInput(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open '{}'", path.string()));
  return in;
}

double ParseDoubleValue(std::string_view key, std::string_view text) {
  auto v = ParseNumber<double>(text);
  if (!v) throw UsageError(fmt::format("{}: expected a number, got '{}'", key, text));
  return *v;
}

int ParseIntValue(std::string_view key, std::string_view text) {
  auto v = ParseNumber<int>(text);
  if (!v) throw UsageError(fmt::format("{}: expected an integer, got '{}'", key, text));
  return *v;
}

std::uint64_t ParseSeedValue(std::string_view key, std::string_view text) {
  auto v = ParseNumber<std::uint64_t>(text);
  if (!v) throw UsageError(fmt::format("{}: expected a seed, got '{}'", key, text));
  return *v;
}

bool ParseBoolValue(std::string_view key, std::string_view text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw UsageError(fmt::format("{}: expected true or false, got '{}'", key, text));
}

using Setter = std::function<void(RunConfig&, std::string_view key,
                                  const std::string& value)>;

const std::map<std::string, Setter>& Setters() {
  static const auto* setters = new std::map<std::string, Setter>{
      {"grid.rows", [](RunConfig& c, auto k, const auto& v) { c.sim.rows = ParseIntValue(k, v); }},
      {"grid.cols", [](RunConfig& c, auto k, const auto& v) { c.sim.cols = ParseIntValue(k, v); }},
      {"grid.cell_size_km", [](RunConfig& c, auto k, const auto& v) { c.sim.cell_size_km = ParseDoubleValue(k, v); }},
      {"demand.predictor", [](RunConfig& c, auto, const auto& v) { c.sim.predictor.kind = ParsePredictorKind(v); }},
      {"demand.horizon", [](RunConfig& c, auto k, const auto& v) { c.sim.predictor.horizon = ParseIntValue(k, v); }},
      {"demand.seed", [](RunConfig& c, auto k, const auto& v) { c.sim.predictor.seed = ParseSeedValue(k, v); }},
      {"demand.expected_values", [](RunConfig& c, auto k, const auto& v) { c.sim.predictor.expected_values = ParseBoolValue(k, v); }},
      {"demand.lunch_multiplier", [](RunConfig& c, auto k, const auto& v) { c.peaks.lunch_multiplier = ParseDoubleValue(k, v); }},
      {"demand.dinner_multiplier", [](RunConfig& c, auto k, const auto& v) { c.peaks.dinner_multiplier = ParseDoubleValue(k, v); }},
      {"demand.night_multiplier", [](RunConfig& c, auto k, const auto& v) { c.peaks.night_multiplier = ParseDoubleValue(k, v); }},
      {"routing.relocation_distance_km", [](RunConfig& c, auto k, const auto& v) { c.sim.relocation_distance_km = ParseDoubleValue(k, v); }},
      {"routing.reposition_floor", [](RunConfig& c, auto k, const auto& v) { c.sim.reposition_floor = ParseDoubleValue(k, v); }},
      {"allocation.pickup_threshold_km", [](RunConfig& c, auto k, const auto& v) { c.sim.pickup_threshold_km = ParseDoubleValue(k, v); }},
      {"allocation.delivery_radius_km", [](RunConfig& c, auto k, const auto& v) { c.sim.delivery_radius_km = ParseDoubleValue(k, v); }},
      {"allocation.detour_threshold", [](RunConfig& c, auto k, const auto& v) { c.sim.detour_threshold = ParseDoubleValue(k, v); }},
      {"allocation.cost_per_km", [](RunConfig& c, auto k, const auto& v) { c.sim.cost_per_km = ParseDoubleValue(k, v); }},
      {"allocation.two_phase", [](RunConfig& c, auto k, const auto& v) { c.sim.two_phase = ParseBoolValue(k, v); }},
      {"allocation.sla_minutes", [](RunConfig& c, auto k, const auto& v) { c.sla_minutes = ParseDoubleValue(k, v); }},
      {"simulator.interval_minutes", [](RunConfig& c, auto k, const auto& v) { c.sim.interval_minutes = ParseIntValue(k, v); }},
      {"simulator.interval_count", [](RunConfig& c, auto k, const auto& v) { c.sim.interval_count = ParseIntValue(k, v); }},
      {"simulator.speed_km_per_min", [](RunConfig& c, auto k, const auto& v) { c.sim.speed_km_per_min = ParseDoubleValue(k, v); }},
      {"simulator.max_wait_intervals", [](RunConfig& c, auto k, const auto& v) { c.sim.max_wait_intervals = ParseIntValue(k, v); }},
      {"simulator.exclude_repositioning_cost", [](RunConfig& c, auto k, const auto& v) { c.sim.exclude_repositioning_cost = ParseBoolValue(k, v); }},
      {"simulator.seed", [](RunConfig& c, auto k, const auto& v) { c.sim.seed = ParseSeedValue(k, v); }},
      {"fleet.couriers", [](RunConfig& c, auto k, const auto& v) { c.courier_count = ParseIntValue(k, v); }},
      {"fleet.capacity", [](RunConfig& c, auto k, const auto& v) { c.sim.courier_capacity = ParseIntValue(k, v); }},
      {"input.orders", [](RunConfig& c, auto, const auto& v) { c.orders_path = v; }},
      {"input.graph", [](RunConfig& c, auto, const auto& v) { c.graph_path = v; }},
      {"input.rates", [](RunConfig& c, auto, const auto& v) { c.rates_path = v; }},
      {"input.couriers", [](RunConfig& c, auto, const auto& v) { c.couriers_path = v; }},
  };
  return *setters;
}

std::string Num(double v) { return fmt::format("{}", v); }

}  // namespace

std::int64_t ParseTimestamp(std::string_view text) {
  text = Trim(text);
  if (auto epoch = ParseNumber<std::int64_t>(text)) return *epoch;
  const std::string s(text);
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, sec = 0;
  int consumed = 0;
  if (std::sscanf(s.c_str(), "%4d-%2d-%2d%*1[T ]%2d:%2d%n", &y, &mo, &d, &h,
                  &mi, &consumed) != 5) {
    throw DataError(fmt::format("bad timestamp '{}'", text));
  }
  std::string_view rest = std::string_view(s).substr(consumed);
  if (!rest.empty() && rest.front() == ':') {
    auto v = ParseNumber<int>(rest.substr(1, 2));
    if (!v || rest.size() < 3) throw DataError(fmt::format("bad timestamp '{}'", text));
    sec = *v;
    rest.remove_prefix(3);
  }
  if (rest == "Z") rest = {};
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!rest.empty() || !ymd.ok() || h > 23 || mi > 59 || sec > 60) {
    throw DataError(fmt::format("bad timestamp '{}'", text));
  }
  const auto days = sys_days{ymd}.time_since_epoch().count();
  return static_cast<std::int64_t>(days) * 86400 + h * 3600 + mi * 60 + sec;
}

OrderLog ReadOrders(std::istream& in, std::string_view source, const Grid& grid,
                    int interval_minutes, int interval_count) {
  TimeInterval{0, interval_minutes}.Validate();
  const CsvTable table =
      ReadCsv(in, source, "order_id,timestamp,pickup_cell,dropoff_cell,fee");
  std::vector<std::pair<OrderRecord, int>> records;  // with line
  std::set<int> ids;
  for (const auto& row : table.rows) {
    OrderRecord r;
    r.order_id = Field<int>(row, 0, source, "order_id");
    try {
      r.timestamp = ParseTimestamp(row.fields[1]);
    } catch (const DataError& e) {
      throw DataError(fmt::format("{}:{}: {}", source, row.line, e.what()));
    }
    r.pickup = CellId{Field<int>(row, 2, source, "pickup_cell")};
    r.dropoff = CellId{Field<int>(row, 3, source, "dropoff_cell")};
    r.fee = Field<double>(row, 4, source, "fee");
    if (!grid.Contains(r.pickup) || !grid.Contains(r.dropoff)) {
      throw DataError(fmt::format("{}:{}: cell outside the {}x{} grid", source,
                                  row.line, grid.rows(), grid.cols()));
    }
    if (!(r.fee > 0.0)) {
      throw DataError(fmt::format("{}:{}: fee must be positive", source, row.line));
    }
    if (!ids.insert(r.order_id).second) {
      throw DataError(fmt::format("{}:{}: duplicate order_id {}", source,
                                  row.line, r.order_id));
    }
    records.emplace_back(r, row.line);
  }

  OrderLog log;
  if (records.empty()) return log;
  std::int64_t first = records.front().first.timestamp;
  for (const auto& [r, line] : records) first = std::min(first, r.timestamp);
  log.day_start = first - ((first % 86400) + 86400) % 86400;
  const std::int64_t length = static_cast<std::int64_t>(interval_minutes) * 60;
  std::set<int> restaurant_cells;
  for (const auto& [r, line] : records) {
    const std::int64_t k = (r.timestamp - log.day_start) / length;
    if (k >= interval_count) {
      throw DataError(fmt::format("{}:{}: timestamp falls in interval {}, past "
                                  "the {}-interval horizon",
                                  source, line, k, interval_count));
    }
    log.orders.push_back({r.order_id, r.pickup.index, r.dropoff, r.fee,
                          TimeInterval{static_cast<int>(k), interval_minutes},
                          {}});
    restaurant_cells.insert(r.pickup.index);
  }
  std::sort(log.orders.begin(), log.orders.end(),
            [](const Order& a, const Order& b) {
              return std::tie(a.placed_at.index, a.id) <
                     std::tie(b.placed_at.index, b.id);
            });
  for (int cell : restaurant_cells) log.restaurants.push_back({cell, CellId{cell}});
  return log;
}

OrderLog ReadOrdersFile(const fs::path& path, const Grid& grid,
                        int interval_minutes, int interval_count) {
  auto in = OpenInput(path);
  return ReadOrders(in, path.string(), grid, interval_minutes, interval_count);
}

void WriteOrders(std::ostream& out, std::span<const Order> orders,
                 std::span<const Restaurant> restaurants, std::int64_t day_start,
                 int interval_minutes) {
  std::map<int, CellId> cells;
  for (const auto& r : restaurants) cells[r.id] = r.cell;
  fmt::print(out, "order_id,timestamp,pickup_cell,dropoff_cell,fee\n");
  for (const auto& o : orders) {
    const std::int64_t t =
        day_start + static_cast<std::int64_t>(o.placed_at.index) * interval_minutes * 60;
    fmt::print(out, "{},{},{},{},{}\n", o.id, t, cells.at(o.restaurant_id).index,
               o.dropoff.index, Num(o.fee));
  }
}

std::vector<EdgeOverride> ReadGraphFile(const fs::path& path) {
  auto in = OpenInput(path);
  const std::string source = path.string();
  const CsvTable table = ReadCsv(in, source, "src_cell,dst_cell,distance_km");
  std::vector<EdgeOverride> edges;
  for (const auto& row : table.rows) {
    edges.push_back({CellId{Field<int>(row, 0, source, "src_cell")},
                     CellId{Field<int>(row, 1, source, "dst_cell")},
                     Field<double>(row, 2, source, "distance_km")});
  }
  return edges;
}

std::vector<OdRate> ReadRatesFile(const fs::path& path) {
  auto in = OpenInput(path);
  const std::string source = path.string();
  const CsvTable table =
      ReadCsv(in, source, "origin_cell,dest_cell,base_rate_per_interval");
  std::vector<OdRate> rates;
  for (const auto& row : table.rows) {
    OdRate r{CellId{Field<int>(row, 0, source, "origin_cell")},
             CellId{Field<int>(row, 1, source, "dest_cell")},
             Field<double>(row, 2, source, "base_rate_per_interval")};
    if (!(r.base_rate >= 0.0)) {
      throw DataError(fmt::format("{}:{}: negative rate", source, row.line));
    }
    rates.push_back(r);
  }
  return rates;
}

void WriteRates(std::ostream& out, std::span<const OdRate> rates) {
  fmt::print(out, "origin_cell,dest_cell,base_rate_per_interval\n");
  for (const auto& r : rates) {
    fmt::print(out, "{},{},{}\n", r.origin.index, r.destination.index,
               Num(r.base_rate));
  }
}

std::vector<Courier> ReadCouriersFile(const fs::path& path) {
  auto in = OpenInput(path);
  const std::string source = path.string();
  const CsvTable table = ReadCsv(in, source, "courier_id,cell,capacity");
  std::vector<Courier> couriers;
  std::set<int> ids;
  for (const auto& row : table.rows) {
    Courier c{Field<int>(row, 0, source, "courier_id"),
              CellId{Field<int>(row, 1, source, "cell")},
              Field<int>(row, 2, source, "capacity"), CourierStatus::kIdle};
    if (c.capacity < 1) {
      throw DataError(fmt::format("{}:{}: capacity must be >= 1", source, row.line));
    }
    if (!ids.insert(c.id).second) {
      throw DataError(fmt::format("{}:{}: duplicate courier_id {}", source,
                                  row.line, c.id));
    }
    couriers.push_back(c);
  }
  return couriers;
}

void WriteCouriers(std::ostream& out, std::span<const Courier> couriers) {
  fmt::print(out, "courier_id,cell,capacity\n");
  for (const auto& c : couriers) {
    fmt::print(out, "{},{},{}\n", c.id, c.location.index, c.capacity);
  }
}

RunConfig DefaultRunConfig() {
  RunConfig c;
  c.peaks.lunch_multiplier = 2.5;
  c.peaks.dinner_multiplier = 2.5;
  c.peaks.night_multiplier = 0.2;
  return c;
}

RunConfig LoadRunConfig(const fs::path& path) {
  auto in = OpenInput(path);
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw UsageError(fmt::format("{}:{}: {}", path.string(), e.line(), e.message()));
  }
  RunConfig config = DefaultRunConfig();
  for (const auto& [section, keys] : tree) {
    if (keys.empty() && !keys.data().empty()) {
      throw UsageError(fmt::format("{}: key '{}' outside any section",
                                   path.string(), section));
    }
    for (const auto& [key, value] : keys) {
      const std::string name = section + "." + key;
      auto it = Setters().find(name);
      if (it == Setters().end()) {
        throw UsageError(fmt::format("{}: unknown key '{}'", path.string(), name));
      }
      it->second(config, name, std::string(Trim(value.data())));
    }
  }
  const fs::path base = path.parent_path();
  for (fs::path* p : {&config.orders_path, &config.graph_path,
                      &config.rates_path, &config.couriers_path}) {
    if (!p->empty() && p->is_relative()) *p = base / *p;
  }
  return config;
}

void WriteRunConfig(std::ostream& out, const RunConfig& c) {
  const SimConfig& s = c.sim;
  fmt::print(out, "[grid]\nrows = {}\ncols = {}\ncell_size_km = {}\n\n", s.rows,
             s.cols, Num(s.cell_size_km));
  fmt::print(out,
             "[demand]\npredictor = {}\nhorizon = {}\nseed = {}\n"
             "expected_values = {}\nlunch_multiplier = {}\n"
             "dinner_multiplier = {}\nnight_multiplier = {}\n\n",
             PredictorKindName(s.predictor.kind), s.predictor.horizon,
             s.predictor.seed, s.predictor.expected_values,
             Num(c.peaks.lunch_multiplier), Num(c.peaks.dinner_multiplier),
             Num(c.peaks.night_multiplier));
  fmt::print(out, "[routing]\nrelocation_distance_km = {}\nreposition_floor = {}\n\n",
             Num(s.relocation_distance_km), Num(s.reposition_floor));
  fmt::print(out,
             "[allocation]\npickup_threshold_km = {}\ndelivery_radius_km = {}\n"
             "detour_threshold = {}\ncost_per_km = {}\ntwo_phase = {}\n",
             Num(s.pickup_threshold_km), Num(s.delivery_radius_km),
             Num(s.detour_threshold), Num(s.cost_per_km), s.two_phase);
  if (c.sla_minutes) fmt::print(out, "sla_minutes = {}\n", Num(*c.sla_minutes));
  fmt::print(out,
             "\n[simulator]\ninterval_minutes = {}\ninterval_count = {}\n"
             "speed_km_per_min = {}\nmax_wait_intervals = {}\n"
             "exclude_repositioning_cost = {}\nseed = {}\n\n",
             s.interval_minutes, s.interval_count, Num(s.speed_km_per_min),
             s.max_wait_intervals, s.exclude_repositioning_cost, s.seed);
  fmt::print(out, "[fleet]\ncouriers = {}\ncapacity = {}\n", c.courier_count,
             s.courier_capacity);
  const std::pair<const char*, const fs::path*> inputs[] = {
      {"orders", &c.orders_path},
      {"graph", &c.graph_path},
      {"rates", &c.rates_path},
      {"couriers", &c.couriers_path}};
  bool header = false;
  for (const auto& [key, p] : inputs) {
    if (p->empty()) continue;
    if (!header) fmt::print(out, "\n[input]\n");
    header = true;
    fmt::print(out, "{} = {}\n", key, p->generic_string());
  }
}

void WriteReport(std::ostream& out, const MetricsReport& r,
                 const RunConfig& config) {
  fmt::print(out, "mode = {}\n", ModeName(r.mode));
  fmt::print(out, "baselines_compared = greedy, bundling\n");
  fmt::print(out, "fleet_size = {}\n", r.fleet_size);
  fmt::print(out, "courier_capacity = {}\n", config.sim.courier_capacity);
  fmt::print(out, "relocation_distance_km = {}\n",
             Num(config.sim.relocation_distance_km));
  fmt::print(out, "total_orders = {}\n", r.total_orders);
  fmt::print(out, "vehicle_count = {}\n", r.vehicle_count);
  fmt::print(out, "courier_dispatches = {}\n", r.courier_dispatches);
  fmt::print(out, "assigned = {}\n", r.assigned);
  fmt::print(out, "efficiency = {}\n", r.efficiency);
  fmt::print(out, "expired = {}\n", r.expired);
  fmt::print(out, "pending_at_end = {}\n", r.pending_at_end);
  fmt::print(out, "fees = {}\n", Num(r.fees));
  fmt::print(out, "delivery_km = {}\n", Num(r.delivery_km));
  fmt::print(out, "reposition_km = {}\n", Num(r.reposition_km));
  fmt::print(out, "profit = {}\n", Num(r.profit));
  fmt::print(out, "mean_service_time_minutes = {:.4f}\n",
             r.mean_service_time_minutes);
  fmt::print(out, "trips = {}\n", r.trips);
  fmt::print(out, "max_trip_orders = {}\n", r.max_trip_orders);
  fmt::print(out, "max_detour_ratio = {:.6f}\n", r.max_detour_ratio);
  fmt::print(out, "\n{:>8} {:>6} {:>8} {:>9} {:>7} {:>7} {:>8} {:>11} {:>12}\n",
             "interval", "new", "vehicles", "delivered", "expired", "pending",
             "repos", "profit", "service_min");
  for (const auto& m : r.series) {
    fmt::print(out, "{:>8} {:>6} {:>8} {:>9} {:>7} {:>7} {:>8} {:>11.2f} {:>12.2f}\n",
               m.interval, m.new_orders, m.vehicle_count, m.delivered, m.expired,
               m.pending_after, m.repositioned, m.profit, m.mean_service_minutes());
  }
}

void WriteSeries(std::ostream& out, const MetricsReport& r) {
  fmt::print(out, "interval,vehicle_count,orders_served,profit,mean_service_minutes\n");
  for (const auto& m : r.series) {
    fmt::print(out, "{},{},{},{},{}\n", m.interval, m.vehicle_count, m.delivered,
               Num(m.profit), Num(m.mean_service_minutes()));
  }
}

void WritePlan(std::ostream& out, std::span<const PlanRow> rows) {
  fmt::print(out,
             "interval,courier_id,restaurant_id,order_id,seq_in_batch,pickup_km,"
             "leg_km,fee\n");
  for (const auto& r : rows) {
    fmt::print(out, "{},{},{},{},{},{},{},{}\n", r.interval, r.courier_id,
               r.restaurant_id, r.order_id, r.seq_in_batch, Num(r.pickup_km),
               Num(r.leg_km), Num(r.fee));
  }
}

void WriteRoutes(std::ostream& out, std::span<const RouteRow> rows) {
  fmt::print(out, "interval,courier_id,step,from_cell,to_cell,gain\n");
  for (const auto& r : rows) {
    fmt::print(out, "{},{},{},{},{},{}\n", r.interval, r.courier_id, r.step,
               r.from.index, r.to.index, Num(r.gain));
  }
}

}  // namespace dispatch
