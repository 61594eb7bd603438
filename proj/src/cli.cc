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

#include "dispatch/cli.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <numbers>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "dispatch/errors.h"
#include "dispatch/scenario.h"

namespace dispatch {
namespace {

namespace fs = std::filesystem;

constexpr double kEarthRadiusKm = 6371.0088;
// Midnight UTC, 2024-01-01; day of the generated order logs.
constexpr std::int64_t kSyntheticDayStart = 1704067200;

constexpr Mode kAllModes[] = {Mode::kProposed, Mode::kGreedy, Mode::kBundling};
constexpr Mode kBaselines[] = {Mode::kGreedy, Mode::kBundling};
constexpr MetricKind kMetrics[] = {MetricKind::kVehicleCount,
                                   MetricKind::kEfficiency, MetricKind::kProfit,
                                   MetricKind::kServiceTime};

void WriteFile(const fs::path& path, const std::function<void(std::ostream&)>& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
  body(out);
  if (!out) throw DataError(fmt::format("failed writing '{}'", path.string()));
}

void MakeDirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw DataError(fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
  }
}

std::string Num(double v) { return fmt::format("{}", v); }

std::string Join(const std::vector<double>& values) {
  return fmt::format("{}", fmt::join(values, ","));
}

// Options shared by run and sweep.
struct RunOptions {
  std::string config_path;
  std::string orders_path;
  std::string graph_path;
  std::string out_dir;
  std::string mode = "proposed";
  std::optional<std::uint64_t> seed;
  std::vector<double> sweep_relocation;
  std::vector<int> sweep_capacity;
  bool dump_flow = false;
  bool exclude_repositioning_cost = false;
};

void AddRunOptions(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--config", o.config_path, "INI run configuration");
  cmd->add_option("--orders", o.orders_path, "order log CSV");
  cmd->add_option("--graph", o.graph_path, "distance overrides CSV");
  cmd->add_option("--out", o.out_dir, "output directory")->required();
  cmd->add_option("--mode", o.mode, "proposed, greedy, bundling or all")
      ->check(CLI::IsMember({"proposed", "greedy", "bundling", "all"}));
  cmd->add_option("--seed", o.seed, "seed for fleet placement and prediction");
  cmd->add_flag("--dump-flow", o.dump_flow, "write every flow solve");
  cmd->add_flag("--exclude-repositioning-cost", o.exclude_repositioning_cost,
                "leave repositioning km out of profit");
}

RunConfig ResolveConfig(const RunOptions& o) {
  RunConfig config =
      o.config_path.empty() ? DefaultRunConfig() : LoadRunConfig(o.config_path);
  if (!o.orders_path.empty()) config.orders_path = o.orders_path;
  if (!o.graph_path.empty()) config.graph_path = o.graph_path;
  if (o.seed) {
    config.sim.seed = *o.seed;
    config.sim.predictor.seed = *o.seed;
  }
  if (o.exclude_repositioning_cost) config.sim.exclude_repositioning_cost = true;
  return config;
}

std::vector<Mode> Modes(const std::string& name) {
  if (name == "all") return {std::begin(kAllModes), std::end(kAllModes)};
  return {ParseMode(name)};
}

void WriteManifest(const fs::path& dir, std::string_view command,
                   const RunOptions& o, const RunConfig& config) {
  WriteFile(dir / "manifest.ini", [&](std::ostream& out) {
    fmt::print(out, "[run]\ncommand = {}\nconfig = {}\nmode = {}\nout = {}\n",
               command, o.config_path, o.mode, o.out_dir);
    if (!o.sweep_relocation.empty()) {
      fmt::print(out, "sweep_relocation = {}\n", Join(o.sweep_relocation));
    }
    if (!o.sweep_capacity.empty()) {
      fmt::print(out, "sweep_capacity = {}\n", fmt::join(o.sweep_capacity, ","));
    }
    fmt::print(out, "dump_flow = {}\n\n", o.dump_flow);
    WriteRunConfig(out, config);
  });
}

using Reports = std::map<Mode, MetricsReport>;

// Runs every requested mode on one config and writes its files into `dir`.
Reports RunCell(const RunConfig& config, const Scenario& scenario,
                const std::vector<Mode>& modes, const fs::path& dir,
                bool dump_flow) {
  MakeDirs(dir);
  Reports reports;
  for (Mode mode : modes) {
    const bool flows = dump_flow && mode == Mode::kProposed;
    RunOutput run = Run(config.sim, scenario, mode, flows);
    const std::string name(ModeName(mode));
    WriteFile(dir / fmt::format("report_{}.txt", name),
              [&](std::ostream& out) { WriteReport(out, run.report, config); });
    WriteFile(dir / fmt::format("series_{}.csv", name),
              [&](std::ostream& out) { WriteSeries(out, run.report); });
    WriteFile(dir / fmt::format("plan_{}.csv", name),
              [&](std::ostream& out) { WritePlan(out, run.plan); });
    if (mode == Mode::kProposed) {
      WriteFile(dir / "routes_proposed.csv",
                [&](std::ostream& out) { WriteRoutes(out, run.routes); });
    }
    if (flows) {
      MakeDirs(dir / "flows");
      std::map<int, int> solves;
      for (const auto& f : run.flows) {
        const int n = solves[f.interval]++;
        WriteFile(dir / "flows" / fmt::format("flow_{}_{}.csv", f.interval, n),
                  [&](std::ostream& out) { WriteFlowDump(out, f.network, f.result); });
      }
    }
    reports[mode] = std::move(run.report);
  }
  return reports;
}

void PrintImprovementHeader(std::ostream& out, bool sweep) {
  fmt::print(out, "{}baseline,metric,baseline_value,proposed_value,improvement_pct\n",
             sweep ? "axis,value," : "");
}

void PrintImprovementRows(std::ostream& out, const Reports& reports,
                          std::string_view prefix) {
  if (!reports.count(Mode::kProposed)) return;
  const MetricsReport& p = reports.at(Mode::kProposed);
  for (Mode baseline : kBaselines) {
    auto it = reports.find(baseline);
    if (it == reports.end()) continue;
    for (MetricKind kind : kMetrics) {
      const double a = MetricValue(it->second, kind);
      const double v = MetricValue(p, kind);
      const auto pct = Improvement(kind, a, v);
      fmt::print(out, "{}{},{},{},{},{}\n", prefix, ModeName(baseline),
                 MetricKindName(kind), Num(a), Num(v),
                 pct ? fmt::format("{:.4f}", *pct) : std::string("undefined"));
    }
  }
}

void PrintSummary(std::ostream& out, const Reports& reports) {
  for (const auto& [mode, r] : reports) {
    fmt::print(out,
               "{:<9} vehicles={} efficiency={} profit={} service_min={:.2f}\n",
               ModeName(mode), r.vehicle_count, r.efficiency, Num(r.profit),
               r.mean_service_time_minutes);
  }
}

int CmdRun(const RunOptions& o, std::ostream& out) {
  RunConfig config = ResolveConfig(o);
  const Scenario scenario = LoadScenario(config);
  const fs::path dir(o.out_dir);
  MakeDirs(dir);
  WriteManifest(dir, "run", o, config);
  const auto modes = Modes(o.mode);
  const Reports reports = RunCell(config, scenario, modes, dir, o.dump_flow);
  if (o.mode == "all") {
    WriteFile(dir / "improvement.csv", [&](std::ostream& f) {
      PrintImprovementHeader(f, false);
      PrintImprovementRows(f, reports, "");
    });
  }
  PrintSummary(out, reports);
  return kExitOk;
}

struct SweepCell {
  std::string axis;
  double value = 0.0;
  RunConfig config;
  Scenario scenario;
};

int CmdSweep(const RunOptions& o, std::ostream& out) {
  if (o.sweep_relocation.empty() && o.sweep_capacity.empty()) {
    throw UsageError("sweep needs --sweep-relocation or --sweep-capacity");
  }
  RunConfig base = ResolveConfig(o);
  const Scenario scenario = LoadScenario(base);
  const fs::path dir(o.out_dir);
  MakeDirs(dir);
  WriteManifest(dir, "sweep", o, base);

  std::vector<SweepCell> cells;
  for (double km : o.sweep_relocation) {
    SweepCell cell{"relocation", km, base, scenario};
    cell.config.sim.relocation_distance_km = km;
    cells.push_back(std::move(cell));
  }
  for (int cap : o.sweep_capacity) {
    SweepCell cell{"capacity", static_cast<double>(cap), base, scenario};
    cell.config.sim.courier_capacity = cap;
    for (auto& c : cell.scenario.fleet) c.capacity = cap;
    cells.push_back(std::move(cell));
  }
  for (const auto& cell : cells) cell.config.sim.Validate();

  const auto modes = Modes(o.mode);
  std::vector<std::future<Reports>> futures;
  for (const auto& cell : cells) {
    const fs::path sub = dir / fmt::format("{}_{}", cell.axis, Num(cell.value));
    futures.push_back(std::async(std::launch::async, [&cell, sub, &modes, &o] {
      return RunCell(cell.config, cell.scenario, modes, sub, o.dump_flow);
    }));
  }
  std::vector<Reports> results;
  for (auto& f : futures) results.push_back(f.get());

  WriteFile(dir / "sweep_summary.csv", [&](std::ostream& f) {
    fmt::print(f, "axis,value,mode,vehicle_count,efficiency,profit,"
                  "mean_service_minutes\n");
    for (std::size_t i = 0; i < cells.size(); ++i) {
      for (const auto& [mode, r] : results[i]) {
        fmt::print(f, "{},{},{},{},{},{},{}\n", cells[i].axis, Num(cells[i].value),
                   ModeName(mode), r.vehicle_count, r.efficiency, Num(r.profit),
                   Num(r.mean_service_time_minutes));
      }
    }
  });
  if (o.mode == "all") {
    WriteFile(dir / "improvement.csv", [&](std::ostream& f) {
      PrintImprovementHeader(f, true);
      for (std::size_t i = 0; i < cells.size(); ++i) {
        PrintImprovementRows(
            f, results[i],
            fmt::format("{},{},", cells[i].axis, Num(cells[i].value)));
      }
    });
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    fmt::print(out, "[{} = {}]\n", cells[i].axis, Num(cells[i].value));
    PrintSummary(out, results[i]);
  }
  return kExitOk;
}

struct GenOptions {
  std::string out_dir;
  std::uint64_t seed = 7;
  int rows = 10;
  int cols = 10;
  int couriers = 40;
  int capacity = 3;
  int restaurants = 50;
  double orders_per_day = 2000.0;
};

int CmdGenSynthetic(const GenOptions& g, std::ostream& out) {
  SyntheticCityParams p;
  p.seed = g.seed;
  p.rows = g.rows;
  p.cols = g.cols;
  p.courier_count = g.couriers;
  p.courier_capacity = g.capacity;
  p.restaurant_count = g.restaurants;
  p.orders_per_day = g.orders_per_day;
  const SyntheticCity city = BuildSyntheticCity(p);
  const auto orders = SampleOrders(city, p, p.seed);
  const fs::path dir(g.out_dir);
  MakeDirs(dir);
  WriteFile(dir / "orders.csv", [&](std::ostream& f) {
    WriteOrders(f, orders, city.restaurants, kSyntheticDayStart,
                p.interval_minutes);
  });
  WriteFile(dir / "rates.csv", [&](std::ostream& f) { WriteRates(f, city.rates); });
  WriteFile(dir / "couriers.csv",
            [&](std::ostream& f) { WriteCouriers(f, city.fleet); });
  RunConfig config = DefaultRunConfig();
  config.sim = SyntheticConfig(city, p);
  config.sim.predictor.rates.clear();
  config.sim.predictor.peaks.reset();
  config.peaks = city.peaks;
  config.courier_count = p.courier_count;
  config.orders_path = "orders.csv";
  config.rates_path = "rates.csv";
  config.couriers_path = "couriers.csv";
  WriteFile(dir / "config.ini",
            [&](std::ostream& f) { WriteRunConfig(f, config); });
  fmt::print(out, "wrote {} orders, {} rates, {} couriers to {}\n", orders.size(),
             city.rates.size(), city.fleet.size(), dir.string());
  return kExitOk;
}

int CmdValidate(const RunOptions& o, std::ostream& out) {
  RunConfig config = ResolveConfig(o);
  config.sim.Validate();
  const Scenario scenario = LoadScenario(config);
  int last = -1;
  for (const auto& order : scenario.orders) last = std::max(last, order.placed_at.index);
  fmt::print(out,
             "ok: grid {}x{}, {} orders in {} intervals, {} restaurants, "
             "{} couriers, predictor {}\n",
             scenario.world.grid.rows(), scenario.world.grid.cols(),
             scenario.orders.size(), last + 1, scenario.restaurants.size(),
             scenario.fleet.size(), PredictorKindName(config.sim.predictor.kind));
  return kExitOk;
}

struct GeoOptions {
  double lat = 0.0;
  double lon = 0.0;
  double origin_lat = 0.0;
  double origin_lon = 0.0;
  std::string config_path;
  std::optional<int> rows;
  std::optional<int> cols;
  std::optional<double> cell_size_km;
};

int CmdGeoToCell(const GeoOptions& g, std::ostream& out) {
  RunConfig config =
      g.config_path.empty() ? DefaultRunConfig() : LoadRunConfig(g.config_path);
  const Grid grid(g.rows.value_or(config.sim.rows), g.cols.value_or(config.sim.cols),
                  g.cell_size_km.value_or(config.sim.cell_size_km));
  const CellId cell = GeoToCell(g.lat, g.lon, g.origin_lat, g.origin_lon, grid);
  fmt::print(out, "{}\n", cell.index);
  return kExitOk;
}

}  // namespace

CellId GeoToCell(double lat, double lon, double origin_lat, double origin_lon,
                 const Grid& grid) {
  constexpr double kRad = std::numbers::pi / 180.0;
  const double mid = (lat + origin_lat) / 2.0 * kRad;
  const double north_km = (lat - origin_lat) * kRad * kEarthRadiusKm;
  const double east_km = (lon - origin_lon) * kRad * kEarthRadiusKm * std::cos(mid);
  const double row = std::floor(north_km / grid.cell_size_km());
  const double col = std::floor(east_km / grid.cell_size_km());
  if (row < 0 || col < 0 || row >= grid.rows() || col >= grid.cols()) {
    throw DataError(fmt::format("({}, {}) lies outside the {}x{} grid", lat, lon,
                                grid.rows(), grid.cols()));
  }
  return grid.At(static_cast<int>(row), static_cast<int>(col));
}

Scenario LoadScenario(RunConfig& config) {
  SimConfig& sim = config.sim;
  sim.Validate();
  if (config.orders_path.empty()) {
    throw UsageError("no order log given; pass --orders or set input.orders");
  }
  GridWorld world = BuildGrid(sim.rows, sim.cols, sim.cell_size_km);
  if (!config.graph_path.empty()) {
    ApplyEdgeOverrides(world.grid, ReadGraphFile(config.graph_path), world.distance);
  }
  OrderLog log = ReadOrdersFile(config.orders_path, world.grid,
                                sim.interval_minutes, sim.interval_count);
  std::vector<Courier> fleet;
  if (!config.couriers_path.empty()) {
    fleet = ReadCouriersFile(config.couriers_path);
    for (const auto& c : fleet) {
      if (!world.grid.Contains(c.location)) {
        throw DataError(fmt::format("{}: courier {} on cell {} outside the grid",
                                    config.couriers_path.string(), c.id,
                                    c.location.index));
      }
    }
  } else {
    fleet = ScatterFleet(world.grid, config.courier_count, sim.courier_capacity,
                         sim.seed);
  }
  if (sim.predictor.kind == PredictorKind::kSyntheticPoisson) {
    if (config.rates_path.empty()) {
      throw UsageError("synthetic_poisson needs input.rates");
    }
    sim.predictor.rates = ReadRatesFile(config.rates_path);
    for (const auto& r : sim.predictor.rates) {
      if (!world.grid.Contains(r.origin) || !world.grid.Contains(r.destination)) {
        throw DataError(fmt::format("{}: rate {}->{} outside the grid",
                                    config.rates_path.string(), r.origin.index,
                                    r.destination.index));
      }
    }
    sim.predictor.peaks = config.peaks;
  }
  return {std::move(world), std::move(fleet), std::move(log.restaurants),
          std::move(log.orders)};
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Courier dispatch simulator"};
  app.require_subcommand(1);

  RunOptions run_opts;
  auto* run = app.add_subcommand("run", "simulate one configuration");
  AddRunOptions(run, run_opts);

  RunOptions sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "simulate a parameter sweep");
  AddRunOptions(sweep, sweep_opts);
  sweep->add_option("--sweep-relocation", sweep_opts.sweep_relocation,
                    "relocation distances in km")
      ->delimiter(',');
  sweep->add_option("--sweep-capacity", sweep_opts.sweep_capacity,
                    "courier capacities")
      ->delimiter(',');

  GenOptions gen_opts;
  auto* gen = app.add_subcommand("gen-synthetic", "write a seeded synthetic city");
  gen->add_option("--out", gen_opts.out_dir, "output directory")->required();
  gen->add_option("--seed", gen_opts.seed, "seed");
  gen->add_option("--rows", gen_opts.rows, "grid rows");
  gen->add_option("--cols", gen_opts.cols, "grid columns");
  gen->add_option("--couriers", gen_opts.couriers, "fleet size");
  gen->add_option("--capacity", gen_opts.capacity, "courier capacity");
  gen->add_option("--restaurants", gen_opts.restaurants, "restaurant cells");
  gen->add_option("--orders-per-day", gen_opts.orders_per_day, "expected orders");

  RunOptions validate_opts;
  auto* validate = app.add_subcommand("validate", "check a config and its inputs");
  validate->add_option("--config", validate_opts.config_path, "INI run configuration");
  validate->add_option("--orders", validate_opts.orders_path, "order log CSV");
  validate->add_option("--graph", validate_opts.graph_path, "distance overrides CSV");

  GeoOptions geo_opts;
  auto* geo = app.add_subcommand("geo-to-cell", "map a coordinate to a cell index");
  geo->add_option("--lat", geo_opts.lat)->required();
  geo->add_option("--lon", geo_opts.lon)->required();
  geo->add_option("--origin-lat", geo_opts.origin_lat)->required();
  geo->add_option("--origin-lon", geo_opts.origin_lon)->required();
  geo->add_option("--config", geo_opts.config_path, "INI run configuration");
  geo->add_option("--rows", geo_opts.rows);
  geo->add_option("--cols", geo_opts.cols);
  geo->add_option("--cell-size", geo_opts.cell_size_km);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    fmt::print(err, "error: {}\n", e.what());
    return kExitUsage;
  }

  try {
    if (run->parsed()) return CmdRun(run_opts, out);
    if (sweep->parsed()) return CmdSweep(sweep_opts, out);
    if (gen->parsed()) return CmdGenSynthetic(gen_opts, out);
    if (validate->parsed()) return CmdValidate(validate_opts, out);
    if (geo->parsed()) return CmdGeoToCell(geo_opts, out);
  } catch (const UsageError& e) {
    fmt::print(err, "usage error: {}\n", e.what());
    return kExitUsage;
  } catch (const DataError& e) {
    fmt::print(err, "data error: {}\n", e.what());
    return kExitData;
  } catch (const std::out_of_range& e) {
    fmt::print(err, "data error: {}\n", e.what());
    return kExitData;
  } catch (const InvariantError& e) {
    fmt::print(err, "invariant violated: {}\n", e.what());
    return kExitInvariant;
  } catch (const std::exception& e) {
    fmt::print(err, "internal error: {}\n", e.what());
    return kExitInvariant;
  }
  return kExitUsage;
}

}  // namespace dispatch
