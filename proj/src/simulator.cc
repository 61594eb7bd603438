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

#include "dispatch/simulator.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include <fmt/format.h>

#include "dispatch/errors.h"
#include "dispatch/routing.h"

namespace dispatch {
namespace {

constexpr double kClockSlack = 1e-9;

bool ArrivalBefore(const Order& a, const Order& b) {
  return std::tie(a.placed_at.index, a.id) < std::tie(b.placed_at.index, b.id);
}

std::map<int, CellId> RestaurantCells(std::span<const Restaurant> restaurants) {
  std::map<int, CellId> cells;
  for (const auto& r : restaurants) cells[r.id] = r.cell;
  return cells;
}

// Nearest unused courier within the pickup threshold; ties to the lower id.
int NearestFree(std::span<const Courier> couriers, const std::vector<bool>& used,
                CellId restaurant, const DistanceTable& distances,
                double threshold) {
  int best = -1;
  double best_km = kUnreachable;
  for (std::size_t i = 0; i < couriers.size(); ++i) {
    if (used[i]) continue;
    const double km = distances(couriers[i].location, restaurant);
    if (!(km <= threshold)) continue;
    if (best < 0 || km < best_km ||
        (km == best_km && couriers[i].id < couriers[best].id)) {
      best = static_cast<int>(i);
      best_km = km;
    }
  }
  return best;
}

std::vector<const Order*> DeliverableInArrivalOrder(
    const AllocationProblem& problem, const DistanceTable& distances,
    const std::map<int, CellId>& restaurant_cells) {
  std::vector<const Order*> orders;
  for (const auto& o : problem.orders) {
    const double km = distances(restaurant_cells.at(o.restaurant_id), o.dropoff);
    if (km <= problem.params.delivery_radius_km) orders.push_back(&o);
  }
  std::sort(orders.begin(), orders.end(),
            [](const Order* a, const Order* b) { return ArrivalBefore(*a, *b); });
  return orders;
}

void FillUnassigned(const AllocationProblem& problem, AllocationPlan& plan) {
  std::set<int> assigned;
  for (const auto& a : plan.assignments) {
    assigned.insert(a.batch.orders.begin(), a.batch.orders.end());
  }
  for (const auto& o : problem.orders) {
    if (!assigned.count(o.id)) plan.unassigned_orders.push_back(o.id);
  }
  std::sort(plan.unassigned_orders.begin(), plan.unassigned_orders.end());
}

}  // namespace

Mode ParseMode(std::string_view name) {
  if (name == "proposed") return Mode::kProposed;
  if (name == "greedy") return Mode::kGreedy;
  if (name == "bundling") return Mode::kBundling;
  throw UsageError(fmt::format("unknown mode '{}'", name));
}

std::string_view ModeName(Mode mode) {
  switch (mode) {
    case Mode::kProposed:
      return "proposed";
    case Mode::kGreedy:
      return "greedy";
    case Mode::kBundling:
      return "bundling";
  }
  return "unknown";
}

void SimConfig::Validate() const {
  auto positive = [](double v, std::string_view what) {
    if (!(v > 0.0)) throw UsageError(fmt::format("{} must be positive, got {}", what, v));
  };
  positive(rows, "grid rows");
  positive(cols, "grid cols");
  positive(cell_size_km, "cell_size_km");
  positive(interval_minutes, "interval_minutes");
  positive(interval_count, "interval_count");
  positive(relocation_distance_km, "relocation_distance_km");
  positive(courier_capacity, "courier_capacity");
  positive(pickup_threshold_km, "pickup_threshold_km");
  positive(delivery_radius_km, "delivery_radius_km");
  positive(speed_km_per_min, "speed_km_per_min");
  positive(max_wait_intervals, "max_wait_intervals");
  if (!(detour_threshold >= 1.0)) {
    throw UsageError(
        fmt::format("detour_threshold must be >= 1, got {}", detour_threshold));
  }
  if (!(cost_per_km >= 0.0)) {
    throw UsageError(fmt::format("cost_per_km must be >= 0, got {}", cost_per_km));
  }
  if (!(reposition_floor >= 0.0)) {
    throw UsageError(
        fmt::format("reposition_floor must be >= 0, got {}", reposition_floor));
  }
  TimeInterval{0, interval_minutes}.Validate();
  if (predictor.horizon < 1) {
    throw UsageError(
        fmt::format("predictor horizon must be >= 1, got {}", predictor.horizon));
  }
}

AllocationParams SimConfig::allocation_params() const {
  AllocationParams p;
  p.pickup_threshold_km = pickup_threshold_km;
  p.delivery_radius_km = delivery_radius_km;
  p.detour_threshold = detour_threshold;
  p.cost_per_km = cost_per_km;
  p.two_phase = two_phase;
  return p;
}

std::vector<DemandMatrix> RealizedDemand(const Scenario& scenario,
                                         int interval_count,
                                         int interval_minutes) {
  std::vector<DemandMatrix> realized;
  realized.reserve(interval_count);
  for (int k = 0; k < interval_count; ++k) {
    realized.emplace_back(TimeInterval{k, interval_minutes});
  }
  const auto cells = RestaurantCells(scenario.restaurants);
  for (const auto& o : scenario.orders) {
    const int k = o.placed_at.index;
    if (k < 0 || k >= interval_count) continue;
    auto it = cells.find(o.restaurant_id);
    if (it == cells.end()) {
      throw DataError(fmt::format("order {} names unknown restaurant {}", o.id,
                                  o.restaurant_id));
    }
    realized[k].Add(it->second, o.dropoff, 1.0);
  }
  return realized;
}

ScenarioState InitialState(const Scenario& scenario) {
  ScenarioState state;
  for (const auto& c : scenario.fleet) {
    state.couriers.push_back(
        {c.id, c.location, c.capacity, CourierStatus::kIdle, 0.0, 0});
  }
  std::sort(state.couriers.begin(), state.couriers.end(),
            [](const CourierState& a, const CourierState& b) { return a.id < b.id; });
  return state;
}

AllocationPlan BaselineGreedy(const AllocationProblem& problem,
                              const DistanceTable& distances) {
  const auto cells = RestaurantCells(problem.restaurants);
  std::vector<bool> used(problem.couriers.size(), false);
  AllocationPlan plan;
  for (const Order* o : DeliverableInArrivalOrder(problem, distances, cells)) {
    const CellId r = cells.at(o->restaurant_id);
    const int i = NearestFree(problem.couriers, used, r, distances,
                              problem.params.pickup_threshold_km);
    if (i < 0) continue;
    used[i] = true;
    Assignment a;
    a.courier_id = problem.couriers[i].id;
    a.batch = {o->restaurant_id, {o->id}, 1.0};
    a.pickup_distance_km = distances(problem.couriers[i].location, r);
    a.route_distance_km = distances(r, o->dropoff);
    a.total_fee = o->fee;
    plan.assignments.push_back(std::move(a));
  }
  FillUnassigned(problem, plan);
  return plan;
}

AllocationPlan BaselineBundling(const AllocationProblem& problem,
                                const DistanceTable& distances,
                                int bundle_capacity) {
  if (bundle_capacity < 1) {
    throw UsageError(
        fmt::format("bundle capacity must be >= 1, got {}", bundle_capacity));
  }
  const auto cells = RestaurantCells(problem.restaurants);
  std::map<int, std::vector<const Order*>> by_restaurant;
  for (const Order* o : DeliverableInArrivalOrder(problem, distances, cells)) {
    by_restaurant[o->restaurant_id].push_back(o);
  }
  std::vector<std::vector<const Order*>> bundles;
  for (const auto& [rid, orders] : by_restaurant) {
    for (std::size_t i = 0; i < orders.size(); i += bundle_capacity) {
      const std::size_t end = std::min(orders.size(), i + bundle_capacity);
      bundles.emplace_back(orders.begin() + i, orders.begin() + end);
    }
  }
  std::sort(bundles.begin(), bundles.end(), [](const auto& a, const auto& b) {
    return ArrivalBefore(*a.front(), *b.front());
  });

  std::vector<bool> used(problem.couriers.size(), false);
  AllocationPlan plan;
  for (auto& bundle : bundles) {
    const int rid = bundle.front()->restaurant_id;
    const CellId r = cells.at(rid);
    const int i = NearestFree(problem.couriers, used, r, distances,
                              problem.params.pickup_threshold_km);
    if (i < 0) continue;
    used[i] = true;
    const Courier& courier = problem.couriers[i];
    if (static_cast<int>(bundle.size()) > courier.capacity) {
      bundle.resize(courier.capacity);
    }
    // Nearest drop-off first, ties to the lower order id.
    std::vector<const Order*> sequence;
    CellId at = r;
    while (!bundle.empty()) {
      auto next = std::min_element(
          bundle.begin(), bundle.end(), [&](const Order* a, const Order* b) {
            return std::tuple(distances(at, a->dropoff), a->id) <
                   std::tuple(distances(at, b->dropoff), b->id);
          });
      sequence.push_back(*next);
      at = (*next)->dropoff;
      bundle.erase(next);
    }
    Assignment a;
    a.courier_id = courier.id;
    a.batch.restaurant_id = rid;
    std::vector<CellId> drops;
    for (const Order* o : sequence) {
      a.batch.orders.push_back(o->id);
      a.total_fee += o->fee;
      drops.push_back(o->dropoff);
    }
    a.batch.max_detour_ratio = MaxDetourRatio(distances, r, drops);
    a.pickup_distance_km = distances(courier.location, r);
    a.route_distance_km = RouteDistance(distances, r, drops);
    plan.assignments.push_back(std::move(a));
  }
  FillUnassigned(problem, plan);
  return plan;
}

StepOutput Step(const SimContext& ctx, ScenarioState& state) {
  const SimConfig& config = ctx.config;
  const Scenario& scenario = ctx.scenario;
  const DistanceTable& distances = ctx.distances;
  const int k = state.clock;
  const double now = static_cast<double>(k) * config.interval_minutes;
  StepOutput out;
  IntervalMetrics& m = out.metrics;
  m.interval = k;

  while (state.next_order < scenario.orders.size() &&
         scenario.orders[state.next_order].placed_at.index <= k) {
    state.pending.push_back(scenario.orders[state.next_order]);
    ++state.next_order;
    ++m.new_orders;
  }
  std::erase_if(state.pending, [&](const Order& o) {
    if (k - o.placed_at.index < config.max_wait_intervals) return false;
    ++m.expired;
    return true;
  });

  AllocationProblem problem;
  problem.restaurants = scenario.restaurants;
  problem.orders = state.pending;
  problem.params = config.allocation_params();
  for (auto& c : state.couriers) {
    if (c.available_at_minute <= now + kClockSlack) {
      c.status = CourierStatus::kIdle;
      problem.couriers.push_back({c.id, c.location, c.capacity, c.status});
    }
  }

  AllocationPlan plan;
  if (!problem.couriers.empty() && !problem.orders.empty()) {
    switch (ctx.mode) {
      case Mode::kProposed: {
        AllocationResult result = Solve(problem, distances);
        CheckPlan(result.plan, problem, distances);
        if (ctx.keep_flows) {
          for (std::size_t i = 0; i < result.networks.size(); ++i) {
            out.flows.push_back({k, std::move(result.networks[i].network),
                                 std::move(result.flows[i])});
          }
        }
        plan = std::move(result.plan);
        break;
      }
      case Mode::kGreedy:
        plan = BaselineGreedy(problem, distances);
        break;
      case Mode::kBundling:
        plan = BaselineBundling(problem, distances, config.courier_capacity);
        break;
    }
  }

  std::map<int, std::size_t> courier_index;
  for (std::size_t i = 0; i < state.couriers.size(); ++i) {
    courier_index[state.couriers[i].id] = i;
  }
  std::map<int, const Order*> pending_by_id;
  for (const auto& o : state.pending) pending_by_id[o.id] = &o;
  const auto restaurant_cells = RestaurantCells(scenario.restaurants);

  std::map<int, double> cursor;  // courier id -> minute its next trip starts
  std::set<int> assigned;
  for (const auto& a : plan.assignments) {
    CourierState& c = state.couriers[courier_index.at(a.courier_id)];
    if (static_cast<int>(a.batch.orders.size()) > c.capacity) {
      throw InvariantError(fmt::format("courier {} given {} orders, capacity {}",
                                       c.id, a.batch.orders.size(), c.capacity));
    }
    auto [it, fresh] = cursor.try_emplace(c.id, now);
    const double start = it->second;
    CellId at = restaurant_cells.at(a.batch.restaurant_id);
    double travelled = a.pickup_distance_km;
    int seq = 0;
    for (int oid : a.batch.orders) {
      const Order& o = *pending_by_id.at(oid);
      const double leg = distances(at, o.dropoff);
      travelled += leg;
      at = o.dropoff;
      const double delivered = start + travelled / config.speed_km_per_min;
      m.service_minutes_sum += delivered - o.placed_at.StartMinute();
      ++seq;
      out.plan.push_back({k, c.id, a.batch.restaurant_id, oid, seq,
                          seq == 1 ? a.pickup_distance_km : 0.0, leg, o.fee});
      assigned.insert(oid);
    }
    const double km = a.pickup_distance_km + a.route_distance_km;
    it->second = start + km / config.speed_km_per_min;
    c.location = at;
    c.available_at_minute = it->second;
    c.status = CourierStatus::kDelivering;
    c.deliveries += static_cast<int>(a.batch.orders.size());
    m.fees += a.total_fee;
    m.delivery_km += km;
    m.assigned += static_cast<int>(a.batch.orders.size());
    ++m.trips;
    m.max_trip_orders =
        std::max(m.max_trip_orders, static_cast<int>(a.batch.orders.size()));
    m.max_detour_ratio = std::max(m.max_detour_ratio, a.batch.max_detour_ratio);
  }
  m.delivered = m.assigned;
  m.vehicle_count = static_cast<int>(cursor.size());
  std::erase_if(state.pending,
                [&](const Order& o) { return assigned.count(o.id) > 0; });

  if (ctx.mode == Mode::kProposed) {
    const TimeInterval target{k + 1, config.interval_minutes};
    std::span<const DemandMatrix> history(ctx.realized);
    if (config.predictor.kind == PredictorKind::kReplayPrevious) {
      history = history.first(std::min<std::size_t>(k + 1, history.size()));
    }
    const DemandMatrix predicted = Predict(config.predictor, history, target);
    const GraphFamily family{
        scenario.world.grid, scenario.world.distance,
        OrderGraphFromMatrix(predicted, scenario.world.grid.cell_count())};
    for (auto& c : state.couriers) {
      if (c.available_at_minute > now + kClockSlack || cursor.count(c.id)) continue;
      if (predicted.OutgoingTotal(c.location) >= config.reposition_floor) continue;
      const auto trace = MarginalGainTrace(
          family, {c.location, config.relocation_distance_km});
      if (trace.empty()) continue;
      double km = 0.0;
      int step = 0;
      for (const auto& g : trace) {
        km += *family.distance.EdgeWeight(g.edge.from, g.edge.to);
        out.routes.push_back({k, c.id, ++step, g.edge.from, g.edge.to, g.gain});
      }
      c.location = trace.back().edge.to;
      c.available_at_minute = now + km / config.speed_km_per_min;
      c.status = CourierStatus::kRepositioning;
      m.reposition_km += km;
      ++m.repositioned;
    }
  }

  m.pending_after = static_cast<int>(state.pending.size());
  const double charged_km =
      m.delivery_km + (config.exclude_repositioning_cost ? 0.0 : m.reposition_km);
  m.profit = m.fees - config.cost_per_km * charged_km;
  ++state.clock;
  return out;
}

RunOutput Run(const SimConfig& config, const Scenario& scenario, Mode mode,
              bool keep_flows) {
  config.Validate();
  const Grid& grid = scenario.world.grid;
  const auto cells = RestaurantCells(scenario.restaurants);
  for (std::size_t i = 0; i < scenario.orders.size(); ++i) {
    const Order& o = scenario.orders[i];
    if (i > 0 && ArrivalBefore(o, scenario.orders[i - 1])) {
      throw DataError(fmt::format("order stream unsorted at order {}", o.id));
    }
    if (o.placed_at.index < 0 || o.placed_at.index >= config.interval_count) {
      throw DataError(fmt::format("order {} placed in interval {} outside [0, {})",
                                  o.id, o.placed_at.index, config.interval_count));
    }
    if (!grid.Contains(o.dropoff) || !cells.count(o.restaurant_id)) {
      throw DataError(fmt::format("order {} lies outside the grid", o.id));
    }
  }
  for (const auto& c : scenario.fleet) {
    if (!grid.Contains(c.location)) {
      throw DataError(fmt::format("courier {} lies outside the grid", c.id));
    }
  }

  const DistanceTable distances(scenario.world.distance);
  const auto realized =
      RealizedDemand(scenario, config.interval_count + config.predictor.horizon + 1,
                     config.interval_minutes);
  const SimContext ctx{config, scenario, distances, realized, mode, keep_flows};
  ScenarioState state = InitialState(scenario);

  RunOutput run;
  MetricsReport& r = run.report;
  r.mode = mode;
  r.fleet_size = static_cast<int>(scenario.fleet.size());
  r.total_orders = static_cast<int>(scenario.orders.size());
  double service_sum = 0.0;
  for (int k = 0; k < config.interval_count; ++k) {
    StepOutput step = Step(ctx, state);
    const IntervalMetrics& m = step.metrics;
    r.courier_dispatches += m.vehicle_count;
    r.assigned += m.assigned;
    r.efficiency += m.delivered;
    r.expired += m.expired;
    r.fees += m.fees;
    r.delivery_km += m.delivery_km;
    r.reposition_km += m.reposition_km;
    r.profit += m.profit;
    r.trips += m.trips;
    r.max_trip_orders = std::max(r.max_trip_orders, m.max_trip_orders);
    r.max_detour_ratio = std::max(r.max_detour_ratio, m.max_detour_ratio);
    service_sum += m.service_minutes_sum;
    r.series.push_back(m);
    run.plan.insert(run.plan.end(), step.plan.begin(), step.plan.end());
    run.routes.insert(run.routes.end(), step.routes.begin(), step.routes.end());
    for (auto& f : step.flows) run.flows.push_back(std::move(f));
  }
  r.pending_at_end = static_cast<int>(state.pending.size());
  r.mean_service_time_minutes = r.efficiency == 0 ? 0.0 : service_sum / r.efficiency;
  for (const auto& c : state.couriers) {
    if (c.deliveries > 0) ++r.vehicle_count;
  }
  if (r.efficiency + r.expired + r.pending_at_end != r.total_orders) {
    throw InvariantError(fmt::format(
        "order accounting: {} delivered + {} expired + {} pending != {}",
        r.efficiency, r.expired, r.pending_at_end, r.total_orders));
  }
  return run;
}

std::string_view MetricKindName(MetricKind kind) {
  switch (kind) {
    case MetricKind::kVehicleCount:
      return "vehicle_count";
    case MetricKind::kEfficiency:
      return "efficiency";
    case MetricKind::kProfit:
      return "profit";
    case MetricKind::kServiceTime:
      return "service_time";
  }
  return "unknown";
}

std::optional<double> Improvement(MetricKind kind, double baseline,
                                  double proposed) {
  if (proposed == 0.0) return std::nullopt;
  if (kind == MetricKind::kServiceTime) {
    return (baseline - proposed) / proposed * 100.0;
  }
  return (proposed - baseline) / proposed * 100.0;
}

double MetricValue(const MetricsReport& report, MetricKind kind) {
  switch (kind) {
    case MetricKind::kVehicleCount:
      return report.vehicle_count;
    case MetricKind::kEfficiency:
      return report.efficiency;
    case MetricKind::kProfit:
      return report.profit;
    case MetricKind::kServiceTime:
      return report.mean_service_time_minutes;
  }
  return 0.0;
}

}  // namespace dispatch
