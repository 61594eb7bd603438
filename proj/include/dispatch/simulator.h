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

// Interval-by-interval dispatch simulation and its metrics.
//
// Each interval k starting at minute t = k * L:
//   1. orders placed in k join the pending queue; orders waiting longer
//      than max_wait_intervals expire;
//   2. couriers free at t are allocated to pending orders, either by the
//      flow-based allocator or by one of the two baselines;
//   3. trips run back to back from t at constant speed;
//   4. in the proposed mode, couriers left idle in cells whose predicted
//      outgoing demand is under a floor follow a greedy repositioning route.

#ifndef DISPATCH_SIMULATOR_H_
#define DISPATCH_SIMULATOR_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dispatch/allocation.h"
#include "dispatch/demand.h"
#include "dispatch/flow.h"
#include "dispatch/grid.h"

namespace dispatch {

enum class Mode { kProposed, kGreedy, kBundling };

Mode ParseMode(std::string_view name);
std::string_view ModeName(Mode mode);

struct SimConfig {
  int rows = 10;
  int cols = 10;
  double cell_size_km = 2.0;
  int interval_minutes = 15;
  int interval_count = 96;
  double relocation_distance_km = 5.0;
  int courier_capacity = 3;
  double pickup_threshold_km = 4.0;
  double delivery_radius_km = 8.0;
  double detour_threshold = 1.5;
  double cost_per_km = 1.0;
  double speed_km_per_min = 0.5;
  // Idle couriers reposition when their cell's predicted outgoing demand is
  // below this many orders.
  double reposition_floor = 1.0;
  int max_wait_intervals = 4;
  bool exclude_repositioning_cost = false;
  bool two_phase = false;
  PredictorSpec predictor;
  std::uint64_t seed = 0;

  // Throws UsageError on non-positive sizes, distances, rates or speeds.
  void Validate() const;
  AllocationParams allocation_params() const;
};

// Everything a run consumes besides the config.
struct Scenario {
  GridWorld world;
  std::vector<Courier> fleet;
  std::vector<Restaurant> restaurants;
  // Sorted by (placed_at, id).
  std::vector<Order> orders;
};

// Realized order counts per interval, restaurant cell -> drop-off cell.
std::vector<DemandMatrix> RealizedDemand(const Scenario& scenario,
                                         int interval_count,
                                         int interval_minutes);

struct CourierState {
  int id = 0;
  CellId location;
  int capacity = 1;
  CourierStatus status = CourierStatus::kIdle;
  double available_at_minute = 0.0;
  int deliveries = 0;
};

struct ScenarioState {
  int clock = 0;  // next interval to simulate
  std::size_t next_order = 0;  // into Scenario::orders
  std::vector<CourierState> couriers;
  std::vector<Order> pending;
};

ScenarioState InitialState(const Scenario& scenario);

struct IntervalMetrics {
  int interval = 0;
  int new_orders = 0;
  int assigned = 0;
  int delivered = 0;
  int expired = 0;
  int pending_after = 0;
  // Couriers that started at least one delivery trip in this interval.
  int vehicle_count = 0;
  int repositioned = 0;
  double fees = 0.0;
  double delivery_km = 0.0;
  double reposition_km = 0.0;
  double profit = 0.0;
  double service_minutes_sum = 0.0;
  int trips = 0;
  int max_trip_orders = 0;
  double max_detour_ratio = 1.0;

  double mean_service_minutes() const {
    return delivered == 0 ? 0.0 : service_minutes_sum / delivered;
  }
};

// One row per delivered order.
struct PlanRow {
  int interval = 0;
  int courier_id = 0;
  int restaurant_id = 0;
  int order_id = 0;
  int seq_in_batch = 0;   // 1-based
  double pickup_km = 0.0;  // set on the first order of a trip only
  double leg_km = 0.0;
  double fee = 0.0;
};

// One row per repositioning edge.
struct RouteRow {
  int interval = 0;
  int courier_id = 0;
  int step = 0;  // 1-based
  CellId from;
  CellId to;
  double gain = 0.0;
};

struct FlowSnapshot {
  int interval = 0;
  FlowNetwork network;
  FlowResult result;
};

struct StepOutput {
  IntervalMetrics metrics;
  std::vector<PlanRow> plan;
  std::vector<RouteRow> routes;
  std::vector<FlowSnapshot> flows;
};

// Shared read-only inputs of a run.
struct SimContext {
  const SimConfig& config;
  const Scenario& scenario;
  const DistanceTable& distances;
  // Indexed by interval; extends past the horizon with empty matrices.
  const std::vector<DemandMatrix>& realized;
  Mode mode = Mode::kProposed;
  bool keep_flows = false;
};

// Advances the state by one interval. Throws InvariantError when an
// allocation breaks capacity, detour or threshold limits.
StepOutput Step(const SimContext& context, ScenarioState& state);

struct MetricsReport {
  Mode mode = Mode::kProposed;
  int fleet_size = 0;
  int total_orders = 0;
  // Distinct couriers with at least one delivery over the whole run.
  int vehicle_count = 0;
  // Sum over intervals of the couriers dispatched in that interval.
  int courier_dispatches = 0;
  int assigned = 0;
  // Orders delivered; the efficiency metric.
  int efficiency = 0;
  int expired = 0;
  int pending_at_end = 0;
  double fees = 0.0;
  double delivery_km = 0.0;
  double reposition_km = 0.0;
  double profit = 0.0;
  double mean_service_time_minutes = 0.0;
  int trips = 0;
  int max_trip_orders = 0;
  double max_detour_ratio = 1.0;
  std::vector<IntervalMetrics> series;
};

struct RunOutput {
  MetricsReport report;
  std::vector<PlanRow> plan;
  std::vector<RouteRow> routes;
  std::vector<FlowSnapshot> flows;
};

// Folds Step over config.interval_count intervals. Throws DataError when
// the scenario's orders are unsorted or fall outside the grid or horizon.
RunOutput Run(const SimConfig& config, const Scenario& scenario, Mode mode,
              bool keep_flows = false);

// Nearest free courier per order, one single-order trip per courier, orders
// taken in arrival order. Ties go to the lower courier id.
AllocationPlan BaselineGreedy(const AllocationProblem& problem,
                              const DistanceTable& distances);

// Same-restaurant orders grouped in arrival order into bundles of up to the
// courier capacity, each bundle given to the nearest free courier and
// delivered nearest drop-off first. No detour check.
AllocationPlan BaselineBundling(const AllocationProblem& problem,
                                const DistanceTable& distances,
                                int bundle_capacity);

enum class MetricKind { kVehicleCount, kEfficiency, kProfit, kServiceTime };

std::string_view MetricKindName(MetricKind kind);

// Percentage change of the proposed value P against the baseline A:
// (A - P) / P * 100 for service time, (P - A) / P * 100 for the rest.
// Empty when P is zero.
std::optional<double> Improvement(MetricKind kind, double baseline,
                                  double proposed);

double MetricValue(const MetricsReport& report, MetricKind kind);

}  // namespace dispatch

#endif  // DISPATCH_SIMULATOR_H_
