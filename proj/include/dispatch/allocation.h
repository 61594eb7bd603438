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

// Order allocation over a three-layer flow network.
//
//   S -> courier -> restaurant -> drop-off cell -> T
//
// S -> courier carries the courier's capacity at zero cost. courier ->
// restaurant exists when the restaurant lies within the pickup threshold; it
// carries the courier's capacity at cost lambda * distance. restaurant ->
// drop-off exists when the drop-off lies within the delivery radius; one arc
// per distinct fee, carrying the number of pending orders on that pair at
// cost -fee. drop-off -> T carries the pending demand of the cell.
//
// A min-cost max-flow solve picks which couriers serve each restaurant and
// which of its orders are served. Every courier the flow sends to a restaurant
// then makes one trip carrying a detour-compliant batch of those orders,
// topped up with the restaurant's other pending orders when seats remain.
// Orders the batches leave behind go into another round with the couriers
// still free, until a round assigns nothing.

#ifndef DISPATCH_ALLOCATION_H_
#define DISPATCH_ALLOCATION_H_

#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dispatch/flow.h"
#include "dispatch/grid.h"

namespace dispatch {

enum class CourierStatus { kIdle, kRepositioning, kDelivering };

std::string_view CourierStatusName(CourierStatus status);

struct Courier {
  int id = 0;
  CellId location;
  int capacity = 1;
  CourierStatus status = CourierStatus::kIdle;
};

struct Restaurant {
  int id = 0;
  CellId cell;
};

struct Order {
  int id = 0;
  int restaurant_id = 0;
  CellId dropoff;
  double fee = 0.0;
  TimeInterval placed_at;
  std::optional<TimeInterval> delivered_at;
};

// Same-restaurant orders delivered in one trip, in drop-off sequence.
struct Batch {
  int restaurant_id = 0;
  std::vector<int> orders;
  double max_detour_ratio = 1.0;
};

struct Assignment {
  int courier_id = 0;
  Batch batch;
  // Travel from the courier's location to the restaurant.
  double pickup_distance_km = 0.0;
  // Restaurant through every drop-off of the batch.
  double route_distance_km = 0.0;
  double total_fee = 0.0;
};

struct AllocationPlan {
  // At most one trip per courier.
  std::vector<Assignment> assignments;
  std::vector<int> unassigned_orders;
};

struct AllocationParams {
  double pickup_threshold_km = 4.0;
  double delivery_radius_km = 8.0;
  // Batching is allowed while every detour ratio stays <= this. Must be >= 1.
  double detour_threshold = 1.5;
  // Converts km into cost units on courier -> restaurant arcs.
  double cost_per_km = 1.0;
  // Solve courier -> restaurant and restaurant -> drop-off as two separate
  // flow problems instead of one.
  bool two_phase = false;
};

struct AllocationProblem {
  std::vector<Courier> couriers;
  std::vector<Restaurant> restaurants;
  std::vector<Order> orders;
  AllocationParams params;
};

// Slack on detour-threshold comparisons, for round-off in distance sums.
inline constexpr double kDetourTolerance = 1e-9;

// D(r, o_1) + sum_{j < position} D(o_j, o_{j+1}), divided by
// D(r, o_position), with `position` 0-based and >= 1. Returns 1 when the
// drop-off shares the restaurant's cell and kUnreachable when any leg is
// disconnected. Throws std::out_of_range for position 0 or past the end.
double DetourRatio(const DistanceTable& distances, CellId restaurant,
                   std::span<const CellId> dropoffs, std::size_t position);

// Largest DetourRatio over positions >= 1; 1 for fewer than two drop-offs.
double MaxDetourRatio(const DistanceTable& distances, CellId restaurant,
                      std::span<const CellId> dropoffs);

// D(r, o_1) + sum of consecutive drop-off legs.
double RouteDistance(const DistanceTable& distances, CellId restaurant,
                     std::span<const CellId> dropoffs);

// Partitions the pending orders of one restaurant into trips of at most
// `capacity` orders whose detour ratios all stay within `threshold`. Each
// batch is seeded with the unbatched order nearest the restaurant and grown
// with the nearest compliant order to its last drop-off; batches of up to
// four orders are sequenced by exhaustive search for the shortest compliant
// route. Throws UsageError when threshold < 1 or capacity < 1.
std::vector<Batch> BuildBatches(const DistanceTable& distances,
                                const Restaurant& restaurant,
                                std::span<const Order> pending, int capacity,
                                double threshold);

struct AllocationNetwork {
  enum class ArcKind {
    kSourceCourier,
    kCourierRestaurant,
    kRestaurantDropoff,
    kDropoffSink,
    // Two-phase solves only.
    kRestaurantSink,
    kSourceRestaurant,
  };

  struct ArcInfo {
    ArcKind kind = ArcKind::kSourceCourier;
    int courier_id = -1;
    int restaurant_id = -1;
    CellId dropoff{-1};
    double distance_km = 0.0;
    // Restaurant -> drop-off arcs: the orders the arc stands for, in the
    // order they are taken.
    std::vector<int> order_ids;
  };

  FlowNetwork network;
  std::vector<ArcInfo> arc_info;  // parallel to network.arcs()
  std::map<int, int> courier_node;
  std::map<int, int> restaurant_node;
  std::map<int, int> dropoff_node;  // keyed by cell index
  // Orders with no feasible restaurant -> drop-off arc.
  std::vector<int> infeasible_orders;
};

// Throws DataError for an order naming an unknown restaurant or any entity
// on a cell outside the distance table.
AllocationNetwork BuildAllocationNetwork(const AllocationProblem& problem,
                                         const DistanceTable& distances);

struct AllocationResult {
  AllocationPlan plan;
  // One network per flow solve: one per round in the joint mode, two per
  // round in two-phase mode.
  std::vector<AllocationNetwork> networks;
  std::vector<FlowResult> flows;
};

// Solves the prebuilt network in place and turns its flow into a one-round
// plan.
AllocationResult Allocate(AllocationNetwork net,
                          const AllocationProblem& problem,
                          const DistanceTable& distances);

// Builds and solves round after round, honoring params.two_phase.
AllocationResult Solve(const AllocationProblem& problem,
                       const DistanceTable& distances);

// Throws InvariantError when the plan breaks a courier capacity, a detour
// threshold, a pickup threshold or delivery radius, or fails to partition the
// problem's orders.
void CheckPlan(const AllocationPlan& plan, const AllocationProblem& problem,
               const DistanceTable& distances);

}  // namespace dispatch

#endif  // DISPATCH_ALLOCATION_H_
