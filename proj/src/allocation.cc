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

#include "dispatch/allocation.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <tuple>
#include <utility>

#include <fmt/format.h>

#include "dispatch/errors.h"

namespace dispatch {
namespace {

using ArcKind = AllocationNetwork::ArcKind;

// Orders and courier units meeting at one restaurant after a solve.
struct RestaurantShare {
  std::vector<std::pair<int, int>> courier_units;  // (courier id, orders)
  std::vector<int> order_ids;
};
using Shares = std::map<int, RestaurantShare>;

int ToUnits(double flow) {
  const double rounded = std::round(flow);
  if (std::abs(flow - rounded) > 1e-6) {
    throw InvariantError(
        fmt::format("allocation flow {} is not integral", flow));
  }
  return static_cast<int>(rounded);
}

void CheckCell(const DistanceTable& distances, CellId cell,
               std::string_view what, int id) {
  if (cell.index < 0 || cell.index >= distances.vertex_count()) {
    throw DataError(
        fmt::format("{} {} sits on unknown cell {}", what, id, cell.index));
  }
}

std::vector<CellId> Dropoffs(std::span<const Order* const> orders) {
  std::vector<CellId> cells;
  cells.reserve(orders.size());
  for (const Order* o : orders) cells.push_back(o->dropoff);
  return cells;
}

bool Compliant(const DistanceTable& distances, CellId restaurant,
               std::span<const Order* const> sequence, double threshold) {
  const auto cells = Dropoffs(sequence);
  return MaxDetourRatio(distances, restaurant, cells) <=
         threshold + kDetourTolerance;
}

std::vector<int> Ids(std::span<const Order* const> orders) {
  std::vector<int> ids;
  for (const Order* o : orders) ids.push_back(o->id);
  return ids;
}

// Shortest compliant ordering of `orders`; ties go to the lexicographically
// smaller id sequence. Empty when no ordering complies.
std::vector<const Order*> BestSequence(const DistanceTable& distances,
                                       CellId restaurant,
                                       std::vector<const Order*> orders,
                                       double threshold) {
  std::sort(orders.begin(), orders.end(),
            [](const Order* a, const Order* b) { return a->id < b->id; });
  std::vector<const Order*> best;
  double best_length = kUnreachable;
  do {
    if (!Compliant(distances, restaurant, orders, threshold)) continue;
    const double length = RouteDistance(distances, restaurant, Dropoffs(orders));
    if (best.empty() || length < best_length) {
      best = orders;
      best_length = length;
    }
  } while (std::next_permutation(
      orders.begin(), orders.end(),
      [](const Order* a, const Order* b) { return a->id < b->id; }));
  return best;
}

class EntityIndex {
 public:
  explicit EntityIndex(const AllocationProblem& problem) {
    for (const auto& c : problem.couriers) couriers_[c.id] = &c;
    for (const auto& r : problem.restaurants) restaurants_[r.id] = &r;
    for (const auto& o : problem.orders) orders_[o.id] = &o;
  }

  const Courier& courier(int id) const { return *Lookup(couriers_, id, "courier"); }
  const Restaurant& restaurant(int id) const {
    return *Lookup(restaurants_, id, "restaurant");
  }
  const Order& order(int id) const { return *Lookup(orders_, id, "order"); }
  bool has_restaurant(int id) const { return restaurants_.count(id) > 0; }

 private:
  template <typename T>
  static const T* Lookup(const std::map<int, const T*>& m, int id,
                         std::string_view what) {
    auto it = m.find(id);
    if (it == m.end()) throw DataError(fmt::format("unknown {} {}", what, id));
    return it->second;
  }

  std::map<int, const Courier*> couriers_;
  std::map<int, const Restaurant*> restaurants_;
  std::map<int, const Order*> orders_;
};

Shares SharesFromFlows(std::span<const AllocationNetwork* const> nets) {
  Shares shares;
  for (const AllocationNetwork* net : nets) {
    const auto arcs = net->network.arcs();
    for (std::size_t i = 0; i < arcs.size(); ++i) {
      const auto& info = net->arc_info[i];
      if (arcs[i].flow <= kFlowEpsilon) continue;
      const int units = ToUnits(arcs[i].flow);
      if (info.kind == ArcKind::kCourierRestaurant) {
        shares[info.restaurant_id].courier_units.emplace_back(info.courier_id,
                                                              units);
      } else if (info.kind == ArcKind::kRestaurantDropoff) {
        auto& ids = shares[info.restaurant_id].order_ids;
        ids.insert(ids.end(), info.order_ids.begin(),
                   info.order_ids.begin() + units);
      }
    }
  }
  return shares;
}

// Each courier routed to a restaurant by the flow makes one trip there,
// nearest courier first, carrying the first batch built from the orders the
// flow sent to that restaurant and not yet taken. A courier the flow splits
// across restaurants serves the one it sends the most units to, then the
// nearer one, then the lower id. Seats the flow leaves empty are filled with
// that restaurant's in-radius orders no flow arc took.
AllocationPlan Materialize(const Shares& shares,
                           const AllocationProblem& problem,
                           const DistanceTable& distances) {
  const EntityIndex index(problem);
  AllocationPlan plan;
  std::set<int> assigned;
  std::set<int> used;
  std::set<int> routed;
  for (const auto& [rid, share] : shares) {
    routed.insert(share.order_ids.begin(), share.order_ids.end());
  }
  // courier -> (units, -distance, -restaurant id) of its preferred share
  std::map<int, std::tuple<int, double, int>> preferred;
  for (const auto& [rid, share] : shares) {
    const CellId cell = index.restaurant(rid).cell;
    for (const auto& [cid, units] : share.courier_units) {
      const auto key = std::make_tuple(
          units, -distances(index.courier(cid).location, cell), -rid);
      auto [it, fresh] = preferred.try_emplace(cid, key);
      if (!fresh && key > it->second) it->second = key;
    }
  }
  for (const auto& [rid, share] : shares) {
    const Restaurant& r = index.restaurant(rid);
    std::vector<Order> remaining;
    for (int id : share.order_ids) remaining.push_back(index.order(id));
    for (const auto& o : problem.orders) {
      if (o.restaurant_id != rid || routed.count(o.id)) continue;
      if (distances(r.cell, o.dropoff) <= problem.params.delivery_radius_km) {
        remaining.push_back(o);
      }
    }
    std::vector<const Courier*> pool;
    for (const auto& [cid, units] : share.courier_units) {
      if (units > 0) pool.push_back(&index.courier(cid));
    }
    std::sort(pool.begin(), pool.end(), [&](const Courier* a, const Courier* b) {
      const double da = distances(a->location, r.cell);
      const double db = distances(b->location, r.cell);
      return std::tie(da, a->id) < std::tie(db, b->id);
    });
    for (const Courier* c : pool) {
      if (remaining.empty()) break;
      if (-std::get<2>(preferred.at(c->id)) != rid) continue;
      if (!used.insert(c->id).second) continue;
      Batch trip = BuildBatches(distances, r, remaining, c->capacity,
                                problem.params.detour_threshold)
                       .front();
      std::vector<CellId> cells;
      Assignment a;
      for (int id : trip.orders) {
        const Order& o = index.order(id);
        cells.push_back(o.dropoff);
        a.total_fee += o.fee;
        assigned.insert(id);
      }
      std::erase_if(remaining, [&](const Order& o) {
        return std::find(trip.orders.begin(), trip.orders.end(), o.id) !=
               trip.orders.end();
      });
      a.courier_id = c->id;
      a.pickup_distance_km = distances(c->location, r.cell);
      a.route_distance_km = RouteDistance(distances, r.cell, cells);
      a.batch = std::move(trip);
      plan.assignments.push_back(std::move(a));
    }
  }
  std::sort(plan.assignments.begin(), plan.assignments.end(),
            [](const Assignment& a, const Assignment& b) {
              return a.courier_id < b.courier_id;
            });
  for (const auto& o : problem.orders) {
    if (!assigned.count(o.id)) plan.unassigned_orders.push_back(o.id);
  }
  std::sort(plan.unassigned_orders.begin(), plan.unassigned_orders.end());
  return plan;
}

// Copies the nodes and arcs of `joint` whose kinds are listed into a fresh
// network with its own source and sink.
struct SubnetworkBuilder {
  const AllocationNetwork& joint;
  AllocationNetwork out;
  std::map<int, int> remap;  // joint node -> new node

  int Node(int joint_node) {
    auto it = remap.find(joint_node);
    if (it != remap.end()) return it->second;
    const int id =
        out.network.AddNode(joint.network.nodes()[joint_node].label);
    remap[joint_node] = id;
    return id;
  }

  void CopyArc(std::size_t i) {
    const auto& a = joint.network.arcs()[i];
    out.network.AddArc(Node(a.src), Node(a.dst), a.capacity, a.unit_cost);
    out.arc_info.push_back(joint.arc_info[i]);
  }

  void AddArc(int joint_src, int joint_dst, double capacity, ArcKind kind,
              int restaurant_id) {
    out.network.AddArc(Node(joint_src), Node(joint_dst), capacity, 0.0);
    AllocationNetwork::ArcInfo info;
    info.kind = kind;
    info.restaurant_id = restaurant_id;
    out.arc_info.push_back(std::move(info));
  }
};

AllocationResult SolveTwoPhaseRound(const AllocationProblem& problem,
                               const DistanceTable& distances) {
  AllocationNetwork joint = BuildAllocationNetwork(problem, distances);
  const int s = joint.network.source();
  const int t = joint.network.sink();
  const auto arcs = joint.network.arcs();

  // Phase 1: couriers to restaurants, each restaurant absorbing up to its
  // number of deliverable orders.
  SubnetworkBuilder p1{joint, {}, {}};
  p1.Node(s);
  std::map<int, double> deliverable;  // by restaurant id
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const auto kind = joint.arc_info[i].kind;
    if (kind == ArcKind::kSourceCourier || kind == ArcKind::kCourierRestaurant) {
      p1.CopyArc(i);
    } else if (kind == ArcKind::kRestaurantDropoff) {
      deliverable[joint.arc_info[i].restaurant_id] += arcs[i].capacity;
    }
  }
  for (const auto& [rid, node] : joint.restaurant_node) {
    p1.AddArc(node, t, deliverable[rid], ArcKind::kRestaurantSink, rid);
  }
  p1.out.network.set_source(p1.Node(s));
  p1.out.network.set_sink(p1.Node(t));
  p1.out.courier_node = joint.courier_node;
  p1.out.restaurant_node = joint.restaurant_node;
  FlowResult flow1 = MinCostMaxFlow(p1.out.network);

  std::map<int, double> inflow;  // by restaurant id
  for (std::size_t i = 0; i < p1.out.arc_info.size(); ++i) {
    if (p1.out.arc_info[i].kind == ArcKind::kRestaurantSink) {
      inflow[p1.out.arc_info[i].restaurant_id] = p1.out.network.arcs()[i].flow;
    }
  }

  // Phase 2: restaurants to drop-offs with the phase-1 load as supply.
  SubnetworkBuilder p2{joint, {}, {}};
  p2.Node(s);
  for (const auto& [rid, node] : joint.restaurant_node) {
    p2.AddArc(s, node, inflow[rid], ArcKind::kSourceRestaurant, rid);
  }
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const auto kind = joint.arc_info[i].kind;
    if (kind == ArcKind::kRestaurantDropoff || kind == ArcKind::kDropoffSink) {
      p2.CopyArc(i);
    }
  }
  p2.out.network.set_source(p2.Node(s));
  p2.out.network.set_sink(p2.Node(t));
  p2.out.restaurant_node = joint.restaurant_node;
  p2.out.dropoff_node = joint.dropoff_node;
  FlowResult flow2 = MinCostMaxFlow(p2.out.network);

  const AllocationNetwork* nets[] = {&p1.out, &p2.out};
  AllocationResult result;
  result.plan = Materialize(SharesFromFlows(nets), problem, distances);
  result.networks.push_back(std::move(p1.out));
  result.networks.push_back(std::move(p2.out));
  result.flows.push_back(std::move(flow1));
  result.flows.push_back(std::move(flow2));
  return result;
}

}  // namespace

std::string_view CourierStatusName(CourierStatus status) {
  switch (status) {
    case CourierStatus::kIdle:
      return "idle";
    case CourierStatus::kRepositioning:
      return "repositioning";
    case CourierStatus::kDelivering:
      return "delivering";
  }
  return "unknown";
}

double RouteDistance(const DistanceTable& distances, CellId restaurant,
                     std::span<const CellId> dropoffs) {
  if (dropoffs.empty()) return 0.0;
  double total = distances(restaurant, dropoffs[0]);
  for (std::size_t j = 1; j < dropoffs.size(); ++j) {
    total += distances(dropoffs[j - 1], dropoffs[j]);
  }
  return total;
}

double DetourRatio(const DistanceTable& distances, CellId restaurant,
                   std::span<const CellId> dropoffs, std::size_t position) {
  if (position == 0 || position >= dropoffs.size()) {
    throw std::out_of_range(fmt::format(
        "detour ratio position {} outside [1, {})", position, dropoffs.size()));
  }
  const double travelled =
      RouteDistance(distances, restaurant, dropoffs.subspan(0, position + 1));
  const double direct = distances(restaurant, dropoffs[position]);
  if (!IsReachable(travelled) || !IsReachable(direct)) return kUnreachable;
  if (direct == 0.0) return 1.0;
  return travelled / direct;
}

double MaxDetourRatio(const DistanceTable& distances, CellId restaurant,
                      std::span<const CellId> dropoffs) {
  double worst = 1.0;
  for (std::size_t i = 1; i < dropoffs.size(); ++i) {
    worst = std::max(worst, DetourRatio(distances, restaurant, dropoffs, i));
  }
  return worst;
}

std::vector<Batch> BuildBatches(const DistanceTable& distances,
                                const Restaurant& restaurant,
                                std::span<const Order> pending, int capacity,
                                double threshold) {
  if (!(threshold >= 1.0)) {
    throw UsageError(
        fmt::format("detour threshold must be >= 1, got {}", threshold));
  }
  if (capacity < 1) {
    throw UsageError(fmt::format("batch capacity must be >= 1, got {}", capacity));
  }
  const CellId r = restaurant.cell;
  std::vector<const Order*> remaining;
  for (const auto& o : pending) remaining.push_back(&o);
  std::sort(remaining.begin(), remaining.end(),
            [&](const Order* a, const Order* b) {
              return std::tuple(distances(r, a->dropoff), a->id) <
                     std::tuple(distances(r, b->dropoff), b->id);
            });

  std::vector<Batch> batches;
  while (!remaining.empty()) {
    std::vector<const Order*> sequence{remaining.front()};
    remaining.erase(remaining.begin());
    while (static_cast<int>(sequence.size()) < capacity && !remaining.empty()) {
      const CellId last = sequence.back()->dropoff;
      auto candidates = remaining;
      std::sort(candidates.begin(), candidates.end(),
                [&](const Order* a, const Order* b) {
                  return std::tuple(distances(last, a->dropoff),
                                    distances(r, a->dropoff), a->id) <
                         std::tuple(distances(last, b->dropoff),
                                    distances(r, b->dropoff), b->id);
                });
      const Order* accepted = nullptr;
      for (const Order* candidate : candidates) {
        auto trial = sequence;
        trial.push_back(candidate);
        if (trial.size() <= 4) {
          auto best = BestSequence(distances, r, trial, threshold);
          if (!best.empty()) {
            sequence = std::move(best);
            accepted = candidate;
          }
        } else if (Compliant(distances, r, trial, threshold)) {
          sequence = std::move(trial);
          accepted = candidate;
        }
        if (accepted != nullptr) break;
      }
      if (accepted == nullptr) break;
      remaining.erase(std::find(remaining.begin(), remaining.end(), accepted));
    }
    batches.push_back({restaurant.id, Ids(sequence),
                       MaxDetourRatio(distances, r, Dropoffs(sequence))});
  }
  return batches;
}

AllocationNetwork BuildAllocationNetwork(const AllocationProblem& problem,
                                         const DistanceTable& distances) {
  const auto& params = problem.params;
  const EntityIndex index(problem);
  for (const auto& c : problem.couriers) {
    CheckCell(distances, c.location, "courier", c.id);
    if (c.capacity < 1) {
      throw DataError(fmt::format("courier {} has capacity {}", c.id, c.capacity));
    }
  }
  for (const auto& r : problem.restaurants) {
    CheckCell(distances, r.cell, "restaurant", r.id);
  }

  std::vector<const Order*> orders;
  for (const auto& o : problem.orders) {
    CheckCell(distances, o.dropoff, "order", o.id);
    if (!index.has_restaurant(o.restaurant_id)) {
      throw DataError(fmt::format("order {} names unknown restaurant {}", o.id,
                                  o.restaurant_id));
    }
    orders.push_back(&o);
  }
  std::sort(orders.begin(), orders.end(), [](const Order* a, const Order* b) {
    return std::tie(a->placed_at.index, a->id) <
           std::tie(b->placed_at.index, b->id);
  });

  AllocationNetwork net;
  // (restaurant id) -> (drop-off cell, -fee) -> order ids; higher fees first.
  std::map<int, std::map<std::pair<int, double>, std::vector<int>>> groups;
  std::map<int, double> demand;  // by drop-off cell
  for (const Order* o : orders) {
    demand[o->dropoff.index] += 1.0;
    const CellId rcell = index.restaurant(o->restaurant_id).cell;
    const double d = distances(rcell, o->dropoff);
    if (!IsReachable(d) || d > params.delivery_radius_km) {
      net.infeasible_orders.push_back(o->id);
      continue;
    }
    groups[o->restaurant_id][{o->dropoff.index, -o->fee}].push_back(o->id);
  }

  auto& g = net.network;
  const int source = g.AddNode("S");
  std::vector<const Courier*> couriers;
  for (const auto& c : problem.couriers) couriers.push_back(&c);
  std::sort(couriers.begin(), couriers.end(),
            [](const Courier* a, const Courier* b) { return a->id < b->id; });
  for (const Courier* c : couriers) {
    net.courier_node[c->id] = g.AddNode(fmt::format("courier:{}", c->id));
  }
  for (const auto& [rid, by_pair] : groups) {
    net.restaurant_node[rid] = g.AddNode(fmt::format("restaurant:{}", rid));
  }
  std::set<int> cells;
  for (const auto& [rid, by_pair] : groups) {
    for (const auto& [key, ids] : by_pair) cells.insert(key.first);
  }
  for (int cell : cells) {
    net.dropoff_node[cell] = g.AddNode(fmt::format("dropoff:{}", cell));
  }
  const int sink = g.AddNode("T");
  g.set_source(source);
  g.set_sink(sink);

  auto add = [&](int src, int dst, double cap, double cost,
                 AllocationNetwork::ArcInfo info) {
    g.AddArc(src, dst, cap, cost);
    net.arc_info.push_back(std::move(info));
  };

  for (const Courier* c : couriers) {
    AllocationNetwork::ArcInfo info;
    info.kind = ArcKind::kSourceCourier;
    info.courier_id = c->id;
    add(source, net.courier_node[c->id], c->capacity, 0.0, info);
  }
  for (const Courier* c : couriers) {
    for (const auto& [rid, node] : net.restaurant_node) {
      const double d = distances(c->location, index.restaurant(rid).cell);
      if (!IsReachable(d) || d > params.pickup_threshold_km) continue;
      AllocationNetwork::ArcInfo info;
      info.kind = ArcKind::kCourierRestaurant;
      info.courier_id = c->id;
      info.restaurant_id = rid;
      info.distance_km = d;
      add(net.courier_node[c->id], node, c->capacity, params.cost_per_km * d,
          info);
    }
  }
  for (const auto& [rid, by_pair] : groups) {
    const CellId rcell = index.restaurant(rid).cell;
    for (const auto& [key, ids] : by_pair) {
      const auto [cell, neg_fee] = key;
      AllocationNetwork::ArcInfo info;
      info.kind = ArcKind::kRestaurantDropoff;
      info.restaurant_id = rid;
      info.dropoff = CellId{cell};
      info.distance_km = distances(rcell, CellId{cell});
      info.order_ids = ids;
      add(net.restaurant_node[rid], net.dropoff_node[cell],
          static_cast<double>(ids.size()), neg_fee, info);
    }
  }
  for (const auto& [cell, node] : net.dropoff_node) {
    AllocationNetwork::ArcInfo info;
    info.kind = ArcKind::kDropoffSink;
    info.dropoff = CellId{cell};
    add(node, sink, demand[cell], 0.0, info);
  }
  return net;
}

AllocationResult Allocate(AllocationNetwork net,
                          const AllocationProblem& problem,
                          const DistanceTable& distances) {
  AllocationResult result;
  FlowResult flow = MinCostMaxFlow(net.network);
  const AllocationNetwork* nets[] = {&net};
  const Shares shares = SharesFromFlows(nets);
  for (const auto& [rid, share] : shares) {
    int units = 0;
    for (const auto& [cid, u] : share.courier_units) units += u;
    if (units != static_cast<int>(share.order_ids.size())) {
      throw InvariantError(fmt::format(
          "restaurant {} receives {} courier units for {} orders", rid, units,
          share.order_ids.size()));
    }
  }
  result.plan = Materialize(shares, problem, distances);
  result.networks.push_back(std::move(net));
  result.flows.push_back(std::move(flow));
  return result;
}

AllocationResult Solve(const AllocationProblem& problem,
                       const DistanceTable& distances) {
  AllocationResult result;
  AllocationProblem round = problem;
  while (!round.couriers.empty() && !round.orders.empty()) {
    AllocationResult step =
        problem.params.two_phase
            ? SolveTwoPhaseRound(round, distances)
            : Allocate(BuildAllocationNetwork(round, distances), round,
                       distances);
    for (auto& n : step.networks) result.networks.push_back(std::move(n));
    for (auto& f : step.flows) result.flows.push_back(std::move(f));
    if (step.plan.assignments.empty()) break;
    std::set<int> busy;
    std::set<int> taken;
    for (auto& a : step.plan.assignments) {
      busy.insert(a.courier_id);
      taken.insert(a.batch.orders.begin(), a.batch.orders.end());
      result.plan.assignments.push_back(std::move(a));
    }
    std::erase_if(round.couriers,
                  [&](const Courier& c) { return busy.count(c.id) > 0; });
    std::erase_if(round.orders,
                  [&](const Order& o) { return taken.count(o.id) > 0; });
  }
  for (const auto& o : round.orders) {
    result.plan.unassigned_orders.push_back(o.id);
  }
  std::sort(result.plan.unassigned_orders.begin(),
            result.plan.unassigned_orders.end());
  return result;
}

void CheckPlan(const AllocationPlan& plan, const AllocationProblem& problem,
               const DistanceTable& distances) {
  const EntityIndex index(problem);
  const auto& params = problem.params;
  std::map<int, int> load;
  std::multiset<int> seen;
  for (const auto& a : plan.assignments) {
    const Courier& c = index.courier(a.courier_id);
    const Restaurant& r = index.restaurant(a.batch.restaurant_id);
    if (static_cast<int>(a.batch.orders.size()) > c.capacity) {
      throw InvariantError(fmt::format("courier {} trip of {} exceeds capacity {}",
                                       c.id, a.batch.orders.size(), c.capacity));
    }
    load[c.id] += static_cast<int>(a.batch.orders.size());
    const double pickup = distances(c.location, r.cell);
    if (!(pickup <= params.pickup_threshold_km)) {
      throw InvariantError(fmt::format(
          "courier {} assigned to restaurant {} at {} km beyond threshold", c.id,
          r.id, pickup));
    }
    std::vector<CellId> cells;
    for (int id : a.batch.orders) {
      const Order& o = index.order(id);
      if (o.restaurant_id != r.id) {
        throw InvariantError(fmt::format("batch mixes restaurants ({} and {})",
                                         o.restaurant_id, r.id));
      }
      if (!(distances(r.cell, o.dropoff) <= params.delivery_radius_km)) {
        throw InvariantError(
            fmt::format("order {} lies beyond the delivery radius", id));
      }
      cells.push_back(o.dropoff);
      seen.insert(id);
    }
    if (MaxDetourRatio(distances, r.cell, cells) >
        params.detour_threshold + kDetourTolerance) {
      throw InvariantError(fmt::format(
          "courier {} batch at restaurant {} breaks the detour threshold", c.id,
          r.id));
    }
  }
  for (const auto& [cid, n] : load) {
    if (n > index.courier(cid).capacity) {
      throw InvariantError(fmt::format("courier {} carries {} orders, capacity {}",
                                       cid, n, index.courier(cid).capacity));
    }
  }
  for (int id : plan.unassigned_orders) seen.insert(id);
  std::multiset<int> expected;
  for (const auto& o : problem.orders) expected.insert(o.id);
  if (seen != expected) {
    throw InvariantError("plan does not partition the pending orders");
  }
}

}  // namespace dispatch
