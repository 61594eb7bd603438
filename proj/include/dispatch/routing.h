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

// Repositioning routes for idle couriers.
//
// A route is a simple path in the distance graph whose length stays within a
// relocation budget. Its value is the predicted number of orders it covers:
// for every vertex on the path, the order-graph weight towards each vertex
// that appears later on the path. GreedyRoute grows the path one edge at a
// time, always taking the feasible edge whose own order weight is largest;
// BruteForceRoute enumerates every feasible path on small grids and serves
// as the reference for the greedy result.

#ifndef DISPATCH_ROUTING_H_
#define DISPATCH_ROUTING_H_

#include <compare>
#include <span>
#include <vector>

#include "dispatch/grid.h"

namespace dispatch {

struct Path {
  std::vector<CellId> vertices;
  double cumulative_distance_km = 0.0;
  double objective_value = 0.0;

  friend bool operator==(const Path&, const Path&) = default;
};

struct RouteRequest {
  CellId start;
  double max_distance_km = 5.0;
};

struct DirectedEdge {
  CellId from;
  CellId to;

  friend auto operator<=>(const DirectedEdge&, const DirectedEdge&) = default;
};

struct GainStep {
  DirectedEdge edge;
  // Order weight of the chosen edge; the quantity the greedy step maximizes.
  double gain = 0.0;
  // Increase of the path objective caused by appending edge.to. Never less
  // than `gain`; the difference shows what the single-edge gain misses.
  double objective_increment = 0.0;
};

// Largest grid BruteForceRoute accepts.
inline constexpr int kMaxBruteForceVertices = 16;

// Sum over path positions i < j of the order weight vertices[i] ->
// vertices[j]. Throws DataError unless `vertices` is a non-empty simple path
// in the distance graph.
double ObjectiveValue(const GraphFamily& family,
                      std::span<const CellId> vertices);

// Sum of distance-graph weights along the path. Same validation as above.
double PathDistance(const GraphFamily& family, std::span<const CellId> vertices);

// Objective change from appending `next` to `prefix`.
double ObjectiveIncrement(const GraphFamily& family,
                          std::span<const CellId> prefix, CellId next);

// Edges (current, v) of the distance graph with spent_km + w <= budget_km and
// v not yet visited, in increasing order of v.
std::vector<DirectedEdge> FeasibleEdges(const GraphFamily& family,
                                        CellId current, double spent_km,
                                        double budget_km,
                                        std::span<const CellId> visited);

// Greedy budgeted path. Ties between equal gains go to the lower cell index.
// Extension stops when no feasible edge remains or when the best feasible
// edge carries no predicted orders. Throws std::out_of_range for an unknown
// start cell and UsageError for a non-positive budget.
Path GreedyRoute(const GraphFamily& family, const RouteRequest& request);

// The per-step choices of GreedyRoute, in order.
std::vector<GainStep> MarginalGainTrace(const GraphFamily& family,
                                        const RouteRequest& request);

// Exhaustive search over simple paths from request.start with length within
// the budget. Maximizes the objective; ties prefer the shorter distance, then
// the lexicographically smaller vertex sequence. Throws UsageError on grids
// with more than kMaxBruteForceVertices cells.
Path BruteForceRoute(const GraphFamily& family, const RouteRequest& request);

// Value of an edge set under the greedy step's gain: the sum of the edges'
// order weights.
double EdgeSetValue(const GraphFamily& family,
                    std::span<const DirectedEdge> edges);

// EdgeSetValue(set + {edge}) - EdgeSetValue(set) for an edge not in `set`.
double EdgeSetGain(const GraphFamily& family, std::span<const DirectedEdge> set,
                   const DirectedEdge& edge);

}  // namespace dispatch

#endif  // DISPATCH_ROUTING_H_
