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

#include "dispatch/routing.h"

#include <algorithm>
#include <stdexcept>

#include <fmt/format.h>

#include "dispatch/errors.h"

namespace dispatch {
namespace {

bool Contains(std::span<const CellId> cells, CellId cell) {
  return std::find(cells.begin(), cells.end(), cell) != cells.end();
}

void CheckRequest(const GraphFamily& family, const RouteRequest& request) {
  if (!family.distance.Contains(request.start)) {
    throw std::out_of_range(
        fmt::format("route start {} is not a grid cell", request.start.index));
  }
  if (!(request.max_distance_km > 0.0)) {
    throw UsageError(fmt::format("relocation budget must be positive, got {}",
                                 request.max_distance_km));
  }
}

// Validates the path and returns its length.
double CheckedLength(const GraphFamily& family,
                     std::span<const CellId> vertices) {
  if (vertices.empty()) throw DataError("empty path");
  double length = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (!family.distance.Contains(vertices[i])) {
      throw DataError(
          fmt::format("path vertex {} is not a grid cell", vertices[i].index));
    }
    if (Contains(vertices.subspan(0, i), vertices[i])) {
      throw DataError(
          fmt::format("path revisits cell {}", vertices[i].index));
    }
    if (i > 0) {
      auto w = family.distance.EdgeWeight(vertices[i - 1], vertices[i]);
      if (!w) {
        throw DataError(fmt::format("no distance edge {}->{}",
                                    vertices[i - 1].index, vertices[i].index));
      }
      length += *w;
    }
  }
  return length;
}

struct GreedyResult {
  Path path;
  std::vector<GainStep> trace;
};

GreedyResult RunGreedy(const GraphFamily& family, const RouteRequest& request) {
  CheckRequest(family, request);
  GreedyResult result;
  auto& vertices = result.path.vertices;
  vertices.push_back(request.start);
  CellId current = request.start;
  double spent = 0.0;
  while (spent < request.max_distance_km) {
    const auto feasible = FeasibleEdges(family, current, spent,
                                        request.max_distance_km, vertices);
    if (feasible.empty()) break;
    // Strict '>' keeps the lowest-index destination among equal gains.
    const DirectedEdge* best = nullptr;
    double best_gain = 0.0;
    for (const auto& e : feasible) {
      const double gain = family.orders.Weight(e.from, e.to);
      if (best == nullptr || gain > best_gain) {
        best = &e;
        best_gain = gain;
      }
    }
    if (best_gain <= 0.0) break;
    const DirectedEdge chosen = *best;
    result.trace.push_back(
        {chosen, best_gain, ObjectiveIncrement(family, vertices, chosen.to)});
    spent += *family.distance.EdgeWeight(chosen.from, chosen.to);
    vertices.push_back(chosen.to);
    current = chosen.to;
  }
  result.path.cumulative_distance_km = spent;
  result.path.objective_value = ObjectiveValue(family, vertices);
  return result;
}

bool LexLess(std::span<const CellId> a, std::span<const CellId> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

void Enumerate(const GraphFamily& family, double budget,
               std::vector<CellId>& current, double spent, Path& best) {
  const double value = ObjectiveValue(family, current);
  const bool better =
      value > best.objective_value ||
      (value == best.objective_value &&
       (spent < best.cumulative_distance_km ||
        (spent == best.cumulative_distance_km &&
         LexLess(current, best.vertices))));
  if (better) best = Path{current, spent, value};
  for (const auto& e :
       FeasibleEdges(family, current.back(), spent, budget, current)) {
    const double w = *family.distance.EdgeWeight(e.from, e.to);
    current.push_back(e.to);
    Enumerate(family, budget, current, spent + w, best);
    current.pop_back();
  }
}

}  // namespace

double ObjectiveValue(const GraphFamily& family,
                      std::span<const CellId> vertices) {
  CheckedLength(family, vertices);
  double total = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    for (std::size_t j = i + 1; j < vertices.size(); ++j) {
      total += family.orders.Weight(vertices[i], vertices[j]);
    }
  }
  return total;
}

double PathDistance(const GraphFamily& family,
                    std::span<const CellId> vertices) {
  return CheckedLength(family, vertices);
}

double ObjectiveIncrement(const GraphFamily& family,
                          std::span<const CellId> prefix, CellId next) {
  double total = 0.0;
  for (CellId u : prefix) total += family.orders.Weight(u, next);
  return total;
}

std::vector<DirectedEdge> FeasibleEdges(const GraphFamily& family,
                                        CellId current, double spent_km,
                                        double budget_km,
                                        std::span<const CellId> visited) {
  std::vector<DirectedEdge> out;
  for (const auto& [next, km] : family.distance.Neighbors(current)) {
    if (spent_km + km <= budget_km && !Contains(visited, next)) {
      out.push_back({current, next});
    }
  }
  return out;
}

Path GreedyRoute(const GraphFamily& family, const RouteRequest& request) {
  return RunGreedy(family, request).path;
}

std::vector<GainStep> MarginalGainTrace(const GraphFamily& family,
                                        const RouteRequest& request) {
  return RunGreedy(family, request).trace;
}

Path BruteForceRoute(const GraphFamily& family, const RouteRequest& request) {
  CheckRequest(family, request);
  if (family.distance.vertex_count() > kMaxBruteForceVertices) {
    throw UsageError(fmt::format(
        "brute-force routing supports at most {} cells, grid has {}",
        kMaxBruteForceVertices, family.distance.vertex_count()));
  }
  std::vector<CellId> current{request.start};
  Path best{current, 0.0, ObjectiveValue(family, current)};
  Enumerate(family, request.max_distance_km, current, 0.0, best);
  return best;
}

double EdgeSetValue(const GraphFamily& family,
                    std::span<const DirectedEdge> edges) {
  double total = 0.0;
  for (const auto& e : edges) total += family.orders.Weight(e.from, e.to);
  return total;
}

double EdgeSetGain(const GraphFamily& family, std::span<const DirectedEdge> set,
                   const DirectedEdge& edge) {
  std::vector<DirectedEdge> extended(set.begin(), set.end());
  extended.push_back(edge);
  return EdgeSetValue(family, extended) - EdgeSetValue(family, set);
}

}  // namespace dispatch
