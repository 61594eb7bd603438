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

#include "dispatch/grid.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <queue>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>

#include "dispatch/errors.h"

namespace dispatch {
namespace {

void CheckVertex(int vertex_count, CellId cell) {
  if (cell.index < 0 || cell.index >= vertex_count) {
    throw std::out_of_range(fmt::format("unknown cell {} (graph has {} cells)",
                                        cell.index, vertex_count));
  }
}

std::vector<double> DijkstraFrom(const DistanceGraph& graph, CellId source) {
  std::vector<double> dist(graph.vertex_count(), kUnreachable);
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  dist[source.index] = 0.0;
  queue.push({0.0, source.index});
  while (!queue.empty()) {
    auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    for (const auto& [v, km] : graph.Neighbors(CellId{u})) {
      const double candidate = d + km;
      if (candidate < dist[v.index]) {
        dist[v.index] = candidate;
        queue.push({candidate, v.index});
      }
    }
  }
  return dist;
}

}  // namespace

Grid::Grid(int rows, int cols, double cell_size_km)
    : rows_(rows), cols_(cols), cell_size_km_(cell_size_km) {
  if (rows <= 0 || cols <= 0) {
    throw UsageError(fmt::format("grid dimensions must be positive, got {}x{}",
                                 rows, cols));
  }
  if (!(cell_size_km > 0.0)) {
    throw UsageError(
        fmt::format("cell size must be positive, got {}", cell_size_km));
  }
}

bool Grid::AreLateral(CellId a, CellId b) const {
  if (!Contains(a) || !Contains(b)) return false;
  const int dr = std::abs(Row(a) - Row(b));
  const int dc = std::abs(Col(a) - Col(b));
  return dr + dc == 1;
}

std::vector<CellId> Grid::LateralNeighbors(CellId cell) const {
  std::vector<CellId> out;
  const int r = Row(cell);
  const int c = Col(cell);
  // Emitted in increasing index order.
  if (r > 0) out.push_back(At(r - 1, c));
  if (c > 0) out.push_back(At(r, c - 1));
  if (c + 1 < cols_) out.push_back(At(r, c + 1));
  if (r + 1 < rows_) out.push_back(At(r + 1, c));
  return out;
}

DistanceGraph::DistanceGraph(int vertex_count) : adjacency_(vertex_count) {}

std::size_t DistanceGraph::directed_edge_count() const {
  std::size_t count = 0;
  for (const auto& row : adjacency_) count += row.size();
  return count;
}

void DistanceGraph::SetEdge(CellId a, CellId b, double km) {
  if (!Contains(a) || !Contains(b)) {
    throw DataError(fmt::format("edge {}->{} references an unknown cell",
                                a.index, b.index));
  }
  if (a == b) throw DataError(fmt::format("self-loop at cell {}", a.index));
  if (!(km > 0.0) || !std::isfinite(km)) {
    throw DataError(fmt::format("edge {}->{} has non-positive weight {}",
                                a.index, b.index, km));
  }
  auto upsert = [km](std::vector<Neighbor>& row, CellId to) {
    auto it = std::lower_bound(
        row.begin(), row.end(), to,
        [](const Neighbor& n, CellId c) { return n.cell < c; });
    if (it != row.end() && it->cell == to) {
      it->km = km;
    } else {
      row.insert(it, Neighbor{to, km});
    }
  };
  upsert(adjacency_[a.index], b);
  upsert(adjacency_[b.index], a);
}

std::optional<double> DistanceGraph::EdgeWeight(CellId from, CellId to) const {
  if (!Contains(from)) return std::nullopt;
  for (const auto& n : adjacency_[from.index]) {
    if (n.cell == to) return n.km;
  }
  return std::nullopt;
}

std::span<const DistanceGraph::Neighbor> DistanceGraph::Neighbors(
    CellId cell) const {
  CheckVertex(vertex_count(), cell);
  return adjacency_[cell.index];
}

GridWorld BuildGrid(int rows, int cols, double cell_size_km) {
  Grid grid(rows, cols, cell_size_km);
  DistanceGraph graph(grid.cell_count());
  for (int i = 0; i < grid.cell_count(); ++i) {
    const CellId cell{i};
    for (CellId n : grid.LateralNeighbors(cell)) {
      if (cell < n) graph.SetEdge(cell, n, cell_size_km);
    }
  }
  return {grid, std::move(graph)};
}

void ApplyEdgeOverrides(const Grid& grid, std::span<const EdgeOverride> edges,
                        DistanceGraph& graph) {
  for (const auto& e : edges) {
    if (!grid.AreLateral(e.src, e.dst)) {
      throw DataError(fmt::format("edge {}->{} does not join adjacent cells",
                                  e.src.index, e.dst.index));
    }
    graph.SetEdge(e.src, e.dst, e.km);
  }
}

double ShortestDistance(const DistanceGraph& graph, CellId a, CellId b) {
  CheckVertex(graph.vertex_count(), a);
  CheckVertex(graph.vertex_count(), b);
  if (a == b) return 0.0;
  return DijkstraFrom(graph, a)[b.index];
}

DistanceTable::DistanceTable(const DistanceGraph& graph)
    : n_(graph.vertex_count()),
      table_(static_cast<std::size_t>(n_) * n_, kUnreachable) {
  for (int s = 0; s < n_; ++s) {
    auto row = DijkstraFrom(graph, CellId{s});
    std::copy(row.begin(), row.end(),
              table_.begin() + static_cast<std::ptrdiff_t>(s) * n_);
  }
}

std::size_t OrderGraph::edge_count() const {
  std::size_t count = 0;
  for (const auto& row : out_) count += row.size();
  return count;
}

void OrderGraph::SetWeight(CellId origin, CellId destination, double weight) {
  CheckVertex(vertex_count(), origin);
  CheckVertex(vertex_count(), destination);
  if (!(weight >= 0.0)) {
    throw DataError(fmt::format("negative order weight {} on {}->{}", weight,
                                origin.index, destination.index));
  }
  auto& row = out_[origin.index];
  auto it = std::lower_bound(
      row.begin(), row.end(), destination,
      [](const Edge& e, CellId c) { return e.dst < c; });
  const bool present = it != row.end() && it->dst == destination;
  if (weight == 0.0) {
    if (present) row.erase(it);
  } else if (present) {
    it->weight = weight;
  } else {
    row.insert(it, Edge{destination, weight});
  }
}

double OrderGraph::Weight(CellId origin, CellId destination) const {
  if (origin.index < 0 || origin.index >= vertex_count()) return 0.0;
  for (const auto& e : out_[origin.index]) {
    if (e.dst == destination) return e.weight;
  }
  return 0.0;
}

double OrderGraph::OutgoingDemand(CellId origin) const {
  double total = 0.0;
  for (const auto& e : OutEdges(origin)) total += e.weight;
  return total;
}

double OrderGraph::TotalWeight() const {
  double total = 0.0;
  for (const auto& row : out_) {
    for (const auto& e : row) total += e.weight;
  }
  return total;
}

std::span<const OrderGraph::Edge> OrderGraph::OutEdges(CellId origin) const {
  CheckVertex(vertex_count(), origin);
  return out_[origin.index];
}

DemandMatrix OrderGraph::ToMatrix(TimeInterval interval) const {
  DemandMatrix m(interval);
  for (int i = 0; i < vertex_count(); ++i) {
    for (const auto& e : out_[i]) m.Set(CellId{i}, e.dst, e.weight);
  }
  return m;
}

OrderGraph OrderGraphFromMatrix(const DemandMatrix& matrix, int vertex_count) {
  OrderGraph graph(vertex_count);
  for (const auto& [key, count] : matrix.entries()) {
    const auto [o, d] = key;
    if (o < 0 || o >= vertex_count || d < 0 || d >= vertex_count) {
      throw DataError(fmt::format(
          "demand entry {}->{} outside a grid of {} cells", o, d,
          vertex_count));
    }
    if (count < 0.0) {
      throw DataError(fmt::format("negative demand {} on {}->{}", count, o, d));
    }
    if (count > 0.0) graph.SetWeight(CellId{o}, CellId{d}, count);
  }
  return graph;
}

void GraphFamily::Validate() const {
  if (distance.vertex_count() != grid.cell_count() ||
      orders.vertex_count() != grid.cell_count()) {
    throw DataError(fmt::format(
        "subgraph vertex sets differ: grid {} cells, distance {}, orders {}",
        grid.cell_count(), distance.vertex_count(), orders.vertex_count()));
  }
}

}  // namespace dispatch
