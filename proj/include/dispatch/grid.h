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

// The grid world: a lattice of square cells, the distance graph joining
// laterally adjacent cells, and the order graph carrying predicted
// restaurant -> customer demand between cells.

#ifndef DISPATCH_GRID_H_
#define DISPATCH_GRID_H_

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "dispatch/demand_matrix.h"

namespace dispatch {

// Returned by shortest-path queries for disconnected pairs.
inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

inline bool IsReachable(double distance_km) { return distance_km < kUnreachable; }

class Grid {
 public:
  // Throws UsageError on non-positive dimensions or cell size.
  Grid(int rows, int cols, double cell_size_km = 2.0);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double cell_size_km() const { return cell_size_km_; }
  int cell_count() const { return rows_ * cols_; }

  bool Contains(CellId cell) const {
    return cell.index >= 0 && cell.index < cell_count();
  }
  int Row(CellId cell) const { return cell.index / cols_; }
  int Col(CellId cell) const { return cell.index % cols_; }
  CellId At(int row, int col) const { return CellId{row * cols_ + col}; }

  // True when the two cells differ by exactly one step along one axis.
  bool AreLateral(CellId a, CellId b) const;
  std::vector<CellId> LateralNeighbors(CellId cell) const;

 private:
  int rows_;
  int cols_;
  double cell_size_km_;
};

// Undirected-in-effect weighted graph over cells. Every edge is stored in
// both directions with the same positive weight.
class DistanceGraph {
 public:
  struct Neighbor {
    CellId cell;
    double km;
  };

  explicit DistanceGraph(int vertex_count = 0);

  int vertex_count() const { return static_cast<int>(adjacency_.size()); }
  bool Contains(CellId cell) const {
    return cell.index >= 0 && cell.index < vertex_count();
  }
  std::size_t directed_edge_count() const;

  // Inserts or overwrites the edge pair {a, b}. Throws DataError on a
  // non-positive weight, a self-loop or an unknown vertex.
  void SetEdge(CellId a, CellId b, double km);
  std::optional<double> EdgeWeight(CellId from, CellId to) const;

  // Sorted by neighbor index.
  std::span<const Neighbor> Neighbors(CellId cell) const;

 private:
  std::vector<std::vector<Neighbor>> adjacency_;
};

struct GridWorld {
  Grid grid;
  DistanceGraph distance;
};

// Lattice with 4-neighborhood edges of weight cell_size_km.
GridWorld BuildGrid(int rows, int cols, double cell_size_km = 2.0);

// Per-edge weight override from a graph fixture. The edge must join lateral
// neighbors of the grid.
struct EdgeOverride {
  CellId src;
  CellId dst;
  double km;
};
void ApplyEdgeOverrides(const Grid& grid, std::span<const EdgeOverride> edges,
                        DistanceGraph& graph);

// Dijkstra from `a`. Returns 0 for a == b and kUnreachable for disconnected
// pairs. Throws std::out_of_range for unknown vertices.
double ShortestDistance(const DistanceGraph& graph, CellId a, CellId b);

// All-pairs shortest distances, one Dijkstra per source.
class DistanceTable {
 public:
  DistanceTable() = default;
  explicit DistanceTable(const DistanceGraph& graph);

  int vertex_count() const { return n_; }
  double operator()(CellId a, CellId b) const {
    return table_[static_cast<std::size_t>(a.index) * n_ + b.index];
  }

 private:
  int n_ = 0;
  std::vector<double> table_;
};

// Directed graph of predicted order counts, origin cell -> destination cell.
// Self-loops (pickup and drop-off in one cell) are admitted.
class OrderGraph {
 public:
  struct Edge {
    CellId dst;
    double weight;
  };

  explicit OrderGraph(int vertex_count = 0) : out_(vertex_count) {}

  int vertex_count() const { return static_cast<int>(out_.size()); }
  std::size_t edge_count() const;

  // Throws DataError on a negative weight. A zero weight removes the edge.
  void SetWeight(CellId origin, CellId destination, double weight);
  // Zero when no edge exists.
  double Weight(CellId origin, CellId destination) const;
  double OutgoingDemand(CellId origin) const;
  double TotalWeight() const;

  // Sorted by destination index.
  std::span<const Edge> OutEdges(CellId origin) const;

  DemandMatrix ToMatrix(TimeInterval interval) const;

 private:
  std::vector<std::vector<Edge>> out_;
};

// One edge per strictly positive entry. Throws DataError when an index falls
// outside [0, vertex_count).
OrderGraph OrderGraphFromMatrix(const DemandMatrix& matrix, int vertex_count);

// The pair {G^D, G^S} over one grid.
struct GraphFamily {
  Grid grid;
  DistanceGraph distance;
  OrderGraph orders;

  // Throws DataError when the subgraph vertex sets differ from the grid's.
  void Validate() const;
};

}  // namespace dispatch

#endif  // DISPATCH_GRID_H_
