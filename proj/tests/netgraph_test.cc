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

#include <random>

#include <gtest/gtest.h>

#include "dispatch/errors.h"
#include "dispatch/grid.h"
#include "oracles.h"

namespace dispatch {
namespace {

TEST(BuildGridTest, SingleCellHasNoEdges) {
  GridWorld w = BuildGrid(1, 1, 2.0);
  EXPECT_EQ(w.grid.cell_count(), 1);
  EXPECT_EQ(w.distance.directed_edge_count(), 0u);
}

TEST(BuildGridTest, TwoByTwo) {
  GridWorld w = BuildGrid(2, 2, 2.0);
  EXPECT_EQ(w.distance.vertex_count(), 4);
  EXPECT_EQ(w.distance.directed_edge_count(), 8u);
  for (int c = 0; c < 4; ++c)
    for (const auto& nb : w.distance.Neighbors(CellId{c})) EXPECT_EQ(nb.km, 2.0);
}

TEST(BuildGridTest, ThreeByThreeMatchesLatticeCount) {
  // Lateral pairs of an r x c lattice: r(c-1) + c(r-1), both directions.
  for (int r = 1; r <= 5; ++r) {
    for (int c = 1; c <= 5; ++c) {
      GridWorld w = BuildGrid(r, c, 2.0);
      EXPECT_EQ(w.distance.directed_edge_count(),
                static_cast<std::size_t>(2 * (r * (c - 1) + c * (r - 1))));
    }
  }
  EXPECT_EQ(BuildGrid(3, 3, 2.0).distance.directed_edge_count(), 24u);
}

TEST(BuildGridTest, RejectsBadDimensions) {
  EXPECT_THROW(BuildGrid(0, 3), UsageError);
  EXPECT_THROW(BuildGrid(3, -1), UsageError);
  EXPECT_THROW(BuildGrid(3, 3, 0.0), UsageError);
}

TEST(BuildGridTest, EdgesAreLateralAndSymmetric) {
  GridWorld w = BuildGrid(4, 5, 1.5);
  for (int a = 0; a < w.grid.cell_count(); ++a) {
    for (const auto& nb : w.distance.Neighbors(CellId{a})) {
      const int dr = std::abs(w.grid.Row(CellId{a}) - w.grid.Row(nb.cell));
      const int dc = std::abs(w.grid.Col(CellId{a}) - w.grid.Col(nb.cell));
      EXPECT_EQ(dr + dc, 1);
      EXPECT_EQ(w.distance.EdgeWeight(nb.cell, CellId{a}), nb.km);
    }
  }
}

TEST(DistanceGraphTest, RejectsBadEdges) {
  DistanceGraph g(3);
  EXPECT_THROW(g.SetEdge(CellId{0}, CellId{1}, 0.0), DataError);
  EXPECT_THROW(g.SetEdge(CellId{0}, CellId{0}, 1.0), DataError);
  EXPECT_THROW(g.SetEdge(CellId{0}, CellId{3}, 1.0), DataError);
}

TEST(ApplyEdgeOverridesTest, RejectsNonLateral) {
  GridWorld w = BuildGrid(3, 3);
  std::vector<EdgeOverride> bad{{CellId{0}, CellId{4}, 1.0}};
  EXPECT_THROW(ApplyEdgeOverrides(w.grid, bad, w.distance), DataError);
  std::vector<EdgeOverride> good{{CellId{0}, CellId{1}, 0.5}};
  ApplyEdgeOverrides(w.grid, good, w.distance);
  EXPECT_EQ(w.distance.EdgeWeight(CellId{1}, CellId{0}), 0.5);
}

TEST(ShortestDistanceTest, Basics) {
  GridWorld w = BuildGrid(2, 2, 2.0);
  EXPECT_EQ(ShortestDistance(w.distance, CellId{1}, CellId{1}), 0.0);
  EXPECT_EQ(ShortestDistance(w.distance, CellId{0}, CellId{3}), 4.0);
  EXPECT_THROW(ShortestDistance(w.distance, CellId{0}, CellId{9}),
               std::out_of_range);
}

TEST(ShortestDistanceTest, DisconnectedIsUnreachable) {
  DistanceGraph g(3);
  g.SetEdge(CellId{0}, CellId{1}, 1.0);
  EXPECT_FALSE(IsReachable(ShortestDistance(g, CellId{0}, CellId{2})));
  DistanceTable t(g);
  EXPECT_FALSE(IsReachable(t(CellId{2}, CellId{1})));
}

TEST(ShortestDistanceTest, PerturbedGridsMatchFloydWarshall) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> km(0.25, 4.0);
  for (int trial = 0; trial < 20; ++trial) {
    GridWorld w = BuildGrid(4, 4, 1.0);
    for (int a = 0; a < 16; ++a)
      for (CellId b : w.grid.LateralNeighbors(CellId{a}))
        if (a < b.index) w.distance.SetEdge(CellId{a}, b, km(rng));
    const auto fw = testing::FloydWarshall(w.distance);
    DistanceTable table(w.distance);
    for (int a = 0; a < 16; ++a) {
      for (int b = 0; b < 16; ++b) {
        EXPECT_NEAR(ShortestDistance(w.distance, CellId{a}, CellId{b}),
                    fw[a][b], 1e-9);
        EXPECT_NEAR(table(CellId{a}, CellId{b}), fw[a][b], 1e-9);
      }
    }
  }
}

TEST(ShortestDistanceTest, MetricOnSmallGrids) {
  for (int r = 1; r <= 5; ++r) {
    for (int c = 1; c <= 5; ++c) {
      GridWorld w = BuildGrid(r, c, 2.0);
      DistanceTable d(w.distance);
      const int n = w.grid.cell_count();
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          const CellId ca{a}, cb{b};
          ASSERT_EQ(d(ca, cb), d(cb, ca));
          // Manhattan distance on a uniform lattice.
          const int hops = std::abs(w.grid.Row(ca) - w.grid.Row(cb)) +
                           std::abs(w.grid.Col(ca) - w.grid.Col(cb));
          ASSERT_EQ(d(ca, cb), 2.0 * hops);
          for (int m = 0; m < n; ++m) {
            ASSERT_LE(d(ca, cb), d(ca, CellId{m}) + d(CellId{m}, cb));
          }
        }
      }
    }
  }
}

TEST(OrderGraphTest, FromMatrix) {
  DemandMatrix zero;
  EXPECT_EQ(OrderGraphFromMatrix(zero, 6).edge_count(), 0u);

  DemandMatrix m;
  m.Set(CellId{3}, CellId{5}, 3);
  m.Set(CellId{3}, CellId{4}, 1);
  m.Set(CellId{2}, CellId{2}, 0.5);
  OrderGraph g = OrderGraphFromMatrix(m, 6);
  EXPECT_EQ(g.edge_count(), 3u);
  EXPECT_EQ(g.Weight(CellId{3}, CellId{5}), 3);
  EXPECT_EQ(g.Weight(CellId{2}, CellId{2}), 0.5);
  EXPECT_EQ(g.TotalWeight(), m.Total());
  EXPECT_EQ(g.OutgoingDemand(CellId{3}), 4);
  EXPECT_EQ(g.ToMatrix(m.interval()), m);

  DemandMatrix outside;
  outside.Set(CellId{0}, CellId{6}, 1);
  EXPECT_THROW(OrderGraphFromMatrix(outside, 6), DataError);
  EXPECT_THROW(m.Set(CellId{0}, CellId{1}, -1), DataError);
  EXPECT_THROW(g.SetWeight(CellId{0}, CellId{1}, -1), DataError);
}

TEST(OrderGraphTest, RandomMatrixRoundTrip) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> cell(0, 24);
  std::uniform_real_distribution<double> w(0.0, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    DemandMatrix m(TimeInterval{trial, 15});
    for (int e = 0; e < 30; ++e) m.Set(CellId{cell(rng)}, CellId{cell(rng)}, w(rng));
    OrderGraph g = OrderGraphFromMatrix(m, 25);
    EXPECT_EQ(g.ToMatrix(m.interval()), m);
  }
}

TEST(GraphFamilyTest, ValidateRejectsMismatchedVertexSets) {
  GridWorld w = BuildGrid(2, 2);
  GraphFamily ok{w.grid, w.distance, OrderGraph(4)};
  EXPECT_NO_THROW(ok.Validate());
  GraphFamily bad{w.grid, w.distance, OrderGraph(5)};
  EXPECT_THROW(bad.Validate(), DataError);
}

}  // namespace
}  // namespace dispatch
