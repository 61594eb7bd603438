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

#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "dispatch/flow.h"
#include "oracles.h"

namespace dispatch {
namespace {

FlowNetwork Chain(std::vector<std::pair<double, double>> arcs) {
  FlowNetwork net;
  for (std::size_t i = 0; i <= arcs.size(); ++i) net.AddNode(std::to_string(i));
  for (std::size_t i = 0; i < arcs.size(); ++i)
    net.AddArc(i, i + 1, arcs[i].first, arcs[i].second);
  net.set_source(0);
  net.set_sink(arcs.size());
  return net;
}

FlowNetwork Diamond() {
  FlowNetwork net;
  const int s = net.AddNode("s"), a = net.AddNode("a"), b = net.AddNode("b"),
            t = net.AddNode("t");
  net.AddArc(s, a, 1, 1);
  net.AddArc(s, b, 1, 2);
  net.AddArc(a, t, 1, 1);
  net.AddArc(b, t, 1, 1);
  net.set_source(s);
  net.set_sink(t);
  return net;
}

TEST(FlowNetworkTest, Validation) {
  FlowNetwork net;
  net.AddNode("s");
  net.AddNode("t");
  EXPECT_THROW(net.AddArc(0, 2, 1, 0), DataError);
  EXPECT_THROW(net.AddArc(0, 0, 1, 0), DataError);
  EXPECT_THROW(net.AddArc(0, 1, -1, 0), DataError);
  EXPECT_THROW(net.Validate(), DataError);
  net.set_source(0);
  net.set_sink(1);
  net.AddArc(1, 0, 1, 0);
  EXPECT_THROW(net.Validate(), DataError);
}

TEST(BellmanFordTest, Examples) {
  FlowNetwork one = Chain({{1, 7}});
  auto r = BellmanFordMinCostPath(one);
  ASSERT_TRUE(r.path.has_value());
  EXPECT_EQ(r.path->size(), 1u);
  EXPECT_EQ(r.cost, 7);
  Augment(one, *r.path, 1);
  EXPECT_FALSE(BellmanFordMinCostPath(one).path.has_value());

  FlowNetwork parallel;
  parallel.AddNode("s");
  parallel.AddNode("t");
  parallel.AddArc(0, 1, 1, 5);
  parallel.AddArc(0, 1, 1, 3);
  parallel.set_source(0);
  parallel.set_sink(1);
  auto p = BellmanFordMinCostPath(parallel);
  ASSERT_TRUE(p.path.has_value());
  EXPECT_EQ((*p.path)[0].arc, 1);
  EXPECT_EQ(p.cost, 3);
}

TEST(BellmanFordTest, DetectsNegativeCycle) {
  FlowNetwork net;
  for (int i = 0; i < 4; ++i) net.AddNode(std::to_string(i));
  net.AddArc(0, 1, 1, 0);
  net.AddArc(1, 2, 1, -5);
  net.AddArc(2, 1, 1, 1);
  net.AddArc(2, 3, 1, 0);
  net.set_source(0);
  net.set_sink(3);
  auto r = BellmanFordMinCostPath(net);
  EXPECT_TRUE(r.negative_cycle);
  EXPECT_FALSE(r.cycle.empty());
  EXPECT_THROW(MinCostMaxFlow(net), NegativeCycleError);
}

TEST(BottleneckTest, Examples) {
  FlowNetwork net = Chain({{2, 0}, {5, 0}, {1, 0}});
  AugmentingPath path{{0, true}, {1, true}, {2, true}};
  EXPECT_EQ(Bottleneck(net, path), 1);
  FlowNetwork single = Chain({{4, 0}});
  EXPECT_EQ(Bottleneck(single, {{0, true}}), 4);
  EXPECT_THROW(Bottleneck(net, {}), UsageError);
  Augment(net, path, Bottleneck(net, path));
  EXPECT_EQ(net.arc(2).residual(), 0);
}

TEST(AugmentTest, ReverseUndoes) {
  FlowNetwork net = Diamond();
  auto r = BellmanFordMinCostPath(net);
  ASSERT_TRUE(r.path.has_value());
  Augment(net, *r.path, 1);
  CheckFlowFeasibility(net);
  EXPECT_EQ(net.NetOutflow(net.source()), 1);
  EXPECT_THROW(Augment(net, *r.path, 1), UsageError);
  EXPECT_THROW(Augment(net, *r.path, 0), UsageError);
  Augment(net, ReversePath(*r.path), 1);
  for (const auto& a : net.arcs()) EXPECT_EQ(a.flow, 0);
}

TEST(MinCostMaxFlowTest, EmptyNetwork) {
  FlowNetwork net;
  net.AddNode("s");
  net.AddNode("t");
  net.set_source(0);
  net.set_sink(1);
  FlowResult r = MinCostMaxFlow(net);
  EXPECT_EQ(r.flow_value, 0);
  EXPECT_EQ(r.total_cost, 0);
}

TEST(MinCostMaxFlowTest, Diamond) {
  FlowNetwork net = Diamond();
  FlowResult r = MinCostMaxFlow(net);
  EXPECT_EQ(r.flow_value, 2);
  EXPECT_EQ(r.total_cost, 5);
  const auto oracle = testing::BruteForceFlow(Diamond());
  EXPECT_EQ(oracle.flow, 2);
  EXPECT_EQ(oracle.cost, 5);
}

TEST(MinCostMaxFlowTest, UsesBackwardStep) {
  // The cheapest first path s-a-b-t blocks both others; the second
  // augmentation must cancel a->b.
  FlowNetwork net;
  for (const char* l : {"s", "a", "b", "t"}) net.AddNode(l);
  net.AddArc(0, 1, 1, 1);
  net.AddArc(0, 2, 1, 4);
  net.AddArc(1, 2, 1, 1);
  net.AddArc(1, 3, 1, 4);
  net.AddArc(2, 3, 1, 1);
  net.set_source(0);
  net.set_sink(3);
  FlowResult r = MinCostMaxFlow(net);
  EXPECT_EQ(r.flow_value, 2);
  EXPECT_EQ(r.total_cost, 10);
  EXPECT_EQ(net.arc(2).flow, 0);
  ASSERT_EQ(r.augmentations.size(), 2u);
  EXPECT_EQ(r.augmentations[0].path_cost, 3);
  EXPECT_EQ(r.augmentations[1].path_cost, 7);
}

TEST(MinCostMaxFlowTest, FractionalCapacities) {
  FlowNetwork net = Chain({{2.5, 1}, {1.25, -3}});
  FlowResult r = MinCostMaxFlow(net);
  EXPECT_DOUBLE_EQ(r.flow_value, 1.25);
  EXPECT_DOUBLE_EQ(r.total_cost, 1.25 * -2);
}

TEST(MinCostMaxFlowTest, RandomDagsMatchBruteForce) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 150; ++trial) {
    FlowNetwork net = testing::RandomDag(rng);
    const auto oracle = testing::BruteForceFlow(net);
    FlowResult r = MinCostMaxFlow(net);
    ASSERT_EQ(r.flow_value, oracle.flow) << "trial " << trial;
    ASSERT_EQ(r.total_cost, oracle.cost) << "trial " << trial;
  }
}

TEST(FlowPropertyTest, ConservationIntegralityAndAccounting) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    FlowNetwork net = testing::RandomDag(rng, 12, 5, 20, 0.4);
    FlowResult r = MinCostMaxFlow(net);
    CheckFlowFeasibility(net);
    double cost = 0.0, augmented = 0.0;
    for (std::size_t i = 0; i < net.arcs().size(); ++i) {
      const FlowArc& a = net.arc(i);
      EXPECT_EQ(a.flow, std::round(a.flow));
      EXPECT_EQ(r.per_arc_flow[i], a.flow);
      cost += a.flow * a.unit_cost;
    }
    for (const auto& aug : r.augmentations) {
      EXPECT_GT(aug.delta, 0.0);
      augmented += aug.delta;
    }
    EXPECT_EQ(cost, r.total_cost);
    EXPECT_EQ(augmented, r.flow_value);
    EXPECT_EQ(net.NetOutflow(net.source()), r.flow_value);
    EXPECT_FALSE(BellmanFordMinCostPath(net).path.has_value());
  }
}

TEST(FlowDumpTest, Format) {
  FlowNetwork net = Diamond();
  FlowResult r = MinCostMaxFlow(net);
  std::ostringstream out;
  WriteFlowDump(out, net, r);
  EXPECT_EQ(out.str(),
            "src,dst,capacity,cost,flow\n"
            "0,1,1,1,1\n"
            "0,2,1,2,1\n"
            "1,3,1,1,1\n"
            "2,3,1,1,1\n"
            "# flow_value=2 total_cost=5\n");
}

}  // namespace
}  // namespace dispatch
