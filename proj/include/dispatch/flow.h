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

// Minimum-cost maximum-flow by successive shortest augmenting paths.
//
// Shortest paths are found with Bellman-Ford on the residual graph, so arc
// costs may be negative. Every arc (u, v) of the network induces two
// residual steps: forward u -> v with residual capacity - flow at cost c,
// and backward v -> u with residual flow at cost -c. Augmenting along a
// backward step cancels flow, which is how f(v, u) -= delta is realized.
//
// Capacities are real-valued. With integral capacities every augmentation
// moves an integral amount, so the final flow is integral.

#ifndef DISPATCH_FLOW_H_
#define DISPATCH_FLOW_H_

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dispatch/errors.h"

namespace dispatch {

// Residual capacities at or below this are treated as zero.
inline constexpr double kFlowEpsilon = 1e-9;

struct FlowNode {
  int id = 0;
  std::string label;
};

struct FlowArc {
  int src = 0;
  int dst = 0;
  double capacity = 0.0;
  double unit_cost = 0.0;
  double flow = 0.0;

  double residual() const { return capacity - flow; }
};

class FlowNetwork {
 public:
  // Node ids are assigned densely from 0.
  int AddNode(std::string label);
  // Throws DataError for unknown endpoints, self-loops or negative capacity.
  int AddArc(int src, int dst, double capacity, double unit_cost);

  void set_source(int node);
  void set_sink(int node);
  int source() const { return source_; }
  int sink() const { return sink_; }

  std::span<const FlowNode> nodes() const { return nodes_; }
  std::span<const FlowArc> arcs() const { return arcs_; }
  const FlowArc& arc(int index) const { return arcs_.at(index); }
  FlowArc& mutable_arc(int index) { return arcs_.at(index); }
  int node_count() const { return static_cast<int>(nodes_.size()); }

  // Outflow minus inflow at `node`.
  double NetOutflow(int node) const;
  void ClearFlow();

  // Throws DataError unless source and sink are distinct existing nodes, no
  // arc enters the source and no arc leaves the sink.
  void Validate() const;

 private:
  std::vector<FlowNode> nodes_;
  std::vector<FlowArc> arcs_;
  int source_ = -1;
  int sink_ = -1;
};

// One hop of a residual path: arc `arc` traversed forward (src -> dst) or
// backward (dst -> src).
struct ResidualStep {
  int arc = 0;
  bool forward = true;

  friend bool operator==(const ResidualStep&, const ResidualStep&) = default;
};

using AugmentingPath = std::vector<ResidualStep>;

double ResidualCapacity(const FlowNetwork& net, const ResidualStep& step);
double StepCost(const FlowNetwork& net, const ResidualStep& step);
int StepTail(const FlowNetwork& net, const ResidualStep& step);
int StepHead(const FlowNetwork& net, const ResidualStep& step);
double PathCost(const FlowNetwork& net, const AugmentingPath& path);

struct ShortestPathResult {
  // Unset when the sink is unreachable in the residual graph.
  std::optional<AugmentingPath> path;
  double cost = 0.0;
  bool negative_cycle = false;
  // Steps of the detected cycle, in traversal order.
  std::vector<ResidualStep> cycle;
};

// Bellman-Ford from the source over residual steps with positive residual
// capacity. Relaxation visits steps sorted by (tail, head, arc index), so
// ties between equal-cost paths resolve the same way on every run. A
// relaxation still possible after |V| - 1 passes reports a negative cycle
// reachable from the source.
ShortestPathResult BellmanFordMinCostPath(const FlowNetwork& net);

// Minimum residual capacity along the path. Throws UsageError when empty.
double Bottleneck(const FlowNetwork& net, const AugmentingPath& path);

// Pushes `delta` along the path. Throws UsageError when delta is not
// positive or exceeds the bottleneck.
void Augment(FlowNetwork& net, const AugmentingPath& path, double delta);

// The same hops walked the other way; augmenting it by the same delta undoes
// an augmentation.
AugmentingPath ReversePath(const AugmentingPath& path);

struct Augmentation {
  double delta = 0.0;
  double path_cost = 0.0;
};

struct FlowResult {
  double flow_value = 0.0;
  // Sum of flow * unit_cost over the network's arcs.
  double total_cost = 0.0;
  std::vector<double> per_arc_flow;
  std::vector<Augmentation> augmentations;
};

class NegativeCycleError : public InvariantError {
 public:
  NegativeCycleError(const std::string& what, std::vector<ResidualStep> cycle)
      : InvariantError(what), cycle_(std::move(cycle)) {}
  const std::vector<ResidualStep>& cycle() const { return cycle_; }

 private:
  std::vector<ResidualStep> cycle_;
};

// Augments from zero flow until the sink is unreachable. Leaves the final
// flow on the network's arcs. Throws NegativeCycleError when the residual
// graph holds a negative-cost cycle.
FlowResult MinCostMaxFlow(FlowNetwork& net);

// Throws InvariantError when an arc flow leaves [0, capacity] or an interior
// node does not conserve flow.
void CheckFlowFeasibility(const FlowNetwork& net);

// Header `src,dst,capacity,cost,flow`, one record per arc in arc order, then
// a summary line `# flow_value=<v> total_cost=<c>`.
void WriteFlowDump(std::ostream& out, const FlowNetwork& net,
                   const FlowResult& result);

}  // namespace dispatch

#endif  // DISPATCH_FLOW_H_
