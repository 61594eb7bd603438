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

#include "dispatch/flow.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include <fmt/format.h>

namespace dispatch {
namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Relaxation {
  int tail;
  int head;
  ResidualStep step;
};

// Every residual step, sorted by (tail, head, arc, forward first).
std::vector<Relaxation> RelaxationOrder(const FlowNetwork& net) {
  std::vector<Relaxation> order;
  order.reserve(net.arcs().size() * 2);
  for (int i = 0; i < static_cast<int>(net.arcs().size()); ++i) {
    const auto& a = net.arcs()[i];
    order.push_back({a.src, a.dst, {i, true}});
    order.push_back({a.dst, a.src, {i, false}});
  }
  std::sort(order.begin(), order.end(),
            [](const Relaxation& x, const Relaxation& y) {
              return std::tuple(x.tail, x.head, x.step.arc, !x.step.forward) <
                     std::tuple(y.tail, y.head, y.step.arc, !y.step.forward);
            });
  return order;
}

std::string DescribeCycle(const FlowNetwork& net,
                          const std::vector<ResidualStep>& cycle) {
  std::string out;
  for (const auto& s : cycle) {
    if (!out.empty()) out += ", ";
    out += fmt::format("{}->{}{}", StepTail(net, s), StepHead(net, s),
                       s.forward ? "" : " (reverse)");
  }
  return out;
}

}  // namespace

int FlowNetwork::AddNode(std::string label) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({id, std::move(label)});
  return id;
}

int FlowNetwork::AddArc(int src, int dst, double capacity, double unit_cost) {
  if (src < 0 || src >= node_count() || dst < 0 || dst >= node_count()) {
    throw DataError(fmt::format("arc {}->{} references an unknown node", src,
                                dst));
  }
  if (src == dst) throw DataError(fmt::format("self-loop arc at node {}", src));
  if (!(capacity >= 0.0) || !std::isfinite(capacity)) {
    throw DataError(
        fmt::format("arc {}->{} has invalid capacity {}", src, dst, capacity));
  }
  if (!std::isfinite(unit_cost)) {
    throw DataError(fmt::format("arc {}->{} has non-finite cost", src, dst));
  }
  arcs_.push_back({src, dst, capacity, unit_cost, 0.0});
  return static_cast<int>(arcs_.size()) - 1;
}

void FlowNetwork::set_source(int node) { source_ = node; }
void FlowNetwork::set_sink(int node) { sink_ = node; }

double FlowNetwork::NetOutflow(int node) const {
  double net = 0.0;
  for (const auto& a : arcs_) {
    if (a.src == node) net += a.flow;
    if (a.dst == node) net -= a.flow;
  }
  return net;
}

void FlowNetwork::ClearFlow() {
  for (auto& a : arcs_) a.flow = 0.0;
}

void FlowNetwork::Validate() const {
  if (source_ < 0 || source_ >= node_count() || sink_ < 0 ||
      sink_ >= node_count()) {
    throw DataError("flow network source or sink is not a node");
  }
  if (source_ == sink_) throw DataError("flow network source equals sink");
  for (const auto& a : arcs_) {
    if (a.dst == source_) {
      throw DataError(fmt::format("arc {}->{} enters the source", a.src, a.dst));
    }
    if (a.src == sink_) {
      throw DataError(fmt::format("arc {}->{} leaves the sink", a.src, a.dst));
    }
  }
}

double ResidualCapacity(const FlowNetwork& net, const ResidualStep& step) {
  const auto& a = net.arc(step.arc);
  return step.forward ? a.capacity - a.flow : a.flow;
}

double StepCost(const FlowNetwork& net, const ResidualStep& step) {
  const auto& a = net.arc(step.arc);
  return step.forward ? a.unit_cost : -a.unit_cost;
}

int StepTail(const FlowNetwork& net, const ResidualStep& step) {
  const auto& a = net.arc(step.arc);
  return step.forward ? a.src : a.dst;
}

int StepHead(const FlowNetwork& net, const ResidualStep& step) {
  const auto& a = net.arc(step.arc);
  return step.forward ? a.dst : a.src;
}

double PathCost(const FlowNetwork& net, const AugmentingPath& path) {
  double cost = 0.0;
  for (const auto& s : path) cost += StepCost(net, s);
  return cost;
}

ShortestPathResult BellmanFordMinCostPath(const FlowNetwork& net) {
  net.Validate();
  const int n = net.node_count();
  std::vector<double> dist(n, kInfinity);
  std::vector<std::optional<ResidualStep>> pred(n);
  dist[net.source()] = 0.0;
  const auto order = RelaxationOrder(net);

  auto relax_pass = [&]() -> int {
    int last_relaxed = -1;
    for (const auto& r : order) {
      if (dist[r.tail] == kInfinity) continue;
      if (ResidualCapacity(net, r.step) <= kFlowEpsilon) continue;
      const double candidate = dist[r.tail] + StepCost(net, r.step);
      if (candidate < dist[r.head]) {
        dist[r.head] = candidate;
        pred[r.head] = r.step;
        last_relaxed = r.head;
      }
    }
    return last_relaxed;
  };

  bool converged = false;
  for (int pass = 0; pass < std::max(n - 1, 1); ++pass) {
    if (relax_pass() < 0) {
      converged = true;
      break;
    }
  }

  ShortestPathResult result;
  if (!converged) {
    const int witness = relax_pass();
    if (witness >= 0) {
      // Walk back n times to land on the cycle, then collect it.
      int v = witness;
      for (int i = 0; i < n; ++i) v = StepTail(net, *pred[v]);
      const int anchor = v;
      std::vector<ResidualStep> cycle;
      do {
        cycle.push_back(*pred[v]);
        v = StepTail(net, *pred[v]);
      } while (v != anchor);
      std::reverse(cycle.begin(), cycle.end());
      result.negative_cycle = true;
      result.cycle = std::move(cycle);
      return result;
    }
  }

  if (dist[net.sink()] == kInfinity) return result;
  AugmentingPath path;
  for (int v = net.sink(); v != net.source();) {
    path.push_back(*pred[v]);
    v = StepTail(net, *pred[v]);
  }
  std::reverse(path.begin(), path.end());
  result.cost = dist[net.sink()];
  result.path = std::move(path);
  return result;
}

double Bottleneck(const FlowNetwork& net, const AugmentingPath& path) {
  if (path.empty()) throw UsageError("bottleneck of an empty path");
  double delta = kInfinity;
  for (const auto& s : path) delta = std::min(delta, ResidualCapacity(net, s));
  return delta;
}

void Augment(FlowNetwork& net, const AugmentingPath& path, double delta) {
  if (!(delta > 0.0)) {
    throw UsageError(fmt::format("augmentation amount must be positive, got {}",
                                 delta));
  }
  const double limit = Bottleneck(net, path);
  if (delta > limit) {
    throw UsageError(fmt::format(
        "augmentation amount {} exceeds path bottleneck {}", delta, limit));
  }
  for (const auto& s : path) {
    auto& a = net.mutable_arc(s.arc);
    if (s.forward) {
      a.flow += delta;
      // Snap round-off so a saturated arc reads exactly full.
      if (std::abs(a.capacity - a.flow) <= kFlowEpsilon) a.flow = a.capacity;
    } else {
      a.flow -= delta;
      if (std::abs(a.flow) <= kFlowEpsilon) a.flow = 0.0;
    }
  }
}

AugmentingPath ReversePath(const AugmentingPath& path) {
  AugmentingPath out(path.rbegin(), path.rend());
  for (auto& s : out) s.forward = !s.forward;
  return out;
}

void CheckFlowFeasibility(const FlowNetwork& net) {
  for (const auto& a : net.arcs()) {
    if (a.flow < -kFlowEpsilon || a.flow > a.capacity + kFlowEpsilon) {
      throw InvariantError(fmt::format("arc {}->{} carries flow {} outside [0, {}]",
                                       a.src, a.dst, a.flow, a.capacity));
    }
  }
  std::vector<double> balance(net.node_count(), 0.0);
  for (const auto& a : net.arcs()) {
    balance[a.src] += a.flow;
    balance[a.dst] -= a.flow;
  }
  for (int v = 0; v < net.node_count(); ++v) {
    if (v == net.source() || v == net.sink()) continue;
    if (std::abs(balance[v]) > 1e-6) {
      throw InvariantError(
          fmt::format("node {} violates conservation by {}", v, balance[v]));
    }
  }
}

FlowResult MinCostMaxFlow(FlowNetwork& net) {
  net.Validate();
  net.ClearFlow();
  FlowResult result;
  while (true) {
    auto sp = BellmanFordMinCostPath(net);
    if (sp.negative_cycle) {
      throw NegativeCycleError(
          "negative-cost cycle in residual graph: " + DescribeCycle(net, sp.cycle),
          sp.cycle);
    }
    if (!sp.path) break;
    const double delta = Bottleneck(net, *sp.path);
    if (delta <= kFlowEpsilon) break;
    Augment(net, *sp.path, delta);
    result.flow_value += delta;
    result.augmentations.push_back({delta, sp.cost});
#ifndef NDEBUG
    CheckFlowFeasibility(net);
#endif
  }
  result.per_arc_flow.reserve(net.arcs().size());
  for (const auto& a : net.arcs()) {
    result.per_arc_flow.push_back(a.flow);
    result.total_cost += a.flow * a.unit_cost;
  }
  return result;
}

void WriteFlowDump(std::ostream& out, const FlowNetwork& net,
                   const FlowResult& result) {
  out << "src,dst,capacity,cost,flow\n";
  for (const auto& a : net.arcs()) {
    out << fmt::format("{},{},{},{},{}\n", a.src, a.dst, a.capacity,
                       a.unit_cost, a.flow);
  }
  out << fmt::format("# flow_value={} total_cost={}\n", result.flow_value,
                     result.total_cost);
}

}  // namespace dispatch
