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

#include "dispatch/scenario.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "dispatch/errors.h"

namespace dispatch {
namespace {

struct Hub {
  double row;
  double col;
  double sigma;
  double weight;
};

// Cell-center coordinates are fractions of the grid size, so the two hubs
// keep their relative placement on any grid.
double Density(const Grid& grid, CellId cell) {
  const Hub hubs[] = {{0.25, 0.3, 0.2, 1.0}, {0.7, 0.65, 0.2, 0.8}};
  const double r = (grid.Row(cell) + 0.5) / grid.rows();
  const double c = (grid.Col(cell) + 0.5) / grid.cols();
  double d = 0.02;
  for (const auto& h : hubs) {
    const double dr = r - h.row;
    const double dc = c - h.col;
    d += h.weight * std::exp(-(dr * dr + dc * dc) / (2 * h.sigma * h.sigma));
  }
  return d;
}

}  // namespace

std::vector<Courier> ScatterFleet(const Grid& grid, int count, int capacity,
                                  std::uint64_t seed) {
  if (count < 0 || capacity < 1) {
    throw UsageError("courier count must be >= 0 and capacity >= 1");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> cell(0, grid.cell_count() - 1);
  std::vector<Courier> fleet;
  for (int i = 0; i < count; ++i) {
    fleet.push_back({i + 1, CellId{cell(rng)}, capacity, CourierStatus::kIdle});
  }
  return fleet;
}

SyntheticCity BuildSyntheticCity(const SyntheticCityParams& p) {
  if (p.restaurant_count < 1 || p.restaurant_count > p.rows * p.cols) {
    throw UsageError(
        fmt::format("restaurant_count must lie in [1, {}]", p.rows * p.cols));
  }
  if (!(p.orders_per_day >= 0.0) || !(p.decay_km > 0.0)) {
    throw UsageError("orders_per_day must be >= 0 and decay_km > 0");
  }
  SyntheticCity city{BuildGrid(p.rows, p.cols, p.cell_size_km), {}, {}, {},
                     p.peaks, {}};
  const Grid& grid = city.world.grid;
  const int n = grid.cell_count();
  for (int i = 0; i < n; ++i) city.density.push_back(Density(grid, CellId{i}));

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return city.density[a] > city.density[b];
  });
  order.resize(p.restaurant_count);
  std::sort(order.begin(), order.end());
  for (int cell : order) city.restaurants.push_back({cell, CellId{cell}});

  double multiplier_sum = 0.0;
  for (int k = 0; k < p.interval_count; ++k) {
    multiplier_sum += p.peaks.Multiplier(TimeInterval{k, p.interval_minutes});
  }
  const double per_interval =
      multiplier_sum > 0.0 ? p.orders_per_day / multiplier_sum : 0.0;

  const DistanceTable distances(city.world.distance);
  double origin_total = 0.0;
  for (const auto& r : city.restaurants) origin_total += city.density[r.cell.index];
  for (const auto& r : city.restaurants) {
    std::vector<double> attraction(n, 0.0);
    double total = 0.0;
    for (int d = 0; d < n; ++d) {
      const double km = distances(r.cell, CellId{d});
      if (!(km <= p.delivery_radius_km)) continue;
      attraction[d] =
          (p.base_attraction + city.density[d]) * std::exp(-km / p.decay_km);
      total += attraction[d];
    }
    const double share = city.density[r.cell.index] / origin_total;
    for (int d = 0; d < n; ++d) {
      if (attraction[d] == 0.0) continue;
      city.rates.push_back(
          {r.cell, CellId{d}, per_interval * share * attraction[d] / total});
    }
  }

  city.fleet = ScatterFleet(grid, p.courier_count, p.courier_capacity, p.seed);
  return city;
}

std::vector<Order> SampleOrders(const SyntheticCity& city,
                                const SyntheticCityParams& p,
                                std::uint64_t seed) {
  const DistanceTable distances(city.world.distance);
  std::vector<Order> orders;
  int next_id = 1;
  for (int k = 0; k < p.interval_count; ++k) {
    const TimeInterval interval{k, p.interval_minutes};
    const DemandMatrix m = SamplePoissonDemand(city.rates, city.peaks, seed, interval);
    for (const auto& [key, count] : m.entries()) {
      const CellId origin{key.first};
      const CellId dest{key.second};
      const double fee =
          std::round(p.fee_base + p.fee_per_km * distances(origin, dest));
      for (int j = 0; j < static_cast<int>(count); ++j) {
        orders.push_back({next_id++, origin.index, dest, fee, interval, {}});
      }
    }
  }
  return orders;
}

Scenario MakeScenario(const SyntheticCity& city, std::vector<Order> orders) {
  return {city.world, city.fleet, city.restaurants, std::move(orders)};
}

SimConfig SyntheticConfig(const SyntheticCity& city,
                          const SyntheticCityParams& p) {
  SimConfig c;
  c.rows = p.rows;
  c.cols = p.cols;
  c.cell_size_km = p.cell_size_km;
  c.interval_minutes = p.interval_minutes;
  c.interval_count = p.interval_count;
  c.courier_capacity = p.courier_capacity;
  c.delivery_radius_km = p.delivery_radius_km;
  c.predictor.kind = PredictorKind::kSyntheticPoisson;
  c.predictor.horizon = 4;
  c.predictor.rates = city.rates;
  c.predictor.peaks = city.peaks;
  c.predictor.seed = p.seed ^ 0x9e3779b97f4a7c15ULL;
  c.predictor.expected_values = true;
  c.seed = p.seed;
  return c;
}

}  // namespace dispatch
