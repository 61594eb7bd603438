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

// Seeded synthetic city: a grid with two demand hubs, restaurants in the
// densest cells, gravity-model order rates and a uniformly scattered fleet.

#ifndef DISPATCH_SCENARIO_H_
#define DISPATCH_SCENARIO_H_

#include <cstdint>
#include <vector>

#include "dispatch/demand.h"
#include "dispatch/simulator.h"

namespace dispatch {

struct SyntheticCityParams {
  int rows = 10;
  int cols = 10;
  double cell_size_km = 2.0;
  int restaurant_count = 50;
  int courier_count = 40;
  int courier_capacity = 3;
  double orders_per_day = 2000.0;
  int interval_minutes = 15;
  int interval_count = 96;
  // Drop-offs are drawn only within this distance of the restaurant.
  double delivery_radius_km = 8.0;
  // Length scale of the drop-off distance decay.
  double decay_km = 4.0;
  // Drop-off attraction floor added to the density of every cell.
  double base_attraction = 0.1;
  double fee_base = 30.0;
  double fee_per_km = 2.0;
  PeakProfile peaks{.lunch_multiplier = 2.5,
                    .dinner_multiplier = 2.5,
                    .night_multiplier = 0.2};
  std::uint64_t seed = 7;
};

struct SyntheticCity {
  GridWorld world;
  std::vector<double> density;  // per cell
  std::vector<Restaurant> restaurants;
  std::vector<OdRate> rates;
  PeakProfile peaks;
  std::vector<Courier> fleet;
};

// `count` couriers with ids 1..count on uniformly drawn cells.
std::vector<Courier> ScatterFleet(const Grid& grid, int count, int capacity,
                                  std::uint64_t seed);

// Throws UsageError on impossible sizes.
SyntheticCity BuildSyntheticCity(const SyntheticCityParams& params);

// One Poisson draw per rate and interval, expanded into individual orders.
// Restaurant ids equal their cell index; fees are whole numbers.
std::vector<Order> SampleOrders(const SyntheticCity& city,
                                const SyntheticCityParams& params,
                                std::uint64_t seed);

Scenario MakeScenario(const SyntheticCity& city, std::vector<Order> orders);

// Config matching the city, with a synthetic_poisson predictor on the city's
// rates drawn from a seed independent of the order stream.
SimConfig SyntheticConfig(const SyntheticCity& city,
                          const SyntheticCityParams& params);

}  // namespace dispatch

#endif  // DISPATCH_SCENARIO_H_
