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

// Hand-encoded instances shared by the unit and acceptance tests.

#ifndef DISPATCH_TESTS_FIXTURES_H_
#define DISPATCH_TESTS_FIXTURES_H_

#include "dispatch/allocation.h"
#include "dispatch/grid.h"

namespace dispatch::testing {

// 2x3 lattice, cell size 2:
//
//   v1 v2 v6
//   v5 v3 v4
struct SixCell {
  static constexpr CellId v1{0};
  static constexpr CellId v2{1};
  static constexpr CellId v6{2};
  static constexpr CellId v5{3};
  static constexpr CellId v3{4};
  static constexpr CellId v4{5};
};

// Order weights v5->v3 = 1, v5->v4 = 3, v3->v4 = 2, plus v4->v6 = 4 off the
// main path.
inline GraphFamily SixCellFamily() {
  GridWorld world = BuildGrid(2, 3, 2.0);
  OrderGraph orders(world.grid.cell_count());
  orders.SetWeight(SixCell::v5, SixCell::v3, 1);
  orders.SetWeight(SixCell::v5, SixCell::v4, 3);
  orders.SetWeight(SixCell::v3, SixCell::v4, 2);
  orders.SetWeight(SixCell::v4, SixCell::v6, 4);
  return {world.grid, world.distance, orders};
}

// Four couriers, four restaurants, four drop-off areas on a 4x4 lattice with
// 1 km cells:
//
//   r1 .  .  d1
//   d2 c1 r3 .
//   c3 d3 c4 r4
//   r2 d4 c2 .
//
// d1 is 3 km from r1 and carries 2 orders. r2 has six orders to c2 at fee
// 60; r1 has four orders to c2 at fee 80.
struct ThreeLayer {
  static constexpr CellId r1{0};
  static constexpr CellId d1{3};
  static constexpr CellId d2{4};
  static constexpr CellId c1{5};
  static constexpr CellId r3{6};
  static constexpr CellId c3{8};
  static constexpr CellId d3{9};
  static constexpr CellId c4{10};
  static constexpr CellId r4{11};
  static constexpr CellId r2{12};
  static constexpr CellId d4{13};
  static constexpr CellId c2{14};

  GridWorld world = BuildGrid(4, 4, 1.0);
  AllocationProblem problem;

  ThreeLayer() {
    problem.couriers = {{1, d1, 2, CourierStatus::kIdle},
                        {2, d2, 3, CourierStatus::kIdle},
                        {3, d3, 2, CourierStatus::kIdle},
                        {4, d4, 1, CourierStatus::kIdle}};
    problem.restaurants = {{1, r1}, {2, r2}, {3, r3}, {4, r4}};
    int id = 1;
    auto add = [&](int restaurant, CellId dropoff, double fee, int count) {
      for (int i = 0; i < count; ++i) {
        problem.orders.push_back({id++, restaurant, dropoff, fee, {0, 15}, {}});
      }
    };
    add(2, c2, 60, 6);
    add(1, c2, 80, 4);
    add(1, c1, 50, 1);
    add(3, c4, 40, 2);
    add(4, c3, 70, 1);
    problem.params.pickup_threshold_km = 4.0;
    problem.params.delivery_radius_km = 8.0;
    problem.params.detour_threshold = 1.5;
    problem.params.cost_per_km = 1.0;
  }
};

}  // namespace dispatch::testing

#endif  // DISPATCH_TESTS_FIXTURES_H_
