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

#ifndef DISPATCH_DEMAND_MATRIX_H_
#define DISPATCH_DEMAND_MATRIX_H_

#include <compare>
#include <map>
#include <utility>

namespace dispatch {

// One grid cell, addressed row-major.
struct CellId {
  int index = 0;

  friend auto operator<=>(const CellId&, const CellId&) = default;
};

// A discrete time slot of the operating day.
struct TimeInterval {
  int index = 0;
  int length_minutes = 15;

  // Throws UsageError unless length_minutes > 0 divides a day and index >= 0.
  void Validate() const;
  int StartMinute() const { return index * length_minutes; }

  friend bool operator==(const TimeInterval&, const TimeInterval&) = default;
};

// Order counts per (origin cell, destination cell) for one interval. Counts
// may be fractional when the matrix holds a prediction. Zero entries are not
// stored, so two matrices with the same positive entries compare equal.
class DemandMatrix {
 public:
  using Key = std::pair<int, int>;

  DemandMatrix() = default;
  explicit DemandMatrix(TimeInterval interval) : interval_(interval) {}

  // Throws DataError on a negative count.
  void Set(CellId origin, CellId destination, double count);
  void Add(CellId origin, CellId destination, double count);
  double Get(CellId origin, CellId destination) const;

  double Total() const;
  double OutgoingTotal(CellId origin) const;
  bool empty() const { return counts_.empty(); }

  const TimeInterval& interval() const { return interval_; }
  void set_interval(TimeInterval interval) { interval_ = interval; }
  const std::map<Key, double>& entries() const { return counts_; }

  friend bool operator==(const DemandMatrix&, const DemandMatrix&) = default;

 private:
  TimeInterval interval_;
  std::map<Key, double> counts_;
};

}  // namespace dispatch

#endif  // DISPATCH_DEMAND_MATRIX_H_
