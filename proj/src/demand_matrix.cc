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

#include "dispatch/demand_matrix.h"

#include <fmt/format.h>

#include "dispatch/errors.h"

namespace dispatch {

void TimeInterval::Validate() const {
  if (length_minutes <= 0 || 1440 % length_minutes != 0) {
    throw UsageError(fmt::format(
        "interval length {} minutes does not divide a day", length_minutes));
  }
  if (index < 0) {
    throw UsageError(fmt::format("negative interval index {}", index));
  }
}

void DemandMatrix::Set(CellId origin, CellId destination, double count) {
  if (!(count >= 0.0)) {
    throw DataError(fmt::format("negative demand {} for {}->{}", count,
                                origin.index, destination.index));
  }
  const Key key{origin.index, destination.index};
  if (count == 0.0) {
    counts_.erase(key);
  } else {
    counts_[key] = count;
  }
}

void DemandMatrix::Add(CellId origin, CellId destination, double count) {
  Set(origin, destination, Get(origin, destination) + count);
}

double DemandMatrix::Get(CellId origin, CellId destination) const {
  auto it = counts_.find({origin.index, destination.index});
  return it == counts_.end() ? 0.0 : it->second;
}

double DemandMatrix::Total() const {
  double total = 0.0;
  for (const auto& [key, count] : counts_) total += count;
  return total;
}

double DemandMatrix::OutgoingTotal(CellId origin) const {
  double total = 0.0;
  for (auto it = counts_.lower_bound({origin.index, 0});
       it != counts_.end() && it->first.first == origin.index; ++it) {
    total += it->second;
  }
  return total;
}

}  // namespace dispatch
