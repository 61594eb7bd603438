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

// Demand predictors. Every predictor is a pure function of its spec, the
// realized history and the target interval.

#ifndef DISPATCH_DEMAND_H_
#define DISPATCH_DEMAND_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "dispatch/demand_matrix.h"

namespace dispatch {

enum class PredictorKind {
  kReplayPrevious,   // realized matrix of the preceding interval(s)
  kReplayOracle,     // realized matrix of the target itself (hindsight)
  kSyntheticPoisson  // seeded Poisson draws from a rate table
};

PredictorKind ParsePredictorKind(std::string_view name);
std::string_view PredictorKindName(PredictorKind kind);

// Expected orders per interval on one origin-destination pair, before the
// time-of-day multiplier.
struct OdRate {
  CellId origin;
  CellId destination;
  double base_rate = 0.0;
};

// Time-of-day multipliers: lunch and dinner peaks plus a quiet night. Windows
// are [start, end) in minutes after midnight; outside them the multiplier
// is 1.
struct PeakProfile {
  double lunch_multiplier = 1.0;
  int lunch_start_minute = 11 * 60;
  int lunch_end_minute = 14 * 60;
  double dinner_multiplier = 1.0;
  int dinner_start_minute = 18 * 60;
  int dinner_end_minute = 21 * 60;
  double night_multiplier = 1.0;
  int night_start_minute = 0;
  int night_end_minute = 7 * 60;

  double Multiplier(const TimeInterval& interval) const;
};

struct PredictorSpec {
  PredictorKind kind = PredictorKind::kReplayPrevious;
  // Number of intervals aggregated into one prediction. For replay_previous
  // these are the `horizon` intervals before the target; for the other kinds
  // the target and the `horizon - 1` intervals after it.
  int horizon = 1;
  // synthetic_poisson only.
  std::vector<OdRate> rates;
  std::optional<PeakProfile> peaks;
  std::uint64_t seed = 0;
  // synthetic_poisson: return the Poisson means instead of draws.
  bool expected_values = false;
};

// Throws DataError when a replay kind lacks a required history interval and
// UsageError when synthetic_poisson has no rates or peak profile.
DemandMatrix Predict(const PredictorSpec& spec,
                     std::span<const DemandMatrix> history,
                     TimeInterval target);

// Rate times the interval's peak multiplier, per rate entry.
DemandMatrix ExpectedDemand(std::span<const OdRate> rates,
                            const PeakProfile& peaks, TimeInterval interval);

// One Poisson draw per rate entry, seeded from (seed, interval index) so
// that draws for different intervals are independent of call order.
DemandMatrix SamplePoissonDemand(std::span<const OdRate> rates,
                                 const PeakProfile& peaks, std::uint64_t seed,
                                 TimeInterval interval);

}  // namespace dispatch

#endif  // DISPATCH_DEMAND_H_
