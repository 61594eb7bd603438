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

#include "dispatch/demand.h"

#include <random>
#include <string>

#include <fmt/format.h>

#include "dispatch/errors.h"

namespace dispatch {
namespace {

bool InWindow(int minute, int start, int end) {
  return start <= minute && minute < end;
}

const DemandMatrix* FindInterval(std::span<const DemandMatrix> history,
                                 int index) {
  for (const auto& m : history) {
    if (m.interval().index == index) return &m;
  }
  return nullptr;
}

void Accumulate(const DemandMatrix& from, DemandMatrix& into) {
  for (const auto& [key, count] : from.entries()) {
    into.Add(CellId{key.first}, CellId{key.second}, count);
  }
}

}  // namespace

PredictorKind ParsePredictorKind(std::string_view name) {
  if (name == "replay_previous") return PredictorKind::kReplayPrevious;
  if (name == "replay_oracle") return PredictorKind::kReplayOracle;
  if (name == "synthetic_poisson") return PredictorKind::kSyntheticPoisson;
  throw UsageError(fmt::format("unknown predictor kind '{}'", name));
}

std::string_view PredictorKindName(PredictorKind kind) {
  switch (kind) {
    case PredictorKind::kReplayPrevious:
      return "replay_previous";
    case PredictorKind::kReplayOracle:
      return "replay_oracle";
    case PredictorKind::kSyntheticPoisson:
      return "synthetic_poisson";
  }
  return "unknown";
}

double PeakProfile::Multiplier(const TimeInterval& interval) const {
  const int minute = interval.StartMinute() % 1440;
  if (InWindow(minute, lunch_start_minute, lunch_end_minute)) {
    return lunch_multiplier;
  }
  if (InWindow(minute, dinner_start_minute, dinner_end_minute)) {
    return dinner_multiplier;
  }
  if (InWindow(minute, night_start_minute, night_end_minute)) {
    return night_multiplier;
  }
  return 1.0;
}

DemandMatrix SamplePoissonDemand(std::span<const OdRate> rates,
                                 const PeakProfile& peaks, std::uint64_t seed,
                                 TimeInterval interval) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(interval.index)};
  std::mt19937_64 rng(seq);
  const double multiplier = peaks.Multiplier(interval);
  DemandMatrix m(interval);
  for (const auto& r : rates) {
    const double mean = r.base_rate * multiplier;
    if (!(mean >= 0.0)) {
      throw DataError(fmt::format("negative rate on {}->{}", r.origin.index,
                                  r.destination.index));
    }
    if (mean == 0.0) continue;
    std::poisson_distribution<int> draw(mean);
    const int count = draw(rng);
    if (count > 0) m.Add(r.origin, r.destination, count);
  }
  return m;
}

DemandMatrix ExpectedDemand(std::span<const OdRate> rates,
                            const PeakProfile& peaks, TimeInterval interval) {
  const double multiplier = peaks.Multiplier(interval);
  DemandMatrix m(interval);
  for (const auto& r : rates) {
    const double mean = r.base_rate * multiplier;
    if (!(mean >= 0.0)) {
      throw DataError(fmt::format("negative rate on {}->{}", r.origin.index,
                                  r.destination.index));
    }
    if (mean > 0.0) m.Add(r.origin, r.destination, mean);
  }
  return m;
}

DemandMatrix Predict(const PredictorSpec& spec,
                     std::span<const DemandMatrix> history,
                     TimeInterval target) {
  target.Validate();
  if (spec.horizon < 1) {
    throw UsageError(fmt::format("horizon must be >= 1, got {}", spec.horizon));
  }
  DemandMatrix out(target);
  switch (spec.kind) {
    case PredictorKind::kReplayPrevious: {
      if (history.empty()) return out;
      for (int k = target.index - spec.horizon; k < target.index; ++k) {
        if (k < 0) continue;
        const DemandMatrix* m = FindInterval(history, k);
        if (m == nullptr) {
          throw DataError(
              fmt::format("replay_previous: history lacks interval {}", k));
        }
        Accumulate(*m, out);
      }
      return out;
    }
    case PredictorKind::kReplayOracle: {
      for (int k = target.index; k < target.index + spec.horizon; ++k) {
        const DemandMatrix* m = FindInterval(history, k);
        if (m == nullptr) {
          throw DataError(
              fmt::format("replay_oracle: history lacks interval {}", k));
        }
        Accumulate(*m, out);
      }
      return out;
    }
    case PredictorKind::kSyntheticPoisson: {
      if (spec.rates.empty()) {
        throw UsageError("synthetic_poisson requires a rate table");
      }
      if (!spec.peaks.has_value()) {
        throw UsageError("synthetic_poisson requires peak multipliers");
      }
      for (int k = target.index; k < target.index + spec.horizon; ++k) {
        const TimeInterval interval{k, target.length_minutes};
        Accumulate(spec.expected_values
                       ? ExpectedDemand(spec.rates, *spec.peaks, interval)
                       : SamplePoissonDemand(spec.rates, *spec.peaks, spec.seed,
                                             interval),
                   out);
      }
      return out;
    }
  }
  return out;
}

}  // namespace dispatch
