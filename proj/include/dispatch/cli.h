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

// Command-line front end: run, sweep, gen-synthetic, validate, geo-to-cell.

#ifndef DISPATCH_CLI_H_
#define DISPATCH_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "dispatch/grid.h"
#include "dispatch/io.h"
#include "dispatch/simulator.h"

namespace dispatch {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitInvariant = 3;

// `args` includes the program name. Diagnostics go to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

// Grid world, fleet and orders described by a run config. Throws UsageError
// when no order log is configured.
Scenario LoadScenario(RunConfig& config);

// Equirectangular projection from the grid's south-west corner. Row 0 is the
// southernmost row. Throws DataError for points off the grid.
CellId GeoToCell(double lat, double lon, double origin_lat, double origin_lon,
                 const Grid& grid);

}  // namespace dispatch

#endif  // DISPATCH_CLI_H_
