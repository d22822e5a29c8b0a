// Copyright 2026 natopo contributors
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

#pragma once

#include "natopo/mapper.hpp"
#include "natopo/topology.hpp"

#include <string>
#include <vector>

namespace natopo {

/// Pulse-unit gate durations. SWAPs cost three 2-qubit gates by default.
struct GateDurations {
  int pulses1q = 1;
  int pulses2q = 3;
  int pulses3q = 5;
  int pulsesSwap = 9;

  int of(const RoutedInstruction& instr) const {
    if (instr.kind == GateKind::Swap) {
      return pulsesSwap;
    }
    switch (instr.atoms.size()) {
    case 1:
      return pulses1q;
    case 2:
      return pulses2q;
    default:
      return pulses3q;
    }
  }
};

/// Dependency DAG over routed instruction ids: per-atom program order plus
/// recorded SWAP-provenance edges.
struct Dag {
  int numNodes = 0;
  std::vector<std::vector<int>> succ;
  std::vector<std::vector<int>> pred;

  std::vector<std::pair<int, int>> edges() const;
};

Dag buildDag(const RoutedCircuit& routed);

struct ScheduleOptions {
  GateDurations durations;
  /// Same-frequency blockade exemption (off = conservative default): when
  /// enabled, multi-qubit gates whose classes carry equal frequency tags
  /// skip the mutual blockade check.
  bool exemptSameFrequency = false;
  int frequency2q = 0;
  int frequency3q = 0;
  int frequencySwap = 0;
};

struct Schedule {
  std::vector<int> start;    ///< per routed instruction id, pulse units
  std::vector<int> duration; ///< per routed instruction id
  int makespan = 0;
};

/// Greedy blockade-aware list scheduling: at each timestep, ready
/// instructions are scanned in ascending id and started when none of their
/// atoms is mid-gate and, for multi-qubit gates, no operand site of a
/// running multi-qubit gate lies strictly within rb of theirs.
Schedule schedule(const Dag& dag, const RoutedCircuit& routed,
                  const Lattice& lattice, const RadiusConfig& radii,
                  const ScheduleOptions& options = {});

struct ExecutionMetrics {
  long long criticalPulseCount = 0; ///< schedule makespan
  long long totalPulseCount = 0;    ///< sum of all gate durations
  int swapCount = 0;
};

ExecutionMetrics metrics(const Schedule& schedule, const RoutedCircuit& routed,
                         const GateDurations& durations);

struct ScheduleViolation {
  std::string rule; ///< "dependency" | "exclusivity" | "blockade"
  int first = -1;
  int second = -1;
  std::string detail;
};

/// Independent legality check of a schedule against all three invariants.
std::vector<ScheduleViolation> validate(const Schedule& schedule,
                                        const Dag& dag,
                                        const RoutedCircuit& routed,
                                        const Lattice& lattice,
                                        const RadiusConfig& radii);

} // namespace natopo
