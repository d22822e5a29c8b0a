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

#include "natopo/circuit.hpp"
#include "natopo/mapper.hpp"
#include "natopo/predictor.hpp"
#include "natopo/scheduler.hpp"
#include "natopo/sim.hpp"
#include "natopo/topology.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>

namespace natopo {

struct CompileOptions {
  RadiusConfig radii;
  GateDurations durations;
  std::optional<LatticeSpec> lattice; ///< default: minLatticeFor(numQubits)
};

struct CompileResult {
  LatticeSpec latticeSpec;
  Mapping mapping;
  RoutedCircuit routed;
  Dag dag;
  Schedule sched;
  ExecutionMetrics metrics;
};

/// map -> route -> schedule -> metrics for one topology.
CompileResult compileCircuit(const Circuit& circuit, LatticeKind kind,
                             const CompileOptions& options = {});

/// Trajectory steps of a routed circuit over the logical register: routing
/// SWAPs are physical relocations (identity on logical state) and
/// contribute only their depolarizing noise on logical operands.
std::vector<TrajectoryStep> routedTrajectory(const RoutedCircuit& routed);

/// Hamming-based fidelity label of a routed circuit under gate noise,
/// measured against the logical circuit's ideal distribution.
ErrorReport simulateRouted(const Circuit& logical, const RoutedCircuit& routed,
                           const NoiseModel& noise, long long shots,
                           std::uint64_t seed);

inline constexpr std::array<LatticeKind, 3> kAllTopologies{
    LatticeKind::Square, LatticeKind::STriangle, LatticeKind::TTriangle};

/// Per-topology ground-truth labels for one circuit.
struct TopologyLabels {
  std::array<ExecutionMetrics, 3> metrics; ///< kAllTopologies order
  std::array<double, 3> fidelity{};        ///< only when simulated
  bool hasFidelity = false;

  double value(Metric metric, std::size_t topologyIndex) const;
};

struct LabelOptions {
  CompileOptions compile;
  bool simulateFidelity = false; ///< only applied when width fits the guard
  int fidelityMaxWidth = 12;
  NoiseModel noise;
  long long shots = 5000;
  std::uint64_t seed = 0;
};

TopologyLabels labelCircuit(const Circuit& circuit, const LabelOptions& options);

/// Deterministic corpus-parallel map: runs fn(0..count-1) on `jobs`
/// threads, results ordered by index regardless of interleaving.
void parallelFor(std::size_t count, int jobs,
                 const std::function<void(std::size_t)>& fn);

// JSON / CSV emission for the external interfaces
std::string routedToJson(const RoutedCircuit& routed);
std::string scheduleToJson(const Schedule& sched, const RoutedCircuit& routed);
std::string scheduleTimelineCsv(const Schedule& sched,
                                const RoutedCircuit& routed);

} // namespace natopo
