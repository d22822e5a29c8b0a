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

#include "natopo/pipeline.hpp"

#include <atomic>
#include <nlohmann/json.hpp>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace natopo {

CompileResult compileCircuit(const Circuit& circuit, LatticeKind kind,
                             const CompileOptions& options) {
  CompileResult result;
  result.latticeSpec = options.lattice
                           ? *options.lattice
                           : minLatticeFor(std::max(circuit.numQubits, 1), kind);
  if (!options.lattice) {
    result.latticeSpec.kind = kind;
  }
  const Lattice lattice(result.latticeSpec);
  const auto graph = interactionGraph(circuit);
  result.mapping = mapCircuit(circuit, lattice, graph);
  result.routed = routeSwaps(circuit, result.mapping, lattice, options.radii);
  result.dag = buildDag(result.routed);
  ScheduleOptions schedOptions;
  schedOptions.durations = options.durations;
  result.sched =
      schedule(result.dag, result.routed, lattice, options.radii, schedOptions);
  result.metrics = metrics(result.sched, result.routed, options.durations);
  return result;
}

std::vector<TrajectoryStep> routedTrajectory(const RoutedCircuit& routed) {
  std::vector<TrajectoryStep> steps;
  steps.reserve(routed.instructions.size());
  for (const auto& instr : routed.instructions) {
    TrajectoryStep step;
    if (instr.isRoutingSwap()) {
      // relocation only: noise on the logical operands, no unitary
      for (const int atom : instr.atoms) {
        if (atom < routed.numQubits) {
          step.noiseQubits.push_back(atom);
        }
      }
      if (step.noiseQubits.empty()) {
        continue;
      }
    } else {
      Instruction gate;
      gate.id = instr.id;
      gate.kind = instr.kind;
      gate.qubits = instr.atoms;
      gate.params = instr.params;
      step.gate = std::move(gate);
      step.noiseQubits = instr.atoms;
    }
    steps.push_back(std::move(step));
  }
  return steps;
}

ErrorReport simulateRouted(const Circuit& logical, const RoutedCircuit& routed,
                           const NoiseModel& noise, long long shots,
                           std::uint64_t seed) {
  const auto ideal = idealDistribution(logical);
  const auto counts = noisySampleSteps(logical.numQubits,
                                       routedTrajectory(routed), noise, shots,
                                       seed);
  return bitwiseError(ideal, counts);
}

double TopologyLabels::value(Metric metric, std::size_t topologyIndex) const {
  switch (metric) {
  case Metric::Critical:
    return static_cast<double>(metrics[topologyIndex].criticalPulseCount);
  case Metric::Total:
    return static_cast<double>(metrics[topologyIndex].totalPulseCount);
  case Metric::Fidelity:
    if (!hasFidelity) {
      throw std::logic_error("fidelity label requested but not simulated");
    }
    return fidelity[topologyIndex];
  }
  return 0;
}

TopologyLabels labelCircuit(const Circuit& circuit,
                            const LabelOptions& options) {
  TopologyLabels labels;
  const bool fid = options.simulateFidelity &&
                   circuit.numQubits <= options.fidelityMaxWidth;
  for (std::size_t i = 0; i < kAllTopologies.size(); ++i) {
    const auto compiled =
        compileCircuit(circuit, kAllTopologies[i], options.compile);
    labels.metrics[i] = compiled.metrics;
    if (fid) {
      labels.fidelity[i] =
          simulateRouted(circuit, compiled.routed, options.noise,
                         options.shots, Rng::deriveSeed(options.seed, i))
              .fidelity();
    }
  }
  labels.hasFidelity = fid;
  return labels;
}

void parallelFor(std::size_t count, int jobs,
                 const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      fn(i);
    }
    return;
  }
  const int workers = std::min<std::size_t>(jobs, count);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  threads.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= count) {
            return;
          }
          fn(i);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) {
    t.join();
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

std::string routedToJson(const RoutedCircuit& routed) {
  nlohmann::json j;
  j["qubits"] = routed.numQubits;
  j["atoms"] = routed.numAtoms;
  j["swaps"] = routed.swapCount;
  nlohmann::json initial = nlohmann::json::array();
  for (int q = 0; q < routed.numQubits; ++q) {
    initial.push_back(routed.initialMapping.siteOf(q));
  }
  j["initial_mapping"] = std::move(initial);
  nlohmann::json fin = nlohmann::json::array();
  for (int q = 0; q < routed.numQubits; ++q) {
    fin.push_back(routed.finalMapping.siteOf(q));
  }
  j["final_mapping"] = std::move(fin);
  nlohmann::json instrs = nlohmann::json::array();
  for (const auto& instr : routed.instructions) {
    nlohmann::json row;
    row["id"] = instr.id;
    row["gate"] = gateName(instr.kind);
    row["atoms"] = instr.atoms;
    row["sites"] = instr.sites;
    if (!instr.params.empty()) {
      row["params"] = instr.params;
    }
    if (instr.sourceId >= 0) {
      row["source"] = instr.sourceId;
    }
    if (instr.isRoutingSwap()) {
      row["serves"] = instr.servesId;
      row["prior_swaps"] = instr.priorSwaps;
    }
    instrs.push_back(std::move(row));
  }
  j["instructions"] = std::move(instrs);
  return j.dump();
}

std::string scheduleToJson(const Schedule& sched,
                           const RoutedCircuit& routed) {
  nlohmann::json j;
  j["makespan"] = sched.makespan;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& instr : routed.instructions) {
    nlohmann::json row;
    row["id"] = instr.id;
    row["gate"] = gateName(instr.kind);
    row["atoms"] = instr.atoms;
    row["sites"] = instr.sites;
    row["start"] = sched.start[instr.id];
    row["duration"] = sched.duration[instr.id];
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j.dump();
}

std::string scheduleTimelineCsv(const Schedule& sched,
                                const RoutedCircuit& routed) {
  std::ostringstream out;
  out << "id,gate,atoms,sites,start,duration\n";
  for (const auto& instr : routed.instructions) {
    out << instr.id << ',' << gateName(instr.kind) << ',';
    for (std::size_t i = 0; i < instr.atoms.size(); ++i) {
      out << (i ? " " : "") << instr.atoms[i];
    }
    out << ',';
    for (std::size_t i = 0; i < instr.sites.size(); ++i) {
      out << (i ? " " : "") << instr.sites[i];
    }
    out << ',' << sched.start[instr.id] << ',' << sched.duration[instr.id]
        << '\n';
  }
  return out.str();
}

} // namespace natopo
