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

#include "natopo/scheduler.hpp"

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>

namespace natopo {

std::vector<std::pair<int, int>> Dag::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < numNodes; ++u) {
    for (const int v : succ[u]) {
      out.emplace_back(u, v);
    }
  }
  return out;
}

Dag buildDag(const RoutedCircuit& routed) {
  Dag dag;
  dag.numNodes = static_cast<int>(routed.instructions.size());
  dag.succ.assign(dag.numNodes, {});
  dag.pred.assign(dag.numNodes, {});

  std::vector<std::set<int>> predSets(dag.numNodes);
  std::vector<int> frontier(routed.numAtoms, -1);
  for (const auto& instr : routed.instructions) {
    for (const int atom : instr.atoms) {
      if (frontier[atom] >= 0) {
        predSets[instr.id].insert(frontier[atom]);
      }
      frontier[atom] = instr.id;
    }
    for (const int prior : instr.priorSwaps) {
      predSets[instr.id].insert(prior);
    }
  }
  for (int v = 0; v < dag.numNodes; ++v) {
    for (const int u : predSets[v]) {
      dag.pred[v].push_back(u);
      dag.succ[u].push_back(v);
    }
  }
  for (auto& s : dag.succ) {
    std::sort(s.begin(), s.end());
  }
  return dag;
}

namespace {

bool blockadeConflict(const RoutedInstruction& a, const RoutedInstruction& b,
                      const Lattice& lattice, double rb) {
  for (const int sa : a.sites) {
    for (const int sb : b.sites) {
      if (distance(lattice.sites[sa], lattice.sites[sb]) < rb) {
        return true;
      }
    }
  }
  return false;
}

int frequencyOf(const RoutedInstruction& instr, const ScheduleOptions& opt) {
  if (instr.kind == GateKind::Swap) {
    return opt.frequencySwap;
  }
  return instr.atoms.size() == 3 ? opt.frequency3q : opt.frequency2q;
}

} // namespace

Schedule schedule(const Dag& dag, const RoutedCircuit& routed,
                  const Lattice& lattice, const RadiusConfig& radii,
                  const ScheduleOptions& options) {
  const int n = dag.numNodes;
  Schedule sched;
  sched.start.assign(n, -1);
  sched.duration.assign(n, 0);
  for (const auto& instr : routed.instructions) {
    sched.duration[instr.id] = options.durations.of(instr);
  }
  if (n == 0) {
    return sched;
  }

  std::vector<int> remainingPreds(n, 0);
  for (int v = 0; v < n; ++v) {
    remainingPreds[v] = static_cast<int>(dag.pred[v].size());
  }
  std::set<int> ready;
  for (int v = 0; v < n; ++v) {
    if (remainingPreds[v] == 0) {
      ready.insert(v);
    }
  }

  std::vector<bool> atomBusy(routed.numAtoms, false);
  std::vector<int> running; // ids, end time = start + duration
  int started = 0;
  int t = 0;

  while (started < n) {
    // retire gates ending at or before t
    for (std::size_t i = 0; i < running.size();) {
      const int id = running[i];
      if (sched.start[id] + sched.duration[id] <= t) {
        for (const int atom : routed.instructions[id].atoms) {
          atomBusy[atom] = false;
        }
        for (const int succ : dag.succ[id]) {
          if (--remainingPreds[succ] == 0) {
            ready.insert(succ);
          }
        }
        running[i] = running.back();
        running.pop_back();
      } else {
        ++i;
      }
    }

    // single ascending-id pass; started gates immediately constrain later
    // candidates in the same sweep
    std::vector<int> startedNow;
    for (const int id : ready) {
      const auto& instr = routed.instructions[id];
      bool ok = true;
      for (const int atom : instr.atoms) {
        if (atomBusy[atom]) {
          ok = false;
          break;
        }
      }
      if (ok && instr.atoms.size() > 1) {
        for (const int other : running) {
          const auto& run = routed.instructions[other];
          if (run.atoms.size() < 2) {
            continue;
          }
          if (options.exemptSameFrequency &&
              frequencyOf(instr, options) == frequencyOf(run, options)) {
            continue;
          }
          if (blockadeConflict(instr, run, lattice, radii.rb)) {
            ok = false;
            break;
          }
        }
      }
      if (ok) {
        sched.start[id] = t;
        for (const int atom : instr.atoms) {
          atomBusy[atom] = true;
        }
        running.push_back(id);
        startedNow.push_back(id);
        ++started;
      }
    }
    for (const int id : startedNow) {
      ready.erase(id);
    }

    if (started == n) {
      break;
    }
    // next decision point: the earliest running finish (identical schedules
    // to advancing one step at a time, since nothing changes in between)
    int next = std::numeric_limits<int>::max();
    for (const int id : running) {
      next = std::min(next, sched.start[id] + sched.duration[id]);
    }
    if (running.empty()) {
      throw std::logic_error("scheduler stalled with no running gates");
    }
    t = next;
  }

  for (int v = 0; v < n; ++v) {
    sched.makespan = std::max(sched.makespan, sched.start[v] + sched.duration[v]);
  }
  return sched;
}

ExecutionMetrics metrics(const Schedule& schedule, const RoutedCircuit& routed,
                         const GateDurations& durations) {
  ExecutionMetrics m;
  m.criticalPulseCount = schedule.makespan;
  for (const auto& instr : routed.instructions) {
    m.totalPulseCount += durations.of(instr);
  }
  m.swapCount = routed.swapCount;
  return m;
}

std::vector<ScheduleViolation> validate(const Schedule& schedule,
                                        const Dag& dag,
                                        const RoutedCircuit& routed,
                                        const Lattice& lattice,
                                        const RadiusConfig& radii) {
  std::vector<ScheduleViolation> violations;
  const int n = static_cast<int>(routed.instructions.size());

  for (int u = 0; u < n; ++u) {
    for (const int v : dag.succ[u]) {
      if (schedule.start[v] < schedule.start[u] + schedule.duration[u]) {
        violations.push_back({"dependency", u, v,
                              "successor starts before predecessor finishes"});
      }
    }
  }

  const auto overlaps = [&](int a, int b) {
    return schedule.start[a] < schedule.start[b] + schedule.duration[b] &&
           schedule.start[b] < schedule.start[a] + schedule.duration[a];
  };

  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (!overlaps(a, b)) {
        continue;
      }
      const auto& ia = routed.instructions[a];
      const auto& ib = routed.instructions[b];
      for (const int atomA : ia.atoms) {
        for (const int atomB : ib.atoms) {
          if (atomA == atomB) {
            violations.push_back({"exclusivity", a, b,
                                  "atom " + std::to_string(atomA) +
                                      " in two overlapping instructions"});
          }
        }
      }
      if (ia.atoms.size() > 1 && ib.atoms.size() > 1 &&
          blockadeConflict(ia, ib, lattice, radii.rb)) {
        violations.push_back(
            {"blockade", a, b, "operand sites within the blockade radius"});
      }
    }
  }
  return violations;
}

} // namespace natopo
