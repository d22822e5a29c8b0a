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

#include "natopo/mapper.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace natopo {

void Mapping::place(int qubit, int site) {
  if (qubit < 0 || qubit >= numQubits()) {
    throw std::invalid_argument("Mapping::place: qubit out of range");
  }
  if (isOccupied(site)) {
    throw std::invalid_argument("Mapping::place: site already occupied");
  }
  if (qubitToSite_[qubit] >= 0) {
    siteToQubit_.erase(qubitToSite_[qubit]);
    occupied_.erase(qubitToSite_[qubit]);
  }
  qubitToSite_[qubit] = site;
  siteToQubit_[site] = qubit;
  occupied_.insert(site);
}

int Mapping::qubitAt(int site) const {
  const auto it = siteToQubit_.find(site);
  return it == siteToQubit_.end() ? -1 : it->second;
}

bool Mapping::isTotal() const {
  return std::all_of(qubitToSite_.begin(), qubitToSite_.end(),
                     [](int s) { return s >= 0; });
}

namespace {

// lowest site index among the unoccupied sites nearest to `target`
int nearestUnoccupied(const Lattice& lattice, const Mapping& mapping,
                      const Site& target) {
  int best = -1;
  double bestSq = std::numeric_limits<double>::max();
  for (const auto& site : lattice.sites) {
    if (mapping.isOccupied(site.index)) {
      continue;
    }
    const double sq = squaredDistance(site, target);
    if (sq < bestSq) {
      bestSq = sq;
      best = site.index;
    }
  }
  if (best < 0) {
    throw std::invalid_argument("no unoccupied site available");
  }
  return best;
}

} // namespace

int placeQubit(int qubit, const Mapping& placed, const InteractionGraph& graph,
               const Lattice& lattice) {
  // gather placed interaction partners once
  std::vector<std::pair<const Site*, double>> partners;
  for (int v = 0; v < placed.numQubits(); ++v) {
    if (v == qubit) {
      continue;
    }
    const int site = v < placed.numQubits() && placed.siteOf(v) >= 0
                         ? placed.siteOf(v)
                         : -1;
    if (site < 0) {
      continue;
    }
    const int w = graph.w(qubit, v);
    if (w > 0) {
      partners.emplace_back(&lattice.sites[site], static_cast<double>(w));
    }
  }

  if (partners.empty()) {
    // zero objective everywhere: closest free site to the lattice center
    const Site& center = centerSite(lattice, {});
    return nearestUnoccupied(lattice, placed, center);
  }

  int best = -1;
  double bestObjective = 0;
  for (const auto& candidate : lattice.sites) {
    if (placed.isOccupied(candidate.index)) {
      continue;
    }
    double objective = 0;
    for (const auto& [site, w] : partners) {
      objective += w / distance(candidate, *site);
    }
    const double tol = 1e-9 * std::max(1.0, std::abs(bestObjective));
    if (best < 0 || objective > bestObjective + tol) {
      best = candidate.index;
      bestObjective = objective;
    }
  }
  return best;
}

namespace {

// swap is a routing artifact; logical input must not contain it
void rejectLogicalSwaps(const Circuit& circuit) {
  for (const auto& instr : circuit.instructions) {
    if (instr.kind == GateKind::Swap) {
      throw std::invalid_argument(
          "instruction " + std::to_string(instr.id) +
          ": swap gates are inserted by routing and are not valid logical "
          "input");
    }
  }
}

} // namespace

Mapping mapCircuit(const Circuit& circuit, const Lattice& lattice,
                   const InteractionGraph& graph) {
  rejectLogicalSwaps(circuit);
  const int n = circuit.numQubits;
  if (static_cast<int>(lattice.size()) < n) {
    throw std::invalid_argument("lattice too small: " +
                                std::to_string(lattice.size()) + " sites for " +
                                std::to_string(n) + " qubits");
  }

  Mapping mapping(n);
  std::vector<bool> isPlaced(n, false);
  int placedCount = 0;

  // seed with the heaviest interacting pair, if any
  int bestU = -1;
  int bestV = -1;
  int bestW = 0;
  for (const auto& [pair, w] : graph.weight) {
    if (w > bestW) { // map iteration order is lexicographic, ties keep first
      bestW = w;
      bestU = pair.first;
      bestV = pair.second;
    }
  }
  if (bestW > 0) {
    const Site& center = centerSite(lattice, {});
    mapping.place(bestU, center.index);
    mapping.place(bestV, nearestUnoccupied(lattice, mapping, center));
    isPlaced[bestU] = isPlaced[bestV] = true;
    placedCount = 2;
  }

  while (placedCount < n) {
    // next qubit: heaviest total interaction with the placed set
    int next = -1;
    long long bestMass = -1;
    for (int q = 0; q < n; ++q) {
      if (isPlaced[q]) {
        continue;
      }
      long long mass = 0;
      for (int v = 0; v < n; ++v) {
        if (isPlaced[v]) {
          mass += graph.w(q, v);
        }
      }
      if (mass > bestMass) { // lowest index wins ties
        bestMass = mass;
        next = q;
      }
    }
    mapping.place(next, placeQubit(next, mapping, graph, lattice));
    isPlaced[next] = true;
    ++placedCount;
  }
  return mapping;
}

namespace {

struct AtomState {
  std::vector<int> atomSite; ///< atom id -> site index
  std::vector<int> siteAtom; ///< site index -> atom id

  void swapSites(int siteA, int siteB) {
    const int a = siteAtom[siteA];
    const int b = siteAtom[siteB];
    std::swap(siteAtom[siteA], siteAtom[siteB]);
    atomSite[a] = siteB;
    atomSite[b] = siteA;
  }
};

} // namespace

RoutedCircuit routeSwaps(const Circuit& circuit, const Mapping& initial,
                         const Lattice& lattice, const RadiusConfig& radii) {
  rejectLogicalSwaps(circuit);
  if (!initial.isTotal()) {
    throw std::invalid_argument("routeSwaps: initial mapping must be total");
  }

  RoutedCircuit routed;
  routed.numQubits = circuit.numQubits;
  routed.numAtoms = static_cast<int>(lattice.size());
  routed.initialMapping = initial;

  AtomState state;
  state.atomSite.assign(routed.numAtoms, -1);
  state.siteAtom.assign(routed.numAtoms, -1);
  for (int q = 0; q < circuit.numQubits; ++q) {
    state.atomSite[q] = initial.siteOf(q);
    state.siteAtom[initial.siteOf(q)] = q;
  }
  int nextSpectator = circuit.numQubits;
  for (int site = 0; site < routed.numAtoms; ++site) {
    if (state.siteAtom[site] < 0) {
      state.siteAtom[site] = nextSpectator;
      state.atomSite[nextSpectator] = site;
      ++nextSpectator;
    }
  }

  const int stepBudget = 4 * (lattice.spec.rows + lattice.spec.cols +
                              (lattice.spec.layers > 1 ? lattice.spec.layers : 0));
  int nextId = 0;

  // SWAPs already inserted for the gate currently being routed
  std::vector<std::pair<int, std::pair<int, int>>> gateSwaps; // id, atoms

  const auto emitSwap = [&](int moverAtom, int targetSite, int servesId) {
    const int fromSite = state.atomSite[moverAtom];
    const int partnerAtom = state.siteAtom[targetSite];
    RoutedInstruction swap;
    swap.id = nextId++;
    swap.kind = GateKind::Swap;
    swap.atoms = {moverAtom, partnerAtom};
    swap.sites = {fromSite, targetSite};
    swap.servesId = servesId;
    for (const auto& [prevId, prevAtoms] : gateSwaps) {
      if (prevAtoms.first == moverAtom || prevAtoms.second == moverAtom ||
          prevAtoms.first == partnerAtom || prevAtoms.second == partnerAtom) {
        swap.priorSwaps.push_back(prevId);
      }
    }
    gateSwaps.emplace_back(swap.id, std::make_pair(moverAtom, partnerAtom));
    routed.instructions.push_back(std::move(swap));
    ++routed.swapCount;
    state.swapSites(fromSite, targetSite);
  };

  // one Eq.-5 hop of `mover` toward a target point; returns false when no
  // strictly improving site exists within the swap radius
  const auto stepToward = [&](int moverAtom, double tx, double ty, double tz,
                              const std::vector<int>& excludedSites,
                              int servesId) -> bool {
    const Site& from = lattice.sites[state.atomSite[moverAtom]];
    const double currentSq = (from.x - tx) * (from.x - tx) +
                             (from.y - ty) * (from.y - ty) +
                             (from.z - tz) * (from.z - tz);
    int best = -1;
    double bestSq = currentSq - 1e-12;
    for (const auto& h : lattice.sites) {
      if (h.index == from.index ||
          std::find(excludedSites.begin(), excludedSites.end(), h.index) !=
              excludedSites.end()) {
        continue;
      }
      if (distance(from, h) > radii.r2) {
        continue;
      }
      const double sq = (h.x - tx) * (h.x - tx) + (h.y - ty) * (h.y - ty) +
                        (h.z - tz) * (h.z - tz);
      if (sq < bestSq) { // strict improvement only; lowest index on ties
        bestSq = sq;
        best = h.index;
      }
    }
    if (best < 0) {
      return false;
    }
    emitSwap(moverAtom, best, servesId);
    return true;
  };

  // 3-qubit gates: a strict walk toward the moving centroid can deadlock
  // (collinear operands have no improving single hop), so pick the
  // cheapest mutually-feasible target triple and walk each operand to its
  // own target with Eq.-5 hops.
  const auto routeTriple = [&](const Instruction& instr) {
    const std::array<int, 3> ops{instr.qubits[0], instr.qubits[1],
                                 instr.qubits[2]};
    const auto feasible = [&] {
      for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j) {
          if (distance(lattice.sites[state.atomSite[ops[i]]],
                       lattice.sites[state.atomSite[ops[j]]]) > radii.r3) {
            return false;
          }
        }
      }
      return true;
    };
    if (feasible()) {
      return;
    }

    struct Option {
      double cost;
      std::array<int, 3> targets; // per operand, ops[] order
    };
    std::vector<Option> options;
    const int n = static_cast<int>(lattice.size());
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (distance(lattice.sites[a], lattice.sites[b]) > radii.r3) {
          continue;
        }
        for (int c = b + 1; c < n; ++c) {
          if (distance(lattice.sites[a], lattice.sites[c]) > radii.r3 ||
              distance(lattice.sites[b], lattice.sites[c]) > radii.r3) {
            continue;
          }
          std::array<int, 3> triple{a, b, c};
          std::array<int, 3> perm{0, 1, 2};
          double bestCost = -1;
          std::array<int, 3> bestAssign{};
          do {
            double cost = 0;
            for (int k = 0; k < 3; ++k) {
              cost += distance(lattice.sites[state.atomSite[ops[k]]],
                               lattice.sites[triple[perm[k]]]);
            }
            if (bestCost < 0 || cost < bestCost - 1e-12) {
              bestCost = cost;
              for (int k = 0; k < 3; ++k) {
                bestAssign[k] = triple[perm[k]];
              }
            }
          } while (std::next_permutation(perm.begin(), perm.end()));
          options.push_back({bestCost, bestAssign});
        }
      }
    }
    std::sort(options.begin(), options.end(),
              [](const Option& x, const Option& y) {
                if (x.cost != y.cost) {
                  return x.cost < y.cost;
                }
                return x.targets < y.targets;
              });
    if (options.size() > 64) {
      options.resize(64);
    }

    for (const auto& option : options) {
      // dry-run the three walks on positions alone; hops are only emitted
      // once the whole option is known to go through
      std::array<int, 3> pos{state.atomSite[ops[0]], state.atomSite[ops[1]],
                             state.atomSite[ops[2]]};
      std::vector<std::pair<int, int>> hops; // operand index, destination
      std::array<int, 3> order{0, 1, 2};
      std::sort(order.begin(), order.end(), [&](int x, int y) {
        const double dx = distance(lattice.sites[pos[x]],
                                   lattice.sites[option.targets[x]]);
        const double dy = distance(lattice.sites[pos[y]],
                                   lattice.sites[option.targets[y]]);
        if (dx != dy) {
          return dx > dy; // farthest from its target walks first
        }
        return x < y;
      });
      bool ok = true;
      for (const int k : order) {
        const Site& goal = lattice.sites[option.targets[k]];
        int guard = 0;
        while (ok && pos[k] != option.targets[k]) {
          if (++guard > stepBudget) {
            ok = false;
            break;
          }
          const Site& from = lattice.sites[pos[k]];
          double bestSq = squaredDistance(from, goal) - 1e-12;
          int best = -1;
          for (const auto& h : lattice.sites) {
            if (h.index == pos[k] || h.index == pos[(k + 1) % 3] ||
                h.index == pos[(k + 2) % 3] ||
                distance(from, h) > radii.r2) {
              continue;
            }
            const double sq = squaredDistance(h, goal);
            if (sq < bestSq) {
              bestSq = sq;
              best = h.index;
            }
          }
          if (best < 0) {
            ok = false;
            break;
          }
          hops.emplace_back(k, best);
          pos[k] = best;
        }
      }
      if (!ok) {
        continue;
      }
      for (const auto& [k, site] : hops) {
        emitSwap(ops[k], site, instr.id);
      }
      return;
    }
    throw RoutingError("gate " + std::to_string(instr.id) +
                       ": no reachable feasible placement for 3 operands");
  };

  for (const auto& instr : circuit.instructions) {
    gateSwaps.clear();
    const int arity = gateArity(instr.kind);

    if (arity == 2) {
      const int u = instr.qubits[0];
      const int v = instr.qubits[1];
      int steps = 0;
      while (distance(lattice.sites[state.atomSite[u]],
                      lattice.sites[state.atomSite[v]]) > radii.r2) {
        if (++steps > stepBudget) {
          throw RoutingError("gate " + std::to_string(instr.id) +
                             ": step budget exceeded while routing 2-qubit gate");
        }
        const Site& target = lattice.sites[state.atomSite[v]];
        if (!stepToward(u, target.x, target.y, target.z, {}, instr.id)) {
          throw RoutingError("gate " + std::to_string(instr.id) +
                             ": no strictly improving SWAP within r2");
        }
      }
    } else if (arity == 3) {
      routeTriple(instr);
    }

    RoutedInstruction gate;
    gate.id = nextId++;
    gate.kind = instr.kind;
    gate.atoms = instr.qubits;
    gate.params = instr.params;
    gate.sourceId = instr.id;
    for (const int q : instr.qubits) {
      gate.sites.push_back(state.atomSite[q]);
    }
    routed.instructions.push_back(std::move(gate));
  }

  Mapping finalMapping(circuit.numQubits);
  for (int q = 0; q < circuit.numQubits; ++q) {
    finalMapping.place(q, state.atomSite[q]);
  }
  routed.finalMapping = finalMapping;
  return routed;
}

std::vector<std::string> validateRouting(const RoutedCircuit& routed,
                                         const Lattice& lattice,
                                         const RadiusConfig& radii) {
  std::vector<std::string> violations;
  const auto complain = [&](int id, const std::string& what) {
    violations.push_back("instruction " + std::to_string(id) + ": " + what);
  };

  std::vector<int> atomSite(routed.numAtoms, -1);
  std::vector<int> siteAtom(routed.numAtoms, -1);
  for (int q = 0; q < routed.numQubits; ++q) {
    const int s = routed.initialMapping.siteOf(q);
    if (s < 0 || s >= routed.numAtoms || siteAtom[s] >= 0) {
      return {"initial mapping is not injective/total"};
    }
    atomSite[q] = s;
    siteAtom[s] = q;
  }
  int spectator = routed.numQubits;
  for (int s = 0; s < routed.numAtoms; ++s) {
    if (siteAtom[s] < 0) {
      siteAtom[s] = spectator;
      atomSite[spectator++] = s;
    }
  }

  for (const auto& instr : routed.instructions) {
    for (std::size_t i = 0; i < instr.atoms.size(); ++i) {
      if (atomSite[instr.atoms[i]] != instr.sites[i]) {
        complain(instr.id, "recorded site " + std::to_string(instr.sites[i]) +
                               " does not match replay position " +
                               std::to_string(atomSite[instr.atoms[i]]));
      }
    }
    if (instr.kind == GateKind::Swap && instr.isRoutingSwap()) {
      const int a = instr.atoms[0];
      const int b = instr.atoms[1];
      const int sa = atomSite[a];
      const int sb = atomSite[b];
      if (distance(lattice.sites[sa], lattice.sites[sb]) > radii.r2) {
        complain(instr.id, "SWAP spans more than r2");
      }
      std::swap(siteAtom[sa], siteAtom[sb]);
      std::swap(atomSite[a], atomSite[b]);
    } else {
      const double r = instr.atoms.size() == 3 ? radii.r3 : radii.r2;
      for (std::size_t i = 0; i < instr.atoms.size(); ++i) {
        for (std::size_t j = i + 1; j < instr.atoms.size(); ++j) {
          if (distance(lattice.sites[atomSite[instr.atoms[i]]],
                       lattice.sites[atomSite[instr.atoms[j]]]) > r) {
            complain(instr.id, "operands farther apart than the gate radius");
          }
        }
      }
    }
  }

  for (int q = 0; q < routed.numQubits; ++q) {
    if (routed.finalMapping.siteOf(q) != atomSite[q]) {
      complain(-1, "final mapping mismatch for qubit " + std::to_string(q));
    }
  }
  return violations;
}

} // namespace natopo
