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
#include "natopo/topology.hpp"

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace natopo {

/// Injective assignment of logical qubits to lattice sites.
class Mapping {
public:
  Mapping() = default;
  explicit Mapping(int numQubits) : qubitToSite_(numQubits, -1) {}

  void place(int qubit, int site);
  int siteOf(int qubit) const { return qubitToSite_.at(qubit); }
  bool isOccupied(int site) const { return siteToQubit_.count(site) > 0; }
  int qubitAt(int site) const; ///< -1 when the site holds a spectator
  int numQubits() const { return static_cast<int>(qubitToSite_.size()); }
  bool isTotal() const;
  const std::set<int>& occupiedSites() const { return occupied_; }

  bool operator==(const Mapping& other) const {
    return qubitToSite_ == other.qubitToSite_;
  }

private:
  std::vector<int> qubitToSite_;
  std::map<int, int> siteToQubit_;
  std::set<int> occupied_;
};

/// Highest-interaction-first greedy placement: the heaviest pair seeds the
/// lattice center, then qubits join by descending total weight to the
/// placed set, each at the site maximizing sum_placed w(u,v) / distance.
Mapping mapCircuit(const Circuit& circuit, const Lattice& lattice,
                   const InteractionGraph& graph);

/// The site-selection step in isolation (works for planar and layered
/// lattices; distance is always 3-D euclidean). `placed` maps already
/// placed qubits to their sites. Returns the chosen site index.
int placeQubit(int qubit, const Mapping& placed, const InteractionGraph& graph,
               const Lattice& lattice);

struct RoutingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One instruction of a routed circuit. Operands are *atom* ids: logical
/// qubits 0..numQubits-1, spectator atoms numQubits..numAtoms-1 (spectators
/// appear only in inserted SWAPs). Sites are the operands' positions when
/// the instruction executes.
struct RoutedInstruction {
  int id = 0;                 ///< fresh id in routed order
  GateKind kind = GateKind::H;
  std::vector<int> atoms;
  std::vector<int> sites;
  std::vector<double> params;
  int sourceId = -1;          ///< original instruction id; -1 for SWAPs
  int servesId = -1;          ///< gate a routing SWAP was inserted for
  std::vector<int> priorSwaps; ///< earlier same-gate SWAPs sharing an atom

  bool isRoutingSwap() const { return servesId >= 0; }
};

struct RoutedCircuit {
  int numQubits = 0;
  int numAtoms = 0; ///< == lattice size; spectators fill unmapped sites
  Mapping initialMapping;
  Mapping finalMapping;
  std::vector<RoutedInstruction> instructions;
  int swapCount = 0;
};

/// Insert SWAPs so every gate's operands fall within its interaction
/// radius: 2-qubit gates walk u toward v one minimum-squared-distance hop
/// at a time; 3-qubit gates repeatedly move the operand farthest from the
/// operands' centroid. Throws RoutingError if a gate cannot make strict
/// progress or exceeds 4*(rows+cols) steps.
RoutedCircuit routeSwaps(const Circuit& circuit, const Mapping& initial,
                         const Lattice& lattice, const RadiusConfig& radii);

/// Independent replay check of a routed circuit: recomputes every atom
/// position from the initial mapping and verifies recorded sites, radius
/// feasibility of every gate, injectivity, and the final mapping.
std::vector<std::string> validateRouting(const RoutedCircuit& routed,
                                         const Lattice& lattice,
                                         const RadiusConfig& radii);

} // namespace natopo
