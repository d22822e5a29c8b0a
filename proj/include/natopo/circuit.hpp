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

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace natopo {

enum class GateKind : std::uint8_t {
  H,
  X,
  Y,
  Z,
  S,
  T,
  RX,
  RY,
  RZ,
  CX,
  CZ,
  Swap,
  CCX,
};

/// Number of operands, a pure function of the gate tag.
int gateArity(GateKind kind);

/// Lower-case tag used in the JSON/QASM formats ("h", "cx", "ccx", ...).
const std::string& gateName(GateKind kind);

/// Inverse of gateName. Case-insensitive. nullopt for unknown tags.
std::optional<GateKind> gateFromName(const std::string& name);

bool gateTakesParams(GateKind kind);

struct Instruction {
  int id = 0;
  GateKind kind = GateKind::H;
  std::vector<int> qubits;       ///< distinct logical indices, size == arity
  std::vector<double> params;    ///< rotation angles for rx/ry/rz

  bool operator==(const Instruction&) const = default;
};

/// Ordered instruction list over logical qubits. Instruction ids are
/// 0..n-1 in program order; every qubit index is < numQubits.
struct Circuit {
  int numQubits = 0;
  std::vector<Instruction> instructions;

  bool operator==(const Circuit&) const = default;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parse the canonical JSON circuit format:
///   {"qubits": n, "ops": [["cx",0,1], ["rx",[0.5],2], ...]}
/// Throws ParseError naming the offending instruction index.
Circuit parseJson(const std::string& text);

/// Serialize to the canonical JSON format. parseJson(serializeJson(c)) == c.
std::string serializeJson(const Circuit& circuit);

struct GenParams {
  int width = 5;                  ///< unique qubits, realized exactly
  int minInstructions = 20;
  double interConnectivity = 0.5; ///< p(sample operand from used qubits)
  double oneQubitRate = 0.3;
  double threeQubitRate = 0.1;    ///< two-qubit rate is the remainder
  std::uint64_t seed = 0;
};

/// Seeded random instruction-set generator. Deterministic per seed.
/// Generation stops at the first instruction index >= minInstructions once
/// all `width` qubits have been used at least once.
Circuit generateRandomCircuit(const GenParams& params);

/// Weighted co-occurrence graph over logical qubits: w(u,v) counts the
/// instructions containing both u and v (a ccx increments all three pairs).
struct InteractionGraph {
  int numQubits = 0;
  std::map<std::pair<int, int>, int> weight; ///< keys (u,v) with u < v

  int w(int u, int v) const {
    if (u == v) {
      return 0;
    }
    const auto it = weight.find(std::minmax(u, v));
    return it == weight.end() ? 0 : it->second;
  }

  /// Sum of w(u, *) over all partners.
  long long outMass(int u) const;

  /// Number of distinct partners of u.
  int degree(int u) const;
};

InteractionGraph interactionGraph(const Circuit& circuit);

/// Longest chain of instructions linked by shared qubits (unit cost),
/// via per-qubit frontier propagation. 0 for an empty circuit.
int logicalDepth(const Circuit& circuit);

/// The specific longest dependency path used for the critical-depth
/// feature: ties broken toward the lowest instruction id, both at the
/// path end and when walking predecessors.
std::vector<int> longestDependencyPath(const Circuit& circuit);

} // namespace natopo
