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

#include "natopo/circuit.hpp"

#include "natopo/rng.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <nlohmann/json.hpp>
#include <unordered_map>

namespace natopo {

namespace {

struct GateInfo {
  GateKind kind;
  const char* name;
  int arity;
  bool params;
};

constexpr std::array<GateInfo, 13> kGateTable{{
    {GateKind::H, "h", 1, false},
    {GateKind::X, "x", 1, false},
    {GateKind::Y, "y", 1, false},
    {GateKind::Z, "z", 1, false},
    {GateKind::S, "s", 1, false},
    {GateKind::T, "t", 1, false},
    {GateKind::RX, "rx", 1, true},
    {GateKind::RY, "ry", 1, true},
    {GateKind::RZ, "rz", 1, true},
    {GateKind::CX, "cx", 2, false},
    {GateKind::CZ, "cz", 2, false},
    {GateKind::Swap, "swap", 2, false},
    {GateKind::CCX, "ccx", 3, false},
}};

const GateInfo& info(GateKind kind) {
  return kGateTable[static_cast<std::size_t>(kind)];
}

} // namespace

int gateArity(GateKind kind) { return info(kind).arity; }

const std::string& gateName(GateKind kind) {
  static const std::array<std::string, kGateTable.size()> names = [] {
    std::array<std::string, kGateTable.size()> n;
    for (std::size_t i = 0; i < kGateTable.size(); ++i) {
      n[i] = kGateTable[i].name;
    }
    return n;
  }();
  return names[static_cast<std::size_t>(kind)];
}

std::optional<GateKind> gateFromName(const std::string& name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  for (const auto& g : kGateTable) {
    if (lower == g.name) {
      return g.kind;
    }
  }
  return std::nullopt;
}

bool gateTakesParams(GateKind kind) { return info(kind).params; }

namespace {

void checkInstruction(const Instruction& instr, int numQubits, int index) {
  const std::string at = "instruction " + std::to_string(index) + ": ";
  if (static_cast<int>(instr.qubits.size()) != gateArity(instr.kind)) {
    throw ParseError(at + "gate '" + gateName(instr.kind) + "' expects " +
                     std::to_string(gateArity(instr.kind)) + " qubits, got " +
                     std::to_string(instr.qubits.size()));
  }
  for (std::size_t i = 0; i < instr.qubits.size(); ++i) {
    const int q = instr.qubits[i];
    if (q < 0 || q >= numQubits) {
      throw ParseError(at + "qubit index " + std::to_string(q) +
                       " out of range [0, " + std::to_string(numQubits) + ")");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (instr.qubits[j] == q) {
        throw ParseError(at + "duplicate qubit " + std::to_string(q));
      }
    }
  }
}

} // namespace

Circuit parseJson(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("qubits") || !j.contains("ops")) {
    throw ParseError("circuit JSON must be {\"qubits\": n, \"ops\": [...]}");
  }
  Circuit circuit;
  circuit.numQubits = j.at("qubits").get<int>();
  if (circuit.numQubits <= 0) {
    throw ParseError("\"qubits\" must be positive");
  }
  const auto& ops = j.at("ops");
  if (!ops.is_array()) {
    throw ParseError("\"ops\" must be an array");
  }
  int index = 0;
  for (const auto& op : ops) {
    const std::string at = "instruction " + std::to_string(index) + ": ";
    if (!op.is_array() || op.empty() || !op[0].is_string()) {
      throw ParseError(at + "op must be [tag, qubits...]");
    }
    const std::string tag = op[0].get<std::string>();
    const auto kind = gateFromName(tag);
    if (!kind) {
      throw ParseError(at + "unknown gate tag '" + tag + "'");
    }
    Instruction instr;
    instr.id = index;
    instr.kind = *kind;
    std::size_t qstart = 1;
    if (op.size() > 1 && op[1].is_array()) {
      instr.params = op[1].get<std::vector<double>>();
      qstart = 2;
    }
    if (gateTakesParams(*kind) && instr.params.empty()) {
      throw ParseError(at + "gate '" + tag + "' requires parameters");
    }
    if (!gateTakesParams(*kind) && !instr.params.empty()) {
      throw ParseError(at + "gate '" + tag + "' takes no parameters");
    }
    for (std::size_t i = qstart; i < op.size(); ++i) {
      if (!op[i].is_number_integer()) {
        throw ParseError(at + "qubit operands must be integers");
      }
      instr.qubits.push_back(op[i].get<int>());
    }
    checkInstruction(instr, circuit.numQubits, index);
    circuit.instructions.push_back(std::move(instr));
    ++index;
  }
  return circuit;
}

std::string serializeJson(const Circuit& circuit) {
  nlohmann::json ops = nlohmann::json::array();
  for (const auto& instr : circuit.instructions) {
    nlohmann::json op = nlohmann::json::array();
    op.push_back(gateName(instr.kind));
    if (!instr.params.empty()) {
      op.push_back(instr.params);
    }
    for (const int q : instr.qubits) {
      op.push_back(q);
    }
    ops.push_back(std::move(op));
  }
  nlohmann::json j;
  j["qubits"] = circuit.numQubits;
  j["ops"] = std::move(ops);
  return j.dump();
}

Circuit generateRandomCircuit(const GenParams& params) {
  if (params.width < 3) {
    throw std::invalid_argument("generator width must be >= 3");
  }
  if (params.minInstructions < 1) {
    throw std::invalid_argument("minInstructions must be >= 1");
  }
  if (params.oneQubitRate < 0 || params.threeQubitRate < 0 ||
      params.oneQubitRate + params.threeQubitRate > 1.0) {
    throw std::invalid_argument("gate rates must be probabilities summing <= 1");
  }
  if (params.interConnectivity < 0 || params.interConnectivity > 1) {
    throw std::invalid_argument("interConnectivity must be in [0,1]");
  }

  static constexpr std::array<GateKind, 6> kOneQ{GateKind::H, GateKind::X,
                                                 GateKind::Y, GateKind::Z,
                                                 GateKind::S, GateKind::T};
  static constexpr std::array<GateKind, 2> kTwoQ{GateKind::CX, GateKind::CZ};

  Rng rng(params.seed);
  Circuit circuit;
  circuit.numQubits = params.width;

  std::vector<bool> used(params.width, false);
  std::vector<int> usedList;
  std::vector<int> unusedList(params.width);
  for (int q = 0; q < params.width; ++q) {
    unusedList[q] = q;
  }

  const auto drawOperand = [&](const std::vector<int>& chosen) -> int {
    // Eligible pools exclude operands already picked for this instruction.
    const auto eligible = [&](const std::vector<int>& pool) {
      std::vector<int> out;
      out.reserve(pool.size());
      for (const int q : pool) {
        if (std::find(chosen.begin(), chosen.end(), q) == chosen.end()) {
          out.push_back(q);
        }
      }
      return out;
    };
    const bool preferUsed = rng.bernoulli(params.interConnectivity);
    std::vector<int> pool = eligible(preferUsed ? usedList : unusedList);
    if (pool.empty()) {
      pool = eligible(preferUsed ? unusedList : usedList);
    }
    return pool[rng.nextIndex(pool.size())];
  };

  int nextId = 0;
  while (static_cast<int>(circuit.instructions.size()) <
             params.minInstructions ||
         !unusedList.empty()) {
    const double r = rng.nextDouble();
    int arity = 2;
    if (r < params.oneQubitRate) {
      arity = 1;
    } else if (r < params.oneQubitRate + params.threeQubitRate) {
      arity = 3;
    }

    Instruction instr;
    instr.id = nextId++;
    if (arity == 1) {
      instr.kind = kOneQ[rng.nextIndex(kOneQ.size())];
    } else if (arity == 2) {
      instr.kind = kTwoQ[rng.nextIndex(kTwoQ.size())];
    } else {
      instr.kind = GateKind::CCX;
    }
    for (int i = 0; i < arity; ++i) {
      instr.qubits.push_back(drawOperand(instr.qubits));
    }
    for (const int q : instr.qubits) {
      if (!used[q]) {
        used[q] = true;
        usedList.push_back(q);
        unusedList.erase(std::find(unusedList.begin(), unusedList.end(), q));
      }
    }
    circuit.instructions.push_back(std::move(instr));
  }
  return circuit;
}

long long InteractionGraph::outMass(int u) const {
  long long mass = 0;
  for (const auto& [pair, w] : weight) {
    if (pair.first == u || pair.second == u) {
      mass += w;
    }
  }
  return mass;
}

int InteractionGraph::degree(int u) const {
  int d = 0;
  for (const auto& [pair, w] : weight) {
    if ((pair.first == u || pair.second == u) && w > 0) {
      ++d;
    }
  }
  return d;
}

InteractionGraph interactionGraph(const Circuit& circuit) {
  InteractionGraph graph;
  graph.numQubits = circuit.numQubits;
  for (const auto& instr : circuit.instructions) {
    const auto& qs = instr.qubits;
    for (std::size_t i = 0; i < qs.size(); ++i) {
      for (std::size_t j = i + 1; j < qs.size(); ++j) {
        ++graph.weight[std::minmax(qs[i], qs[j])];
      }
    }
  }
  return graph;
}

int logicalDepth(const Circuit& circuit) {
  std::vector<int> frontier(circuit.numQubits, 0);
  int depth = 0;
  for (const auto& instr : circuit.instructions) {
    int d = 0;
    for (const int q : instr.qubits) {
      d = std::max(d, frontier[q]);
    }
    ++d;
    for (const int q : instr.qubits) {
      frontier[q] = d;
    }
    depth = std::max(depth, d);
  }
  return depth;
}

std::vector<int> longestDependencyPath(const Circuit& circuit) {
  const int n = static_cast<int>(circuit.instructions.size());
  if (n == 0) {
    return {};
  }
  std::vector<int> depth(n, 1);
  std::vector<int> parent(n, -1);
  // frontier: last instruction touching each qubit
  std::vector<int> frontier(circuit.numQubits, -1);
  for (int i = 0; i < n; ++i) {
    const auto& instr = circuit.instructions[i];
    int best = -1; // deepest frontier predecessor, lowest id on ties
    for (const int q : instr.qubits) {
      const int p = frontier[q];
      if (p < 0) {
        continue;
      }
      if (best < 0 || depth[p] > depth[best] ||
          (depth[p] == depth[best] && p < best)) {
        best = p;
      }
    }
    if (best >= 0) {
      depth[i] = depth[best] + 1;
      parent[i] = best;
    }
    for (const int q : instr.qubits) {
      frontier[q] = i;
    }
  }
  int end = 0;
  for (int i = 1; i < n; ++i) {
    if (depth[i] > depth[end]) {
      end = i; // lowest id wins ties
    }
  }
  std::vector<int> path;
  for (int i = end; i >= 0; i = parent[i]) {
    path.push_back(i);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

} // namespace natopo
