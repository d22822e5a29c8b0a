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
#include "natopo/rng.hpp"

#include <complex>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace natopo {

inline constexpr int kMaxSimQubits = 14;

/// Dense amplitude vector over the computational basis. Qubit q maps to
/// bit q of the basis index; bitstrings render qubit 0 first.
class StateVector {
public:
  explicit StateVector(int numQubits);

  int numQubits() const { return numQubits_; }
  const std::vector<std::complex<double>>& amplitudes() const { return amps_; }

  void apply(const Instruction& instr);
  /// pauli: 0 = I, 1 = X, 2 = Y, 3 = Z
  void applyPauli(int pauli, int qubit);

  double norm() const;
  /// Basis index drawn from |amplitude|^2.
  std::size_t sample(Rng& rng) const;

private:
  void apply1q(const std::complex<double> m[2][2], int qubit);

  int numQubits_;
  std::vector<std::complex<double>> amps_;
};

std::string bitstringOf(std::size_t basisIndex, int numQubits);

/// Exact output distribution of a noiseless circuit; entries below 1e-15
/// are dropped. Probabilities sum to 1 within 1e-9.
std::map<std::string, double> idealDistribution(const Circuit& circuit);

/// Depolarizing gate noise. Each operand qubit of a gate independently
/// suffers a uniformly random Pauli (including I) with probability p1 --
/// the one-qubit model tensored with itself per gate arity. p2/p3 are the
/// derived any-error probabilities.
struct NoiseModel {
  double p1 = 0.01;

  double p2() const { return 1.0 - (1.0 - p1) * (1.0 - p1); }
  double p3() const { return 1.0 - (1.0 - p1) * (1.0 - p1) * (1.0 - p1); }
};

struct ShotCounts {
  std::map<std::string, long long> counts;
  long long shots = 0;
};

/// One trajectory step: an optional unitary followed by depolarizing draws
/// on the listed qubits. Routed circuits map SWAP relocations to
/// noise-only steps on their logical operands.
struct TrajectoryStep {
  std::optional<Instruction> gate;
  std::vector<int> noiseQubits;
};

/// Monte-Carlo Pauli-trajectory sampling; per-shot seeds derive from the
/// master seed via Rng::deriveSeed, so shot batches merge deterministically.
ShotCounts noisySample(const Circuit& circuit, const NoiseModel& noise,
                       long long shots, std::uint64_t seed);

ShotCounts noisySampleSteps(int numQubits,
                            const std::vector<TrajectoryStep>& steps,
                            const NoiseModel& noise, long long shots,
                            std::uint64_t seed);

struct ErrorReport {
  double bitwiseError = 0; ///< mean normalized Hamming distance to the
                           ///< nearest most-probable ideal outcome
  double tvd = 0;          ///< total variation distance, secondary metric

  double fidelity() const { return 1.0 - bitwiseError; }
};

ErrorReport bitwiseError(const std::map<std::string, double>& ideal,
                         const ShotCounts& counts);

} // namespace natopo
