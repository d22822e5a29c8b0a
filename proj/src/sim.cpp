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

#include "natopo/sim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace natopo {

namespace {

using Cx = std::complex<double>;

constexpr Cx kI{0.0, 1.0};

} // namespace

StateVector::StateVector(int numQubits) : numQubits_(numQubits) {
  if (numQubits < 1 || numQubits > kMaxSimQubits) {
    throw std::invalid_argument("StateVector supports 1.." +
                                std::to_string(kMaxSimQubits) + " qubits");
  }
  amps_.assign(std::size_t{1} << numQubits, Cx{0.0, 0.0});
  amps_[0] = Cx{1.0, 0.0};
}

void StateVector::apply1q(const Cx m[2][2], int qubit) {
  const std::size_t bit = std::size_t{1} << qubit;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    if ((i & bit) != 0) {
      continue;
    }
    const Cx a0 = amps_[i];
    const Cx a1 = amps_[i | bit];
    amps_[i] = m[0][0] * a0 + m[0][1] * a1;
    amps_[i | bit] = m[1][0] * a0 + m[1][1] * a1;
  }
}

void StateVector::applyPauli(int pauli, int qubit) {
  const std::size_t bit = std::size_t{1} << qubit;
  switch (pauli) {
  case 0:
    return;
  case 1:
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if ((i & bit) == 0) {
        std::swap(amps_[i], amps_[i | bit]);
      }
    }
    return;
  case 2:
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if ((i & bit) == 0) {
        const Cx a0 = amps_[i];
        amps_[i] = -kI * amps_[i | bit];
        amps_[i | bit] = kI * a0;
      }
    }
    return;
  case 3:
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if ((i & bit) != 0) {
        amps_[i] = -amps_[i];
      }
    }
    return;
  default:
    throw std::invalid_argument("pauli index must be 0..3");
  }
}

void StateVector::apply(const Instruction& instr) {
  for (const int q : instr.qubits) {
    if (q < 0 || q >= numQubits_) {
      throw std::invalid_argument("gate qubit out of range");
    }
  }
  const double invSqrt2 = 1.0 / std::sqrt(2.0);
  switch (instr.kind) {
  case GateKind::H: {
    const Cx m[2][2] = {{invSqrt2, invSqrt2}, {invSqrt2, -invSqrt2}};
    apply1q(m, instr.qubits[0]);
    return;
  }
  case GateKind::X:
    applyPauli(1, instr.qubits[0]);
    return;
  case GateKind::Y:
    applyPauli(2, instr.qubits[0]);
    return;
  case GateKind::Z:
    applyPauli(3, instr.qubits[0]);
    return;
  case GateKind::S: {
    const Cx m[2][2] = {{1.0, 0.0}, {0.0, kI}};
    apply1q(m, instr.qubits[0]);
    return;
  }
  case GateKind::T: {
    const Cx m[2][2] = {{1.0, 0.0},
                        {0.0, std::exp(kI * (std::numbers::pi / 4.0))}};
    apply1q(m, instr.qubits[0]);
    return;
  }
  case GateKind::RX: {
    const double half = instr.params.at(0) / 2.0;
    const Cx m[2][2] = {{std::cos(half), -kI * std::sin(half)},
                        {-kI * std::sin(half), std::cos(half)}};
    apply1q(m, instr.qubits[0]);
    return;
  }
  case GateKind::RY: {
    const double half = instr.params.at(0) / 2.0;
    const Cx m[2][2] = {{std::cos(half), -std::sin(half)},
                        {std::sin(half), std::cos(half)}};
    apply1q(m, instr.qubits[0]);
    return;
  }
  case GateKind::RZ: {
    const double half = instr.params.at(0) / 2.0;
    const Cx m[2][2] = {{std::exp(-kI * half), 0.0}, {0.0, std::exp(kI * half)}};
    apply1q(m, instr.qubits[0]);
    return;
  }
  case GateKind::CX: {
    const std::size_t control = std::size_t{1} << instr.qubits[0];
    const std::size_t target = std::size_t{1} << instr.qubits[1];
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if ((i & control) != 0 && (i & target) == 0) {
        std::swap(amps_[i], amps_[i | target]);
      }
    }
    return;
  }
  case GateKind::CZ: {
    const std::size_t mask = (std::size_t{1} << instr.qubits[0]) |
                             (std::size_t{1} << instr.qubits[1]);
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if ((i & mask) == mask) {
        amps_[i] = -amps_[i];
      }
    }
    return;
  }
  case GateKind::Swap: {
    const std::size_t a = std::size_t{1} << instr.qubits[0];
    const std::size_t b = std::size_t{1} << instr.qubits[1];
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if ((i & a) != 0 && (i & b) == 0) {
        std::swap(amps_[i], amps_[(i & ~a) | b]);
      }
    }
    return;
  }
  case GateKind::CCX: {
    const std::size_t c1 = std::size_t{1} << instr.qubits[0];
    const std::size_t c2 = std::size_t{1} << instr.qubits[1];
    const std::size_t target = std::size_t{1} << instr.qubits[2];
    for (std::size_t i = 0; i < amps_.size(); ++i) {
      if ((i & c1) != 0 && (i & c2) != 0 && (i & target) == 0) {
        std::swap(amps_[i], amps_[i | target]);
      }
    }
    return;
  }
  }
  throw std::invalid_argument("unsupported gate");
}

double StateVector::norm() const {
  double n = 0;
  for (const auto& a : amps_) {
    n += std::norm(a);
  }
  return std::sqrt(n);
}

std::size_t StateVector::sample(Rng& rng) const {
  const double u = rng.nextDouble();
  double acc = 0;
  for (std::size_t i = 0; i < amps_.size(); ++i) {
    acc += std::norm(amps_[i]);
    if (u < acc) {
      return i;
    }
  }
  return amps_.size() - 1;
}

std::string bitstringOf(std::size_t basisIndex, int numQubits) {
  std::string s(numQubits, '0');
  for (int q = 0; q < numQubits; ++q) {
    if ((basisIndex >> q) & 1) {
      s[q] = '1';
    }
  }
  return s;
}

std::map<std::string, double> idealDistribution(const Circuit& circuit) {
  StateVector state(circuit.numQubits);
  for (const auto& instr : circuit.instructions) {
    state.apply(instr);
  }
  std::map<std::string, double> dist;
  for (std::size_t i = 0; i < state.amplitudes().size(); ++i) {
    const double p = std::norm(state.amplitudes()[i]);
    if (p > 1e-15) {
      dist[bitstringOf(i, circuit.numQubits)] = p;
    }
  }
  return dist;
}

ShotCounts noisySampleSteps(int numQubits,
                            const std::vector<TrajectoryStep>& steps,
                            const NoiseModel& noise, long long shots,
                            std::uint64_t seed) {
  if (noise.p1 < 0 || noise.p1 > 1) {
    throw std::invalid_argument("noise probability must be in [0,1]");
  }
  ShotCounts result;
  result.shots = shots;
  for (long long shot = 0; shot < shots; ++shot) {
    Rng rng(Rng::deriveSeed(seed, static_cast<std::uint64_t>(shot)));
    StateVector state(numQubits);
    for (const auto& step : steps) {
      if (step.gate) {
        state.apply(*step.gate);
      }
      for (const int q : step.noiseQubits) {
        if (noise.p1 > 0 && rng.bernoulli(noise.p1)) {
          state.applyPauli(static_cast<int>(rng.nextIndex(4)), q);
        }
      }
    }
    ++result.counts[bitstringOf(state.sample(rng), numQubits)];
  }
  return result;
}

ShotCounts noisySample(const Circuit& circuit, const NoiseModel& noise,
                       long long shots, std::uint64_t seed) {
  std::vector<TrajectoryStep> steps;
  steps.reserve(circuit.instructions.size());
  for (const auto& instr : circuit.instructions) {
    steps.push_back(TrajectoryStep{instr, instr.qubits});
  }
  return noisySampleSteps(circuit.numQubits, steps, noise, shots, seed);
}

ErrorReport bitwiseError(const std::map<std::string, double>& ideal,
                         const ShotCounts& counts) {
  if (ideal.empty()) {
    throw std::invalid_argument("bitwiseError: empty ideal distribution");
  }
  const int width = static_cast<int>(ideal.begin()->first.size());
  for (const auto& [bits, n] : counts.counts) {
    if (static_cast<int>(bits.size()) != width) {
      throw std::invalid_argument("bitwiseError: width mismatch");
    }
    (void)n;
  }

  // modal ideal outcomes (ties within 1e-12 all count)
  double maxP = 0;
  for (const auto& [bits, p] : ideal) {
    maxP = std::max(maxP, p);
  }
  std::vector<std::string> modal;
  for (const auto& [bits, p] : ideal) {
    if (p >= maxP - 1e-12) {
      modal.push_back(bits);
    }
  }

  const auto hamming = [](const std::string& a, const std::string& b) {
    int d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      d += a[i] != b[i];
    }
    return d;
  };

  ErrorReport report;
  double weighted = 0;
  for (const auto& [bits, n] : counts.counts) {
    int nearest = width + 1;
    for (const auto& m : modal) {
      nearest = std::min(nearest, hamming(bits, m));
    }
    weighted += static_cast<double>(n) * nearest;
  }
  report.bitwiseError =
      counts.shots > 0 ? weighted / (static_cast<double>(counts.shots) * width)
                       : 0.0;

  // total variation distance between ideal and the empirical distribution
  double tvd = 0;
  for (const auto& [bits, p] : ideal) {
    const auto it = counts.counts.find(bits);
    const double q =
        it == counts.counts.end()
            ? 0.0
            : static_cast<double>(it->second) / static_cast<double>(counts.shots);
    tvd += std::abs(p - q);
  }
  for (const auto& [bits, n] : counts.counts) {
    if (ideal.count(bits) == 0) {
      tvd += static_cast<double>(n) / static_cast<double>(counts.shots);
    }
  }
  report.tvd = tvd / 2.0;
  return report;
}

} // namespace natopo
