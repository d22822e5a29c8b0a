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

#include <array>
#include <string>
#include <vector>

namespace natopo {

inline constexpr int kNumFeatures = 14;

/// The 14 static circuit descriptors, in the fixed order given by
/// featureNames() / toArray().
struct FeatureVector {
  double numInstructions = 0;
  double width = 0;                 ///< qubits appearing in >= 1 instruction
  double depth = 0;                 ///< dependency-DAG longest path
  double gateDensity = 0;           ///< (G1 + 2 G2 + 3 G3) / (W * D)
  double entanglementVariance = 0;  ///< log(1 + sum (c_i - mean)^2) / W
  double programCommunication = 0;  ///< sum deg(q) / (W (W-1))
  double criticalDepth = 0;         ///< 2q gates on the critical path / all 2q
  double entanglementRatio = 0;     ///< 2q gates / all gates
  double prMean = 0;
  double prStd = 0;
  double prMax = 0;
  double prop1q = 0;
  double prop2q = 0;
  double prop3q = 0;

  std::array<double, kNumFeatures> toArray() const;
  static FeatureVector fromArray(const std::array<double, kNumFeatures>& a);

  bool operator==(const FeatureVector&) const = default;
};

/// CSV header order for feature dumps and training files.
const std::array<std::string, kNumFeatures>& featureNames();

struct PageRankOptions {
  double eps = 1e-8;      ///< stop when the L1 sweep change drops below
  int maxIters = 1000;
  double damping = 1.0;   ///< 1.0 = undamped update as published
};

struct PageRankResult {
  std::vector<double> values; ///< one per graph node, sums to 1
  bool converged = false;
  int iterations = 0;
};

/// Weighted power iteration from the uniform vector:
///   pr'(u) = sum_v pr(v) * w(v,u) / outMass(v)
/// with dangling (zero-mass) node mass redistributed uniformly each sweep.
/// Never diverges; non-convergence returns the last iterate.
PageRankResult pagerank(const InteractionGraph& graph,
                        const PageRankOptions& options = {});

/// All 14 descriptors of a non-empty circuit. PageRank statistics are
/// computed on the interaction subgraph of the active qubits (the W nodes
/// the width feature counts).
FeatureVector computeFeatures(const Circuit& circuit);

/// Per-feature z-score statistics fitted on a training set.
struct NormStats {
  std::array<double, kNumFeatures> mean{};
  std::array<double, kNumFeatures> std{}; ///< zeros replaced by 1

  static NormStats fit(const std::vector<FeatureVector>& samples);
};

FeatureVector normalize(const FeatureVector& f, const NormStats& stats);
FeatureVector denormalize(const FeatureVector& f, const NormStats& stats);

} // namespace natopo
