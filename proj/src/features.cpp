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

#include "natopo/features.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace natopo {

std::array<double, kNumFeatures> FeatureVector::toArray() const {
  return {numInstructions,
          width,
          depth,
          gateDensity,
          entanglementVariance,
          programCommunication,
          criticalDepth,
          entanglementRatio,
          prMean,
          prStd,
          prMax,
          prop1q,
          prop2q,
          prop3q};
}

FeatureVector FeatureVector::fromArray(
    const std::array<double, kNumFeatures>& a) {
  FeatureVector f;
  f.numInstructions = a[0];
  f.width = a[1];
  f.depth = a[2];
  f.gateDensity = a[3];
  f.entanglementVariance = a[4];
  f.programCommunication = a[5];
  f.criticalDepth = a[6];
  f.entanglementRatio = a[7];
  f.prMean = a[8];
  f.prStd = a[9];
  f.prMax = a[10];
  f.prop1q = a[11];
  f.prop2q = a[12];
  f.prop3q = a[13];
  return f;
}

const std::array<std::string, kNumFeatures>& featureNames() {
  static const std::array<std::string, kNumFeatures> names{
      "n_instructions",    "width",
      "depth",             "gate_density",
      "entanglement_variance", "program_communication",
      "critical_depth",    "entanglement_ratio",
      "pr_mean",           "pr_std",
      "pr_max",            "prop_1q",
      "prop_2q",           "prop_3q"};
  return names;
}

PageRankResult pagerank(const InteractionGraph& graph,
                        const PageRankOptions& options) {
  const int n = graph.numQubits;
  if (n < 1) {
    throw std::invalid_argument("pagerank: graph must have >= 1 node");
  }

  // adjacency with per-node out mass, built once
  std::vector<std::vector<std::pair<int, double>>> in(n);
  std::vector<double> outMass(n, 0.0);
  for (const auto& [pair, w] : graph.weight) {
    if (w <= 0) {
      continue;
    }
    outMass[pair.first] += w;
    outMass[pair.second] += w;
  }
  for (const auto& [pair, w] : graph.weight) {
    if (w <= 0) {
      continue;
    }
    const auto [u, v] = pair;
    in[u].emplace_back(v, w / outMass[v]);
    in[v].emplace_back(u, w / outMass[u]);
  }

  PageRankResult result;
  result.values.assign(n, 1.0 / n);
  std::vector<double> next(n, 0.0);
  const double d = options.damping;

  for (int iter = 0; iter < options.maxIters; ++iter) {
    double dangling = 0;
    for (int u = 0; u < n; ++u) {
      if (outMass[u] == 0) {
        dangling += result.values[u];
      }
    }
    double change = 0;
    for (int u = 0; u < n; ++u) {
      double sum = dangling / n;
      for (const auto& [v, p] : in[u]) {
        sum += result.values[v] * p;
      }
      next[u] = (1.0 - d) / n + d * sum;
      change += std::abs(next[u] - result.values[u]);
    }
    result.values.swap(next);
    result.iterations = iter + 1;
    if (change < options.eps) {
      result.converged = true;
      break;
    }
  }
  return result;
}

FeatureVector computeFeatures(const Circuit& circuit) {
  if (circuit.instructions.empty()) {
    throw std::invalid_argument("computeFeatures: circuit is empty");
  }

  // active qubits, compactly relabeled for the pagerank subgraph
  std::vector<int> activeOf(circuit.numQubits, -1);
  std::vector<int> active;
  for (const auto& instr : circuit.instructions) {
    for (const int q : instr.qubits) {
      if (activeOf[q] < 0) {
        activeOf[q] = static_cast<int>(active.size());
        active.push_back(q);
      }
    }
  }
  const int w = static_cast<int>(active.size());
  const auto n = static_cast<double>(circuit.instructions.size());

  int g1 = 0;
  int g2 = 0;
  int g3 = 0;
  std::vector<double> twoQubitTouches(w, 0.0); // c_i for EV
  for (const auto& instr : circuit.instructions) {
    switch (gateArity(instr.kind)) {
    case 1:
      ++g1;
      break;
    case 2:
      ++g2;
      for (const int q : instr.qubits) {
        twoQubitTouches[activeOf[q]] += 1.0;
      }
      break;
    default:
      ++g3;
      break;
    }
  }

  FeatureVector f;
  f.numInstructions = n;
  f.width = w;
  f.depth = logicalDepth(circuit);

  f.gateDensity = (g1 + 2.0 * g2 + 3.0 * g3) / (f.width * f.depth);

  double touchMean = 0;
  for (const double c : twoQubitTouches) {
    touchMean += c;
  }
  touchMean /= w;
  double sqDev = 0;
  for (const double c : twoQubitTouches) {
    sqDev += (c - touchMean) * (c - touchMean);
  }
  f.entanglementVariance = std::log(1.0 + sqDev) / w;

  const auto graph = interactionGraph(circuit);
  if (w > 1) {
    double degreeSum = 0;
    for (const int q : active) {
      degreeSum += graph.degree(q);
    }
    f.programCommunication = degreeSum / (f.width * (f.width - 1.0));
  }

  int twoOnPath = 0;
  for (const int id : longestDependencyPath(circuit)) {
    if (gateArity(circuit.instructions[id].kind) == 2) {
      ++twoOnPath;
    }
  }
  f.criticalDepth = g2 > 0 ? static_cast<double>(twoOnPath) / g2 : 0.0;
  f.entanglementRatio = g2 / n;

  // pagerank over the active subgraph
  InteractionGraph sub;
  sub.numQubits = w;
  for (const auto& [pair, weight] : graph.weight) {
    if (weight > 0) {
      sub.weight[std::minmax(activeOf[pair.first], activeOf[pair.second])] =
          weight;
    }
  }
  const auto pr = pagerank(sub);
  double sum = 0;
  double mx = 0;
  for (const double v : pr.values) {
    sum += v;
    mx = std::max(mx, v);
  }
  f.prMean = sum / w;
  double var = 0;
  for (const double v : pr.values) {
    var += (v - f.prMean) * (v - f.prMean);
  }
  f.prStd = std::sqrt(var / w);
  f.prMax = mx;

  f.prop1q = g1 / n;
  f.prop2q = g2 / n;
  f.prop3q = g3 / n;
  return f;
}

NormStats NormStats::fit(const std::vector<FeatureVector>& samples) {
  if (samples.empty()) {
    throw std::invalid_argument("NormStats::fit: empty sample set");
  }
  NormStats stats;
  for (const auto& s : samples) {
    const auto a = s.toArray();
    for (int i = 0; i < kNumFeatures; ++i) {
      stats.mean[i] += a[i];
    }
  }
  for (auto& m : stats.mean) {
    m /= static_cast<double>(samples.size());
  }
  for (const auto& s : samples) {
    const auto a = s.toArray();
    for (int i = 0; i < kNumFeatures; ++i) {
      stats.std[i] += (a[i] - stats.mean[i]) * (a[i] - stats.mean[i]);
    }
  }
  for (auto& sd : stats.std) {
    sd = std::sqrt(sd / static_cast<double>(samples.size()));
    if (sd == 0.0) {
      sd = 1.0;
    }
  }
  return stats;
}

FeatureVector normalize(const FeatureVector& f, const NormStats& stats) {
  auto a = f.toArray();
  for (int i = 0; i < kNumFeatures; ++i) {
    a[i] = (a[i] - stats.mean[i]) / stats.std[i];
  }
  return FeatureVector::fromArray(a);
}

FeatureVector denormalize(const FeatureVector& f, const NormStats& stats) {
  auto a = f.toArray();
  for (int i = 0; i < kNumFeatures; ++i) {
    a[i] = a[i] * stats.std[i] + stats.mean[i];
  }
  return FeatureVector::fromArray(a);
}

} // namespace natopo
