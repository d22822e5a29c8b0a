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

#include "natopo/features.hpp"
#include "natopo/topology.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace natopo {

/// Fully-connected layer, row-major weights (out x in).
struct Layer {
  int in = 0;
  int out = 0;
  std::vector<double> w;
  std::vector<double> b;

  bool operator==(const Layer&) const = default;
};

/// 14 -> 15 -> 15 -> 1 regressor with rectified-linear hidden units and a
/// linear output.
class Mlp {
public:
  static constexpr int kInputSize = kNumFeatures;
  static constexpr int kHiddenSize = 15;

  Mlp();

  /// Scaled-uniform fan-in initialization, U(-1/sqrt(in), 1/sqrt(in)).
  static Mlp initialized(std::uint64_t seed);

  double forward(const std::array<double, kInputSize>& input) const;

  std::vector<Layer>& layers() { return layers_; }
  const std::vector<Layer>& layers() const { return layers_; }

  std::size_t parameterCount() const;
  double getParameter(std::size_t flatIndex) const;
  void setParameter(std::size_t flatIndex, double value);

  /// Hidden pre-activations for the given input, used by the gradient
  /// tests to detect rectifier kinks.
  std::vector<double> preActivations(
      const std::array<double, kInputSize>& input) const;

  /// Mean-absolute-error gradient of a batch, flattened in parameter
  /// order. Also returns the batch MAE.
  double maeGradient(const std::vector<std::array<double, kInputSize>>& inputs,
                     const std::vector<double>& targets,
                     std::vector<double>& grad) const;

  bool operator==(const Mlp&) const = default;

private:
  std::vector<Layer> layers_;
};

struct AdamConfig {
  double learningRate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-7;
  int epochs = 400;
  int batchSize = 32; ///< 0 = full batch
};

struct TrainSample {
  FeatureVector features;
  double label = 0;
};

struct TrainResult {
  Mlp mlp;
  NormStats stats;
  std::vector<double> foldValidationMae; ///< empty unless cross-validated
};

/// Adam on mean absolute error; z-score stats fitted on the training
/// samples; deterministic per seed.
TrainResult train(const std::vector<TrainSample>& dataset,
                  const AdamConfig& config, std::uint64_t seed);

/// 5-fold cross validation (validation MAE per fold) followed by a final
/// fit on the full dataset.
TrainResult trainWithCrossValidation(const std::vector<TrainSample>& dataset,
                                     const AdamConfig& config,
                                     std::uint64_t seed, int folds = 5);

/// Shuffled k-fold partition: every index appears in exactly one fold.
std::vector<std::vector<std::size_t>> kFoldSplit(std::size_t n, int folds,
                                                 std::uint64_t seed);

double predict(const Mlp& mlp, const NormStats& stats, const FeatureVector& f);

enum class Metric { Critical, Total, Fidelity };

std::string metricName(Metric metric);
std::optional<Metric> metricFromName(const std::string& name);

/// One regressor per (topology, metric) pair.
struct ModelBank {
  struct Entry {
    Mlp mlp;
    NormStats stats;
  };
  std::map<Metric, std::map<LatticeKind, Entry>> entries;

  bool has(Metric metric, LatticeKind kind) const;
  const Entry& at(Metric metric, LatticeKind kind) const;
};

struct SelectionResult {
  LatticeKind choice = LatticeKind::Square;
  std::array<double, 3> predictions{}; ///< square, striangle, ttriangle
};

/// argmin of the predicted metric (argmax for fidelity); ties resolve
/// Square < STriangle < TTriangle.
SelectionResult selectTopology(const ModelBank& bank, Metric metric,
                               const FeatureVector& features);

struct ImportanceEntry {
  int feature = 0;
  std::string name;
  double lossDelta = 0;
};

/// Mean-substitution importance: replace one feature with its dataset mean,
/// re-evaluate MAE, rank by the loss increase (descending).
std::vector<ImportanceEntry> featureImportance(
    const Mlp& mlp, const NormStats& stats,
    const std::vector<TrainSample>& dataset);

void saveBank(const ModelBank& bank, const std::string& path);
ModelBank loadBank(const std::string& path);
std::string bankToJson(const ModelBank& bank);
ModelBank bankFromJson(const std::string& text);

} // namespace natopo
