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

#include "natopo/predictor.hpp"

#include "natopo/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numeric>
#include <stdexcept>

namespace natopo {

namespace {

void affine(const Layer& layer, const double* in, double* out) {
  for (int r = 0; r < layer.out; ++r) {
    double acc = layer.b[r];
    const double* row = layer.w.data() + static_cast<std::size_t>(r) * layer.in;
    for (int c = 0; c < layer.in; ++c) {
      acc += row[c] * in[c];
    }
    out[r] = acc;
  }
}

void reluInPlace(double* v, int n) {
  for (int i = 0; i < n; ++i) {
    v[i] = v[i] > 0 ? v[i] : 0.0;
  }
}

} // namespace

Mlp::Mlp() {
  layers_.push_back(Layer{kInputSize, kHiddenSize,
                          std::vector<double>(kHiddenSize * kInputSize, 0.0),
                          std::vector<double>(kHiddenSize, 0.0)});
  layers_.push_back(Layer{kHiddenSize, kHiddenSize,
                          std::vector<double>(kHiddenSize * kHiddenSize, 0.0),
                          std::vector<double>(kHiddenSize, 0.0)});
  layers_.push_back(Layer{kHiddenSize, 1,
                          std::vector<double>(kHiddenSize, 0.0),
                          std::vector<double>(1, 0.0)});
}

Mlp Mlp::initialized(std::uint64_t seed) {
  Mlp mlp;
  Rng rng(seed);
  for (auto& layer : mlp.layers_) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(layer.in));
    for (auto& w : layer.w) {
      w = rng.uniform(-scale, scale);
    }
    // biases start at zero
  }
  return mlp;
}

double Mlp::forward(const std::array<double, kInputSize>& input) const {
  double h1[kHiddenSize];
  double h2[kHiddenSize];
  double out = 0;
  affine(layers_[0], input.data(), h1);
  reluInPlace(h1, kHiddenSize);
  affine(layers_[1], h1, h2);
  reluInPlace(h2, kHiddenSize);
  affine(layers_[2], h2, &out);
  return out;
}

std::vector<double> Mlp::preActivations(
    const std::array<double, kInputSize>& input) const {
  double z1[kHiddenSize];
  double h1[kHiddenSize];
  double z2[kHiddenSize];
  affine(layers_[0], input.data(), z1);
  std::copy(z1, z1 + kHiddenSize, h1);
  reluInPlace(h1, kHiddenSize);
  affine(layers_[1], h1, z2);
  std::vector<double> z(z1, z1 + kHiddenSize);
  z.insert(z.end(), z2, z2 + kHiddenSize);
  return z;
}

std::size_t Mlp::parameterCount() const {
  std::size_t n = 0;
  for (const auto& layer : layers_) {
    n += layer.w.size() + layer.b.size();
  }
  return n;
}

double Mlp::getParameter(std::size_t flatIndex) const {
  for (const auto& layer : layers_) {
    if (flatIndex < layer.w.size()) {
      return layer.w[flatIndex];
    }
    flatIndex -= layer.w.size();
    if (flatIndex < layer.b.size()) {
      return layer.b[flatIndex];
    }
    flatIndex -= layer.b.size();
  }
  throw std::out_of_range("Mlp parameter index");
}

void Mlp::setParameter(std::size_t flatIndex, double value) {
  for (auto& layer : layers_) {
    if (flatIndex < layer.w.size()) {
      layer.w[flatIndex] = value;
      return;
    }
    flatIndex -= layer.w.size();
    if (flatIndex < layer.b.size()) {
      layer.b[flatIndex] = value;
      return;
    }
    flatIndex -= layer.b.size();
  }
  throw std::out_of_range("Mlp parameter index");
}

double Mlp::maeGradient(
    const std::vector<std::array<double, kInputSize>>& inputs,
    const std::vector<double>& targets, std::vector<double>& grad) const {
  grad.assign(parameterCount(), 0.0);
  const auto& l1 = layers_[0];
  const auto& l2 = layers_[1];
  const auto& l3 = layers_[2];
  const std::size_t o1 = 0;
  const std::size_t o2 = l1.w.size() + l1.b.size();
  const std::size_t o3 = o2 + l2.w.size() + l2.b.size();

  double loss = 0;
  const double invBatch = 1.0 / static_cast<double>(inputs.size());

  for (std::size_t s = 0; s < inputs.size(); ++s) {
    double z1[kHiddenSize];
    double h1[kHiddenSize];
    double z2[kHiddenSize];
    double h2[kHiddenSize];
    double out = 0;
    affine(l1, inputs[s].data(), z1);
    std::copy(z1, z1 + kHiddenSize, h1);
    reluInPlace(h1, kHiddenSize);
    affine(l2, h1, z2);
    std::copy(z2, z2 + kHiddenSize, h2);
    reluInPlace(h2, kHiddenSize);
    affine(l3, h2, &out);

    const double residual = out - targets[s];
    loss += std::abs(residual) * invBatch;
    const double gOut =
        (residual > 0 ? 1.0 : (residual < 0 ? -1.0 : 0.0)) * invBatch;

    // output layer
    for (int c = 0; c < kHiddenSize; ++c) {
      grad[o3 + c] += gOut * h2[c];
    }
    grad[o3 + l3.w.size()] += gOut;

    // second hidden layer
    double g2[kHiddenSize];
    for (int r = 0; r < kHiddenSize; ++r) {
      g2[r] = z2[r] > 0 ? l3.w[r] * gOut : 0.0;
    }
    for (int r = 0; r < kHiddenSize; ++r) {
      if (g2[r] == 0) {
        continue;
      }
      double* wrow = grad.data() + o2 + static_cast<std::size_t>(r) * kHiddenSize;
      for (int c = 0; c < kHiddenSize; ++c) {
        wrow[c] += g2[r] * h1[c];
      }
      grad[o2 + l2.w.size() + r] += g2[r];
    }

    // first hidden layer
    double g1[kHiddenSize];
    for (int r = 0; r < kHiddenSize; ++r) {
      double back = 0;
      for (int k = 0; k < kHiddenSize; ++k) {
        back += l2.w[static_cast<std::size_t>(k) * kHiddenSize + r] * g2[k];
      }
      g1[r] = z1[r] > 0 ? back : 0.0;
    }
    for (int r = 0; r < kHiddenSize; ++r) {
      if (g1[r] == 0) {
        continue;
      }
      double* wrow = grad.data() + o1 + static_cast<std::size_t>(r) * kInputSize;
      for (int c = 0; c < kInputSize; ++c) {
        wrow[c] += g1[r] * inputs[s][c];
      }
      grad[o1 + l1.w.size() + r] += g1[r];
    }
  }
  return loss;
}

namespace {

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long long t = 0;

  explicit AdamState(std::size_t n) : m(n, 0.0), v(n, 0.0) {}

  void step(Mlp& mlp, const std::vector<double>& grad,
            const AdamConfig& config) {
    ++t;
    const double correction1 = 1.0 - std::pow(config.beta1, t);
    const double correction2 = 1.0 - std::pow(config.beta2, t);
    for (std::size_t i = 0; i < grad.size(); ++i) {
      m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * grad[i];
      v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * grad[i] * grad[i];
      const double mhat = m[i] / correction1;
      const double vhat = v[i] / correction2;
      mlp.setParameter(i, mlp.getParameter(i) - config.learningRate * mhat /
                                                    (std::sqrt(vhat) +
                                                     config.epsilon));
    }
  }
};

Mlp fitOnce(const std::vector<std::array<double, Mlp::kInputSize>>& inputs,
            const std::vector<double>& labels, const AdamConfig& config,
            std::uint64_t seed) {
  Mlp mlp = Mlp::initialized(seed);
  AdamState adam(mlp.parameterCount());
  Rng rng(Rng::deriveSeed(seed, 1));

  const std::size_t n = inputs.size();
  const std::size_t batch =
      config.batchSize <= 0 ? n : std::min<std::size_t>(config.batchSize, n);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::vector<std::array<double, Mlp::kInputSize>> batchX;
  std::vector<double> batchY;
  std::vector<double> grad;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t begin = 0; begin < n; begin += batch) {
      const std::size_t end = std::min(begin + batch, n);
      batchX.clear();
      batchY.clear();
      for (std::size_t i = begin; i < end; ++i) {
        batchX.push_back(inputs[order[i]]);
        batchY.push_back(labels[order[i]]);
      }
      mlp.maeGradient(batchX, batchY, grad);
      adam.step(mlp, grad, config);
    }
  }
  return mlp;
}

} // namespace

std::vector<std::vector<std::size_t>> kFoldSplit(std::size_t n, int folds,
                                                 std::uint64_t seed) {
  if (folds < 2 || n < static_cast<std::size_t>(folds)) {
    throw std::invalid_argument("kFoldSplit: need n >= folds >= 2");
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(order);
  std::vector<std::vector<std::size_t>> out(folds);
  for (std::size_t i = 0; i < n; ++i) {
    out[i % folds].push_back(order[i]);
  }
  return out;
}

namespace {

TrainResult fitDataset(const std::vector<TrainSample>& dataset,
                       const AdamConfig& config, std::uint64_t seed) {
  std::vector<FeatureVector> feats;
  feats.reserve(dataset.size());
  for (const auto& s : dataset) {
    if (!std::isfinite(s.label)) {
      throw std::invalid_argument("train: non-finite label");
    }
    feats.push_back(s.features);
  }
  TrainResult result;
  result.stats = NormStats::fit(feats);
  std::vector<std::array<double, Mlp::kInputSize>> inputs;
  std::vector<double> labels;
  inputs.reserve(dataset.size());
  for (const auto& s : dataset) {
    inputs.push_back(normalize(s.features, result.stats).toArray());
    labels.push_back(s.label);
  }
  result.mlp = fitOnce(inputs, labels, config, seed);
  return result;
}

} // namespace

TrainResult train(const std::vector<TrainSample>& dataset,
                  const AdamConfig& config, std::uint64_t seed) {
  if (dataset.size() < 10) {
    throw std::invalid_argument("train: need at least 10 samples");
  }
  return fitDataset(dataset, config, seed);
}

TrainResult trainWithCrossValidation(const std::vector<TrainSample>& dataset,
                                     const AdamConfig& config,
                                     std::uint64_t seed, int folds) {
  if (dataset.size() < 10) {
    throw std::invalid_argument("train: need at least 10 samples");
  }
  const auto split = kFoldSplit(dataset.size(), folds,
                                Rng::deriveSeed(seed, 0xF01D));
  TrainResult result;
  for (int fold = 0; fold < folds; ++fold) {
    std::vector<TrainSample> trainSet;
    for (int other = 0; other < folds; ++other) {
      if (other == fold) {
        continue;
      }
      for (const std::size_t i : split[other]) {
        trainSet.push_back(dataset[i]);
      }
    }
    const auto foldResult =
        fitDataset(trainSet, config, Rng::deriveSeed(seed, fold));
    double mae = 0;
    for (const std::size_t i : split[fold]) {
      mae += std::abs(predict(foldResult.mlp, foldResult.stats,
                              dataset[i].features) -
                      dataset[i].label);
    }
    result.foldValidationMae.push_back(mae / split[fold].size());
  }
  const auto finalFit = fitDataset(dataset, config, seed);
  result.mlp = finalFit.mlp;
  result.stats = finalFit.stats;
  return result;
}

double predict(const Mlp& mlp, const NormStats& stats, const FeatureVector& f) {
  return mlp.forward(normalize(f, stats).toArray());
}

std::string metricName(Metric metric) {
  switch (metric) {
  case Metric::Critical:
    return "critical";
  case Metric::Total:
    return "total";
  case Metric::Fidelity:
    return "fidelity";
  }
  return "critical";
}

std::optional<Metric> metricFromName(const std::string& name) {
  if (name == "critical") {
    return Metric::Critical;
  }
  if (name == "total") {
    return Metric::Total;
  }
  if (name == "fidelity") {
    return Metric::Fidelity;
  }
  return std::nullopt;
}

bool ModelBank::has(Metric metric, LatticeKind kind) const {
  const auto it = entries.find(metric);
  return it != entries.end() && it->second.count(kind) > 0;
}

const ModelBank::Entry& ModelBank::at(Metric metric, LatticeKind kind) const {
  if (!has(metric, kind)) {
    throw std::invalid_argument("model bank has no entry for " +
                                metricName(metric) + "/" +
                                latticeKindName(kind));
  }
  return entries.at(metric).at(kind);
}

SelectionResult selectTopology(const ModelBank& bank, Metric metric,
                               const FeatureVector& features) {
  static constexpr std::array<LatticeKind, 3> kOrder{
      LatticeKind::Square, LatticeKind::STriangle, LatticeKind::TTriangle};
  SelectionResult result;
  for (std::size_t i = 0; i < kOrder.size(); ++i) {
    const auto& entry = bank.at(metric, kOrder[i]);
    result.predictions[i] = predict(entry.mlp, entry.stats, features);
  }
  // lower is better except for fidelity; ties keep the earliest topology
  const bool maximize = metric == Metric::Fidelity;
  std::size_t best = 0;
  for (std::size_t i = 1; i < kOrder.size(); ++i) {
    if (maximize ? result.predictions[i] > result.predictions[best]
                 : result.predictions[i] < result.predictions[best]) {
      best = i;
    }
  }
  result.choice = kOrder[best];
  return result;
}

std::vector<ImportanceEntry> featureImportance(
    const Mlp& mlp, const NormStats& stats,
    const std::vector<TrainSample>& dataset) {
  if (dataset.empty()) {
    throw std::invalid_argument("featureImportance: empty dataset");
  }
  std::array<double, kNumFeatures> featureMean{};
  for (const auto& s : dataset) {
    const auto a = s.features.toArray();
    for (int i = 0; i < kNumFeatures; ++i) {
      featureMean[i] += a[i];
    }
  }
  for (auto& m : featureMean) {
    m /= static_cast<double>(dataset.size());
  }

  const auto maeOf = [&](int masked) {
    double mae = 0;
    for (const auto& s : dataset) {
      auto a = s.features.toArray();
      if (masked >= 0) {
        a[masked] = featureMean[masked];
      }
      mae += std::abs(predict(mlp, stats, FeatureVector::fromArray(a)) -
                      s.label);
    }
    return mae / static_cast<double>(dataset.size());
  };

  const double base = maeOf(-1);
  std::vector<ImportanceEntry> out;
  for (int k = 0; k < kNumFeatures; ++k) {
    out.push_back({k, featureNames()[k], maeOf(k) - base});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const ImportanceEntry& a, const ImportanceEntry& b) {
                     return a.lossDelta > b.lossDelta;
                   });
  return out;
}

namespace {

constexpr int kBankVersion = 1;

nlohmann::json layerToJson(const Layer& layer) {
  return {{"in", layer.in}, {"out", layer.out}, {"w", layer.w}, {"b", layer.b}};
}

Layer layerFromJson(const nlohmann::json& j) {
  Layer layer;
  layer.in = j.at("in").get<int>();
  layer.out = j.at("out").get<int>();
  layer.w = j.at("w").get<std::vector<double>>();
  layer.b = j.at("b").get<std::vector<double>>();
  if (layer.w.size() != static_cast<std::size_t>(layer.in) * layer.out ||
      layer.b.size() != static_cast<std::size_t>(layer.out)) {
    throw std::runtime_error("model bank: inconsistent layer shape");
  }
  return layer;
}

} // namespace

std::string bankToJson(const ModelBank& bank) {
  nlohmann::json j;
  j["format"] = "natopo-model-bank";
  j["version"] = kBankVersion;
  nlohmann::json metrics = nlohmann::json::object();
  for (const auto& [metric, perKind] : bank.entries) {
    nlohmann::json kinds = nlohmann::json::object();
    for (const auto& [kind, entry] : perKind) {
      nlohmann::json e;
      e["norm"]["mean"] = entry.stats.mean;
      e["norm"]["std"] = entry.stats.std;
      nlohmann::json layers = nlohmann::json::array();
      for (const auto& layer : entry.mlp.layers()) {
        layers.push_back(layerToJson(layer));
      }
      e["layers"] = std::move(layers);
      kinds[latticeKindName(kind)] = std::move(e);
    }
    metrics[metricName(metric)] = std::move(kinds);
  }
  j["metrics"] = std::move(metrics);
  return j.dump();
}

ModelBank bankFromJson(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("model bank: malformed JSON: ") +
                             e.what());
  }
  if (j.value("format", "") != "natopo-model-bank") {
    throw std::runtime_error("model bank: unrecognized file format");
  }
  if (j.value("version", -1) != kBankVersion) {
    throw std::runtime_error("model bank: unsupported version " +
                             std::to_string(j.value("version", -1)));
  }
  ModelBank bank;
  for (const auto& [metricKey, kinds] : j.at("metrics").items()) {
    const auto metric = metricFromName(metricKey);
    if (!metric) {
      throw std::runtime_error("model bank: unknown metric '" + metricKey +
                               "'");
    }
    for (const auto& [kindKey, e] : kinds.items()) {
      const auto kind = latticeKindFromName(kindKey);
      if (!kind) {
        throw std::runtime_error("model bank: unknown topology '" + kindKey +
                                 "'");
      }
      ModelBank::Entry entry;
      const auto mean = e.at("norm").at("mean").get<std::vector<double>>();
      const auto std_ = e.at("norm").at("std").get<std::vector<double>>();
      if (mean.size() != kNumFeatures || std_.size() != kNumFeatures) {
        throw std::runtime_error("model bank: wrong normalization size");
      }
      std::copy(mean.begin(), mean.end(), entry.stats.mean.begin());
      std::copy(std_.begin(), std_.end(), entry.stats.std.begin());
      const auto& layers = e.at("layers");
      if (layers.size() != entry.mlp.layers().size()) {
        throw std::runtime_error("model bank: wrong layer count");
      }
      for (std::size_t i = 0; i < layers.size(); ++i) {
        const Layer parsed = layerFromJson(layers[i]);
        const Layer& expected = entry.mlp.layers()[i];
        if (parsed.in != expected.in || parsed.out != expected.out) {
          throw std::runtime_error("model bank: unexpected layer shape");
        }
        entry.mlp.layers()[i] = parsed;
      }
      bank.entries[*metric][*kind] = std::move(entry);
    }
  }
  return bank;
}

void saveBank(const ModelBank& bank, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  out << bankToJson(bank);
  if (!out) {
    throw std::runtime_error("failed writing model bank to '" + path + "'");
  }
}

ModelBank loadBank(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open model bank '" + path + "'");
  }
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return bankFromJson(text);
}

} // namespace natopo
