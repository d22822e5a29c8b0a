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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "natopo/predictor.hpp"
#include "natopo/rng.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <set>

using namespace natopo;

namespace {

std::array<double, kNumFeatures> randomInput(Rng& rng, double scale = 1.0) {
  std::array<double, kNumFeatures> x{};
  for (auto& v : x) {
    v = rng.uniform(-scale, scale);
  }
  return x;
}

Mlp randomMlp(std::uint64_t seed) {
  Mlp mlp = Mlp::initialized(seed);
  Rng rng(Rng::deriveSeed(seed, 9));
  for (auto& layer : mlp.layers()) {
    for (auto& b : layer.b) {
      b = rng.uniform(-0.5, 0.5);
    }
  }
  return mlp;
}

} // namespace

TEST_CASE("zero weights forward the output bias") {
  Mlp mlp; // all zeros
  mlp.layers()[2].b[0] = 4.25;
  Rng rng(1);
  for (int i = 0; i < 10; ++i) {
    CHECK(mlp.forward(randomInput(rng)) == doctest::Approx(4.25));
  }
}

TEST_CASE("a hand-built single active path passes its input through") {
  Mlp mlp;
  // route input component 3 through hidden unit 0 of both layers
  mlp.layers()[0].w[0 * Mlp::kInputSize + 3] = 1.0;
  mlp.layers()[1].w[0 * Mlp::kHiddenSize + 0] = 1.0;
  mlp.layers()[2].w[0] = 1.0;
  std::array<double, kNumFeatures> x{};
  x[3] = 2.5;
  CHECK(mlp.forward(x) == doctest::Approx(2.5));
  x[3] = -2.5; // rectifier clips the negative path
  CHECK(mlp.forward(x) == doctest::Approx(0.0));
}

TEST_CASE("forward pass matches a duplicate arithmetic re-evaluation") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const Mlp mlp = randomMlp(100 + trial);
    const auto x = randomInput(rng, 2.0);

    // independent re-evaluation with plain loops over the layer data
    std::vector<double> h(x.begin(), x.end());
    for (const auto& layer : mlp.layers()) {
      std::vector<double> next(layer.out, 0.0);
      for (int r = 0; r < layer.out; ++r) {
        next[r] = layer.b[r];
        for (int c = 0; c < layer.in; ++c) {
          next[r] += layer.w[r * layer.in + c] * h[c];
        }
      }
      if (&layer != &mlp.layers().back()) {
        for (auto& v : next) {
          v = std::max(v, 0.0);
        }
      }
      h = next;
    }
    CHECK(mlp.forward(x) == doctest::Approx(h[0]).epsilon(1e-12));
  }
}

TEST_CASE("analytic MAE gradient matches central finite differences") {
  Rng rng(7);
  double worst = 0;
  int checked = 0;
  for (int config = 0; config < 100; ++config) {
    const Mlp mlp = randomMlp(500 + config);
    std::vector<std::array<double, kNumFeatures>> inputs{randomInput(rng, 2.0)};
    std::vector<double> targets{rng.uniform(-3.0, 3.0)};

    std::vector<double> grad;
    mlp.maeGradient(inputs, targets, grad);

    // probe a handful of random parameters per configuration
    for (int probe = 0; probe < 8; ++probe) {
      const std::size_t p = rng.nextIndex(mlp.parameterCount());
      const double h = 1e-6;

      Mlp plus = mlp;
      plus.setParameter(p, plus.getParameter(p) + h);
      Mlp minus = mlp;
      minus.setParameter(p, minus.getParameter(p) - h);

      // skip rectifier kink neighborhoods: any pre-activation within 1e-6
      // of zero in either perturbed network
      bool nearKink = false;
      const std::array<const Mlp*, 3> nets{&plus, &minus, &mlp};
      for (const Mlp* net : nets) {
        for (const double z : net->preActivations(inputs[0])) {
          nearKink |= std::abs(z) < 1e-6;
        }
      }
      // the |residual| kink of the loss itself
      nearKink |= std::abs(mlp.forward(inputs[0]) - targets[0]) < 1e-6;
      if (nearKink) {
        continue;
      }

      const double lossPlus = std::abs(plus.forward(inputs[0]) - targets[0]);
      const double lossMinus = std::abs(minus.forward(inputs[0]) - targets[0]);
      const double numeric = (lossPlus - lossMinus) / (2 * h);
      const double analytic = grad[p];
      const double scale = std::max({std::abs(numeric), std::abs(analytic),
                                     1e-8});
      worst = std::max(worst, std::abs(numeric - analytic) / scale);
      ++checked;
    }
  }
  CHECK(checked > 400);
  CHECK(worst < 1e-4);
}

TEST_CASE("training on constant labels converges to the constant") {
  Rng rng(11);
  std::vector<TrainSample> dataset;
  for (int i = 0; i < 320; ++i) {
    dataset.push_back({FeatureVector::fromArray(randomInput(rng, 1.5)), 7.5});
  }
  const auto result = train(dataset, {}, 42);
  for (const auto& sample : dataset) {
    const double prediction = predict(result.mlp, result.stats, sample.features);
    CHECK(std::abs(prediction - 7.5) < 0.75); // within 10% of the constant
  }
}

TEST_CASE("training learns a linear synthetic target") {
  Rng rng(13);
  std::vector<TrainSample> dataset;
  double labelMean = 0;
  for (int i = 0; i < 200; ++i) {
    const auto x = randomInput(rng, 2.0);
    dataset.push_back({FeatureVector::fromArray(x), 3.0 * x[0]});
    labelMean += dataset.back().label / 200;
  }
  double labelStd = 0;
  for (const auto& s : dataset) {
    labelStd += (s.label - labelMean) * (s.label - labelMean) / 200;
  }
  labelStd = std::sqrt(labelStd);

  const auto result = trainWithCrossValidation(dataset, {}, 7);
  REQUIRE(result.foldValidationMae.size() == 5);
  for (const double mae : result.foldValidationMae) {
    CHECK(mae < labelStd); // learned signal beats predicting the mean
  }
}

TEST_CASE("training is deterministic per seed") {
  Rng rng(17);
  std::vector<TrainSample> dataset;
  for (int i = 0; i < 60; ++i) {
    const auto x = randomInput(rng);
    dataset.push_back({FeatureVector::fromArray(x), x[1] - 2 * x[4]});
  }
  AdamConfig fast;
  fast.epochs = 50;
  const auto a = train(dataset, fast, 5);
  const auto b = train(dataset, fast, 5);
  CHECK(a.mlp == b.mlp);
  const auto c = train(dataset, fast, 6);
  CHECK(!(a.mlp == c.mlp));
}

TEST_CASE("train rejects degenerate datasets") {
  std::vector<TrainSample> tiny(5);
  CHECK_THROWS_AS(train(tiny, {}, 1), std::invalid_argument);
  Rng rng(1);
  std::vector<TrainSample> bad;
  for (int i = 0; i < 20; ++i) {
    bad.push_back({FeatureVector::fromArray(randomInput(rng)), 1.0});
  }
  bad[3].label = std::nan("");
  CHECK_THROWS_AS(train(bad, {}, 1), std::invalid_argument);
}

TEST_CASE("k-fold split partitions every sample exactly once") {
  const auto folds = kFoldSplit(103, 5, 99);
  REQUIRE(folds.size() == 5);
  std::set<std::size_t> seen;
  for (const auto& fold : folds) {
    // 103 = 5*20 + 3: folds are 21 or 20 long (within one of 1/5)
    CHECK(fold.size() >= 20);
    CHECK(fold.size() <= 21);
    for (const std::size_t i : fold) {
      CHECK(seen.insert(i).second);
    }
  }
  CHECK(seen.size() == 103);
  CHECK_THROWS_AS(kFoldSplit(3, 5, 1), std::invalid_argument);
}

TEST_CASE("selectTopology extremizes the right direction with stable ties") {
  ModelBank bank;
  const auto constantModel = [](double value) {
    ModelBank::Entry entry;
    entry.mlp.layers()[2].b[0] = value;
    for (auto& sd : entry.stats.std) {
      sd = 1.0;
    }
    return entry;
  };
  bank.entries[Metric::Critical][LatticeKind::Square] = constantModel(10);
  bank.entries[Metric::Critical][LatticeKind::STriangle] = constantModel(8);
  bank.entries[Metric::Critical][LatticeKind::TTriangle] = constantModel(12);
  const FeatureVector anything{};
  CHECK(selectTopology(bank, Metric::Critical, anything).choice ==
        LatticeKind::STriangle);

  bank.entries[Metric::Fidelity][LatticeKind::Square] = constantModel(0.91);
  bank.entries[Metric::Fidelity][LatticeKind::STriangle] = constantModel(0.91);
  bank.entries[Metric::Fidelity][LatticeKind::TTriangle] = constantModel(0.90);
  const auto selection = selectTopology(bank, Metric::Fidelity, anything);
  CHECK(selection.choice == LatticeKind::Square); // tie rule
  CHECK(selection.predictions[0] == doctest::Approx(0.91));

  // shift invariance: adding a constant to every model's output moves all
  // three predictions but not the argmin
  for (auto& [kind, entry] : bank.entries[Metric::Critical]) {
    entry.mlp.layers()[2].b[0] += 100.0;
  }
  CHECK(selectTopology(bank, Metric::Critical, anything).choice ==
        LatticeKind::STriangle);

  CHECK_THROWS_AS(selectTopology(bank, Metric::Total, anything),
                  std::invalid_argument);
}

TEST_CASE("feature importance ranks an ignored feature last") {
  Rng rng(23);
  std::vector<TrainSample> dataset;
  for (int i = 0; i < 150; ++i) {
    const auto x = randomInput(rng, 2.0);
    dataset.push_back({FeatureVector::fromArray(x), 4.0 * x[0]});
  }
  const auto result = train(dataset, {}, 3);

  const auto ranking = featureImportance(result.mlp, result.stats, dataset);
  REQUIRE(ranking.size() == kNumFeatures);
  CHECK(ranking.front().feature == 0); // y = 4*x0: feature 0 dominates
  CHECK(ranking.front().name == "n_instructions");
  CHECK(ranking.front().lossDelta > 0);

  // a model with a zeroed first-layer column cannot depend on feature k
  Mlp blind = result.mlp;
  const int k = 5;
  for (int r = 0; r < Mlp::kHiddenSize; ++r) {
    blind.layers()[0].w[r * Mlp::kInputSize + k] = 0.0;
  }
  const auto blindRank = featureImportance(blind, result.stats, dataset);
  for (const auto& entry : blindRank) {
    if (entry.feature == k) {
      CHECK(entry.lossDelta == doctest::Approx(0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("bank save/load reproduces predictions bit-exactly") {
  Rng rng(29);
  ModelBank bank;
  for (const auto kind : {LatticeKind::Square, LatticeKind::STriangle,
                          LatticeKind::TTriangle}) {
    ModelBank::Entry entry;
    entry.mlp = randomMlp(40 + static_cast<int>(kind));
    for (int i = 0; i < kNumFeatures; ++i) {
      entry.stats.mean[i] = rng.uniform(-2, 2);
      entry.stats.std[i] = rng.uniform(0.5, 3);
    }
    bank.entries[Metric::Critical][kind] = entry;
  }

  const auto path =
      (std::filesystem::temp_directory_path() / "natopo_bank_test.json")
          .string();
  saveBank(bank, path);
  const auto loaded = loadBank(path);

  for (int trial = 0; trial < 25; ++trial) {
    const auto f = FeatureVector::fromArray(randomInput(rng, 3.0));
    for (const auto kind : {LatticeKind::Square, LatticeKind::STriangle,
                            LatticeKind::TTriangle}) {
      const auto& a = bank.at(Metric::Critical, kind);
      const auto& b = loaded.at(Metric::Critical, kind);
      CHECK(predict(a.mlp, a.stats, f) == predict(b.mlp, b.stats, f));
    }
  }
  std::filesystem::remove(path);
}

TEST_CASE("bank loading rejects bad files") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path();

  const auto write = [&](const std::string& name, const std::string& text) {
    const auto path = (dir / name).string();
    std::FILE* f = std::fopen(path.c_str(), "w");
    REQUIRE(f);
    std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);
    return path;
  };

  const auto wrongVersion = write(
      "natopo_bank_v9.json",
      R"({"format":"natopo-model-bank","version":9,"metrics":{}})");
  CHECK_THROWS_WITH_AS(loadBank(wrongVersion),
                       doctest::Contains("unsupported version"),
                       std::runtime_error);

  ModelBank bank;
  bank.entries[Metric::Total][LatticeKind::Square] = ModelBank::Entry{};
  const auto full = bankToJson(bank);
  const auto truncated =
      write("natopo_bank_trunc.json", full.substr(0, full.size() / 2));
  CHECK_THROWS_AS(loadBank(truncated), std::runtime_error);

  CHECK_THROWS_AS(loadBank((dir / "natopo_does_not_exist.json").string()),
                  std::runtime_error);
  fs::remove(wrongVersion);
  fs::remove(truncated);
}
