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

#include "natopo/cli.hpp"

#include "natopo/pipeline.hpp"
#include "natopo/qasm.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <nlohmann/json.hpp>
#include <sstream>

namespace natopo {

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitInvariant = 3;

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvariantError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Resolved configuration of a run; emitted next to every result so runs
/// can be reproduced exactly.
struct RunConfig {
  std::uint64_t seed = 0;
  int jobs = 1;
  std::string topology = "square";
  RadiusConfig radii;
  GateDurations durations;
  double noiseP1 = 0.01;
  long long shots = 5000;
  std::optional<nlohmann::json> latticeJson; ///< explicit lattice geometry

  nlohmann::json toJson() const {
    nlohmann::json j;
    j["seed"] = seed;
    j["jobs"] = jobs;
    j["topology"] = topology;
    j["radii"] = {{"r2", radii.r2}, {"r3", radii.r3}, {"rb", radii.rb}};
    j["durations"] = {{"1q", durations.pulses1q},
                      {"2q", durations.pulses2q},
                      {"3q", durations.pulses3q},
                      {"swap", durations.pulsesSwap}};
    j["noise"] = {{"p1", noiseP1}, {"shots", shots}};
    if (latticeJson) {
      j["lattice"] = *latticeJson;
    }
    return j;
  }

  /// Lattice from the config file, with the family's canonical geometry
  /// as the baseline for any field not given explicitly.
  std::optional<LatticeSpec> latticeFor(LatticeKind kind) const {
    if (!latticeJson) {
      return std::nullopt;
    }
    const auto& j = *latticeJson;
    if (!j.contains("rows") || !j.contains("cols")) {
      throw DataError("config lattice needs at least rows and cols");
    }
    LatticeSpec spec =
        LatticeSpec::make(kind, j.at("rows").get<int>(), j.at("cols").get<int>());
    spec.dx = j.value("dx", spec.dx);
    spec.dy = j.value("dy", spec.dy);
    spec.rowOffset = j.value("row_offset", spec.rowOffset);
    spec.layers = j.value("layers", spec.layers);
    spec.dz = j.value("dz", spec.dz);
    return spec;
  }

  void loadFile(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
      throw DataError("cannot open config file '" + path + "'");
    }
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw DataError("config file '" + path + "': " + e.what());
    }
    seed = j.value("seed", seed);
    jobs = j.value("jobs", jobs);
    topology = j.value("topology", topology);
    if (j.contains("radii")) {
      radii.r2 = j["radii"].value("r2", radii.r2);
      radii.r3 = j["radii"].value("r3", radii.r3);
      radii.rb = j["radii"].value("rb", radii.rb);
    }
    if (j.contains("durations")) {
      durations.pulses1q = j["durations"].value("1q", durations.pulses1q);
      durations.pulses2q = j["durations"].value("2q", durations.pulses2q);
      durations.pulses3q = j["durations"].value("3q", durations.pulses3q);
      durations.pulsesSwap = j["durations"].value("swap", durations.pulsesSwap);
    }
    if (j.contains("noise")) {
      noiseP1 = j["noise"].value("p1", noiseP1);
      shots = j["noise"].value("shots", shots);
    }
    if (j.contains("lattice")) {
      latticeJson = j["lattice"];
    }
  }

  CompileOptions compileOptions() const {
    CompileOptions opt;
    opt.radii = radii;
    opt.durations = durations;
    return opt;
  }
};

std::vector<double> parseNumberList(const std::string& text, std::size_t n,
                                    const std::string& what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw CLI::ValidationError(what, "expected comma-separated numbers");
    }
  }
  if (values.size() != n) {
    throw CLI::ValidationError(what, "expected " + std::to_string(n) +
                                         " comma-separated numbers");
  }
  return values;
}

Circuit loadCircuit(const std::string& path, std::ostream& err) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open circuit '" + path + "'");
  }
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  try {
    if (fs::path(path).extension() == ".qasm") {
      const auto result = parseQasmSubset(text);
      if (result.skippedStatements > 0) {
        err << path << ": skipped " << result.skippedStatements
            << " non-gate statement(s)\n";
      }
      return result.circuit;
    }
    return parseJson(text);
  } catch (const ParseError& e) {
    throw DataError(path + ": " + e.what());
  }
}

std::vector<std::string> corpusFiles(const std::string& dir) {
  if (!fs::is_directory(dir)) {
    throw DataError("corpus '" + dir + "' is not a directory");
  }
  std::vector<std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) {
      continue;
    }
    const auto name = entry.path().filename().string();
    const auto ext = entry.path().extension().string();
    if ((ext == ".json" || ext == ".qasm") && name != "runconfig.json") {
      files.push_back(entry.path().string());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw DataError("corpus '" + dir + "' contains no circuit files");
  }
  return files;
}

void writeFile(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw DataError("cannot open '" + path + "' for writing");
  }
  out << content;
  if (!out) {
    throw DataError("failed writing '" + path + "'");
  }
}

void emitRunConfig(const RunConfig& config, const std::string& path) {
  writeFile(path, config.toJson().dump(2) + "\n");
}

LatticeKind kindOrThrow(const std::string& name) {
  const auto kind = latticeKindFromName(name);
  if (!kind || *kind == LatticeKind::Custom) {
    throw DataError("unknown topology '" + name +
                    "' (square, striangle, ttriangle)");
  }
  return *kind;
}

std::string formatDouble(double v) {
  std::ostringstream out;
  out << std::setprecision(17) << v;
  return out.str();
}

// ---------------------------------------------------------------- gen ----

struct GenArgs {
  std::string outDir;
  int count = 0;
  int widthMin = 5;
  int widthMax = 70;
  int instrMin = 20;
  int instrMax = 100;
};

int cmdGen(const RunConfig& config, const GenArgs& args, std::ostream& err) {
  if (args.widthMin < 3 || args.widthMax < args.widthMin ||
      args.instrMin < 1 || args.instrMax < args.instrMin) {
    throw DataError("invalid width/instruction ranges");
  }
  fs::create_directories(args.outDir);
  Rng rng(config.seed);
  std::ostringstream manifest;
  manifest << "index,file,width,min_instructions,inter_connectivity,"
              "one_qubit_rate,three_qubit_rate,seed\n";
  for (int i = 0; i < args.count; ++i) {
    GenParams params;
    params.width = args.widthMin +
                   static_cast<int>(rng.nextIndex(args.widthMax - args.widthMin + 1));
    params.minInstructions =
        args.instrMin +
        static_cast<int>(rng.nextIndex(args.instrMax - args.instrMin + 1));
    params.interConnectivity = rng.uniform(0.0, 1.0);
    params.oneQubitRate = rng.uniform(0.1, 0.5);
    params.threeQubitRate = rng.uniform(0.0, 0.3);
    params.seed = Rng::deriveSeed(config.seed, static_cast<std::uint64_t>(i));

    std::ostringstream name;
    name << "circuit_" << std::setw(4) << std::setfill('0') << i << ".json";
    const auto path = fs::path(args.outDir) / name.str();
    writeFile(path.string(), serializeJson(generateRandomCircuit(params)));
    manifest << i << ',' << name.str() << ',' << params.width << ','
             << params.minInstructions << ','
             << formatDouble(params.interConnectivity) << ','
             << formatDouble(params.oneQubitRate) << ','
             << formatDouble(params.threeQubitRate) << ',' << params.seed
             << '\n';
  }
  writeFile((fs::path(args.outDir) / "manifest.csv").string(), manifest.str());
  emitRunConfig(config, (fs::path(args.outDir) / "runconfig.json").string());
  err << "wrote " << args.count << " circuits to " << args.outDir << "\n";
  return kExitOk;
}

// ----------------------------------------------------------- features ----

int cmdFeatures(const RunConfig& config, const std::vector<std::string>& files,
                const std::string& out, std::ostream& stdoutStream,
                std::ostream& err) {
  std::ostringstream csv;
  csv << "file";
  for (const auto& name : featureNames()) {
    csv << ',' << name;
  }
  csv << '\n';
  for (const auto& file : files) {
    const auto circuit = loadCircuit(file, err);
    const auto f = computeFeatures(circuit).toArray();
    csv << fs::path(file).filename().string();
    for (const double v : f) {
      csv << ',' << formatDouble(v);
    }
    csv << '\n';
  }
  if (out.empty()) {
    stdoutStream << csv.str();
  } else {
    writeFile(out, csv.str());
    emitRunConfig(config, out + ".runconfig.json");
  }
  return kExitOk;
}

// ------------------------------------------------------------ compile ----

struct CompileArgs {
  std::string circuitPath;
  int rows = 0;
  int cols = 0;
  std::string out;
  std::string dumpSchedule;
  std::string dumpTimeline;
  std::string dumpRouted;
  bool check = false;
};

nlohmann::json compileOne(const Circuit& circuit, LatticeKind kind,
                          const RunConfig& config, const CompileArgs& args) {
  CompileOptions options = config.compileOptions();
  options.lattice = config.latticeFor(kind);
  if (args.rows > 0 && args.cols > 0) {
    options.lattice = LatticeSpec::make(kind, args.rows, args.cols);
  }
  const auto result = compileCircuit(circuit, kind, options);

  if (args.check) {
    const Lattice lattice(result.latticeSpec);
    const auto routingIssues =
        validateRouting(result.routed, lattice, config.radii);
    const auto scheduleIssues = validate(result.sched, result.dag,
                                         result.routed, lattice, config.radii);
    if (!routingIssues.empty() || !scheduleIssues.empty()) {
      throw InvariantError("compiled schedule failed validation on " +
                           latticeKindName(kind));
    }
  }

  if (!args.dumpSchedule.empty()) {
    writeFile(args.dumpSchedule + ".schedule." + latticeKindName(kind) +
                  ".json",
              scheduleToJson(result.sched, result.routed));
  }
  if (!args.dumpTimeline.empty()) {
    writeFile(args.dumpTimeline + ".timeline." + latticeKindName(kind) +
                  ".csv",
              scheduleTimelineCsv(result.sched, result.routed));
  }
  if (!args.dumpRouted.empty()) {
    writeFile(args.dumpRouted + ".routed." + latticeKindName(kind) + ".json",
              routedToJson(result.routed));
  }

  nlohmann::json row;
  row["topology"] = latticeKindName(kind);
  row["lattice"] = {{"rows", result.latticeSpec.rows},
                    {"cols", result.latticeSpec.cols}};
  row["critical_pulses"] = result.metrics.criticalPulseCount;
  row["total_pulses"] = result.metrics.totalPulseCount;
  row["swaps"] = result.metrics.swapCount;
  row["instructions"] = result.routed.instructions.size();
  return row;
}

int cmdCompile(const RunConfig& config, const CompileArgs& args,
               std::ostream& out, std::ostream& err) {
  const auto circuit = loadCircuit(args.circuitPath, err);
  nlohmann::json results = nlohmann::json::array();
  if (config.topology == "all") {
    for (const auto kind : kAllTopologies) {
      results.push_back(compileOne(circuit, kind, config, args));
    }
  } else {
    results.push_back(
        compileOne(circuit, kindOrThrow(config.topology), config, args));
  }
  nlohmann::json j;
  j["config"] = config.toJson();
  j["file"] = args.circuitPath;
  j["results"] = std::move(results);
  const std::string text = j.dump(2) + "\n";
  if (args.out.empty()) {
    out << text;
  } else {
    writeFile(args.out, text);
  }
  return kExitOk;
}

// -------------------------------------------------------------- train ----

struct TrainArgs {
  std::string corpusDir;
  std::string metric = "critical";
  std::string outBank;
  std::string cvReport;
  int epochs = 400;
  int batchSize = 32;
};

int cmdTrain(const RunConfig& config, const TrainArgs& args,
             std::ostream& err) {
  const auto metric = metricFromName(args.metric);
  if (!metric) {
    throw DataError("unknown metric '" + args.metric +
                    "' (critical, total, fidelity)");
  }
  const auto files = corpusFiles(args.corpusDir);
  if (files.size() < 50) {
    throw DataError("corpus too small: " + std::to_string(files.size()) +
                    " circuits (need >= 50)");
  }

  std::vector<Circuit> circuits(files.size());
  std::vector<FeatureVector> feats(files.size());
  std::vector<TopologyLabels> labels(files.size());
  std::vector<char> usable(files.size(), 1);
  std::mutex errMutex;

  LabelOptions labelOptions;
  labelOptions.compile = config.compileOptions();
  labelOptions.simulateFidelity = *metric == Metric::Fidelity;
  labelOptions.noise.p1 = config.noiseP1;
  labelOptions.shots = config.shots;

  parallelFor(files.size(), config.jobs, [&](std::size_t i) {
    std::ostringstream localErr;
    circuits[i] = loadCircuit(files[i], localErr);
    feats[i] = computeFeatures(circuits[i]);
    LabelOptions opt = labelOptions;
    opt.seed = Rng::deriveSeed(config.seed, i);
    labels[i] = labelCircuit(circuits[i], opt);
    if (*metric == Metric::Fidelity && !labels[i].hasFidelity) {
      usable[i] = 0;
    }
    const auto msg = localErr.str();
    if (!msg.empty()) {
      const std::lock_guard<std::mutex> lock(errMutex);
      err << msg;
    }
  });

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (usable[i]) {
      kept.push_back(i);
    }
  }
  if (kept.empty()) {
    throw DataError("no simulable circuits in corpus (fidelity labels need "
                    "width <= 12)");
  }
  if (*metric == Metric::Fidelity && kept.size() < files.size()) {
    err << "fidelity labels: using " << kept.size() << " of " << files.size()
        << " circuits (width <= 12)\n";
  }

  AdamConfig adamConfig;
  adamConfig.epochs = args.epochs;
  adamConfig.batchSize = args.batchSize;

  // banks accumulate: retraining one metric keeps the others
  ModelBank bank;
  if (fs::exists(args.outBank)) {
    try {
      bank = loadBank(args.outBank);
    } catch (const std::runtime_error& e) {
      throw DataError("existing bank '" + args.outBank +
                      "' cannot be extended: " + e.what());
    }
    bank.entries.erase(*metric);
  }
  std::ostringstream cv;
  cv << "metric,topology,fold,validation_mae\n";
  std::ostringstream importance;
  importance << "metric,topology,rank,feature,loss_delta\n";
  for (std::size_t topo = 0; topo < kAllTopologies.size(); ++topo) {
    std::vector<TrainSample> dataset;
    for (const std::size_t i : kept) {
      dataset.push_back({feats[i], labels[i].value(*metric, topo)});
    }
    const auto trained = trainWithCrossValidation(
        dataset, adamConfig, Rng::deriveSeed(config.seed, 100 + topo));
    for (std::size_t fold = 0; fold < trained.foldValidationMae.size();
         ++fold) {
      cv << args.metric << ',' << latticeKindName(kAllTopologies[topo]) << ','
         << fold << ',' << formatDouble(trained.foldValidationMae[fold])
         << '\n';
    }
    const auto ranking =
        featureImportance(trained.mlp, trained.stats, dataset);
    for (std::size_t rank = 0; rank < ranking.size(); ++rank) {
      importance << args.metric << ','
                 << latticeKindName(kAllTopologies[topo]) << ',' << rank + 1
                 << ',' << ranking[rank].name << ','
                 << formatDouble(ranking[rank].lossDelta) << '\n';
    }
    bank.entries[*metric][kAllTopologies[topo]] = {trained.mlp, trained.stats};
  }

  saveBank(bank, args.outBank);
  const std::string cvPath =
      args.cvReport.empty() ? args.outBank + ".cv.csv" : args.cvReport;
  writeFile(cvPath, cv.str());
  writeFile(args.outBank + ".importance.csv", importance.str());
  emitRunConfig(config, args.outBank + ".runconfig.json");
  err << "trained " << kAllTopologies.size() << " " << args.metric
      << " models on " << kept.size() << " circuits -> " << args.outBank
      << "\n";
  return kExitOk;
}

// ------------------------------------------------------------ predict ----

int cmdPredict(const RunConfig& config, const std::string& bankPath,
               const std::string& metricName_, const std::string& circuitPath,
               std::ostream& out, std::ostream& err) {
  const auto metric = metricFromName(metricName_);
  if (!metric) {
    throw DataError("unknown metric '" + metricName_ + "'");
  }
  ModelBank bank;
  try {
    bank = loadBank(bankPath);
  } catch (const std::runtime_error& e) {
    throw DataError(e.what());
  }
  const auto circuit = loadCircuit(circuitPath, err);
  SelectionResult selection;
  try {
    selection = selectTopology(bank, *metric, computeFeatures(circuit));
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  nlohmann::json j;
  j["config"] = config.toJson();
  j["file"] = circuitPath;
  j["metric"] = metricName_;
  j["chosen"] = latticeKindName(selection.choice);
  j["predictions"] = {{"square", selection.predictions[0]},
                      {"striangle", selection.predictions[1]},
                      {"ttriangle", selection.predictions[2]}};
  out << j.dump(2) << "\n";
  return kExitOk;
}

// -------------------------------------------------------------- bench ----

struct BenchArgs {
  std::string bankPath;
  std::string corpusDir;
  std::string metric = "critical";
  std::string outCsv;
};

int cmdBench(const RunConfig& config, const BenchArgs& args,
             std::ostream& err) {
  const auto metric = metricFromName(args.metric);
  if (!metric) {
    throw DataError("unknown metric '" + args.metric + "'");
  }
  ModelBank bank;
  try {
    bank = loadBank(args.bankPath);
  } catch (const std::runtime_error& e) {
    throw DataError(e.what());
  }
  for (const auto kind : kAllTopologies) {
    if (!bank.has(*metric, kind)) {
      throw DataError("model bank is missing entry " + args.metric + "/" +
                      latticeKindName(kind));
    }
  }
  const auto files = corpusFiles(args.corpusDir);

  struct Row {
    std::string file;
    bool usable = false;
    FeatureVector features;
    std::array<double, 3> values{};
  };
  std::vector<Row> rows(files.size());
  std::mutex errMutex;

  LabelOptions labelOptions;
  labelOptions.compile = config.compileOptions();
  labelOptions.simulateFidelity = *metric == Metric::Fidelity;
  labelOptions.noise.p1 = config.noiseP1;
  labelOptions.shots = config.shots;

  parallelFor(files.size(), config.jobs, [&](std::size_t i) {
    std::ostringstream localErr;
    const auto circuit = loadCircuit(files[i], localErr);
    rows[i].file = fs::path(files[i]).filename().string();
    rows[i].features = computeFeatures(circuit);
    LabelOptions opt = labelOptions;
    opt.seed = Rng::deriveSeed(config.seed, i);
    const auto labels = labelCircuit(circuit, opt);
    if (*metric == Metric::Fidelity && !labels.hasFidelity) {
      localErr << files[i] << ": skipped (width > 12, no fidelity label)\n";
    } else {
      rows[i].usable = true;
      for (std::size_t t = 0; t < kAllTopologies.size(); ++t) {
        rows[i].values[t] = labels.value(*metric, t);
      }
    }
    const auto msg = localErr.str();
    if (!msg.empty()) {
      const std::lock_guard<std::mutex> lock(errMutex);
      err << msg;
    }
  });

  const bool maximize = *metric == Metric::Fidelity;
  std::ostringstream csv;
  csv << "file,square,striangle,ttriangle,oracle,worst,uniform_mean,"
         "chosen_topology,chosen_value,norm_square,norm_striangle,"
         "norm_ttriangle,norm_oracle,norm_chosen\n";
  int used = 0;
  for (const auto& row : rows) {
    if (!row.usable) {
      continue;
    }
    ++used;
    const double oracle =
        maximize ? *std::max_element(row.values.begin(), row.values.end())
                 : *std::min_element(row.values.begin(), row.values.end());
    const double worst =
        maximize ? *std::min_element(row.values.begin(), row.values.end())
                 : *std::max_element(row.values.begin(), row.values.end());
    const double uniformMean =
        (row.values[0] + row.values[1] + row.values[2]) / 3.0;
    const auto selection = selectTopology(bank, *metric, row.features);
    std::size_t chosenIndex = 0;
    for (std::size_t t = 0; t < kAllTopologies.size(); ++t) {
      if (kAllTopologies[t] == selection.choice) {
        chosenIndex = t;
      }
    }
    const double chosen = row.values[chosenIndex];

    // by construction; a breach means the pipeline itself is broken
    const bool envelopeOk =
        maximize ? (worst <= chosen && chosen <= oracle)
                 : (oracle <= chosen && chosen <= worst);
    if (!envelopeOk) {
      throw InvariantError("bench envelope violated for " + row.file);
    }

    const double norm = worst != 0 ? worst : 1.0;
    csv << row.file;
    for (const double v : row.values) {
      csv << ',' << formatDouble(v);
    }
    csv << ',' << formatDouble(oracle) << ',' << formatDouble(worst) << ','
        << formatDouble(uniformMean) << ','
        << latticeKindName(selection.choice) << ',' << formatDouble(chosen);
    for (const double v : row.values) {
      csv << ',' << formatDouble(v / norm);
    }
    csv << ',' << formatDouble(oracle / norm) << ','
        << formatDouble(chosen / norm) << '\n';
  }
  if (used == 0) {
    throw DataError("no usable circuits in corpus");
  }
  writeFile(args.outCsv, csv.str());
  emitRunConfig(config, args.outCsv + ".runconfig.json");
  err << "benchmarked " << used << " circuits -> " << args.outCsv << "\n";
  return kExitOk;
}

// ----------------------------------------------------------- simulate ----

struct SimulateArgs {
  std::string circuitPath;
  bool ideal = false;
  bool errorReport = false;
  std::string out;
};

int cmdSimulate(const RunConfig& config, const SimulateArgs& args,
                std::ostream& out, std::ostream& err) {
  const auto circuit = loadCircuit(args.circuitPath, err);
  if (circuit.numQubits > kMaxSimQubits) {
    throw DataError("circuit too wide to simulate (" +
                    std::to_string(circuit.numQubits) + " > " +
                    std::to_string(kMaxSimQubits) + " qubits)");
  }
  nlohmann::json j;
  j["config"] = config.toJson();
  j["file"] = args.circuitPath;
  try {
    const auto ideal = idealDistribution(circuit);
    if (args.ideal) {
      nlohmann::json dist;
      for (const auto& [bits, p] : ideal) {
        dist[bits] = p;
      }
      j["distribution"] = std::move(dist);
    } else {
      NoiseModel noise{config.noiseP1};
      const auto counts = noisySample(circuit, noise, config.shots, config.seed);
      nlohmann::json countsJson;
      for (const auto& [bits, n] : counts.counts) {
        countsJson[bits] = n;
      }
      j["counts"] = std::move(countsJson);
      j["shots"] = counts.shots;
      if (args.errorReport) {
        const auto report = bitwiseError(ideal, counts);
        j["bitwise_error"] = report.bitwiseError;
        j["tvd"] = report.tvd;
        j["fidelity"] = report.fidelity();
      }
    }
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  const std::string text = j.dump(2) + "\n";
  if (args.out.empty()) {
    out << text;
  } else {
    writeFile(args.out, text);
  }
  return kExitOk;
}

// ----------------------------------------------------------- validate ----

int cmdValidate(const RunConfig& config, const std::string& circuitPath,
                std::ostream& out, std::ostream& err) {
  const auto circuit = loadCircuit(circuitPath, err);
  nlohmann::json report;
  report["config"] = config.toJson();
  report["file"] = circuitPath;
  nlohmann::json violations = nlohmann::json::array();
  const std::vector<LatticeKind> kinds =
      config.topology == "all"
          ? std::vector<LatticeKind>(kAllTopologies.begin(),
                                     kAllTopologies.end())
          : std::vector<LatticeKind>{kindOrThrow(config.topology)};
  for (const auto kind : kinds) {
    CompileOptions options = config.compileOptions();
    options.lattice = config.latticeFor(kind);
    const auto result = compileCircuit(circuit, kind, options);
    const Lattice lattice(result.latticeSpec);
    for (const auto& v : validateRouting(result.routed, lattice, config.radii)) {
      violations.push_back(
          {{"topology", latticeKindName(kind)}, {"rule", "routing"},
           {"detail", v}});
    }
    for (const auto& v : validate(result.sched, result.dag, result.routed,
                                  lattice, config.radii)) {
      violations.push_back({{"topology", latticeKindName(kind)},
                            {"rule", v.rule},
                            {"first", v.first},
                            {"second", v.second},
                            {"detail", v.detail}});
    }
  }
  report["violations"] = violations;
  out << report.dump(2) << "\n";
  return violations.empty() ? kExitOk : kExitInvariant;
}

} // namespace

int runCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  RunConfig config;
  // the config file provides defaults; explicit flags override it
  for (std::size_t i = 0; i + 1 < args.size(); ++i) {
    if (args[i] == "--config") {
      try {
        config.loadFile(args[i + 1]);
      } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return kExitData;
      }
    }
  }

  CLI::App app{"neutral-atom topology selection and layout compiler"};
  app.require_subcommand(1);
  std::string configPath;
  app.add_option("--config", configPath, "JSON config file with defaults");
  app.add_option("--seed", config.seed, "master seed");
  app.add_option("--jobs", config.jobs, "worker threads for corpus commands")
      ->check(CLI::PositiveNumber);
  app.add_option("--topology", config.topology,
                 "square | striangle | ttriangle | all");
  std::string radiiText;
  app.add_option("--radii", radiiText, "r2,r3,rb interaction/blockade radii");
  std::string durationsText;
  app.add_option("--durations", durationsText,
                 "pulses per 1q,2q,3q,swap gate");

  GenArgs gen;
  auto* genCmd = app.add_subcommand("gen", "generate a random circuit corpus");
  genCmd->add_option("--out", gen.outDir, "output directory")->required();
  genCmd->add_option("--count", gen.count, "number of circuits")
      ->required()
      ->check(CLI::PositiveNumber);
  genCmd->add_option("--width-min", gen.widthMin, "minimum width");
  genCmd->add_option("--width-max", gen.widthMax, "maximum width");
  genCmd->add_option("--instr-min", gen.instrMin, "minimum instruction count");
  genCmd->add_option("--instr-max", gen.instrMax, "maximum instruction count");

  std::vector<std::string> featureFiles;
  std::string featuresOut;
  auto* featuresCmd =
      app.add_subcommand("features", "emit the 14 descriptors as CSV");
  featuresCmd->add_option("circuits", featureFiles, "circuit files")
      ->required();
  featuresCmd->add_option("--out", featuresOut, "CSV path (default stdout)");

  CompileArgs compileArgs;
  auto* compileCmd = app.add_subcommand(
      "compile", "map, route and schedule a circuit on a topology");
  compileCmd->add_option("circuit", compileArgs.circuitPath, "circuit file")
      ->required();
  compileCmd->add_option("--rows", compileArgs.rows, "lattice rows override");
  compileCmd->add_option("--cols", compileArgs.cols, "lattice cols override");
  compileCmd->add_option("--out", compileArgs.out, "metrics JSON path");
  compileCmd->add_option("--dump-schedule", compileArgs.dumpSchedule,
                         "schedule JSON path prefix");
  compileCmd->add_option("--dump-timeline", compileArgs.dumpTimeline,
                         "timeline CSV path prefix");
  compileCmd->add_option("--dump-routed", compileArgs.dumpRouted,
                         "routed circuit JSON path prefix");
  compileCmd->add_flag("--check", compileArgs.check,
                       "run validators on the result");

  TrainArgs train;
  auto* trainCmd =
      app.add_subcommand("train", "train per-topology metric regressors");
  trainCmd->add_option("--corpus", train.corpusDir, "circuit directory")
      ->required();
  trainCmd->add_option("--metric", train.metric,
                       "critical | total | fidelity");
  trainCmd->add_option("--out", train.outBank, "model bank path")->required();
  trainCmd->add_option("--cv-report", train.cvReport,
                       "cross-validation CSV path");
  trainCmd->add_option("--epochs", train.epochs, "training epochs");
  trainCmd->add_option("--batch", train.batchSize,
                       "minibatch size (0 = full batch)");

  std::string predictBank;
  std::string predictMetric = "critical";
  std::string predictCircuit;
  auto* predictCmd =
      app.add_subcommand("predict", "select the best topology for a circuit");
  predictCmd->add_option("--bank", predictBank, "model bank path")->required();
  predictCmd->add_option("--metric", predictMetric,
                         "critical | total | fidelity");
  predictCmd->add_option("circuit", predictCircuit, "circuit file")
      ->required();

  BenchArgs bench;
  auto* benchCmd = app.add_subcommand(
      "bench", "oracle/worst/predictor comparison table over a corpus");
  benchCmd->add_option("--bank", bench.bankPath, "model bank path")
      ->required();
  benchCmd->add_option("--corpus", bench.corpusDir, "circuit directory")
      ->required();
  benchCmd->add_option("--metric", bench.metric, "critical | total | fidelity");
  benchCmd->add_option("--out", bench.outCsv, "output CSV path")->required();

  SimulateArgs simulate;
  auto* simulateCmd =
      app.add_subcommand("simulate", "state-vector simulation of a circuit");
  simulateCmd->add_option("circuit", simulate.circuitPath, "circuit file")
      ->required();
  simulateCmd->add_flag("--ideal", simulate.ideal,
                        "exact distribution instead of sampling");
  simulateCmd->add_flag("--error", simulate.errorReport,
                        "report bitwise error vs the ideal distribution");
  simulateCmd->add_option("--out", simulate.out, "JSON path (default stdout)");

  std::string validateCircuit;
  auto* validateCmd = app.add_subcommand(
      "validate", "compile a circuit and check every schedule invariant");
  validateCmd->add_option("circuit", validateCircuit, "circuit file")
      ->required();

  // global options may be given after the subcommand name
  for (auto* sub : app.get_subcommands({})) {
    sub->fallthrough();
  }

  std::vector<std::string> argv(args);
  try {
    std::vector<const char*> cargs;
    cargs.push_back("natopo");
    for (const auto& a : argv) {
      cargs.push_back(a.c_str());
    }
    app.parse(static_cast<int>(cargs.size()), cargs.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (!radiiText.empty()) {
      const auto v = parseNumberList(radiiText, 3, "--radii");
      config.radii = RadiusConfig{v[0], v[1], v[2]};
    }
    if (!durationsText.empty()) {
      const auto v = parseNumberList(durationsText, 4, "--durations");
      config.durations = GateDurations{static_cast<int>(v[0]),
                                       static_cast<int>(v[1]),
                                       static_cast<int>(v[2]),
                                       static_cast<int>(v[3])};
    }

    if (genCmd->parsed()) {
      return cmdGen(config, gen, err);
    }
    if (featuresCmd->parsed()) {
      return cmdFeatures(config, featureFiles, featuresOut, out, err);
    }
    if (compileCmd->parsed()) {
      return cmdCompile(config, compileArgs, out, err);
    }
    if (trainCmd->parsed()) {
      return cmdTrain(config, train, err);
    }
    if (predictCmd->parsed()) {
      return cmdPredict(config, predictBank, predictMetric, predictCircuit,
                        out, err);
    }
    if (benchCmd->parsed()) {
      return cmdBench(config, bench, err);
    }
    if (simulateCmd->parsed()) {
      return cmdSimulate(config, simulate, out, err);
    }
    if (validateCmd->parsed()) {
      return cmdValidate(config, validateCircuit, out, err);
    }
    err << "error: no subcommand\n";
    return kExitUsage;
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InvariantError& e) {
    err << "invariant breach: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const std::invalid_argument& e) {
    // precondition violations on user-supplied data
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::logic_error& e) {
    err << "invariant breach: " << e.what() << "\n";
    return kExitInvariant;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

} // namespace natopo
