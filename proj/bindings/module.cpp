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

#include "natopo/pipeline.hpp"
#include "natopo/qasm.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace natopo;

namespace {

LatticeKind kindFromString(const std::string& name) {
  const auto kind = latticeKindFromName(name);
  if (!kind) {
    throw py::value_error("unknown topology '" + name + "'");
  }
  return *kind;
}

Metric metricFromString(const std::string& name) {
  const auto metric = metricFromName(name);
  if (!metric) {
    throw py::value_error("unknown metric '" + name + "'");
  }
  return *metric;
}

} // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "neutral-atom topology selection and layout compiler";

  py::register_exception<ParseError>(m, "CircuitParseError");
  py::register_exception<RoutingError>(m, "RoutingError");

  py::class_<Instruction>(m, "Instruction")
      .def_readonly("id", &Instruction::id)
      .def_property_readonly(
          "gate", [](const Instruction& i) { return gateName(i.kind); })
      .def_readonly("qubits", &Instruction::qubits)
      .def_readonly("params", &Instruction::params)
      .def("__repr__", [](const Instruction& i) {
        std::ostringstream out;
        out << "Instruction(" << i.id << ", " << gateName(i.kind) << ", [";
        for (std::size_t q = 0; q < i.qubits.size(); ++q) {
          out << (q ? ", " : "") << i.qubits[q];
        }
        out << "])";
        return out.str();
      });

  py::class_<Circuit>(m, "Circuit")
      .def_readonly("num_qubits", &Circuit::numQubits)
      .def_readonly("instructions", &Circuit::instructions)
      .def("to_json", &serializeJson)
      .def("__len__",
           [](const Circuit& c) { return c.instructions.size(); });

  m.def("parse_json", &parseJson, py::arg("text"));
  m.def(
      "parse_qasm",
      [](const std::string& text) {
        const auto result = parseQasmSubset(text);
        return py::make_tuple(result.circuit, result.skippedStatements);
      },
      py::arg("text"), "returns (circuit, skipped_statement_count)");
  m.def(
      "generate_random_circuit",
      [](int width, int minInstructions, double interConnectivity,
         double oneQubitRate, double threeQubitRate, std::uint64_t seed) {
        GenParams params{width,        minInstructions, interConnectivity,
                         oneQubitRate, threeQubitRate,  seed};
        return generateRandomCircuit(params);
      },
      py::arg("width"), py::arg("min_instructions") = 20,
      py::arg("inter_connectivity") = 0.5, py::arg("one_qubit_rate") = 0.3,
      py::arg("three_qubit_rate") = 0.1, py::arg("seed") = 0);
  m.def("logical_depth", &logicalDepth, py::arg("circuit"));
  m.def(
      "interaction_weights",
      [](const Circuit& circuit) {
        std::map<std::pair<int, int>, int> out;
        for (const auto& [pair, w] : interactionGraph(circuit).weight) {
          out[pair] = w;
        }
        return out;
      },
      py::arg("circuit"), "pair (u, v) with u < v -> co-occurrence count");

  m.def(
      "compute_features",
      [](const Circuit& circuit) {
        const auto f = computeFeatures(circuit).toArray();
        py::dict out;
        for (int i = 0; i < kNumFeatures; ++i) {
          out[featureNames()[i].c_str()] = f[i];
        }
        return out;
      },
      py::arg("circuit"));
  m.def(
      "pagerank",
      [](const Circuit& circuit, double eps, int maxIters, double damping) {
        const auto pr =
            pagerank(interactionGraph(circuit), {eps, maxIters, damping});
        return py::make_tuple(pr.values, pr.converged);
      },
      py::arg("circuit"), py::arg("eps") = 1e-8, py::arg("max_iters") = 1000,
      py::arg("damping") = 1.0);

  py::class_<ExecutionMetrics>(m, "ExecutionMetrics")
      .def_readonly("critical_pulses", &ExecutionMetrics::criticalPulseCount)
      .def_readonly("total_pulses", &ExecutionMetrics::totalPulseCount)
      .def_readonly("swaps", &ExecutionMetrics::swapCount)
      .def("__repr__", [](const ExecutionMetrics& metrics) {
        std::ostringstream out;
        out << "ExecutionMetrics(critical=" << metrics.criticalPulseCount
            << ", total=" << metrics.totalPulseCount
            << ", swaps=" << metrics.swapCount << ")";
        return out.str();
      });

  m.def(
      "compile_circuit",
      [](const Circuit& circuit, const std::string& topology, double r2,
         double r3, double rb) {
        CompileOptions options;
        options.radii = RadiusConfig{r2, r3, rb};
        const auto result =
            compileCircuit(circuit, kindFromString(topology), options);
        py::dict out;
        out["topology"] = topology;
        out["critical_pulses"] = result.metrics.criticalPulseCount;
        out["total_pulses"] = result.metrics.totalPulseCount;
        out["swaps"] = result.metrics.swapCount;
        out["makespan"] = result.sched.makespan;
        out["rows"] = result.latticeSpec.rows;
        out["cols"] = result.latticeSpec.cols;
        return out;
      },
      py::arg("circuit"), py::arg("topology") = "square",
      py::arg("r2") = RadiusConfig{}.r2, py::arg("r3") = RadiusConfig{}.r3,
      py::arg("rb") = RadiusConfig{}.rb);

  m.def(
      "ideal_distribution",
      [](const Circuit& circuit) { return idealDistribution(circuit); },
      py::arg("circuit"));
  m.def(
      "noisy_sample",
      [](const Circuit& circuit, double p1, long long shots,
         std::uint64_t seed) {
        return noisySample(circuit, NoiseModel{p1}, shots, seed).counts;
      },
      py::arg("circuit"), py::arg("p1") = 0.01, py::arg("shots") = 5000,
      py::arg("seed") = 0);
  m.def(
      "bitwise_error",
      [](const std::map<std::string, double>& ideal,
         const std::map<std::string, long long>& counts) {
        ShotCounts sc;
        sc.counts = counts;
        for (const auto& [bits, n] : counts) {
          sc.shots += n;
        }
        const auto report = bitwiseError(ideal, sc);
        return py::make_tuple(report.bitwiseError, report.tvd);
      },
      py::arg("ideal"), py::arg("counts"),
      "returns (hamming_error, total_variation_distance)");

  m.def(
      "select_topology",
      [](const std::string& bankPath, const std::string& metric,
         const Circuit& circuit) {
        const auto bank = loadBank(bankPath);
        const auto selection = selectTopology(bank, metricFromString(metric),
                                              computeFeatures(circuit));
        py::dict out;
        out["chosen"] = latticeKindName(selection.choice);
        out["square"] = selection.predictions[0];
        out["striangle"] = selection.predictions[1];
        out["ttriangle"] = selection.predictions[2];
        return out;
      },
      py::arg("bank_path"), py::arg("metric"), py::arg("circuit"));

  m.attr("__version__") = "0.1.0";
}
