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

#include "natopo/mapper.hpp"
#include "natopo/rng.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

using namespace natopo;

namespace {

Circuit makeCircuit(int numQubits,
                    const std::vector<std::pair<GateKind, std::vector<int>>>&
                        gates) {
  Circuit circuit;
  circuit.numQubits = numQubits;
  int id = 0;
  for (const auto& [kind, qubits] : gates) {
    circuit.instructions.push_back(Instruction{id++, kind, qubits, {}});
  }
  return circuit;
}

// BFS over swap sequences: states are (site of u, site of v); each move
// swaps u or v to any site within r2 of it; goal dist(u, v) <= r2
int bfsSwapOracle(const Lattice& lattice, int startU, int startV, double r2) {
  const int n = static_cast<int>(lattice.size());
  const auto goal = [&](int a, int b) {
    return distance(lattice[a], lattice[b]) <= r2;
  };
  if (goal(startU, startV)) {
    return 0;
  }
  std::map<std::pair<int, int>, int> dist;
  std::deque<std::pair<int, int>> queue;
  dist[{startU, startV}] = 0;
  queue.push_back({startU, startV});
  while (!queue.empty()) {
    const auto [u, v] = queue.front();
    queue.pop_front();
    const int d = dist[{u, v}];
    for (int h = 0; h < n; ++h) {
      if (h == u || h == v) {
        continue;
      }
      // move u
      if (distance(lattice[u], lattice[h]) <= r2) {
        if (goal(h, v)) {
          return d + 1;
        }
        if (dist.emplace(std::make_pair(h, v), d + 1).second) {
          queue.push_back({h, v});
        }
      }
      // move v
      if (distance(lattice[v], lattice[h]) <= r2) {
        if (goal(u, h)) {
          return d + 1;
        }
        if (dist.emplace(std::make_pair(u, h), d + 1).second) {
          queue.push_back({u, h});
        }
      }
    }
  }
  return -1;
}

} // namespace

TEST_CASE("a single qubit lands on the lattice center") {
  const Lattice lattice(LatticeSpec::make(LatticeKind::Square, 3, 3));
  const auto circuit = makeCircuit(1, {{GateKind::H, {0}}});
  const auto mapping =
      mapCircuit(circuit, lattice, interactionGraph(circuit));
  CHECK(mapping.siteOf(0) == 4);
}

TEST_CASE("a CX pair takes the center and its first free neighbor") {
  const Lattice lattice(LatticeSpec::make(LatticeKind::Square, 3, 3));
  const auto circuit = makeCircuit(2, {{GateKind::CX, {0, 1}}});
  const auto mapping =
      mapCircuit(circuit, lattice, interactionGraph(circuit));
  CHECK(mapping.siteOf(0) == 4);
  CHECK(mapping.siteOf(1) == 1); // distance-1 neighbors are 1,3,5,7
}

TEST_CASE("star circuit placement is optimal for the inverse-distance objective") {
  const Lattice lattice(LatticeSpec::make(LatticeKind::Square, 3, 3));
  const auto circuit = makeCircuit(5, {{GateKind::CX, {0, 1}},
                                       {GateKind::CX, {0, 2}},
                                       {GateKind::CX, {0, 3}},
                                       {GateKind::CX, {0, 4}}});
  const auto graph = interactionGraph(circuit);
  const auto mapping = mapCircuit(circuit, lattice, graph);

  CHECK(mapping.siteOf(0) == 4);
  const std::set<int> leafSites{mapping.siteOf(1), mapping.siteOf(2),
                                mapping.siteOf(3), mapping.siteOf(4)};
  CHECK(leafSites == std::set<int>{1, 3, 5, 7});

  // exhaustive placement enumeration: sum over edges of w / distance
  const auto objective = [&](const std::array<int, 5>& sites) {
    double total = 0;
    for (int leaf = 1; leaf < 5; ++leaf) {
      total += 1.0 / distance(lattice[sites[0]], lattice[sites[leaf]]);
    }
    return total;
  };
  std::array<int, 5> chosen{mapping.siteOf(0), mapping.siteOf(1),
                            mapping.siteOf(2), mapping.siteOf(3),
                            mapping.siteOf(4)};
  const double achieved = objective(chosen);
  double best = 0;
  std::array<int, 5> sites{};
  for (sites[0] = 0; sites[0] < 9; ++sites[0]) {
    for (sites[1] = 0; sites[1] < 9; ++sites[1]) {
      for (sites[2] = 0; sites[2] < 9; ++sites[2]) {
        for (sites[3] = 0; sites[3] < 9; ++sites[3]) {
          for (sites[4] = 0; sites[4] < 9; ++sites[4]) {
            std::set<int> distinct(sites.begin(), sites.end());
            if (distinct.size() == 5) {
              best = std::max(best, objective(sites));
            }
          }
        }
      }
    }
  }
  CHECK(achieved == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("placeQubit reduces to the planar rule on single-layer lattices") {
  const Lattice lattice(LatticeSpec::make(LatticeKind::Square, 2, 2));
  InteractionGraph graph;
  graph.numQubits = 2;
  graph.weight[{0, 1}] = 1;
  Mapping placed(2);
  placed.place(0, 3);
  // single placed neighbor: chosen site is the closest free one
  CHECK(placeQubit(1, placed, graph, lattice) == 1);
}

TEST_CASE("placeQubit maximizes the 3-D objective on layered lattices") {
  LatticeSpec spec = LatticeSpec::make(LatticeKind::Custom, 1, 2);
  spec.layers = 2;
  spec.dz = 0.25;
  const Lattice lattice(spec); // sites 0,1 at z=0 and 2,3 at z=0.25
  InteractionGraph graph;
  graph.numQubits = 2;
  graph.weight[{0, 1}] = 1;
  Mapping placed(2);
  placed.place(0, 0);
  // site 2 sits directly above site 0 at distance 0.25
  CHECK(placeQubit(1, placed, graph, lattice) == 2);

  // brute-force argmax over a random layered instance
  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    LatticeSpec s = LatticeSpec::make(LatticeKind::Custom, 3, 3);
    s.layers = 2;
    s.dz = rng.uniform(0.3, 1.5);
    const Lattice big(s);
    InteractionGraph g;
    g.numQubits = 3;
    g.weight[{0, 2}] = 1 + static_cast<int>(rng.nextIndex(4));
    g.weight[{1, 2}] = 1 + static_cast<int>(rng.nextIndex(4));
    Mapping m(3);
    m.place(0, static_cast<int>(rng.nextIndex(big.size())));
    int second = static_cast<int>(rng.nextIndex(big.size()));
    while (m.isOccupied(second)) {
      second = static_cast<int>(rng.nextIndex(big.size()));
    }
    m.place(1, second);

    int expected = -1;
    double best = -1;
    for (const auto& site : big.sites) {
      if (m.isOccupied(site.index)) {
        continue;
      }
      const double obj =
          g.w(2, 0) / distance(site, big[m.siteOf(0)]) +
          g.w(2, 1) / distance(site, big[m.siteOf(1)]);
      if (obj > best + 1e-12) {
        best = obj;
        expected = site.index;
      }
    }
    CHECK(placeQubit(2, m, g, big) == expected);
  }
}

TEST_CASE("mapper rejects lattices smaller than the qubit count") {
  const Lattice lattice(LatticeSpec::make(LatticeKind::Square, 2, 2));
  const auto circuit = makeCircuit(5, {{GateKind::H, {4}}});
  CHECK_THROWS_AS(mapCircuit(circuit, lattice, interactionGraph(circuit)),
                  std::invalid_argument);
}

TEST_CASE("logical swap gates are rejected by mapping and routing") {
  const Lattice lattice(LatticeSpec::make(LatticeKind::Square, 2, 2));
  const auto circuit = makeCircuit(2, {{GateKind::Swap, {0, 1}}});
  CHECK_THROWS_AS(mapCircuit(circuit, lattice, interactionGraph(circuit)),
                  std::invalid_argument);
  Mapping mapping(2);
  mapping.place(0, 0);
  mapping.place(1, 1);
  CHECK_THROWS_AS(routeSwaps(circuit, mapping, lattice, {}),
                  std::invalid_argument);
}

TEST_CASE("routing leaves radius-feasible gates untouched") {
  const Lattice lattice(LatticeSpec::make(LatticeKind::Square, 3, 3));
  const auto circuit = makeCircuit(2, {{GateKind::CX, {0, 1}}});
  Mapping mapping(2);
  mapping.place(0, 4);
  mapping.place(1, 5);
  const auto routed = routeSwaps(circuit, mapping, lattice, {});
  CHECK(routed.swapCount == 0);
  CHECK(routed.instructions.size() == 1);
  CHECK(routed.finalMapping == mapping);
}

TEST_CASE("a 1x5 row walk inserts exactly three swaps") {
  const Lattice lattice(LatticeSpec::make(LatticeKind::Square, 1, 5));
  const auto circuit = makeCircuit(2, {{GateKind::CX, {0, 1}}});
  Mapping mapping(2);
  mapping.place(0, 0);
  mapping.place(1, 4);
  const auto routed = routeSwaps(circuit, mapping, lattice, {});
  CHECK(routed.swapCount == 3);
  REQUIRE(routed.instructions.size() == 4);
  // u steps right one column at a time
  CHECK(routed.instructions[0].sites == std::vector<int>{0, 1});
  CHECK(routed.instructions[1].sites == std::vector<int>{1, 2});
  CHECK(routed.instructions[2].sites == std::vector<int>{2, 3});
  // final gate executes at distance 1
  CHECK(routed.instructions[3].kind == GateKind::CX);
  CHECK(routed.instructions[3].sites == std::vector<int>{3, 4});
  CHECK(routed.finalMapping.siteOf(0) == 3);
  CHECK(validateRouting(routed, lattice, {}).empty());
}

TEST_CASE("swap provenance records the served gate and prior swaps") {
  const Lattice lattice(LatticeSpec::make(LatticeKind::Square, 1, 5));
  const auto circuit = makeCircuit(2, {{GateKind::CX, {0, 1}}});
  Mapping mapping(2);
  mapping.place(0, 0);
  mapping.place(1, 4);
  const auto routed = routeSwaps(circuit, mapping, lattice, {});
  CHECK(routed.instructions[0].servesId == 0);
  CHECK(routed.instructions[0].priorSwaps.empty());
  CHECK(routed.instructions[1].priorSwaps == std::vector<int>{0});
  CHECK(routed.instructions[2].priorSwaps == std::vector<int>{0, 1});
  CHECK(routed.instructions[3].sourceId == 0);
  // spectator partners get atom ids beyond the logical range
  for (int s = 0; s < 3; ++s) {
    CHECK(routed.instructions[s].atoms[0] == 0);
    CHECK(routed.instructions[s].atoms[1] >= routed.numQubits);
  }
}

TEST_CASE("corner-to-corner routing matches the BFS oracle bound") {
  const Lattice lattice(LatticeSpec::make(LatticeKind::Square, 3, 3));
  const auto circuit = makeCircuit(2, {{GateKind::CX, {0, 1}}});
  Mapping mapping(2);
  mapping.place(0, 0);
  mapping.place(1, 8);
  const RadiusConfig radii;
  const auto routed = routeSwaps(circuit, mapping, lattice, radii);
  const int optimal = bfsSwapOracle(lattice, 0, 8, radii.r2);
  CHECK(optimal == 3);
  CHECK(routed.swapCount >= optimal);
  CHECK(routed.swapCount <= optimal + 2);
  CHECK(validateRouting(routed, lattice, radii).empty());
}

TEST_CASE("three-qubit gates converge within r3 via centroid steps") {
  const Lattice lattice(LatticeSpec::make(LatticeKind::Square, 4, 4));
  const auto circuit = makeCircuit(3, {{GateKind::CCX, {0, 1, 2}}});
  Mapping mapping(3);
  mapping.place(0, 0);   // (0,0)
  mapping.place(1, 3);   // (3,0)
  mapping.place(2, 15);  // (3,3)
  const RadiusConfig radii;
  const auto routed = routeSwaps(circuit, mapping, lattice, radii);
  CHECK(routed.swapCount > 0);
  CHECK(validateRouting(routed, lattice, radii).empty());
  const auto& gate = routed.instructions.back();
  CHECK(gate.kind == GateKind::CCX);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = i + 1; j < 3; ++j) {
      CHECK(distance(lattice[gate.sites[i]], lattice[gate.sites[j]]) <=
            radii.r3);
    }
  }
}

TEST_CASE("routing preserves injectivity and determinism on seeded circuits") {
  const RadiusConfig radii;
  for (const auto kind : {LatticeKind::Square, LatticeKind::STriangle,
                          LatticeKind::TTriangle}) {
    for (const std::uint64_t seed : {61, 62}) {
      const auto circuit =
          generateRandomCircuit({10, 30, 0.6, 0.3, 0.15, seed});
      const Lattice lattice(minLatticeFor(circuit.numQubits, kind));
      const auto graph = interactionGraph(circuit);
      const auto mapping = mapCircuit(circuit, lattice, graph);

      std::set<int> sites;
      for (int q = 0; q < circuit.numQubits; ++q) {
        sites.insert(mapping.siteOf(q));
      }
      CHECK(sites.size() == static_cast<std::size_t>(circuit.numQubits));

      const auto routed = routeSwaps(circuit, mapping, lattice, radii);
      CHECK(validateRouting(routed, lattice, radii).empty());

      // determinism
      const auto mapping2 = mapCircuit(circuit, lattice, graph);
      CHECK(mapping2 == mapping);
      const auto routed2 = routeSwaps(circuit, mapping2, lattice, radii);
      CHECK(routed2.swapCount == routed.swapCount);
      REQUIRE(routed2.instructions.size() == routed.instructions.size());
      for (std::size_t i = 0; i < routed.instructions.size(); ++i) {
        CHECK(routed2.instructions[i].sites == routed.instructions[i].sites);
        CHECK(routed2.instructions[i].atoms == routed.instructions[i].atoms);
      }
    }
  }
}

TEST_CASE("weighted placement beats random placement on most seeded circuits") {
  const RadiusConfig radii;
  int wins = 0;
  int total = 0;
  Rng rng(8080);
  for (const auto kind : {LatticeKind::Square, LatticeKind::STriangle,
                          LatticeKind::TTriangle}) {
    for (int trial = 0; trial < 100; ++trial) {
      const int width = 10 + static_cast<int>(rng.nextIndex(16));
      const auto circuit = generateRandomCircuit(
          {width, 30, 0.7, 0.25, 0.1,
           static_cast<std::uint64_t>(9000 + trial * 3 + int(kind))});
      const Lattice lattice(minLatticeFor(circuit.numQubits, kind));
      const auto graph = interactionGraph(circuit);

      const auto heuristic =
          routeSwaps(circuit, mapCircuit(circuit, lattice, graph), lattice,
                     radii);

      // random placement with the same seeded stream
      Mapping random(circuit.numQubits);
      std::vector<int> sites(lattice.size());
      for (std::size_t i = 0; i < sites.size(); ++i) {
        sites[i] = static_cast<int>(i);
      }
      rng.shuffle(sites);
      for (int q = 0; q < circuit.numQubits; ++q) {
        random.place(q, sites[q]);
      }
      const auto randomRouted = routeSwaps(circuit, random, lattice, radii);

      wins += heuristic.swapCount <= randomRouted.swapCount;
      ++total;
    }
  }
  // the placement heuristic exists to cut swaps; require a 70% win rate
  CHECK(total == 300);
  CHECK(wins >= (total * 7) / 10);
}
