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

#include "natopo/topology.hpp"

#include <cmath>

using namespace natopo;

TEST_CASE("square lattice has unit nearest-neighbor spacing") {
  const Lattice lattice(LatticeSpec::make(LatticeKind::Square, 3, 3));
  REQUIRE(lattice.size() == 9);
  CHECK(distance(lattice[0], lattice[1]) == doctest::Approx(1.0));
  CHECK(distance(lattice[0], lattice[3]) == doctest::Approx(1.0));
  CHECK(distance(lattice[4], lattice[8]) == doctest::Approx(std::sqrt(2.0)));
  CHECK(lattice[4].x == doctest::Approx(1.0));
  CHECK(lattice[4].y == doctest::Approx(1.0));
  CHECK(lattice[4].z == 0.0);
}

TEST_CASE("striangle adjacent-row spacing is 1") {
  const Lattice lattice(LatticeSpec::make(LatticeKind::STriangle, 2, 2));
  // (row 0, col 0) to (row 1, col 0): offset 0.5, dy sqrt(3)/2
  CHECK(distance(lattice[0], lattice[2]) == doctest::Approx(1.0));
  CHECK(lattice[2].x == doctest::Approx(0.5));
  CHECK(lattice[2].y == doctest::Approx(std::sqrt(3.0) / 2.0));
}

TEST_CASE("ttriangle adjacent-row spacing is sqrt(1/2)") {
  const Lattice lattice(LatticeSpec::make(LatticeKind::TTriangle, 2, 2));
  CHECK(distance(lattice[0], lattice[2]) ==
        doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));
}

TEST_CASE("distances are symmetric and satisfy the triangle inequality") {
  const Lattice lattice(LatticeSpec::make(LatticeKind::TTriangle, 4, 5));
  for (std::size_t a = 0; a < lattice.size(); ++a) {
    for (std::size_t b = a; b < lattice.size(); ++b) {
      CHECK(distance(lattice[a], lattice[b]) ==
            distance(lattice[b], lattice[a]));
      for (std::size_t c = 0; c < lattice.size(); ++c) {
        CHECK(distance(lattice[a], lattice[b]) <=
              distance(lattice[a], lattice[c]) +
                  distance(lattice[c], lattice[b]) + 1e-12);
      }
    }
  }
}

TEST_CASE("center of an empty 3x3 square is the middle site") {
  const Lattice lattice(LatticeSpec::make(LatticeKind::Square, 3, 3));
  CHECK(centerSite(lattice, {}).index == 4);
}

TEST_CASE("2x2 center ties resolve to the lowest site index") {
  const Lattice lattice(LatticeSpec::make(LatticeKind::Square, 2, 2));
  CHECK(centerSite(lattice, {}).index == 0);
}

TEST_CASE("occupied sites are excluded from center selection") {
  const Lattice lattice(LatticeSpec::make(LatticeKind::Square, 3, 3));
  CHECK(centerSite(lattice, {4}).index == 1);
  std::set<int> all;
  for (const auto& site : lattice.sites) {
    all.insert(site.index);
  }
  CHECK_THROWS_AS(centerSite(lattice, all), std::invalid_argument);
}

TEST_CASE("center of a 4x5 striangle matches the brute-force objective scan") {
  const Lattice lattice(LatticeSpec::make(LatticeKind::STriangle, 4, 5));
  // independent evaluation of the sum-of-squared-distances objective
  int expected = -1;
  double best = 0;
  for (const auto& candidate : lattice.sites) {
    double objective = 0;
    for (const auto& p : lattice.sites) {
      const double dx = candidate.x - p.x;
      const double dy = candidate.y - p.y;
      objective += dx * dx + dy * dy;
    }
    if (expected < 0 || objective < best - 1e-9) {
      expected = candidate.index;
      best = objective;
    }
  }
  CHECK(centerSite(lattice, {}).index == expected);
}

TEST_CASE("min lattice is the smallest near-square grid") {
  const auto nine = minLatticeFor(9, LatticeKind::Square);
  CHECK(nine.rows == 3);
  CHECK(nine.cols == 3);

  const auto ten = minLatticeFor(10, LatticeKind::Square);
  CHECK(ten.rows == 3);
  CHECK(ten.cols == 4);

  const auto seventy = minLatticeFor(70, LatticeKind::STriangle);
  CHECK(seventy.rows == 8);
  CHECK(seventy.cols == 9);
  CHECK(seventy.dy == doctest::Approx(std::sqrt(3.0) / 2.0));

  for (int width = 1; width <= 80; ++width) {
    const auto spec = minLatticeFor(width, LatticeKind::Square);
    CHECK(spec.rows * spec.cols >= width);
    CHECK(spec.cols - spec.rows <= 1);
    CHECK(spec.cols >= spec.rows);
    // smallest such product: one fewer row never covers the width
    if (spec.rows > 1) {
      CHECK((spec.rows - 1) * spec.cols < width);
    }
  }
}

TEST_CASE("default radii separate the topologies like the two-CX scenario") {
  const RadiusConfig radii;
  // two CX gates on horizontally adjacent pairs in adjacent rows; operand
  // sites (row, col): a = (0,0)-(0,1), b = (1,0)-(1,1)
  const auto minCrossDistance = [&](LatticeKind kind) {
    const Lattice lattice(LatticeSpec::make(kind, 2, 2));
    double best = 1e9;
    for (const int sa : {0, 1}) {
      for (const int sb : {2, 3}) {
        best = std::min(best, distance(lattice[sa], lattice[sb]));
      }
    }
    // both gates must themselves be within the interaction radius
    CHECK(distance(lattice[0], lattice[1]) <= radii.r2);
    CHECK(distance(lattice[2], lattice[3]) <= radii.r2);
    return best;
  };
  // disjoint blockade disks on square and striangle, overlapping on ttriangle
  CHECK(minCrossDistance(LatticeKind::Square) >= radii.rb);
  CHECK(minCrossDistance(LatticeKind::STriangle) >= radii.rb);
  CHECK(minCrossDistance(LatticeKind::TTriangle) < radii.rb);
}

TEST_CASE("lattice build is total and deterministic for valid specs") {
  const auto spec = LatticeSpec::make(LatticeKind::TTriangle, 5, 7);
  const auto a = buildLattice(spec);
  const auto b = buildLattice(spec);
  REQUIRE(a.size() == 35);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].index == static_cast<int>(i));
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].y == b[i].y);
  }
}

TEST_CASE("layered custom lattices populate the z axis") {
  LatticeSpec spec = LatticeSpec::make(LatticeKind::Custom, 2, 2);
  spec.layers = 2;
  spec.dz = 0.8;
  const auto sites = buildLattice(spec);
  REQUIRE(sites.size() == 8);
  CHECK(sites[0].z == 0.0);
  CHECK(sites[4].z == doctest::Approx(0.8));
  CHECK(sites[4].x == sites[0].x);
}

TEST_CASE("invalid specs are rejected") {
  LatticeSpec bad = LatticeSpec::make(LatticeKind::Square, 0, 3);
  bad.rows = 0;
  CHECK_THROWS_AS(buildLattice(bad), std::invalid_argument);
  bad = LatticeSpec::make(LatticeKind::Square, 2, 2);
  bad.rowOffset = 1.5;
  CHECK_THROWS_AS(buildLattice(bad), std::invalid_argument);
  CHECK_THROWS_AS(minLatticeFor(0, LatticeKind::Square), std::invalid_argument);
}

TEST_CASE("lattice kind names round-trip") {
  for (const auto kind : {LatticeKind::Square, LatticeKind::STriangle,
                          LatticeKind::TTriangle, LatticeKind::Custom}) {
    CHECK(latticeKindFromName(latticeKindName(kind)) == kind);
  }
  CHECK(latticeKindFromName("S-Triangle") == LatticeKind::STriangle);
  CHECK(latticeKindFromName("t_triangle") == LatticeKind::TTriangle);
  CHECK(!latticeKindFromName("hexagon"));
}
