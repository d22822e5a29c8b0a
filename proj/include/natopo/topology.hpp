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

#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace natopo {

/// Atom arrangement families. Square is the plain grid; STriangle offsets
/// odd rows by half a pitch with row spacing sqrt(3)/2 (equilateral);
/// TTriangle uses the same offset with row spacing 1/2 (tight diagonals).
enum class LatticeKind { Square, STriangle, TTriangle, Custom };

std::string latticeKindName(LatticeKind kind);
std::optional<LatticeKind> latticeKindFromName(const std::string& name);

struct LatticeSpec {
  LatticeKind kind = LatticeKind::Square;
  int rows = 1;
  int cols = 1;
  int layers = 1;        ///< z-extent; default lattices are planar
  double dx = 1.0;       ///< horizontal pitch
  double dy = 1.0;       ///< row pitch
  double dz = 1.0;       ///< layer pitch (layers > 1 only)
  double rowOffset = 0.0; ///< x shift applied to odd rows

  /// Canonical geometry for a named family at the given grid size.
  static LatticeSpec make(LatticeKind kind, int rows, int cols);
};

struct Site {
  int index = 0;
  double x = 0;
  double y = 0;
  double z = 0;
};

inline double distance(const Site& a, const Site& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

inline double squaredDistance(const Site& a, const Site& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

/// Interaction succeeds at distance <= r; blockade conflicts at strict
/// distance < rb. Defaults are in units of dx and satisfy rb < nearest
/// spacing on Square/STriangle but not TTriangle.
struct RadiusConfig {
  double r2 = 1.05; ///< 2-qubit Rydberg interaction radius
  double r3 = 1.55; ///< 3-qubit interaction radius
  double rb = 0.9;  ///< blockade radius
};

/// Sites at spec coordinates, row-major (layer, row, col). x = col*dx +
/// rowOffset on odd rows, y = row*dy, z = layer*dz.
std::vector<Site> buildLattice(const LatticeSpec& spec);

/// Sites plus the spec they came from; precomputes nothing else.
struct Lattice {
  LatticeSpec spec;
  std::vector<Site> sites;

  explicit Lattice(const LatticeSpec& s) : spec(s), sites(buildLattice(s)) {}

  std::size_t size() const { return sites.size(); }
  const Site& operator[](std::size_t i) const { return sites[i]; }
};

/// Unoccupied site minimizing the sum of squared distances to every
/// lattice point; ties broken toward the lowest site index.
/// Throws std::invalid_argument when every site is occupied.
const Site& centerSite(const Lattice& lattice, const std::set<int>& occupied);

/// Smallest near-square grid (|rows - cols| <= 1, cols >= rows) holding
/// `width` atoms, with the family's canonical geometry.
LatticeSpec minLatticeFor(int width, LatticeKind kind);

} // namespace natopo
