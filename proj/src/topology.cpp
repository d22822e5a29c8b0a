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

#include "natopo/topology.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace natopo {

std::string latticeKindName(LatticeKind kind) {
  switch (kind) {
  case LatticeKind::Square:
    return "square";
  case LatticeKind::STriangle:
    return "striangle";
  case LatticeKind::TTriangle:
    return "ttriangle";
  case LatticeKind::Custom:
    return "custom";
  }
  return "square";
}

std::optional<LatticeKind> latticeKindFromName(const std::string& name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  lower.erase(std::remove_if(lower.begin(), lower.end(),
                             [](char c) { return c == '-' || c == '_'; }),
              lower.end());
  if (lower == "square") {
    return LatticeKind::Square;
  }
  if (lower == "striangle" || lower == "stri") {
    return LatticeKind::STriangle;
  }
  if (lower == "ttriangle" || lower == "ttri") {
    return LatticeKind::TTriangle;
  }
  if (lower == "custom") {
    return LatticeKind::Custom;
  }
  return std::nullopt;
}

LatticeSpec LatticeSpec::make(LatticeKind kind, int rows, int cols) {
  LatticeSpec spec;
  spec.kind = kind;
  spec.rows = rows;
  spec.cols = cols;
  switch (kind) {
  case LatticeKind::Square:
  case LatticeKind::Custom:
    spec.dx = 1.0;
    spec.dy = 1.0;
    spec.rowOffset = 0.0;
    break;
  case LatticeKind::STriangle:
    spec.dx = 1.0;
    spec.dy = std::sqrt(3.0) / 2.0;
    spec.rowOffset = 0.5;
    break;
  case LatticeKind::TTriangle:
    spec.dx = 1.0;
    spec.dy = 0.5;
    spec.rowOffset = 0.5;
    break;
  }
  return spec;
}

std::vector<Site> buildLattice(const LatticeSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1 || spec.layers < 1) {
    throw std::invalid_argument("lattice dimensions must be positive");
  }
  if (spec.dx <= 0 || spec.dy <= 0 || spec.dz <= 0) {
    throw std::invalid_argument("lattice pitches must be positive");
  }
  if (spec.rowOffset < 0 || spec.rowOffset >= spec.dx) {
    throw std::invalid_argument("rowOffset must be in [0, dx)");
  }
  std::vector<Site> sites;
  sites.reserve(static_cast<std::size_t>(spec.layers) * spec.rows * spec.cols);
  int index = 0;
  for (int layer = 0; layer < spec.layers; ++layer) {
    for (int row = 0; row < spec.rows; ++row) {
      const double shift = (row % 2 == 1) ? spec.rowOffset : 0.0;
      for (int col = 0; col < spec.cols; ++col) {
        sites.push_back(Site{index++, col * spec.dx + shift, row * spec.dy,
                             layer * spec.dz});
      }
    }
  }
  return sites;
}

const Site& centerSite(const Lattice& lattice, const std::set<int>& occupied) {
  const Site* best = nullptr;
  double bestObjective = 0;
  for (const auto& candidate : lattice.sites) {
    if (occupied.count(candidate.index) > 0) {
      continue;
    }
    double objective = 0;
    for (const auto& p : lattice.sites) {
      objective += squaredDistance(candidate, p);
    }
    // near-exact ties (symmetric positions summed in different orders)
    // resolve toward the lowest site index
    const double tol = 1e-9 * std::max(1.0, std::abs(bestObjective));
    if (best == nullptr || objective < bestObjective - tol) {
      best = &candidate;
      bestObjective = objective;
    }
  }
  if (best == nullptr) {
    throw std::invalid_argument("centerSite: all sites occupied");
  }
  return *best;
}

LatticeSpec minLatticeFor(int width, LatticeKind kind) {
  if (width < 1) {
    throw std::invalid_argument("width must be >= 1");
  }
  const int r = static_cast<int>(std::floor(std::sqrt(double(width))));
  int rows = r;
  int cols = r;
  if (rows * cols < width) {
    cols = r + 1;
  }
  if (rows * cols < width) {
    rows = r + 1;
  }
  return LatticeSpec::make(kind, rows, cols);
}

} // namespace natopo
