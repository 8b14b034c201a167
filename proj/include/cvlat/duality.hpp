// Copyright 2026 <project authors>
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CVLAT_DUALITY_HPP
#define CVLAT_DUALITY_HPP

#include <iosfwd>
#include <vector>

#include "cvlat/partition.hpp"

namespace cvlat {

/// Samples of exp(-i V~(y)) = (2 pi)^(-1/2) int dx exp(i x y - i V(x)).
/// On the grid this is exactly H applied to the Boltzmann samples: the
/// prefactor delta sqrt(M) / sqrt(2 pi) is 1.
struct DualizedPotential {
  Vec samples;
  Units constant;  // always trivial; kept so callers can audit it
  Potential source;
};

DualizedPotential dual_potential(const Potential& p, const ModeSpace& ms, Convention c);

struct DualizedModel {
  Model model;
  /// Z_G = constant * Z_dual for planar G. Equals
  /// delta^(|V|-|F|) M^(|V|-|E|/2-1), i.e. (2 pi)^(|V|-1-|E|/2).
  Units constant;
};

/// Dual graph with tabulated Fourier-transformed edge weights. Site terms
/// have no dual and are rejected.
DualizedModel dualize_model(const Model& m, const ModeSpace& ms);

/// Continuum Gaussian pair: V = k x^2 / 2 on G maps to V = y^2 / (2 k) on
/// the dual with Z_G = prefactor * Z_dual, prefactor (2 pi)^(|V|-1-|E|/2) / sqrt(prod k).
/// At finite M the two sides agree only up to discretization error.
struct GaussianDual {
  Model model;
  double prefactor = 1;
};

/// Needs real convention, pure quadratic positive couplings, no sites and a
/// planar graph.
GaussianDual gaussian_dual(const Model& m);

/// |Z_G - c Z_dual| / |Z_G| using the plain planar relation.
double duality_residual(const Model& m, const ModeSpace& ms);

/// One integer flow per homology generator (2g of them), from a
/// tree-cotree split. Each flow is divergence-free.
std::vector<std::vector<int>> homology_flows(const DecoratedGraph& g);

struct DualityReport {
  int genus = 0;
  Complex primal;
  Complex dual_plain;     // c Z_dual
  Complex dual_sectors;   // c sum over twisted sectors
  double plain_residual = 0;
  double sector_residual = 0;
};

/// Plain relation plus the version summed over the M^(2g) flux sectors,
/// which is the exact statement on surfaces of any genus.
/// The graph must be connected. With the gauge on, |V| and |F| must be coprime
/// to M. Both failures are std::invalid_argument.
DualityReport duality_check(const Model& m, const ModeSpace& ms);

/// y, Re, Im rows of a dual table.
void write_dual_csv(std::ostream& os, const DualizedPotential& d, const ModeSpace& ms);

}  // namespace cvlat

#endif
