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

#ifndef CVLAT_STATES_HPP
#define CVLAT_STATES_HPP

#include <string>
#include <vector>

#include "cvlat/graphs.hpp"
#include "cvlat/modespace.hpp"

namespace cvlat {

struct ModeTag {
  enum class Kind { Edge, Vertex };
  Kind kind = Kind::Edge;
  int index = 0;
  friend bool operator==(const ModeTag&, const ModeTag&) = default;
};

inline ModeTag edge_mode(int e) { return {ModeTag::Kind::Edge, e}; }
inline ModeTag vertex_mode(int v) { return {ModeTag::Kind::Vertex, v}; }

/// Unnormalized joint state; represented object is units * amplitudes over
/// the product of orthonormal label bases.
struct LatticeState {
  int m = 0;
  std::vector<ModeTag> modes;
  Vec amplitudes;
  Units units;
  Layer layer = Layer::Exact;

  int mode_count() const { return static_cast<int>(modes.size()); }
  int position_of(ModeTag tag) const;
};

LatticeState kitaev_state(const DecoratedGraph& g, const ModeSpace& ms);
/// Sums only fields with sum of labels = 0 mod M, with one factor 1/delta.
LatticeState gauge_fixed_kitaev(const DecoratedGraph& g, const ModeSpace& ms);
/// Edge modes first, then vertex modes carrying |phi_v>.
LatticeState extended_kitaev_state(const DecoratedGraph& g, const ModeSpace& ms, bool gauge = false);
/// Product of CZ(J) over edges applied to momentum-zero vertex modes.
LatticeState weighted_graph_state(const WeightedGraph& wg, const ModeSpace& ms);

/// X^(a x_k) Z^(a z_k) on every mode k, Z acting first.
struct Generator {
  std::string name;
  std::vector<int> x;
  std::vector<int> z;
};

struct NullifierTableau {
  std::vector<ModeTag> modes;
  std::vector<Generator> generators;
};

enum class StateFamily { Kitaev, Extended, Weighted };

NullifierTableau kitaev_nullifiers(const DecoratedGraph& g);
NullifierTableau extended_nullifiers(const DecoratedGraph& g);
/// Integer weights only.
NullifierTableau weighted_nullifiers(const WeightedGraph& wg);

/// Printable form such as "X_d^-1 X_a".
std::string describe(const Generator& gen, const NullifierTableau& tab, const DecoratedGraph* g = nullptr);

Vec apply_generator(const LatticeState& state, const NullifierTableau& tab, const Generator& gen, int a);
/// ||U(a) psi - psi|| / ||psi||.
double verify_stabilizer(const LatticeState& state, const NullifierTableau& tab, const Generator& gen, int a);

enum class Projector {
  MomentumZero,
  CoordinateZero,
  Beta1,
  Beta2,
  Beta4,
  Plus,   // exp(-i x^2 / 2): quadratic edge coupling of sign +
  Minus,  // exp(+i x^2 / 2)
};

std::string projector_name(Projector p);
Projector parse_projector(const std::string& name);
ModeVector projector_bra(const ModeSpace& ms, Projector p, double t = 0);

struct Projection {
  ModeTag mode;
  Projector kind = Projector::MomentumZero;
  double t = 0;
};

struct MeasurementPattern {
  std::vector<Projection> steps;
  /// Scalar applied after all projections.
  Complex constant{1, 0};
};

struct ProjectionResult {
  LatticeState state;
  /// Full contraction value including units, set when no mode remains.
  Complex scalar{0, 0};
};

/// Throws std::invalid_argument on a repeated or unknown mode.
ProjectionResult project(const LatticeState& state, const MeasurementPattern& pattern, const ModeSpace& ms);

/// Contracts an arbitrary bra (with units) against one mode.
LatticeState project_mode(const LatticeState& state, ModeTag mode, const ModeVector& bra);

/// Relative distance between two states as continuum objects with the same
/// mode order.
double state_distance(const LatticeState& a, const LatticeState& b, const ModeSpace& ms);

enum class SurgeryBasis { Momentum, Coordinate };

/// Projects edge e of the Kitaev state and compares with the Kitaev state of
/// the graph with e deleted (momentum) or merged (coordinate), scaled by the
/// predicted constant (2 pi)^(-1/2) or 1.
double surgery_state_check(const DecoratedGraph& g, int e, SurgeryBasis basis, const ModeSpace& ms);

}  // namespace cvlat

#endif
