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

#ifndef CVLAT_REDUCER_HPP
#define CVLAT_REDUCER_HPP

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "cvlat/compiler.hpp"
#include "cvlat/partition.hpp"
#include "cvlat/states.hpp"

namespace cvlat {

/// exp(-i V(sum_k sign_k x_k)); edges are the two-variable case.
struct Term {
  std::vector<int> vars;
  std::vector<int> signs;
  Potential potential;
};

/// Variables, optional site potentials and multi-body terms; imaginary
/// convention, no gauge constraint.
struct ReducibleModel {
  int variables = 0;
  std::vector<Potential> sites;  // empty or one per variable
  std::vector<Term> terms;
};

ReducibleModel to_reducible(const Model& m);
/// delta^n times the sum over all labels, by variable elimination.
PartitionResult reducible_partition(const ReducibleModel& m, const ModeSpace& ms);

/// Periodic square lattice with K = i * edge_sign on each edge, giving
/// the weight exp(-K (phi_a - phi_b)^2 / 2), and site terms
/// h x + m x^2 + q x^4 weighted by exp(-i W).
struct Phi4Model {
  int width = 0;
  int height = 0;
  std::vector<int> edge_sign;
  std::vector<double> h, m, q;

  int sites() const { return width * height; }
  Complex coupling(int e) const { return {0.0, static_cast<double>(edge_sign.at(e))}; }
  DecoratedGraph lattice() const;
};

enum class EdgeAction { Delete, Merge, Keep };
std::string action_name(EdgeAction a);

/// Lattice realization of a graph: every graph vertex becomes a cluster of
/// merged sites, every graph edge one kept lattice edge, everything else
/// is deleted. Sites outside all clusters stay free.
struct EmbeddingPlan {
  int width = 0;
  int height = 0;
  std::vector<int> node_site;                // anchor site of each graph vertex
  std::vector<int> cluster_of_site;          // graph vertex or -1
  std::vector<EdgeAction> action;            // per lattice edge
  std::vector<int> realizes;                 // graph edge of each kept lattice edge, else -1
  std::vector<int> kept_edge;                // lattice edge of each graph edge

  int kept_count() const;
  int area() const { return width * height; }
};

/// Throws std::runtime_error when no routing is found.
EmbeddingPlan embed_graph(const DecoratedGraph& g);

/// Graph on the clusters left after applying the plan's merges and
/// deletions; isomorphic to the input with cluster i = vertex i.
DecoratedGraph plan_quotient(const EmbeddingPlan& plan);

struct GadgetRecord {
  std::string source;     // e.g. "term 2" or "site 0"
  std::vector<int> nodes; // nodes of the intermediate graph
  CompileReport report;
  double pointwise_error = 0;
  bool chain = false;
};

struct ReductionCertificate {
  int m = 0;
  Phi4Model lattice;
  EmbeddingPlan plan;
  /// One projection per lattice edge mode: plus / minus keep, momentum-zero
  /// deletes, coordinate-zero merges.
  MeasurementPattern pattern;
  /// Z = constant * (sum over cluster labels of the lattice weights).
  Complex constant{1, 0};
  double declared_error = 0;  // absolute bound on |Z_certificate - Z_source|
  double epsilon = 0;
  bool within_epsilon = true;
  std::vector<std::string> provenance;  // per intermediate node
  std::vector<int> elimination_order;   // over clusters
  std::vector<GadgetRecord> gadgets;
};

ReductionCertificate reduce_to_phi4(const ReducibleModel& m, double epsilon, const ModeSpace& ms);
/// Only the imaginary convention without gauge fixing reduces.
ReductionCertificate reduce_to_phi4(const Model& m, double epsilon, const ModeSpace& ms);

PartitionResult evaluate_certificate(const ReductionCertificate& c, const ModeSpace& ms);
/// Structural check: kept edges have K = +-i and every edge mode is
/// projected exactly once.
bool certificate_well_formed(const ReductionCertificate& c);

void write_certificate(std::ostream& os, const ReductionCertificate& c);
ReductionCertificate read_certificate(std::istream& is);

struct Plaquette {
  std::array<int, 4> vars{};
  std::array<int, 4> signs{1, -1, -1, 1};
  double coupling = 0;
};

/// exp(-i sum_p J_p cos(x1 - x2 - x3 + x4)) over link variables.
struct U1Model {
  int variables = 0;
  std::vector<Plaquette> plaquettes;

  ReducibleModel reducible() const;
};

U1Model build_u1_model(const std::vector<std::array<int, 4>>& plaquettes, const std::vector<double>& couplings);
/// Plain enumeration of every link configuration.
PartitionResult u1_partition_direct(const U1Model& u, const ModeSpace& ms);
/// Inner product of the plaquette state with prod_p <0_p| exp(-i J_p cos Q).
PartitionResult u1_partition_state(const U1Model& u, const ModeSpace& ms);

}  // namespace cvlat

#endif
