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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "cvlat/duality.hpp"
#include "test_support.hpp"

namespace cvlat {
namespace {

using testing::Rng;

constexpr double kTwoPi = 2 * std::numbers::pi;

// Pentagon "house" with a chord; planar, 5 vertices, 6 edges, 3 faces.
Model house(double scale = 1.0) {
  Model m;
  m.graph = DecoratedGraph::from_coordinates({{0, 0}, {2, 0}, {2, 1}, {1, 2}, {0, 1}},
                                             {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}, {4, 2}});
  for (double k : {0.7, 1.3, 2.0, 0.9, 1.6, 1.1}) m.edge_potentials.push_back(Potential::quadratic(scale * k));
  m.convention = Convention::Real;
  m.gauge = true;
  return m;
}

Model torus_model(Rng& rng, int w, Convention c) {
  Model m;
  m.graph = square_lattice(w, w, true);
  for (int e = 0; e < m.graph.edge_count(); ++e) m.edge_potentials.push_back(testing::random_potential(rng));
  m.convention = c;
  return m;
}

TEST(Duality, ConstantPotentialBecomesDelta) {
  const ModeSpace ms(8);
  const DualizedPotential d = dual_potential(Potential::zero(), ms, Convention::Imaginary);
  EXPECT_NEAR(std::abs(d.samples(0) - std::sqrt(8.0)), 0, 1e-12);
  for (int j = 1; j < 8; ++j) EXPECT_LT(std::abs(d.samples(j)), 1e-12);
  EXPECT_EQ(d.constant, Units{});
}

TEST(Duality, GaussianTransformsToInverseCoupling) {
  // (2 pi)^(-1/2) int exp(i x y - k x^2 / 2) dx = exp(-y^2 / (2 k)) / sqrt(k)
  const ModeSpace ms(64);
  for (double k : {0.5, 1.0, 2.5}) {
    const DualizedPotential d = dual_potential(Potential::quadratic(k), ms, Convention::Real);
    double worst = 0;
    for (int j = 0; j < 64; ++j) {
      const double y = ms.position(j);
      const double exact = std::exp(-y * y / (2 * k)) / std::sqrt(k);
      worst = std::max(worst, std::abs(d.samples(j) - exact) / (1 / std::sqrt(k)));
    }
    EXPECT_LT(worst, 1e-6) << "k=" << k;
  }
}

TEST(Duality, DoubleTransformIsParity) {
  const ModeSpace ms(10);
  const Potential p = Potential::polynomial(0.3, 0.5, -0.1, 0.05);
  const Vec original = p.boltzmann(ms, Convention::Imaginary);
  const DualizedPotential once = dual_potential(p, ms, Convention::Imaginary);
  const DualizedPotential twice = dual_potential(Potential::tabulated(once.samples), ms, Convention::Imaginary);
  for (int j = 0; j < 10; ++j) EXPECT_LT(std::abs(twice.samples(j) - original(ms.wrap(-j))), 1e-12);
}

TEST(Duality, ConstantMatchesEulerBookkeeping) {
  const Model m = house();
  const ModeSpace ms(8);
  const DualizedModel d = dualize_model(m, ms);
  // (2 pi)^(|V| - 1 - |E|/2) = (2 pi)^(5 - 1 - 3)
  EXPECT_NEAR(ms.value(d.constant), kTwoPi, 1e-12);
  EXPECT_EQ(d.model.graph.vertex_count(), 3);
  EXPECT_EQ(d.model.graph.edge_count(), 6);
}

TEST(Duality, PlanarIdentityExactForRandomPotentials) {
  Rng rng(5);
  for (Convention c : {Convention::Imaginary, Convention::Real}) {
    Model m = house();
    m.convention = c;
    for (int trial = 0; trial < 4; ++trial) {
      for (auto& p : m.edge_potentials) p = testing::random_potential(rng);
      m.gauge = rng.coin();
      for (int mm : {4, 8}) EXPECT_LT(duality_residual(m, ModeSpace(mm)), 1e-10);
      m.gauge = false;
      EXPECT_LT(duality_residual(m, ModeSpace(6)), 1e-10);
    }
  }
}

TEST(Duality, GaugeNeedsCoprimeCounts) {
  // the dual house has 3 vertices; at M = 6 the constraint misses some orbits
  const Model m = house();
  EXPECT_THROW(duality_check(m, ModeSpace(6)), std::invalid_argument);
  Model free = m;
  free.gauge = false;
  EXPECT_LT(duality_check(free, ModeSpace(6)).plain_residual, 1e-10);
}

TEST(Duality, ZeroPotentialResidualVanishes) {
  Model m = house();
  for (auto& p : m.edge_potentials) p = Potential::zero();
  m.gauge = false;
  EXPECT_LT(duality_residual(m, ModeSpace(6)), 1e-12);
}

TEST(Duality, TorusNeedsFluxSectors) {
  // on a torus the plain relation misses the M^2 twisted sectors
  Rng rng(17);
  const ModeSpace ms(4);
  for (Convention c : {Convention::Imaginary, Convention::Real}) {
    const Model m = torus_model(rng, 2, c);
    const DualityReport r = duality_check(m, ms);
    EXPECT_EQ(r.genus, 1);
    EXPECT_LT(r.sector_residual, 1e-10);
    EXPECT_GT(r.plain_residual, 1e-3);
  }
}

TEST(Duality, HomologyFlowsAreClosedAndIndependent) {
  const DecoratedGraph g = square_lattice(3, 3, true);
  const auto flows = homology_flows(g);
  ASSERT_EQ(flows.size(), 2u);
  for (const auto& f : flows) {
    std::vector<int> div(g.vertex_count(), 0);
    for (int e = 0; e < g.edge_count(); ++e) {
      div[g.edge(e).tail] += f[e];
      div[g.edge(e).head] -= f[e];
    }
    for (int d : div) EXPECT_EQ(d, 0);
  }
  EXPECT_NE(flows[0], flows[1]);
  EXPECT_TRUE(homology_flows(house().graph).empty());
}

TEST(Duality, DualOfDualReversesOrientation) {
  for (const DecoratedGraph& g : {house().graph, square_lattice(3, 3, true), square_lattice(2, 3, false)})
    EXPECT_TRUE(same_embedding(dual(dual(g)), g, true));
}

TEST(Duality, DualizingTwiceKeepsPartitionFunction) {
  Rng rng(8);
  Model m = house();
  m.convention = Convention::Imaginary;
  for (auto& p : m.edge_potentials) p = testing::random_potential(rng);
  const ModeSpace ms(6);
  const DualizedModel once = dualize_model(m, ms);
  const DualizedModel twice = dualize_model(once.model, ms);
  const Complex z = partition_network(m, ms).value;
  const Complex back = ms.value(once.constant) * ms.value(twice.constant) * partition_network(twice.model, ms).value;
  EXPECT_LT(testing::rel_diff(z, back), 1e-10);
}

TEST(Duality, HexagonalDualizesToTriangular) {
  const DecoratedGraph sq = square_lattice(4, 4, true);
  DecoratedGraph hex = sq;
  auto bricks = brick_edges(4, 4);
  std::sort(bricks.rbegin(), bricks.rend());
  for (int e : bricks) hex = delete_edge(hex, e);
  const ShapeSummary hs = shape_summary(hex);
  EXPECT_EQ(hs.face_sizes, (std::map<int, int>{{6, 8}}));
  const ShapeSummary ts = shape_summary(dual(hex));
  EXPECT_EQ(ts.face_sizes, (std::map<int, int>{{3, 16}}));
  EXPECT_EQ(ts.degrees, (std::map<int, int>{{6, 8}}));

  Model m;
  m.graph = hex;
  Rng rng(3);
  for (int e = 0; e < hex.edge_count(); ++e) m.edge_potentials.push_back(Potential::quadratic(rng.uniform(0.5, 1.5)));
  m.convention = Convention::Imaginary;
  EXPECT_LT(duality_check(m, ModeSpace(4)).sector_residual, 1e-10);
}

TEST(Duality, GaussianPairConvergesUnderRefinement) {
  const Model m = house();
  const GaussianDual gd = gaussian_dual(m);
  std::vector<double> deltas, errs;
  for (int mm : {8, 16, 32}) {
    const ModeSpace ms(mm);
    deltas.push_back(ms.spacing());
    errs.push_back(testing::rel_diff(partition_network(m, ms).value,
                                     gd.prefactor * partition_network(gd.model, ms).value));
  }
  EXPECT_LT(errs[1], errs[0]);
  EXPECT_LT(errs[2], errs[1]);
  EXPECT_LT(errs[2], 1e-12);
  EXPECT_GE(testing::observed_order(deltas, errs), 1.8);
}

TEST(Duality, GaussianPairMatchesOracleDirectly) {
  // matrix-tree: the continuum identity holds between the two closed forms
  const Model m = house();
  const GaussianDual gd = gaussian_dual(m);
  // gauge-fixed sums approach N * oracle on each side
  EXPECT_NEAR(5 * gaussian_oracle(m), gd.prefactor * 3 * gaussian_oracle(gd.model), 1e-10);
}

TEST(Duality, GaussianDualRejectsBadInput) {
  Model m = house();
  m.edge_potentials[0] = Potential::polynomial(0, 0.5, 0, 0.1);
  EXPECT_THROW(gaussian_dual(m), std::invalid_argument);
  Model t;
  t.graph = square_lattice(2, 2, true);
  t.edge_potentials.assign(t.graph.edge_count(), Potential::quadratic(1));
  t.convention = Convention::Real;
  EXPECT_THROW(gaussian_dual(t), std::invalid_argument);
}

TEST(Duality, SitesHaveNoDual) {
  Model m = house();
  m.site_potentials.assign(5, Potential::quadratic(1));
  EXPECT_THROW(dualize_model(m, ModeSpace(4)), std::invalid_argument);
}

TEST(Duality, CsvListsAscendingY) {
  const ModeSpace ms(4);
  std::ostringstream os;
  write_dual_csv(os, dual_potential(Potential::quadratic(1), ms, Convention::Real), ms);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "y,re,im");
  double last = -1e9;
  int rows = 0;
  while (std::getline(in, line)) {
    const double y = std::stod(line.substr(0, line.find(',')));
    EXPECT_GT(y, last);
    last = y;
    ++rows;
  }
  EXPECT_EQ(rows, 4);
}

}  // namespace
}  // namespace cvlat
