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

// Randomized properties. Each test draws its own seeded cases so a failure
// names the seed and case index and can be replayed alone.

#include <gtest/gtest.h>

#include <sstream>

#include "cvlat/compiler.hpp"
#include "cvlat/duality.hpp"
#include "cvlat/model_io.hpp"
#include "cvlat/states.hpp"
#include "test_support.hpp"

namespace cvlat {
namespace {

using testing::rel_diff;
using testing::Rng;

constexpr int kCases = 30;

int even_m(Rng& rng, int lo, int hi) { return 2 * rng.integer(lo / 2, hi / 2); }

TEST(Properties, WeylCommutationPhase) {
  Rng rng(101);
  for (int c = 0; c < kCases; ++c) {
    const ModeSpace ms(even_m(rng, 2, 12));
    const int a = rng.integer(-20, 20), b = rng.integer(-20, 20);
    const Mat zx = phase_matrix(ms, b) * shift_matrix(ms, a);
    const Mat xz = shift_matrix(ms, a) * phase_matrix(ms, b);
    // Z^b X^a = omega^(ab) X^a Z^b
    EXPECT_LT(testing::max_diff(zx, ms.omega(static_cast<std::int64_t>(a) * b) * xz), 1e-12) << "case " << c;
  }
}

TEST(Properties, HadamardIsUnitaryOfOrderFour) {
  Rng rng(102);
  for (int c = 0; c < 8; ++c) {
    const ModeSpace ms(even_m(rng, 2, 24));
    const Mat h = hadamard_matrix(ms);
    const Mat id = Mat::Identity(ms.size(), ms.size());
    EXPECT_LT(testing::max_diff(h * h.adjoint(), id), 1e-12);
    EXPECT_LT(testing::max_diff(h * h * h * h, id), 1e-12);
    // H X H^dag = Z
    EXPECT_LT(testing::max_diff(h * shift_matrix(ms, 1) * h.adjoint(), phase_matrix(ms, 1)), 1e-12);
  }
}

TEST(Properties, StabilizersHoldOnRandomGraphs) {
  Rng rng(103);
  int checked = 0;
  for (int c = 0; c < 12; ++c) {
    DecoratedGraph g = testing::random_graph(rng, 3, 3, rng.coin());
    // at most five modes in the extended state
    if (g.vertex_count() + g.edge_count() > 5) continue;
    for (int mm : {4, 8}) {
      const ModeSpace ms(mm);
      const LatticeState k = kitaev_state(g, ms);
      const NullifierTableau kt = kitaev_nullifiers(g);
      const LatticeState x = extended_kitaev_state(g, ms);
      const NullifierTableau xt = extended_nullifiers(g);
      for (int a : {1, -1, 3}) {
        for (const auto& gen : kt.generators) EXPECT_LT(verify_stabilizer(k, kt, gen, a), 1e-12) << c << gen.name;
        for (const auto& gen : xt.generators) EXPECT_LT(verify_stabilizer(x, xt, gen, a), 1e-12) << c << gen.name;
      }
      ++checked;
    }
  }
  EXPECT_GE(checked, 10);
}

TEST(Properties, WeightedGraphStabilizers) {
  Rng rng(104);
  for (int c = 0; c < 10; ++c) {
    const int n = rng.integer(1, 4);
    WeightedGraph wg{n, {}};
    for (int k = 0; k < n; ++k) {
      const int a = rng.integer(0, n - 1), b = rng.integer(0, n - 1);
      if (a != b) wg.edges.push_back({a, b, static_cast<double>(rng.integer(-2, 2))});
    }
    const ModeSpace ms(even_m(rng, 4, 8));
    const LatticeState s = weighted_graph_state(wg, ms);
    const NullifierTableau t = weighted_nullifiers(wg);
    for (const auto& gen : t.generators) EXPECT_LT(verify_stabilizer(s, t, gen, 1), 1e-12) << c;
  }
}

TEST(Properties, FormalismIdentityBothConventions) {
  Rng rng(105);
  for (int c = 0; c < kCases; ++c) {
    const Convention conv = rng.coin() ? Convention::Real : Convention::Imaginary;
    Model m = testing::random_model(rng, 4, 4, conv);
    m.gauge = !m.has_sites() && rng.coin();
    const ModeSpace ms(even_m(rng, 4, 8));
    EXPECT_LT(rel_diff(partition_quantum(m, ms).value, partition_bruteforce(m, ms).value), 1e-10) << "case " << c;
  }
}

TEST(Properties, GaugeOrbitFactorForZeroPotentials) {
  Rng rng(106);
  for (int c = 0; c < kCases; ++c) {
    Model m;
    m.graph = testing::random_graph(rng, 4, 5);
    m.edge_potentials.assign(m.graph.edge_count(), Potential::zero());
    const ModeSpace ms(even_m(rng, 2, 8));
    m.gauge = false;
    const Complex off = partition_bruteforce(m, ms).value;
    m.gauge = true;
    const Complex on = partition_bruteforce(m, ms).value;
    EXPECT_LT(rel_diff(on * (ms.size() * ms.spacing()), off), 1e-12) << "case " << c;
  }
}

TEST(Properties, DualityWithSectorsIsExact) {
  Rng rng(107);
  for (int c = 0; c < 15; ++c) {
    Model m;
    m.graph = testing::random_graph(rng, 4, 4);
    for (int e = 0; e < m.graph.edge_count(); ++e) m.edge_potentials.push_back(testing::random_potential(rng));
    m.convention = rng.coin() ? Convention::Real : Convention::Imaginary;
    const ModeSpace ms(4);
    int pieces = 0;
    components(m.graph, &pieces);
    // sum over M^(2g) sectors; keep the enumeration small
    if (pieces != 1 || faces(m.graph).genus > 1) continue;
    const DualityReport r = duality_check(m, ms);
    EXPECT_LT(r.sector_residual, 1e-10) << "case " << c << " genus " << r.genus;
    if (r.genus == 0) {
      EXPECT_LT(r.plain_residual, 1e-10) << "case " << c;
    }
  }
}

TEST(Properties, DisconnectedDualityRefused) {
  Model m;
  m.graph = DecoratedGraph(4, {{0, 1}, {2, 3}});
  m.edge_potentials.assign(2, Potential::quadratic(1.0));
  EXPECT_THROW(duality_check(m, ModeSpace(4)), std::invalid_argument);
}

TEST(Properties, DualOfDualIsReversal) {
  Rng rng(108);
  for (int c = 0; c < kCases; ++c) {
    const DecoratedGraph g = testing::random_graph(rng, 5, 7, rng.coin());
    EXPECT_TRUE(same_embedding(dual(dual(g)), g, true)) << "case " << c;
    // Euler: V - E + F = 2 - 2g per component; checked on connected draws
    int comps = 0;
    components(g, &comps);
    const FaceStructure fs = faces(g);
    if (comps == 1) {
      EXPECT_EQ(g.vertex_count() - g.edge_count() + static_cast<int>(fs.faces.size()), 2 - 2 * fs.genus);
    }
  }
}

TEST(Properties, VertexLoopFiniteShiftIsExact) {
  Rng rng(109);
  for (int c = 0; c < 15; ++c) {
    const Convention conv = rng.coin() ? Convention::Real : Convention::Imaginary;
    Model m = testing::random_model(rng, 4, 5, conv);
    if (m.graph.edge_count() == 0) continue;
    const int v = rng.integer(0, m.graph.vertex_count() - 1);
    const ModeSpace ms(even_m(rng, 4, 6));
    const LoopResidual r = loop_residual(m, ms, dual_loop_around(m.graph, v), rng.integer(1, 3));
    EXPECT_LT(r.finite_shift, 1e-12) << "case " << c;
  }
}

TEST(Properties, CompilerIsSound) {
  Rng rng(110);
  const ModeSpace ms(16);
  for (int c = 0; c < 12; ++c) {
    const Potential v = Potential::polynomial(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-0.3, 0.3),
                                              rng.uniform(-0.1, 0.1));
    CompileOptions opts;
    opts.strict = false;
    const CompileResult r = compile_diagonal(v, 1e-6, ms, opts);
    EXPECT_LE(r.report.measured_error, r.report.declared_error + 1e-12) << "case " << c;
  }
}

TEST(Properties, PatternEqualsSequence) {
  Rng rng(111);
  for (int c = 0; c < kCases; ++c) {
    const ModeSpace ms(even_m(rng, 4, 12));
    GateSequence seq;
    const int len = rng.integer(0, 6);
    for (int k = 0; k < len; ++k)
      seq.gates.push_back({static_cast<GateKind>(rng.integer(0, 3)), rng.uniform(-1, 1)});
    seq.phase = rng.uniform(-1, 1);
    const ChainPattern cp = emit_pattern(seq, ms);
    EXPECT_LE(cp.pattern.steps.size(), 4 * seq.gates.size() + 1);
    const Vec in = rng.state(ms.size());
    EXPECT_LT((simulate_pattern(cp, in, ms) - apply_sequence(seq, ms, in)).norm() / in.norm(), 1e-10)
        << "case " << c;
  }
}

TEST(Properties, ModelTextRoundTrip) {
  Rng rng(112);
  for (int c = 0; c < kCases; ++c) {
    const Convention conv = rng.coin() ? Convention::Real : Convention::Imaginary;
    Model m = testing::random_model(rng, 4, 4, conv);
    m.gauge = rng.coin();
    std::stringstream io;
    write_model(io, m);
    const ModelFile back = parse_model(io, "roundtrip");
    EXPECT_EQ(back.model.convention, m.convention);
    EXPECT_EQ(back.model.gauge, m.gauge);
    const ModeSpace ms(6);
    EXPECT_LT(rel_diff(partition_network(back.model, ms).value, partition_network(m, ms).value), 1e-12)
        << "case " << c << "\n"
        << io.str();
  }
}

TEST(Properties, NetworkOrderDoesNotMatter) {
  Rng rng(113);
  for (int c = 0; c < 15; ++c) {
    Model m = testing::random_model(rng, 5, 6, Convention::Imaginary);
    const ModeSpace ms(6);
    const FactorNetwork net = model_network(m, ms, edge_tables(m, ms), site_tables(m, ms));
    std::vector<int> order(m.graph.vertex_count());
    for (int k = 0; k < static_cast<int>(order.size()); ++k) order[k] = k;
    std::vector<int> reversed(order.rbegin(), order.rend());
    EXPECT_LT(rel_diff(net.sum(order), net.sum(reversed)), 1e-10) << "case " << c;
    EXPECT_LT(rel_diff(net.sum(), net.sum(order)), 1e-10) << "case " << c;
  }
}

}  // namespace
}  // namespace cvlat
