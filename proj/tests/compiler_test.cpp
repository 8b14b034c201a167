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

#include <sstream>

#include "cvlat/compiler.hpp"
#include "test_support.hpp"

namespace cvlat {
namespace {

using testing::Rng;

// exp(-i V(x_j)) straight from the potential
Vec exact_diagonal(const Potential& v, const ModeSpace& ms) {
  Vec d(ms.size());
  for (int j = 0; j < ms.size(); ++j) d(j) = std::polar(1.0, -v(ms.position(j)));
  return d;
}

double window_distance(const Vec& a, const Vec& b, const ModeSpace& ms, int window) {
  double worst = 0;
  for (int j : window_labels(ms, window)) worst = std::max(worst, std::abs(a(j) - b(j)));
  return worst;
}

TEST(Compiler, LinearTargetIsOnePrimitive) {
  const ModeSpace ms(16);
  const CompileResult r = compile_diagonal(Potential::polynomial(0.7, 0, 0, 0), 1e-12, ms);
  ASSERT_EQ(r.sequence.gates.size(), 1u);
  EXPECT_EQ(r.sequence.gates[0], (Gate{GateKind::Lin, 0.7}));
  EXPECT_LT(r.report.measured_error, 1e-14);
  EXPECT_EQ(r.report.method, "direct");
}

TEST(Compiler, EvenQuarticIsTwoCommutingDiagonals) {
  const ModeSpace ms(16);
  const CompileResult r = compile_diagonal(Potential::polynomial(0, 1, 0, 1), 1e-12, ms);
  ASSERT_EQ(r.sequence.gates.size(), 2u);
  EXPECT_EQ(r.sequence.counts(), (std::array<int, 4>{0, 0, 1, 1}));
  const Mat u = sequence_matrix(r.sequence, ms);
  // whole grid, not just the window: these are exact
  EXPECT_LT((u.diagonal() - exact_diagonal(Potential::polynomial(0, 1, 0, 1), ms)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(testing::max_diff(u, Mat(u.diagonal().asDiagonal())), 1e-15);
}

TEST(Compiler, ConstantTermBecomesGlobalPhase) {
  Potential v = Potential::quadratic(1.0);
  v.coefficients[0] = 0.4;
  const ModeSpace ms(8);
  const CompileResult r = compile_diagonal(v, 1e-12, ms);
  EXPECT_DOUBLE_EQ(r.sequence.phase, 0.4);
  EXPECT_LT(r.report.measured_error, 1e-12);
}

TEST(Compiler, CubicMeetsToleranceAtM16) {
  const ModeSpace ms(16);
  const Potential cubic = Potential::polynomial(0, 0, 1, 0);
  for (int steps : {1, 2, 4, 8}) {
    CompileOptions opts;
    opts.steps = steps;
    const CompileResult r = compile_diagonal(cubic, 1e-3, ms, opts);
    EXPECT_EQ(r.report.method, "commutator");
    EXPECT_LE(r.report.measured_error, 1e-3);
    EXPECT_LE(static_cast<int>(r.sequence.gates.size()), 10000);
    // independent check against the potential itself
    const Mat u = sequence_matrix(r.sequence, ms);
    EXPECT_LT(window_error(u, exact_diagonal(cubic, ms), ms, r.report.window), 1e-10) << steps;
  }
}

TEST(Compiler, CubicShiftIdentityIsExactOnWindow) {
  // (x + s)^4 - (x - s)^4 = 8 s x^3 + 8 s^3 x, with s one grid step
  const ModeSpace ms(12);
  const double s = ms.spacing();
  for (int j : window_labels(ms, 6)) {
    const double x = ms.position(j);
    EXPECT_NEAR(std::pow(x + s, 4) - std::pow(x - s, 4), 8 * s * x * x * x + 8 * s * s * s * x, 1e-10);
  }
}

TEST(Compiler, MixedTargetsAreSound) {
  Rng rng(31);
  const ModeSpace ms(16);
  for (int trial = 0; trial < 8; ++trial) {
    const Potential v = Potential::polynomial(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-0.5, 0.5),
                                              rng.uniform(-0.2, 0.2));
    const CompileResult r = compile_diagonal(v, 1e-8, ms);
    EXPECT_TRUE(r.report.reached);
    EXPECT_LE(r.report.measured_error, r.report.declared_error + 1e-12);
    const Mat u = sequence_matrix(r.sequence, ms);
    EXPECT_LT(window_error(u, exact_diagonal(v, ms), ms, r.report.window), 1e-8);
  }
}

TEST(Compiler, DegreeAboveFourRejected) {
  Potential v;
  v.coefficients = {0, 0, 0, 0, 0, 1};
  EXPECT_THROW(compile_diagonal(v, 1e-6, ModeSpace(8)), std::invalid_argument);
}

TEST(Compiler, WindowedCosineReportsMissedEpsilon) {
  const ModeSpace ms(16);
  try {
    compile_diagonal(Potential::cosine(1.0, 1.0), 1e-6, ms);
    FAIL() << "expected CompileError";
  } catch (const CompileError& e) {
    EXPECT_FALSE(e.report().reached);
    EXPECT_GT(e.report().approximation_error, 1e-6);
  }
  CompileOptions lax;
  lax.strict = false;
  const CompileResult r = compile_diagonal(Potential::cosine(1.0, 1.0), 1e-6, ms, lax);
  EXPECT_FALSE(r.report.reached);
  EXPECT_EQ(r.report.fitted.size(), 5u);
  EXPECT_EQ(r.report.fitted[1], 0);
  EXPECT_EQ(r.report.fitted[3], 0);
}

TEST(Compiler, WholeGridFallsBackToShiftSynthesis) {
  const ModeSpace ms(16);
  CompileOptions opts;
  opts.window = ms.size();
  for (const Potential& v : {Potential::cosine(1.0, 1.0), Potential::polynomial(0, 0, 0.1, 0.1)}) {
    const CompileResult r = compile_diagonal(v, 1e-6, ms, opts);
    EXPECT_EQ(r.report.method, "shift-synthesis");
    const Mat u = sequence_matrix(r.sequence, ms);
    // every label, wrapped boundary included
    EXPECT_LT((u - Mat(exact_diagonal(v, ms).asDiagonal())).norm(), 1e-9);
    EXPECT_EQ(r.sequence.counts()[3], 0);
  }
}

TEST(Compiler, MomentumPrimitiveIsConjugatedPosition) {
  // H exp(-i delta Q) H^-1 = H Z^-1 H^-1 = X: one label up
  const ModeSpace ms(8);
  GateSequence seq;
  seq.gates = {{GateKind::Had, 0}, {GateKind::Had, 0}, {GateKind::Had, 0}, {GateKind::Lin, ms.spacing()},
               {GateKind::Had, 0}};
  const Mat u = sequence_matrix(seq, ms);
  for (int j = 0; j < 8; ++j) {
    Vec e = Vec::Zero(8);
    e(j) = 1;
    const Vec out = u * e;
    Eigen::Index k;
    out.cwiseAbs().maxCoeff(&k);
    EXPECT_NEAR(std::abs(out(k)), 1.0, 1e-12);
    EXPECT_EQ(ms.wrap(static_cast<int>(k) - j), 1) << j;
  }
}

TEST(Compiler, SimplifyMergesAndDropsIdentities) {
  GateSequence seq;
  seq.gates = {{GateKind::Had, 0}, {GateKind::Had, 0}, {GateKind::Had, 0}, {GateKind::Had, 0},
               {GateKind::Quad, 0.5}, {GateKind::Quad, 0.25}, {GateKind::Lin, 0}};
  const GateSequence s = simplify(seq);
  ASSERT_EQ(s.gates.size(), 1u);
  EXPECT_EQ(s.gates[0], (Gate{GateKind::Quad, 0.75}));
  const ModeSpace ms(6);
  EXPECT_LT(testing::max_diff(sequence_matrix(s, ms), sequence_matrix(seq, ms)), 1e-13);
}

TEST(Compiler, HadamardPatternIsOneMomentumProjection) {
  GateSequence seq;
  seq.gates = {{GateKind::Had, 0}};
  const ModeSpace ms(8);
  const ChainPattern cp = emit_pattern(seq, ms);
  EXPECT_EQ(cp.chain.vertices, 2);
  ASSERT_EQ(cp.pattern.steps.size(), 1u);
  EXPECT_EQ(cp.pattern.steps[0].kind, Projector::MomentumZero);
  Vec e0 = Vec::Zero(8);
  e0(0) = 1;
  const Vec out = simulate_pattern(cp, e0, ms);
  // momentum-zero state: flat
  EXPECT_LT((out - Vec::Constant(8, 1 / std::sqrt(8.0))).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Compiler, QuarticPatternUsesFourProjections) {
  GateSequence seq;
  seq.gates = {{GateKind::Quart, 0.3}};
  const ModeSpace ms(8);
  const ChainPattern cp = emit_pattern(seq, ms);
  EXPECT_EQ(cp.chain.vertices, 5);
  ASSERT_EQ(cp.pattern.steps.size(), 4u);
  int zeros = 0, quartic = 0;
  for (const auto& s : cp.pattern.steps) {
    zeros += s.kind == Projector::MomentumZero;
    quartic += s.kind == Projector::Beta4;
  }
  EXPECT_EQ(zeros, 3);
  EXPECT_EQ(quartic, 1);
}

TEST(Compiler, EmptySequenceHasEmptyPattern) {
  const ModeSpace ms(4);
  const ChainPattern cp = emit_pattern(GateSequence{}, ms);
  EXPECT_EQ(cp.chain.vertices, 1);
  EXPECT_TRUE(cp.pattern.steps.empty());
  Rng rng(1);
  const Vec in = rng.state(4);
  EXPECT_LT((simulate_pattern(cp, in, ms) - in).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Compiler, PatternMatchesDirectApplication) {
  Rng rng(77);
  const ModeSpace ms(16);
  std::vector<GateSequence> corpus;
  corpus.push_back({{{GateKind::Quad, 1.0}}});
  corpus.push_back({{{GateKind::Lin, -0.4}, {GateKind::Had, 0}, {GateKind::Quart, 0.05}, {GateKind::Had, 0}}});
  corpus.push_back(compile_diagonal(Potential::polynomial(0.2, 0.3, 0.4, 0.05), 1e-8, ms).sequence);
  for (const GateSequence& seq : corpus) {
    const ChainPattern cp = emit_pattern(seq, ms);
    EXPECT_LE(cp.pattern.steps.size(), 4 * seq.gates.size() + 1);
    for (int trial = 0; trial < 3; ++trial) {
      const Vec in = rng.state(16);
      EXPECT_LT((simulate_pattern(cp, in, ms) - apply_sequence(seq, ms, in)).norm() / in.norm(), 1e-10);
    }
  }
}

TEST(Compiler, CubicPatternMatchesExactPhaseOnWindow) {
  const ModeSpace ms(16);
  const Potential cubic = Potential::polynomial(0, 0, 1, 0);
  const CompileResult r = compile_diagonal(cubic, 1e-6, ms);
  const ChainPattern cp = emit_pattern(r.sequence, ms);
  Rng rng(4);
  Vec in = Vec::Zero(16);
  for (int j : window_labels(ms, r.report.window)) in(j) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
  const Vec expect = exact_diagonal(cubic, ms).cwiseProduct(in);
  EXPECT_LT(window_distance(simulate_pattern(cp, in, ms), expect, ms, r.report.window), 1e-6);
}

TEST(Compiler, SequenceRoundTripsThroughText) {
  const ModeSpace ms(16);
  const GateSequence seq = compile_diagonal(Potential::polynomial(0.1, 0.2, 0.3, 0.04), 1e-8, ms).sequence;
  std::stringstream io;
  write_sequence(io, seq);
  const GateSequence back = read_sequence(io);
  EXPECT_EQ(back.gates, seq.gates);
  EXPECT_DOUBLE_EQ(back.phase, seq.phase);
  std::istringstream bad("QUAD x\n");
  EXPECT_THROW(read_sequence(bad), std::invalid_argument);
}

}  // namespace
}  // namespace cvlat
