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

#include <algorithm>
#include <set>

#include "cvlat/graphs.hpp"
#include "test_support.hpp"

namespace cvlat {
namespace {

std::multiset<std::pair<int, int>> edge_multiset(const DecoratedGraph& g) {
  std::multiset<std::pair<int, int>> s;
  for (const Edge& e : g.edges()) s.insert({e.tail, e.head});
  return s;
}

std::set<int> edge_set(const Face& f) {
  std::set<int> s;
  for (const auto& b : f.boundary) s.insert(b.edge);
  return s;
}

// Closed dual walk around a vertex set, chained face to face.
std::vector<DualStep> loop_around(const DecoratedGraph& g, const std::set<int>& region) {
  const FaceStructure fs = faces(g);
  std::vector<DualStep> pool;
  for (int e = 0; e < g.edge_count(); ++e) {
    const bool t = region.count(g.edge(e).tail), h = region.count(g.edge(e).head);
    if (t != h) pool.push_back({e, t});
  }
  auto start = [&](const DualStep& s) { return s.forward ? fs.right_face(s.edge) : fs.left_face(s.edge); };
  auto end = [&](const DualStep& s) { return s.forward ? fs.left_face(s.edge) : fs.right_face(s.edge); };
  std::vector<DualStep> walk{pool.front()};
  pool.erase(pool.begin());
  while (!pool.empty()) {
    auto it = std::find_if(pool.begin(), pool.end(), [&](const DualStep& s) { return start(s) == end(walk.back()); });
    if (it == pool.end()) break;
    walk.push_back(*it);
    pool.erase(it);
  }
  return walk;
}

TEST(Graphs, TorusSquareLatticeHasEulerCharacteristicZero) {
  const FaceStructure fs = faces(square_lattice(2, 2, true));
  EXPECT_EQ(fs.faces.size(), 4u);
  EXPECT_EQ(fs.euler_characteristic, 0);
  EXPECT_EQ(fs.genus, 1);
}

TEST(Graphs, SingleSquareHasInnerAndOuterFace) {
  const DecoratedGraph g =
      DecoratedGraph::from_coordinates({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1}, {1, 2}, {2, 3}, {3, 0}});
  const FaceStructure fs = faces(g);
  EXPECT_EQ(fs.faces.size(), 2u);
  EXPECT_EQ(fs.genus, 0);
  for (const Face& f : fs.faces) EXPECT_EQ(f.boundary.size(), 4u);
}

TEST(Graphs, FigureFourFaces) {
  const DecoratedGraph g = testing::figure4_graph();
  const FaceStructure fs = faces(g);
  ASSERT_EQ(fs.faces.size(), 3u);
  EXPECT_EQ(fs.genus, 0);
  // face I is bounded by e, a, d and face II by c, b, e
  const std::set<int> one{4, 0, 3}, two{2, 1, 4};
  int hits = 0;
  for (const Face& f : fs.faces) hits += edge_set(f) == one || edge_set(f) == two;
  EXPECT_EQ(hits, 2);
}

TEST(Graphs, FaceBoundarySignsCloseUp) {
  // walking a face boundary returns to the start vertex
  const DecoratedGraph g = square_lattice(3, 3, true);
  for (const Face& f : faces(g).faces) {
    std::vector<int> net(g.vertex_count(), 0);
    for (const auto& b : f.boundary) {
      net[g.edge(b.edge).tail] -= b.sign;
      net[g.edge(b.edge).head] += b.sign;
    }
    EXPECT_TRUE(std::all_of(net.begin(), net.end(), [](int x) { return x == 0; }));
  }
}

TEST(Graphs, SquareTorusIsSelfDual) {
  const DecoratedGraph g = square_lattice(3, 3, true);
  const DecoratedGraph d = dual(g);
  const ShapeSummary s = shape_summary(d);
  EXPECT_EQ(d.vertex_count(), 9);
  EXPECT_EQ(d.edge_count(), 18);
  EXPECT_EQ(s.degrees, (std::map<int, int>{{4, 9}}));
  EXPECT_EQ(s.face_sizes, (std::map<int, int>{{4, 9}}));
}

TEST(Graphs, BrickSurgeryGivesHexagonalAndTriangular) {
  const DecoratedGraph square = square_lattice(4, 4, true);
  std::vector<int> brick = brick_edges(4, 4);
  std::sort(brick.rbegin(), brick.rend());
  DecoratedGraph hex = square, tri = square;
  for (int e : brick) hex = delete_edge(hex, e);
  for (int e : brick) tri = merge_edge(tri, e);
  const ShapeSummary h = shape_summary(hex), t = shape_summary(tri);
  EXPECT_EQ(h.degrees, (std::map<int, int>{{3, 16}}));
  EXPECT_EQ(h.face_sizes, (std::map<int, int>{{6, 8}}));
  EXPECT_TRUE(h.simple);
  EXPECT_EQ(t.degrees, (std::map<int, int>{{6, 8}}));
  EXPECT_EQ(t.face_sizes, (std::map<int, int>{{3, 16}}));
  EXPECT_EQ(h.genus, 1);
  EXPECT_EQ(t.genus, 1);

  // and the two are dual to each other
  const ShapeSummary dh = shape_summary(dual(hex));
  EXPECT_EQ(dh.degrees, (std::map<int, int>{{6, 8}}));
  EXPECT_EQ(dh.face_sizes, (std::map<int, int>{{3, 16}}));
  const ShapeSummary dt = shape_summary(dual(tri));
  EXPECT_EQ(dt.degrees, (std::map<int, int>{{3, 16}}));
  EXPECT_EQ(dt.face_sizes, (std::map<int, int>{{6, 8}}));
}

TEST(Graphs, DoubleDualReversesOrientation) {
  std::vector<DecoratedGraph> corpus{testing::figure4_graph(), square_lattice(2, 2, true), square_lattice(3, 2, true),
                                     square_lattice(3, 3, false)};
  testing::Rng rng(21);
  for (int k = 0; k < 10; ++k) corpus.push_back(testing::random_graph(rng, 5, 7));
  for (const auto& g : corpus) {
    const DecoratedGraph dd = dual(dual(g));
    EXPECT_TRUE(same_embedding(dd, reverse_all_orientations(g)));
    EXPECT_TRUE(same_embedding(dd, g, true));
  }
}

TEST(Graphs, DeleteThenReaddRestoresEdges) {
  const DecoratedGraph g = testing::figure4_graph();
  for (int e = 0; e < g.edge_count(); ++e) {
    const DecoratedGraph back = add_edge(delete_edge(g, e), g.edge(e));
    EXPECT_EQ(edge_multiset(back), edge_multiset(g));
    EXPECT_EQ(back.vertex_count(), g.vertex_count());
  }
}

TEST(Graphs, MergeJoinsEndpoints) {
  const DecoratedGraph tri(3, {{0, 1}, {1, 2}, {2, 0}});
  const DecoratedGraph m = merge_edge(tri, 0);
  EXPECT_EQ(m.vertex_count(), 2);
  EXPECT_EQ(m.edge_count(), 2);
  for (const Edge& e : m.edges()) EXPECT_NE(e.tail, e.head);
}

TEST(Graphs, RotationValidation) {
  EXPECT_THROW(DecoratedGraph(2, {{0, 1}}, {{{0, true}}, {}}), std::invalid_argument);
  EXPECT_THROW(DecoratedGraph(2, {{0, 2}}), std::invalid_argument);
}

TEST(Graphs, LoopAroundVertexIsTrivial) {
  const DecoratedGraph g = square_lattice(3, 3, true);
  for (int v : {0, 4, 8}) {
    const LoopTopology t = loop_is_trivial(g, dual_loop_around(g, v));
    EXPECT_TRUE(t.trivial);
    EXPECT_EQ(t.enclosed, std::vector<int>{v});
  }
}

TEST(Graphs, NonContractibleLoopIsNotTrivial) {
  const int w = 3, h = 3;
  const DecoratedGraph g = square_lattice(w, h, true);
  std::vector<DualStep> loop;
  for (int x = w - 1; x >= 0; --x) loop.push_back({square_vertical_edge(w, h, true, x, 0), true});
  EXPECT_FALSE(loop_is_trivial(g, loop).trivial);
}

TEST(Graphs, RegionBoundaryEnclosesRegion) {
  const DecoratedGraph g = square_lattice(4, 4, true);
  const std::set<int> region{5, 6, 10};
  const auto loop = loop_around(g, region);
  const LoopTopology t = loop_is_trivial(g, loop);
  ASSERT_TRUE(t.trivial);
  EXPECT_EQ(std::set<int>(t.enclosed.begin(), t.enclosed.end()), region);
}

TEST(Graphs, OpenWalkIsRejected) {
  const DecoratedGraph g = square_lattice(3, 3, true);
  auto loop = dual_loop_around(g, 0);
  loop.pop_back();
  EXPECT_THROW(loop_is_trivial(g, loop), std::invalid_argument);
}

TEST(Graphs, ComponentsCount) {
  int count = 0;
  components(DecoratedGraph(5, {{0, 1}, {2, 3}}), &count);
  EXPECT_EQ(count, 3);
}

}  // namespace
}  // namespace cvlat
