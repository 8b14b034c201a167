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

#ifndef CVLAT_GRAPHS_HPP
#define CVLAT_GRAPHS_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cvlat {

struct Edge {
  int tail = 0;
  int head = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// One end of an edge as seen from the vertex it is attached to.
struct Dart {
  int edge = 0;
  bool at_tail = true;
  friend bool operator==(const Dart&, const Dart&) = default;
};

/// Oriented multigraph with a rotation system: rotation[v] lists the darts
/// at v in counter-clockwise order.
class DecoratedGraph {
 public:
  DecoratedGraph() = default;
  /// Rotation defaults to edge order at every vertex.
  DecoratedGraph(int vertices, std::vector<Edge> edges);
  DecoratedGraph(int vertices, std::vector<Edge> edges, std::vector<std::vector<Dart>> rotation);
  /// Planar embedding read off from straight-line vertex coordinates.
  static DecoratedGraph from_coordinates(std::vector<std::pair<double, double>> xy, std::vector<Edge> edges);

  int vertex_count() const { return vertices_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_.at(e); }
  const std::vector<std::vector<Dart>>& rotation() const { return rotation_; }
  const std::vector<Dart>& rotation(int v) const { return rotation_.at(v); }

  int origin(Dart d) const { return d.at_tail ? edges_[d.edge].tail : edges_[d.edge].head; }
  int target(Dart d) const { return d.at_tail ? edges_[d.edge].head : edges_[d.edge].tail; }
  int degree(int v) const { return static_cast<int>(rotation_.at(v).size()); }

  const std::vector<std::string>& vertex_names() const { return vertex_names_; }
  const std::vector<std::string>& edge_names() const { return edge_names_; }
  void set_vertex_names(std::vector<std::string> names);
  void set_edge_names(std::vector<std::string> names);
  std::string vertex_name(int v) const;
  std::string edge_name(int e) const;
  std::optional<int> find_vertex(const std::string& name) const;
  std::optional<int> find_edge(const std::string& name) const;

  /// Throws std::invalid_argument on inconsistent rotation data.
  void validate() const;

 private:
  int vertices_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Dart>> rotation_;
  std::vector<std::string> vertex_names_;
  std::vector<std::string> edge_names_;
};

struct WeightedEdge {
  int a = 0;
  int b = 0;
  double weight = 0;
};

/// Undirected graph with symmetric real weights.
struct WeightedGraph {
  int vertices = 0;
  std::vector<WeightedEdge> edges;

  double weight(int i, int j) const;
};

struct SignedEdge {
  int edge = 0;
  int sign = 1;  // +1 when traversed from tail to head
  friend bool operator==(const SignedEdge&, const SignedEdge&) = default;
};

/// Boundary walk of one face, traced with the face on the left.
struct Face {
  std::vector<SignedEdge> boundary;
  std::vector<Dart> darts;
};

struct FaceStructure {
  std::vector<Face> faces;
  /// face_of[2e + (at_tail ? 0 : 1)] is the face left of that dart.
  std::vector<int> face_of;
  int euler_characteristic = 0;
  int genus = 0;

  int left_face(int e) const { return face_of[2 * e]; }
  int right_face(int e) const { return face_of[2 * e + 1]; }
};

FaceStructure faces(const DecoratedGraph& g);

/// Dual graph: vertex f per face, edge e crosses e from its right face to its
/// left face so that (e, dual e) is right handed. Edge indices are shared.
DecoratedGraph dual(const DecoratedGraph& g);

DecoratedGraph reverse_all_orientations(const DecoratedGraph& g);

/// True when the two embeddings agree under some vertex bijection that keeps
/// edge indices; with reversed = true every edge of b must be reversed.
bool same_embedding(const DecoratedGraph& a, const DecoratedGraph& b, bool reversed = false);

DecoratedGraph delete_edge(const DecoratedGraph& g, int e);
/// Contracts e, joining its head into its tail. Parallel edges become
/// self-loops and are kept.
DecoratedGraph merge_edge(const DecoratedGraph& g, int e);
/// Adds an edge at the end of both rotations.
DecoratedGraph add_edge(const DecoratedGraph& g, Edge edge);

/// width x height square lattice; vertex (x, y) has index x + width y,
/// horizontal edge (x, y) -> (x+1, y) and vertical edge (x, y) -> (x, y+1).
DecoratedGraph square_lattice(int width, int height, bool periodic);
int square_horizontal_edge(int width, int height, bool periodic, int x, int y);
int square_vertical_edge(int width, int height, bool periodic, int x, int y);

/// Vertical edges removed (or merged) in the brick pattern that turns the
/// periodic square lattice into the hexagonal (or triangular) one.
std::vector<int> brick_edges(int width, int height);

/// Face-size and vertex-degree histograms, for recognising lattices.
struct ShapeSummary {
  std::map<int, int> face_sizes;
  std::map<int, int> degrees;
  int genus = 0;
  bool simple = true;  // no loops or parallel edges
};
ShapeSummary shape_summary(const DecoratedGraph& g);

/// A step of a closed walk on the dual graph: the dual of edge `edge`,
/// traversed along (forward) or against its dual orientation.
struct DualStep {
  int edge = 0;
  bool forward = true;
};

struct LoopTopology {
  bool trivial = false;
  /// Multiplicity n_v of each primal vertex; the loop operator is the
  /// product of A_v^(n_v).
  std::vector<int> multiplicity;
  std::vector<int> enclosed;
};

/// Throws std::invalid_argument when the steps are not a closed walk.
LoopTopology loop_is_trivial(const DecoratedGraph& g, const std::vector<DualStep>& loop);

/// Counter-clockwise dual loop around one primal vertex.
std::vector<DualStep> dual_loop_around(const DecoratedGraph& g, int v);

/// Connected components by vertex.
std::vector<int> components(const DecoratedGraph& g, int* count = nullptr);

}  // namespace cvlat

#endif
