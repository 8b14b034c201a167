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

#include "cvlat/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <stdexcept>

namespace cvlat {

namespace {

int dart_index(Dart d) { return 2 * d.edge + (d.at_tail ? 0 : 1); }
Dart reverse(Dart d) { return {d.edge, !d.at_tail}; }

std::vector<std::vector<Dart>> default_rotation(int vertices, const std::vector<Edge>& edges) {
  if (vertices < 0) throw std::invalid_argument("negative vertex count");
  std::vector<std::vector<Dart>> rot(vertices);
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    for (int v : {edges[e].tail, edges[e].head})
      if (v < 0 || v >= vertices) throw std::invalid_argument("edge " + std::to_string(e) + " has no such endpoint");
    rot.at(edges[e].tail).push_back({e, true});
    rot.at(edges[e].head).push_back({e, false});
  }
  return rot;
}

}  // namespace

DecoratedGraph::DecoratedGraph(int vertices, std::vector<Edge> edges)
    : DecoratedGraph(vertices, edges, default_rotation(vertices, edges)) {}

DecoratedGraph::DecoratedGraph(int vertices, std::vector<Edge> edges, std::vector<std::vector<Dart>> rotation)
    : vertices_(vertices), edges_(std::move(edges)), rotation_(std::move(rotation)) {
  validate();
}

DecoratedGraph DecoratedGraph::from_coordinates(std::vector<std::pair<double, double>> xy, std::vector<Edge> edges) {
  const int n = static_cast<int>(xy.size());
  std::vector<std::vector<std::pair<double, Dart>>> by_angle(n);
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    auto [t, h] = edges[e];
    if (t < 0 || h < 0 || t >= n || h >= n) throw std::invalid_argument("edge " + std::to_string(e) + " has no such endpoint");
    if (t == h) throw std::invalid_argument("coordinate embeddings cannot contain self-loops");
    const double ang_t = std::atan2(xy.at(h).second - xy.at(t).second, xy.at(h).first - xy.at(t).first);
    by_angle.at(t).push_back({ang_t, {e, true}});
    by_angle.at(h).push_back({ang_t + (ang_t > 0 ? -M_PI : M_PI), {e, false}});
  }
  std::vector<std::vector<Dart>> rot(n);
  for (int v = 0; v < n; ++v) {
    std::stable_sort(by_angle[v].begin(), by_angle[v].end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [a, d] : by_angle[v]) rot[v].push_back(d);
  }
  return DecoratedGraph(n, std::move(edges), std::move(rot));
}

void DecoratedGraph::validate() const {
  if (static_cast<int>(rotation_.size()) != vertices_)
    throw std::invalid_argument("rotation system must list every vertex");
  std::vector<int> seen(2 * edges_.size(), 0);
  for (int v = 0; v < vertices_; ++v)
    for (const Dart& d : rotation_[v]) {
      if (d.edge < 0 || d.edge >= edge_count()) throw std::invalid_argument("rotation refers to unknown edge");
      if (origin(d) != v)
        throw std::invalid_argument("edge end of " + edge_name(d.edge) + " listed at wrong vertex " + vertex_name(v));
      ++seen[dart_index(d)];
    }
  for (const Edge& e : edges_)
    if (e.tail < 0 || e.tail >= vertices_ || e.head < 0 || e.head >= vertices_)
      throw std::invalid_argument("edge endpoint out of range");
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (seen[i] != 1) throw std::invalid_argument("edge end of " + edge_name(static_cast<int>(i / 2)) +
                                                  " must appear exactly once in the rotation");
}

void DecoratedGraph::set_vertex_names(std::vector<std::string> names) {
  if (!names.empty() && static_cast<int>(names.size()) != vertices_)
    throw std::invalid_argument("vertex name count mismatch");
  vertex_names_ = std::move(names);
}

void DecoratedGraph::set_edge_names(std::vector<std::string> names) {
  if (!names.empty() && static_cast<int>(names.size()) != edge_count())
    throw std::invalid_argument("edge name count mismatch");
  edge_names_ = std::move(names);
}

std::string DecoratedGraph::vertex_name(int v) const {
  return vertex_names_.empty() ? std::to_string(v) : vertex_names_.at(v);
}

std::string DecoratedGraph::edge_name(int e) const {
  return edge_names_.empty() ? "e" + std::to_string(e) : edge_names_.at(e);
}

std::optional<int> DecoratedGraph::find_vertex(const std::string& name) const {
  for (int v = 0; v < vertices_; ++v)
    if (vertex_name(v) == name) return v;
  return std::nullopt;
}

std::optional<int> DecoratedGraph::find_edge(const std::string& name) const {
  for (int e = 0; e < edge_count(); ++e)
    if (edge_name(e) == name) return e;
  return std::nullopt;
}

double WeightedGraph::weight(int i, int j) const {
  double w = 0;
  for (const auto& e : edges)
    if ((e.a == i && e.b == j) || (e.a == j && e.b == i)) w += e.weight;
  return w;
}

FaceStructure faces(const DecoratedGraph& g) {
  g.validate();
  const int darts = 2 * g.edge_count();
  std::vector<std::pair<int, int>> where(darts);
  for (int v = 0; v < g.vertex_count(); ++v)
    for (int p = 0; p < g.degree(v); ++p) where[dart_index(g.rotation(v)[p])] = {v, p};

  FaceStructure out;
  out.face_of.assign(darts, -1);
  for (int start = 0; start < darts; ++start) {
    if (out.face_of[start] >= 0) continue;
    Face face;
    const int id = static_cast<int>(out.faces.size());
    Dart d{start / 2, start % 2 == 0};
    for (int guard = 0; out.face_of[dart_index(d)] < 0; ++guard) {
      if (guard > darts) throw std::invalid_argument("face tracing did not close");
      out.face_of[dart_index(d)] = id;
      face.darts.push_back(d);
      face.boundary.push_back({d.edge, d.at_tail ? 1 : -1});
      auto [v, p] = where[dart_index(reverse(d))];
      const int deg = g.degree(v);
      d = g.rotation(v)[(p - 1 + deg) % deg];
    }
    if (dart_index(d) != start) throw std::invalid_argument("inconsistent rotation data");
    out.faces.push_back(std::move(face));
  }
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.degree(v) == 0) out.faces.push_back(Face{});
  int comps = 0;
  components(g, &comps);
  out.euler_characteristic = g.vertex_count() - g.edge_count() + static_cast<int>(out.faces.size());
  out.genus = (2 * comps - out.euler_characteristic) / 2;
  return out;
}

DecoratedGraph dual(const DecoratedGraph& g) {
  FaceStructure fs = faces(g);
  const int nf = static_cast<int>(fs.faces.size());
  std::vector<Edge> edges(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) edges[e] = {fs.right_face(e), fs.left_face(e)};
  std::vector<std::vector<Dart>> rot(nf);
  for (int f = 0; f < nf; ++f)
    for (const Dart& d : fs.faces[f].darts) rot[f].push_back({d.edge, !d.at_tail});
  DecoratedGraph out(nf, std::move(edges), std::move(rot));
  std::vector<std::string> names;
  for (int f = 0; f < nf; ++f) names.push_back("f" + std::to_string(f));
  out.set_vertex_names(std::move(names));
  out.set_edge_names(g.edge_names());
  return out;
}

DecoratedGraph reverse_all_orientations(const DecoratedGraph& g) {
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) edges.push_back({e.head, e.tail});
  auto rot = g.rotation();
  for (auto& r : rot)
    for (auto& d : r) d.at_tail = !d.at_tail;
  DecoratedGraph out(g.vertex_count(), std::move(edges), std::move(rot));
  out.set_vertex_names(g.vertex_names());
  out.set_edge_names(g.edge_names());
  return out;
}

bool same_embedding(const DecoratedGraph& a, const DecoratedGraph& b, bool reversed) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
  std::vector<int> map(a.vertex_count(), -1), inv(b.vertex_count(), -1);
  auto bind = [&](int va, int vb) {
    if (map[va] == -1 && inv[vb] == -1) {
      map[va] = vb;
      inv[vb] = va;
      return true;
    }
    return map[va] == vb;
  };
  for (int e = 0; e < a.edge_count(); ++e) {
    const Edge& ea = a.edge(e);
    const Edge& eb = b.edge(e);
    const int bt = reversed ? eb.head : eb.tail;
    const int bh = reversed ? eb.tail : eb.head;
    if (!bind(ea.tail, bt) || !bind(ea.head, bh)) return false;
  }
  for (int v = 0; v < a.vertex_count(); ++v) {
    if (map[v] == -1) continue;
    std::vector<Dart> ra = a.rotation(v);
    for (auto& d : ra) d.at_tail = d.at_tail != reversed;
    const std::vector<Dart>& rb = b.rotation(map[v]);
    if (ra.size() != rb.size()) return false;
    if (ra.empty()) continue;
    auto it = std::find(rb.begin(), rb.end(), ra.front());
    if (it == rb.end()) return false;
    std::vector<Dart> rotated(it, rb.end());
    rotated.insert(rotated.end(), rb.begin(), it);
    if (rotated != ra) return false;
  }
  return true;
}

DecoratedGraph delete_edge(const DecoratedGraph& g, int e) {
  if (e < 0 || e >= g.edge_count()) throw std::invalid_argument("no edge " + std::to_string(e));
  std::vector<Edge> edges;
  std::vector<std::string> names;
  for (int k = 0; k < g.edge_count(); ++k)
    if (k != e) {
      edges.push_back(g.edge(k));
      if (!g.edge_names().empty()) names.push_back(g.edge_name(k));
    }
  auto rot = g.rotation();
  for (auto& r : rot) {
    std::erase_if(r, [e](const Dart& d) { return d.edge == e; });
    for (auto& d : r)
      if (d.edge > e) --d.edge;
  }
  DecoratedGraph out(g.vertex_count(), std::move(edges), std::move(rot));
  out.set_vertex_names(g.vertex_names());
  out.set_edge_names(std::move(names));
  return out;
}

DecoratedGraph merge_edge(const DecoratedGraph& g, int e) {
  if (e < 0 || e >= g.edge_count()) throw std::invalid_argument("no edge " + std::to_string(e));
  const int u = g.edge(e).tail;
  const int v = g.edge(e).head;
  if (u == v) throw std::invalid_argument("cannot merge the endpoints of a self-loop");

  const auto& ru = g.rotation(u);
  const auto& rv = g.rotation(v);
  const auto pu = std::find(ru.begin(), ru.end(), Dart{e, true}) - ru.begin();
  const auto pv = std::find(rv.begin(), rv.end(), Dart{e, false}) - rv.begin();
  std::vector<Dart> merged;
  for (std::size_t k = 0; k < ru.size(); ++k) {
    if (static_cast<std::ptrdiff_t>(k) != pu) {
      merged.push_back(ru[k]);
      continue;
    }
    for (std::size_t s = 1; s < rv.size(); ++s) merged.push_back(rv[(pv + s) % rv.size()]);
  }

  auto renumber_vertex = [v, u](int x) {
    if (x == v) x = u;
    return x > v ? x - 1 : x;
  };
  std::vector<Edge> edges;
  std::vector<std::string> enames;
  for (int k = 0; k < g.edge_count(); ++k)
    if (k != e) {
      edges.push_back({renumber_vertex(g.edge(k).tail), renumber_vertex(g.edge(k).head)});
      if (!g.edge_names().empty()) enames.push_back(g.edge_name(k));
    }
  std::vector<std::vector<Dart>> rot;
  std::vector<std::string> vnames;
  for (int x = 0; x < g.vertex_count(); ++x) {
    if (x == v) continue;
    rot.push_back(x == u ? merged : g.rotation(x));
    if (!g.vertex_names().empty()) vnames.push_back(g.vertex_name(x));
  }
  for (auto& r : rot)
    for (auto& d : r)
      if (d.edge > e) --d.edge;
  DecoratedGraph out(g.vertex_count() - 1, std::move(edges), std::move(rot));
  out.set_vertex_names(std::move(vnames));
  out.set_edge_names(std::move(enames));
  return out;
}

DecoratedGraph add_edge(const DecoratedGraph& g, Edge edge) {
  auto edges = g.edges();
  auto rot = g.rotation();
  const int id = static_cast<int>(edges.size());
  edges.push_back(edge);
  rot.at(edge.tail).push_back({id, true});
  rot.at(edge.head).push_back({id, false});
  DecoratedGraph out(g.vertex_count(), std::move(edges), std::move(rot));
  out.set_vertex_names(g.vertex_names());
  if (!g.edge_names().empty()) {
    auto names = g.edge_names();
    names.push_back("e" + std::to_string(id));
    out.set_edge_names(std::move(names));
  }
  return out;
}

int square_horizontal_edge(int width, int height, bool periodic, int x, int y) {
  (void)height;
  return periodic ? x + width * y : x + (width - 1) * y;
}

int square_vertical_edge(int width, int height, bool periodic, int x, int y) {
  const int horizontal = periodic ? width * height : (width - 1) * height;
  return horizontal + x + width * y;
}

DecoratedGraph square_lattice(int width, int height, bool periodic) {
  if (width < 1 || height < 1) throw std::invalid_argument("lattice dimensions must be positive");
  const int n = width * height;
  std::vector<Edge> edges;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      if (periodic || x + 1 < width) edges.push_back({x + width * y, (x + 1) % width + width * y});
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      if (periodic || y + 1 < height) edges.push_back({x + width * y, x + width * ((y + 1) % height)});
  std::vector<std::vector<Dart>> rot(n);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      auto& r = rot[x + width * y];
      if (periodic || x + 1 < width) r.push_back({square_horizontal_edge(width, height, periodic, x, y), true});
      if (periodic || y + 1 < height) r.push_back({square_vertical_edge(width, height, periodic, x, y), true});
      if (periodic || x > 0)
        r.push_back({square_horizontal_edge(width, height, periodic, (x - 1 + width) % width, y), false});
      if (periodic || y > 0)
        r.push_back({square_vertical_edge(width, height, periodic, x, (y - 1 + height) % height), false});
    }
  DecoratedGraph g(n, std::move(edges), std::move(rot));
  std::vector<std::string> names;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) names.push_back(std::to_string(x) + "," + std::to_string(y));
  g.set_vertex_names(std::move(names));
  return g;
}

std::vector<int> brick_edges(int width, int height) {
  if (height % 2 != 0) throw std::invalid_argument("brick pattern needs an even height");
  std::vector<int> out;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      if ((x + y) % 2 == 0) out.push_back(square_vertical_edge(width, height, true, x, y));
  return out;
}

ShapeSummary shape_summary(const DecoratedGraph& g) {
  ShapeSummary s;
  const FaceStructure fs = faces(g);
  s.genus = fs.genus;
  for (const Face& f : fs.faces) ++s.face_sizes[static_cast<int>(f.boundary.size())];
  for (int v = 0; v < g.vertex_count(); ++v) ++s.degrees[g.degree(v)];
  std::set<std::pair<int, int>> seen;
  for (const Edge& e : g.edges()) {
    if (e.tail == e.head || !seen.insert(std::minmax(e.tail, e.head)).second) s.simple = false;
  }
  return s;
}

std::vector<int> components(const DecoratedGraph& g, int* count) {
  std::vector<int> parent(g.vertex_count());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Edge& e : g.edges()) parent[find(e.tail)] = find(e.head);
  std::map<int, int> label;
  std::vector<int> out(g.vertex_count());
  for (int v = 0; v < g.vertex_count(); ++v) {
    auto [it, fresh] = label.emplace(find(v), static_cast<int>(label.size()));
    out[v] = it->second;
  }
  if (count) *count = static_cast<int>(label.size());
  return out;
}

LoopTopology loop_is_trivial(const DecoratedGraph& g, const std::vector<DualStep>& loop) {
  FaceStructure fs = faces(g);
  auto start_of = [&](const DualStep& s) { return s.forward ? fs.right_face(s.edge) : fs.left_face(s.edge); };
  auto end_of = [&](const DualStep& s) { return s.forward ? fs.left_face(s.edge) : fs.right_face(s.edge); };
  for (std::size_t k = 0; k < loop.size(); ++k) {
    if (loop[k].edge < 0 || loop[k].edge >= g.edge_count()) throw std::invalid_argument("loop uses unknown edge");
    if (end_of(loop[k]) != start_of(loop[(k + 1) % loop.size()]))
      throw std::invalid_argument("dual loop is not a closed walk at step " + std::to_string(k));
  }
  std::vector<int> chain(g.edge_count(), 0);
  for (const auto& s : loop) chain[s.edge] += s.forward ? 1 : -1;

  LoopTopology out;
  const int n = g.vertex_count();
  std::vector<int> potential(n, 0);
  std::vector<bool> seen(n, false);
  std::vector<std::vector<std::pair<int, int>>> adj(n);
  for (int e = 0; e < g.edge_count(); ++e) {
    adj[g.edge(e).tail].push_back({e, g.edge(e).head});
    adj[g.edge(e).head].push_back({e, g.edge(e).tail});
  }
  out.trivial = true;
  for (int root = 0; root < n; ++root) {
    if (seen[root]) continue;
    std::vector<int> members{root};
    seen[root] = true;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      for (auto [e, y] : adj[x]) {
        const int want = g.edge(e).tail == x ? potential[x] - chain[e] : potential[x] + chain[e];
        if (!seen[y]) {
          seen[y] = true;
          potential[y] = want;
          members.push_back(y);
          q.push(y);
        } else if (potential[y] != want) {
          out.trivial = false;
        }
      }
    }
    std::map<int, int> freq;
    for (int x : members) ++freq[potential[x]];
    int base = potential[root], best = -1;
    for (auto [value, count] : freq)
      if (count > best) best = count, base = value;
    for (int x : members) potential[x] -= base;
  }
  if (!out.trivial) return out;
  out.multiplicity = potential;
  for (int v = 0; v < n; ++v)
    if (potential[v] != 0) out.enclosed.push_back(v);
  return out;
}

std::vector<DualStep> dual_loop_around(const DecoratedGraph& g, int v) {
  std::vector<DualStep> out;
  for (const Dart& d : g.rotation(v)) out.push_back({d.edge, d.at_tail});
  return out;
}

}  // namespace cvlat
