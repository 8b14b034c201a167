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

#include "cvlat/duality.hpp"

#include <cmath>
#include <deque>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace cvlat {

DualizedPotential dual_potential(const Potential& p, const ModeSpace& ms, Convention c) {
  return {apply_hadamard(ms, p.boltzmann(ms, c)), Units{}, p};
}

DualizedModel dualize_model(const Model& m, const ModeSpace& ms) {
  m.validate();
  if (m.has_sites()) throw std::invalid_argument("site terms have no dual");
  const FaceStructure fs = faces(m.graph);
  DualizedModel out;
  out.model.graph = dual(m.graph);
  out.model.convention = m.convention;
  out.model.gauge = m.gauge;
  for (const auto& p : m.edge_potentials)
    out.model.edge_potentials.push_back(Potential::tabulated(dual_potential(p, ms, m.convention).samples));
  const int v = m.graph.vertex_count();
  const int e = m.graph.edge_count();
  const int f = static_cast<int>(fs.faces.size());
  out.constant = Units{2 * (v - f), 2 * v - e - 2};
  return out;
}

GaussianDual gaussian_dual(const Model& m) {
  m.validate();
  if (m.convention != Convention::Real || m.has_sites())
    throw std::invalid_argument("Gaussian duality needs real convention and no site terms");
  if (faces(m.graph).genus != 0) throw std::invalid_argument("Gaussian duality is only planar here");
  GaussianDual out;
  out.model.graph = dual(m.graph);
  out.model.convention = Convention::Real;
  out.model.gauge = m.gauge;
  double prod = 1;
  for (const auto& p : m.edge_potentials) {
    if (p.is_tabulated() || !p.cosines.empty() || p.degree() != 2 || p.coefficient(1) != 0 || !(p.coefficient(2) > 0))
      throw std::invalid_argument("Gaussian duality needs positive quadratic edges");
    const double k = 2 * p.coefficient(2);
    prod *= k;
    out.model.edge_potentials.push_back(Potential::quadratic(1 / k));
  }
  const int v = m.graph.vertex_count(), e = m.graph.edge_count();
  out.prefactor = std::pow(2 * std::numbers::pi, v - 1 - 0.5 * e) / std::sqrt(prod);
  return out;
}

namespace {

Complex evaluate(const Model& m, const ModeSpace& ms) {
  return partition_network(m, ms).value;
}

}  // namespace

double duality_residual(const Model& m, const ModeSpace& ms) { return duality_check(m, ms).plain_residual; }

std::vector<std::vector<int>> homology_flows(const DecoratedGraph& g) {
  const FaceStructure fs = faces(g);
  const int ne = g.edge_count();
  const int nv = g.vertex_count();
  const int nf = static_cast<int>(fs.faces.size());

  // spanning tree of g by BFS, remembering the edge into each vertex
  std::vector<int> parent_edge(nv, -1), depth(nv, -1);
  std::vector<bool> in_tree(ne, false);
  for (int root = 0; root < nv; ++root) {
    if (depth[root] >= 0) continue;
    depth[root] = 0;
    std::deque<int> queue{root};
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (const Dart& d : g.rotation(u)) {
        const int w = g.target(d);
        if (depth[w] >= 0) continue;
        depth[w] = depth[u] + 1;
        parent_edge[w] = d.edge;
        in_tree[d.edge] = true;
        queue.push_back(w);
      }
    }
  }
  // spanning tree of the dual avoiding primal tree edges
  std::vector<std::vector<int>> face_edges(nf);
  for (int e = 0; e < ne; ++e)
    if (!in_tree[e]) {
      face_edges[fs.left_face(e)].push_back(e);
      face_edges[fs.right_face(e)].push_back(e);
    }
  std::vector<bool> seen(nf, false), in_cotree(ne, false);
  for (int root = 0; root < nf; ++root) {
    if (seen[root]) continue;
    seen[root] = true;
    std::deque<int> queue{root};
    while (!queue.empty()) {
      const int f = queue.front();
      queue.pop_front();
      for (int e : face_edges[f]) {
        const int other = fs.left_face(e) == f ? fs.right_face(e) : fs.left_face(e);
        if (seen[other]) continue;
        seen[other] = true;
        in_cotree[e] = true;
        queue.push_back(other);
      }
    }
  }
  std::vector<std::vector<int>> out;
  for (int l = 0; l < ne; ++l) {
    if (in_tree[l] || in_cotree[l]) continue;
    std::vector<int> flow(ne, 0);
    flow[l] = 1;
    // close l through the tree: head(l) back to tail(l)
    int a = g.edge(l).head, b = g.edge(l).tail;
    auto step_up = [&](int& x, int sign) {
      const int e = parent_edge[x];
      const Edge& ed = g.edge(e);
      // moving from x to its parent
      const int parent = ed.tail == x ? ed.head : ed.tail;
      flow[e] += sign * (ed.tail == x ? 1 : -1);
      x = parent;
    };
    while (a != b) {
      if (depth[a] >= depth[b])
        step_up(a, 1);
      else
        step_up(b, -1);
    }
    out.push_back(std::move(flow));
  }
  return out;
}

DualityReport duality_check(const Model& m, const ModeSpace& ms) {
  int pieces = 0;
  components(m.graph, &pieces);
  // each extra component is another free global shift; the face count no longer tracks it
  if (pieces != 1) throw std::invalid_argument("duality check needs a connected graph");
  const DualizedModel d = dualize_model(m, ms);
  const FaceStructure fs = faces(m.graph);
  // Sum phi = 0 mod M meets every shift orbit exactly once only if gcd(n, M) = 1
  if (m.gauge && (std::gcd(m.graph.vertex_count(), ms.size()) != 1 ||
                  std::gcd(static_cast<int>(fs.faces.size()), ms.size()) != 1))
    throw std::invalid_argument("gauge-fixed duality needs vertex and face counts coprime to M");
  DualityReport r;
  r.genus = fs.genus;
  const double c = ms.value(d.constant);
  r.primal = evaluate(m, ms);
  r.dual_plain = c * evaluate(d.model, ms);

  const auto flows = homology_flows(m.graph);
  const int k = static_cast<int>(flows.size());
  std::vector<Vec> tables;
  for (const auto& p : d.model.edge_potentials) tables.push_back(*p.samples);
  std::vector<int> n(k, 0);
  Complex total = 0;
  while (true) {
    std::vector<Vec> shifted = tables;
    for (int e = 0; e < m.graph.edge_count(); ++e) {
      std::int64_t h = 0;
      for (int i = 0; i < k; ++i) h += static_cast<std::int64_t>(n[i]) * flows[i][e];
      if (h == 0) continue;
      for (int y = 0; y < ms.size(); ++y) shifted[e](y) = tables[e](ms.wrap(y + h));
    }
    total += network_sum(d.model, ms, shifted, {});
    int i = 0;
    while (i < k && ++n[i] == ms.size()) n[i++] = 0;
    if (i == k) break;
  }
  // same units as the plain dual evaluation
  const PartitionResult plain = partition_network(d.model, ms);
  r.dual_sectors = c * total * ms.value(plain.units);
  const double scale = std::abs(r.primal);
  if (scale == 0) throw std::domain_error("primal partition function vanishes");
  r.plain_residual = std::abs(r.primal - r.dual_plain) / scale;
  r.sector_residual = std::abs(r.primal - r.dual_sectors) / scale;
  return r;
}

void write_dual_csv(std::ostream& os, const DualizedPotential& d, const ModeSpace& ms) {
  os << "y,re,im\n" << std::setprecision(17);
  for (int j = 0; j < ms.size(); ++j) {
    // ascending y
    const int label = ms.wrap(j - ms.size() / 2);
    os << ms.position(label) << ',' << d.samples(label).real() << ',' << d.samples(label).imag() << '\n';
  }
}

}  // namespace cvlat
