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

#include "cvlat/states.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cvlat/multimode.hpp"

namespace cvlat {

int LatticeState::position_of(ModeTag tag) const {
  auto it = std::find(modes.begin(), modes.end(), tag);
  if (it == modes.end()) throw std::invalid_argument("state has no such mode");
  return static_cast<int>(it - modes.begin());
}

namespace {

// Visits every field configuration in lexicographic order (vertex 0 fastest).
template <class F>
void for_each_field(int vertices, int m, F&& f) {
  std::vector<int> phi(vertices, 0);
  while (true) {
    f(phi);
    int k = 0;
    while (k < vertices && ++phi[k] == m) phi[k++] = 0;
    if (k == vertices) return;
  }
}

LatticeState build_kitaev(const DecoratedGraph& g, const ModeSpace& ms, bool gauge, bool with_vertices) {
  const int m = ms.size();
  const int ne = g.edge_count();
  const int nv = g.vertex_count();
  const int modes = ne + (with_vertices ? nv : 0);
  dense_size(ms, nv);
  LatticeState out;
  out.m = m;
  out.amplitudes = Vec::Zero(static_cast<Eigen::Index>(dense_size(ms, modes)));
  for (int e = 0; e < ne; ++e) out.modes.push_back(edge_mode(e));
  if (with_vertices)
    for (int v = 0; v < nv; ++v) out.modes.push_back(vertex_mode(v));
  std::vector<std::int64_t> stride(modes);
  for (int k = 0; k < modes; ++k) stride[k] = mode_stride(m, k);
  for_each_field(nv, m, [&](const std::vector<int>& phi) {
    if (gauge) {
      std::int64_t s = 0;
      for (int x : phi) s += x;
      if (s % m != 0) return;
    }
    std::int64_t idx = 0;
    for (int e = 0; e < ne; ++e) idx += ms.wrap(phi[g.edge(e).tail] - phi[g.edge(e).head]) * stride[e];
    if (with_vertices)
      for (int v = 0; v < nv; ++v) idx += phi[v] * stride[ne + v];
    out.amplitudes(idx) += 1.0;
  });
  // integral over fields gives delta^|V|, each continuum ket delta^(-1/2)
  out.units = Units::delta(2 * nv - modes - (gauge ? 2 : 0));
  return out;
}

}  // namespace

LatticeState kitaev_state(const DecoratedGraph& g, const ModeSpace& ms) { return build_kitaev(g, ms, false, false); }

LatticeState gauge_fixed_kitaev(const DecoratedGraph& g, const ModeSpace& ms) {
  return build_kitaev(g, ms, true, false);
}

LatticeState extended_kitaev_state(const DecoratedGraph& g, const ModeSpace& ms, bool gauge) {
  return build_kitaev(g, ms, gauge, true);
}

LatticeState weighted_graph_state(const WeightedGraph& wg, const ModeSpace& ms) {
  const int m = ms.size();
  const int n = wg.vertices;
  LatticeState out;
  out.m = m;
  out.amplitudes = Vec::Constant(static_cast<Eigen::Index>(dense_size(ms, n)), std::pow(m, -0.5 * n));
  for (int v = 0; v < n; ++v) out.modes.push_back(vertex_mode(v));
  std::vector<int> labels(n);
  for (const auto& e : wg.edges) {
    if (e.a == e.b) throw std::invalid_argument("weighted graph edges must join distinct vertices");
    if (!is_exact_weight(e.weight)) out.layer = Layer::Quadrature;
  }
  for (Eigen::Index idx = 0; idx < out.amplitudes.size(); ++idx) {
    decode_labels(idx, m, labels);
    Complex phase = 1;
    for (const auto& e : wg.edges) {
      if (is_exact_weight(e.weight))
        phase *= ms.omega(std::llround(e.weight) * labels[e.a] * labels[e.b]);
      else
        phase *= std::polar(1.0, e.weight * ms.position(labels[e.a]) * ms.position(labels[e.b]));
    }
    out.amplitudes(idx) *= phase;
  }
  out.units = Units::delta(-n);
  return out;
}

NullifierTableau kitaev_nullifiers(const DecoratedGraph& g) {
  NullifierTableau tab;
  const int ne = g.edge_count();
  for (int e = 0; e < ne; ++e) tab.modes.push_back(edge_mode(e));
  for (int v = 0; v < g.vertex_count(); ++v) {
    Generator gen{"A_" + g.vertex_name(v), std::vector<int>(ne, 0), std::vector<int>(ne, 0)};
    for (int e = 0; e < ne; ++e) {
      if (g.edge(e).tail == v) gen.x[e] += 1;
      if (g.edge(e).head == v) gen.x[e] -= 1;
    }
    tab.generators.push_back(std::move(gen));
  }
  FaceStructure fs = faces(g);
  for (std::size_t f = 0; f < fs.faces.size(); ++f) {
    if (fs.faces[f].boundary.empty()) continue;
    Generator gen{"B_f" + std::to_string(f), std::vector<int>(ne, 0), std::vector<int>(ne, 0)};
    for (const auto& s : fs.faces[f].boundary) gen.z[s.edge] += s.sign;
    tab.generators.push_back(std::move(gen));
  }
  return tab;
}

NullifierTableau extended_nullifiers(const DecoratedGraph& g) {
  NullifierTableau tab;
  const int ne = g.edge_count();
  const int n = ne + g.vertex_count();
  for (int e = 0; e < ne; ++e) tab.modes.push_back(edge_mode(e));
  for (int v = 0; v < g.vertex_count(); ++v) tab.modes.push_back(vertex_mode(v));
  for (int v = 0; v < g.vertex_count(); ++v) {
    Generator gen{"C_" + g.vertex_name(v), std::vector<int>(n, 0), std::vector<int>(n, 0)};
    gen.x[ne + v] = 1;
    for (int e = 0; e < ne; ++e) {
      if (g.edge(e).tail == v) gen.x[e] += 1;
      if (g.edge(e).head == v) gen.x[e] -= 1;
    }
    tab.generators.push_back(std::move(gen));
  }
  for (int e = 0; e < ne; ++e) {
    Generator gen{"D_" + g.edge_name(e), std::vector<int>(n, 0), std::vector<int>(n, 0)};
    gen.z[e] = -1;
    gen.z[ne + g.edge(e).tail] += 1;
    gen.z[ne + g.edge(e).head] -= 1;
    tab.generators.push_back(std::move(gen));
  }
  return tab;
}

NullifierTableau weighted_nullifiers(const WeightedGraph& wg) {
  NullifierTableau tab;
  const int n = wg.vertices;
  for (int v = 0; v < n; ++v) tab.modes.push_back(vertex_mode(v));
  for (int i = 0; i < n; ++i) {
    Generator gen{"K_" + std::to_string(i), std::vector<int>(n, 0), std::vector<int>(n, 0)};
    gen.x[i] = 1;
    for (const auto& e : wg.edges) {
      if (!is_exact_weight(e.weight)) throw std::invalid_argument("integer weights required for the exact layer");
      const int w = static_cast<int>(std::llround(e.weight));
      if (e.a == i) gen.z[e.b] += w;
      if (e.b == i) gen.z[e.a] += w;
    }
    tab.generators.push_back(std::move(gen));
  }
  return tab;
}

std::string describe(const Generator& gen, const NullifierTableau& tab, const DecoratedGraph* g) {
  std::ostringstream out;
  auto name = [&](std::size_t k) {
    const ModeTag& t = tab.modes[k];
    if (!g) return std::string(t.kind == ModeTag::Kind::Edge ? "e" : "v") + std::to_string(t.index);
    return t.kind == ModeTag::Kind::Edge ? g->edge_name(t.index) : g->vertex_name(t.index);
  };
  bool first = true;
  auto term = [&](char op, std::size_t k, int power) {
    if (power == 0) return;
    out << (first ? "" : " ") << op << '_' << name(k);
    if (power != 1) out << '^' << power;
    first = false;
  };
  for (std::size_t k = 0; k < tab.modes.size(); ++k) term('X', k, gen.x[k]);
  for (std::size_t k = 0; k < tab.modes.size(); ++k) term('Z', k, gen.z[k]);
  if (first) out << "I";
  return out.str();
}

Vec apply_generator(const LatticeState& state, const NullifierTableau& tab, const Generator& gen, int a) {
  const int m = state.m;
  const int n = state.mode_count();
  std::vector<int> shift(n, 0), phase(n, 0);
  for (std::size_t k = 0; k < tab.modes.size(); ++k) {
    if (gen.x[k] == 0 && gen.z[k] == 0) continue;
    const int p = state.position_of(tab.modes[k]);
    shift[p] = gen.x[k];
    phase[p] = gen.z[k];
  }
  const ModeSpace ms(m);
  Vec out = Vec::Zero(state.amplitudes.size());
  std::vector<int> labels(n);
  for (Eigen::Index idx = 0; idx < state.amplitudes.size(); ++idx) {
    const Complex amp = state.amplitudes(idx);
    if (amp == Complex(0)) continue;
    decode_labels(idx, m, labels);
    std::int64_t ph = 0, target = 0;
    for (int k = n - 1; k >= 0; --k) {
      ph += static_cast<std::int64_t>(a) * phase[k] * labels[k];
      target = target * m + ms.wrap(labels[k] + static_cast<std::int64_t>(a) * shift[k]);
    }
    out(target) += ms.omega(ph) * amp;
  }
  return out;
}

double verify_stabilizer(const LatticeState& state, const NullifierTableau& tab, const Generator& gen, int a) {
  if (gen.x.size() != tab.modes.size() || gen.z.size() != tab.modes.size())
    throw std::invalid_argument("generator does not match tableau modes");
  const double norm = state.amplitudes.norm();
  if (norm == 0) throw std::invalid_argument("zero state");
  return (apply_generator(state, tab, gen, a) - state.amplitudes).norm() / norm;
}

std::string projector_name(Projector p) {
  switch (p) {
    case Projector::MomentumZero: return "momentum-zero";
    case Projector::CoordinateZero: return "coordinate-zero";
    case Projector::Beta1: return "beta1";
    case Projector::Beta2: return "beta2";
    case Projector::Beta4: return "beta4";
    case Projector::Plus: return "plus";
    case Projector::Minus: return "minus";
  }
  return "?";
}

Projector parse_projector(const std::string& name) {
  for (Projector p : {Projector::MomentumZero, Projector::CoordinateZero, Projector::Beta1, Projector::Beta2,
                      Projector::Beta4, Projector::Plus, Projector::Minus})
    if (projector_name(p) == name) return p;
  throw std::invalid_argument("unknown projector '" + name + "'");
}

ModeVector projector_bra(const ModeSpace& ms, Projector p, double t) {
  switch (p) {
    case Projector::MomentumZero: return momentum_zero_state(ms);
    case Projector::CoordinateZero: return coordinate_zero_bra(ms);
    case Projector::Beta1: return beta_projector(ms, 1, t);
    case Projector::Beta2: return beta_projector(ms, 2, t);
    case Projector::Beta4: return beta_projector(ms, 4, t);
    case Projector::Plus: return beta_projector(ms, 2, 0.5);
    case Projector::Minus: return beta_projector(ms, 2, -0.5);
  }
  throw std::invalid_argument("bad projector");
}

LatticeState project_mode(const LatticeState& state, ModeTag mode, const ModeVector& bra) {
  const int p = state.position_of(mode);
  LatticeState out;
  out.m = state.m;
  out.layer = state.layer;
  out.amplitudes = contract_mode(state.amplitudes, state.m, state.mode_count(), p, bra.amplitudes);
  out.modes = state.modes;
  out.modes.erase(out.modes.begin() + p);
  out.units = state.units * bra.units;
  return out;
}

ProjectionResult project(const LatticeState& state, const MeasurementPattern& pattern, const ModeSpace& ms) {
  for (std::size_t i = 0; i < pattern.steps.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (pattern.steps[i].mode == pattern.steps[j].mode)
        throw std::invalid_argument("pattern projects the same mode twice");
  ProjectionResult out{state, {0, 0}};
  for (const auto& step : pattern.steps) out.state = project_mode(out.state, step.mode, projector_bra(ms, step.kind, step.t));
  out.state.amplitudes *= pattern.constant;
  if (out.state.modes.empty()) out.scalar = out.state.amplitudes(0) * ms.value(out.state.units);
  return out;
}

double state_distance(const LatticeState& a, const LatticeState& b, const ModeSpace& ms) {
  if (a.amplitudes.size() != b.amplitudes.size()) throw std::invalid_argument("states have different sizes");
  const Vec va = a.amplitudes * ms.value(a.units);
  const Vec vb = b.amplitudes * ms.value(b.units);
  const double scale = std::max(va.norm(), vb.norm());
  return scale == 0 ? 0 : (va - vb).norm() / scale;
}

double surgery_state_check(const DecoratedGraph& g, int e, SurgeryBasis basis, const ModeSpace& ms) {
  LatticeState full = kitaev_state(g, ms);
  const bool momentum = basis == SurgeryBasis::Momentum;
  ModeVector bra = momentum ? momentum_zero_state(ms) : coordinate_zero_bra(ms);
  LatticeState projected = project_mode(full, edge_mode(e), bra);
  LatticeState expected = kitaev_state(momentum ? delete_edge(g, e) : merge_edge(g, e), ms);
  if (momentum) expected.units *= Units::two_pi(-1);
  return state_distance(projected, expected, ms);
}

}  // namespace cvlat
