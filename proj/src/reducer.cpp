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

#include "cvlat/reducer.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <iomanip>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>

#include "cvlat/multimode.hpp"

namespace cvlat {

ReducibleModel to_reducible(const Model& m) {
  m.validate();
  ReducibleModel r;
  r.variables = m.graph.vertex_count();
  if (m.has_sites()) r.sites = m.site_potentials;
  for (int e = 0; e < m.graph.edge_count(); ++e)
    r.terms.push_back({{m.graph.edge(e).tail, m.graph.edge(e).head}, {1, -1}, m.edge_potentials[e]});
  return r;
}

namespace {

// combined coefficient per variable, zeros dropped
std::map<int, int> term_coefficients(const Term& t) {
  if (t.vars.size() != t.signs.size()) throw std::invalid_argument("term variables and signs differ in length");
  std::map<int, int> c;
  for (std::size_t k = 0; k < t.vars.size(); ++k) c[t.vars[k]] += t.signs[k];
  for (auto it = c.begin(); it != c.end();) it = it->second == 0 ? c.erase(it) : std::next(it);
  return c;
}

}  // namespace

PartitionResult reducible_partition(const ReducibleModel& m, const ModeSpace& ms) {
  FactorNetwork net(m.variables, ms.size());
  Complex scalar = 1;
  for (const auto& t : m.terms) {
    const Vec b = t.potential.boltzmann(ms, Convention::Imaginary);
    const auto c = term_coefficients(t);
    if (c.empty()) {
      scalar *= b(0);
      continue;
    }
    std::vector<int> vars, signs;
    for (auto [v, s] : c) {
      vars.push_back(v);
      signs.push_back(s);
    }
    net.add_signed_sum(vars, signs, b);
  }
  for (std::size_t v = 0; v < m.sites.size(); ++v)
    if (!m.sites[v].is_zero()) net.add_unary(static_cast<int>(v), m.sites[v].boltzmann(ms, Convention::Imaginary));
  PartitionResult r;
  r.raw = scalar * net.sum();
  r.units = Units::delta(2 * m.variables);
  r.value = r.raw * ms.value(r.units);
  r.m = ms.size();
  r.delta = ms.spacing();
  r.method = "network";
  return r;
}

DecoratedGraph Phi4Model::lattice() const { return square_lattice(width, height, true); }

std::string action_name(EdgeAction a) {
  switch (a) {
    case EdgeAction::Delete: return "delete";
    case EdgeAction::Merge: return "merge";
    case EdgeAction::Keep: return "keep";
  }
  return "?";
}

int EmbeddingPlan::kept_count() const {
  return static_cast<int>(std::count(action.begin(), action.end(), EdgeAction::Keep));
}

namespace {

struct Router {
  int w, h;
  DecoratedGraph lattice;
  std::vector<std::vector<std::pair<int, int>>> nbr;  // (site, lattice edge)

  Router(int width, int height) : w(width), h(height), lattice(square_lattice(width, height, true)) {
    nbr.resize(w * h);
    for (int e = 0; e < lattice.edge_count(); ++e) {
      const Edge& ed = lattice.edge(e);
      nbr[ed.tail].push_back({ed.head, e});
      nbr[ed.head].push_back({ed.tail, e});
    }
  }

  // Places vertices in the given order on a grid of pitch `pitch`, then
  // routes edges one by one through free sites: edges in `first` go
  // before the rest, which go shortest first. Returns the edge that
  // could not be routed, or -1.
  int route(const DecoratedGraph& g, const std::vector<int>& order, int pitch, const std::vector<int>& first,
            EmbeddingPlan& plan) const {
    const int n = g.vertex_count();
    const int per_row = w / pitch;
    plan = {};
    plan.width = w;
    plan.height = h;
    plan.node_site.assign(n, -1);
    plan.cluster_of_site.assign(w * h, -1);
    plan.action.assign(lattice.edge_count(), EdgeAction::Delete);
    plan.realizes.assign(lattice.edge_count(), -1);
    plan.kept_edge.assign(g.edge_count(), -1);
    for (int k = 0; k < n; ++k) {
      const int x = (k % per_row) * pitch, y = (k / per_row) * pitch;
      if (y >= h) return g.edge_count() > 0 ? 0 : -2;
      plan.node_site[order[k]] = x + w * y;
      plan.cluster_of_site[x + w * y] = order[k];
    }
    std::vector<bool> used(lattice.edge_count(), false);
    std::vector<int> degree(n, 0);
    for (const Edge& ed : g.edges()) {
      ++degree[ed.tail];
      ++degree[ed.head];
    }
    // short connections first so long ones detour around them
    auto span = [&](int e) {
      const int sa = plan.node_site[g.edge(e).tail], sb = plan.node_site[g.edge(e).head];
      const int dx = std::abs(sa % w - sb % w), dy = std::abs(sa / w - sb / w);
      return std::min(dx, w - dx) + std::min(dy, h - dy);
    };
    std::vector<int> edge_order;
    std::vector<bool> listed(g.edge_count(), false);
    for (int e : first) {
      edge_order.push_back(e);
      listed[e] = true;
    }
    std::vector<int> rest;
    for (int e = 0; e < g.edge_count(); ++e)
      if (!listed[e]) rest.push_back(e);
    std::stable_sort(rest.begin(), rest.end(), [&](int x, int y) { return span(x) < span(y); });
    edge_order.insert(edge_order.end(), rest.begin(), rest.end());
    for (int e : edge_order) {
      const int a = g.edge(e).tail, b = g.edge(e).head;
      if (a == b) return e;
      // BFS from cluster a over free sites until cluster b is adjacent
      std::vector<int> prev_site(w * h, -2), prev_edge(w * h, -1);
      std::deque<int> queue;
      for (int s = 0; s < w * h; ++s)
        if (plan.cluster_of_site[s] == a) {
          prev_site[s] = -1;
          queue.push_back(s);
        }
      int hit_site = -1, hit_edge = -1;
      while (!queue.empty() && hit_site < 0) {
        const int s = queue.front();
        queue.pop_front();
        for (auto [t, le] : nbr[s]) {
          if (used[le]) continue;
          if (plan.cluster_of_site[t] == b) {
            hit_site = s;
            hit_edge = le;
            break;
          }
          if (plan.cluster_of_site[t] != -1 || prev_site[t] != -2) continue;
          prev_site[t] = s;
          prev_edge[t] = le;
          queue.push_back(t);
        }
      }
      if (hit_site < 0) return e;
      // walk back from b to a; the free sites join whichever end needs
      // more ports, and the kept edge sits at the other end
      const bool grow_a = degree[a] > degree[b];
      std::vector<int> path_edges{hit_edge};
      int s = hit_site;
      while (prev_site[s] >= 0) {
        path_edges.push_back(prev_edge[s]);
        plan.cluster_of_site[s] = grow_a ? a : b;
        s = prev_site[s];
      }
      for (std::size_t k = 0; k < path_edges.size(); ++k) {
        const int le = path_edges[k];
        used[le] = true;
        const bool keep = grow_a ? k == 0 : k + 1 == path_edges.size();
        plan.action[le] = keep ? EdgeAction::Keep : EdgeAction::Merge;
        if (keep) {
          plan.realizes[le] = e;
          plan.kept_edge[e] = le;
        }
      }
    }
    return -1;
  }
};

std::vector<int> bfs_order(const DecoratedGraph& g) {
  const int n = g.vertex_count();
  std::vector<std::vector<int>> adj(n);
  for (const Edge& e : g.edges()) {
    adj[e.tail].push_back(e.head);
    adj[e.head].push_back(e.tail);
  }
  std::vector<int> order;
  std::vector<bool> seen(n, false);
  for (int r = 0; r < n; ++r) {
    if (seen[r]) continue;
    seen[r] = true;
    std::deque<int> q{r};
    while (!q.empty()) {
      const int u = q.front();
      q.pop_front();
      order.push_back(u);
      for (int v : adj[u])
        if (!seen[v]) {
          seen[v] = true;
          q.push_back(v);
        }
    }
  }
  return order;
}

// Depth-first preorder; follows chains, so consecutive placements are
// usually neighbours.
std::vector<int> dfs_order(const DecoratedGraph& g) {
  const int n = g.vertex_count();
  std::vector<std::vector<int>> adj(n);
  for (const Edge& e : g.edges()) {
    adj[e.tail].push_back(e.head);
    adj[e.head].push_back(e.tail);
  }
  std::vector<int> order;
  std::vector<bool> seen(n, false);
  for (int r = 0; r < n; ++r) {
    std::vector<int> stack{r};
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      if (seen[u]) continue;
      seen[u] = true;
      order.push_back(u);
      for (auto it = adj[u].rbegin(); it != adj[u].rend(); ++it)
        if (!seen[*it]) stack.push_back(*it);
    }
  }
  return order;
}

}  // namespace

EmbeddingPlan embed_graph(const DecoratedGraph& g) {
  const int n = std::max(1, g.vertex_count());
  const std::vector<int> identity = [&] {
    std::vector<int> v(g.vertex_count());
    std::iota(v.begin(), v.end(), 0);
    return v;
  }();
  const std::vector<int> bfs = bfs_order(g);
  const std::vector<int> dfs = dfs_order(g);
  const int side = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n)) - 1e-9));
  EmbeddingPlan plan;
  for (int pitch = 1; pitch <= 6; ++pitch) {
    for (int extra = 0; extra <= 3; ++extra) {
      const int width = std::max(3, pitch * side + extra * pitch);
      const int height = std::max(3, pitch * static_cast<int>(std::ceil(static_cast<double>(n) / (width / pitch))));
      const Router router(width, height);
      for (const auto* order : {&identity, &bfs, &dfs}) {
        // rip-up and retry: an edge that got blocked is routed earlier next time
        std::vector<int> first;
        for (int attempt = 0; attempt <= g.edge_count(); ++attempt) {
          const int failed = router.route(g, *order, pitch, first, plan);
          if (failed == -1) return plan;
          if (failed < 0 || std::find(first.begin(), first.end(), failed) != first.end()) break;
          first.insert(first.begin(), failed);
        }
      }
    }
  }
  throw std::runtime_error("no lattice routing found for a graph with " + std::to_string(g.vertex_count()) +
                           " vertices and " + std::to_string(g.edge_count()) + " edges");
}

DecoratedGraph plan_quotient(const EmbeddingPlan& plan) {
  int clusters = 0;
  for (int c : plan.cluster_of_site) clusters = std::max(clusters, c + 1);
  clusters = std::max(clusters, static_cast<int>(plan.node_site.size()));
  const DecoratedGraph lattice = square_lattice(plan.width, plan.height, true);
  std::vector<Edge> edges(plan.kept_edge.size());
  for (std::size_t e = 0; e < plan.kept_edge.size(); ++e) {
    const Edge& le = lattice.edge(plan.kept_edge[e]);
    edges[e] = {plan.cluster_of_site[le.tail], plan.cluster_of_site[le.head]};
  }
  return DecoratedGraph(clusters, std::move(edges));
}

namespace {

// Unary function realized on one intermediate node, either as site
// couplings or as a chain hanging off it.
struct Realized {
  double h = 0, m = 0, q = 0;
  std::vector<Projection> chain;  // bras of chain nodes, first is farthest
  Complex ratio{1, 0};            // realized function / target function
  GadgetRecord record;
};

Realized realize(const Potential& p, double epsilon, const std::string& source, const ModeSpace& ms) {
  CompileOptions opts;
  opts.window = ms.size();
  opts.strict = false;
  const CompileResult cr = compile_diagonal(p, epsilon, ms, opts);
  Realized out;
  out.record.source = source;
  out.record.report = cr.report;
  const GateSequence& seq = cr.sequence;
  const bool diagonal_only =
      std::none_of(seq.gates.begin(), seq.gates.end(), [](const Gate& g) { return g.kind == GateKind::Had; });
  if (diagonal_only) {
    for (const Gate& g : seq.gates) {
      if (g.kind == GateKind::Lin) out.h += g.t;
      if (g.kind == GateKind::Quad) out.m += g.t;
      if (g.kind == GateKind::Quart) out.q += g.t;
    }
    out.ratio = std::polar(1.0, seq.phase);
    out.record.pointwise_error = cr.report.declared_error;
    return out;
  }
  const ChainPattern cp = emit_pattern(seq, ms);
  out.chain = cp.pattern.steps;
  // a chain node is summed with weight 1 where the momentum-zero bra has
  // 1/sqrt(M), and every link adds another sqrt(M) against the pattern
  const auto zeros = std::count_if(out.chain.begin(), out.chain.end(),
                                   [](const Projection& p) { return p.kind == Projector::MomentumZero; });
  const auto k = static_cast<double>(out.chain.size());
  out.ratio = std::pow(static_cast<double>(ms.size()), (k + static_cast<double>(zeros)) / 2) / cp.pattern.constant;
  out.record.chain = true;
  // acting on the all-ones input spreads the operator error over sqrt(M)
  out.record.pointwise_error =
      cr.report.approximation_error + std::sqrt(static_cast<double>(ms.size())) * cr.report.trotter_error;
  return out;
}

struct Link {
  int a, b, sign;
};

struct SiteCouplings {
  double h = 0, m = 0, q = 0;
};

}  // namespace

ReductionCertificate reduce_to_phi4(const Model& m, double epsilon, const ModeSpace& ms) {
  if (m.convention != Convention::Imaginary)
    throw std::invalid_argument("only imaginary-convention models reduce to +-i couplings");
  if (m.gauge) throw std::invalid_argument("reduction expects a model without gauge fixing");
  return reduce_to_phi4(to_reducible(m), epsilon, ms);
}

ReductionCertificate reduce_to_phi4(const ReducibleModel& src, double epsilon, const ModeSpace& ms) {
  if (!src.sites.empty() && static_cast<int>(src.sites.size()) != src.variables)
    throw std::invalid_argument("site potentials must cover every variable");
  const double mm = ms.size();
  ReductionCertificate cert;
  cert.m = ms.size();
  cert.epsilon = epsilon;

  // intermediate graph: variables, one (y, z) pair per term, chain nodes
  std::vector<SiteCouplings> node;
  std::vector<Link> links;
  for (int v = 0; v < src.variables; ++v) {
    node.push_back({});
    cert.provenance.push_back("vertex " + std::to_string(v));
  }
  Complex ratio = 1;  // realized intermediate sum / source sum (raw)
  Complex outside = 1;
  std::vector<double> errors;

  auto attach = [&](int target, const Realized& r, const std::string& label) {
    node[target].h += r.h;
    node[target].m += r.m;
    node[target].q += r.q;
    int next = target;
    for (auto it = r.chain.rbegin(); it != r.chain.rend(); ++it) {
      const int c = static_cast<int>(node.size());
      SiteCouplings sc;
      if (it->kind == Projector::Beta1) sc.h = it->t;
      if (it->kind == Projector::Beta2) sc.m = it->t;
      if (it->kind == Projector::Beta4) sc.q = it->t;
      node.push_back(sc);
      cert.provenance.push_back(label + " chain");
      links.push_back({c, next, 1});
      next = c;
    }
    ratio *= r.ratio;
  };

  for (std::size_t t = 0; t < src.terms.size(); ++t) {
    const Term& term = src.terms[t];
    const auto coeff = term_coefficients(term);
    const std::string label = "term " + std::to_string(t);
    if (coeff.empty()) {
      outside *= term.potential.boltzmann(ms, Convention::Imaginary)(0);
      continue;
    }
    // b(s) = (1/sqrt M) sum_y omega^(s y) A(y), A(y) = (1/sqrt M) sum_z omega^(-z y) b(z)
    const int y = static_cast<int>(node.size());
    node.push_back({});
    cert.provenance.push_back(label + " fourier");
    const int z = static_cast<int>(node.size());
    node.push_back({});
    cert.provenance.push_back(label + " weight");
    for (auto [v, s] : coeff)
      for (int k = 0; k < std::abs(s); ++k) links.push_back({y, v, s > 0 ? 1 : -1});
    links.push_back({y, z, -1});
    Realized r = realize(term.potential, epsilon, label, ms);
    r.record.nodes = {y, z};
    attach(z, r, label);
    ratio *= mm;
    errors.push_back(r.record.pointwise_error);
    cert.gadgets.push_back(r.record);
  }
  for (std::size_t v = 0; v < src.sites.size(); ++v) {
    if (src.sites[v].is_zero()) continue;
    const std::string label = "site " + std::to_string(v);
    Realized r = realize(src.sites[v], epsilon, label, ms);
    r.record.nodes = {static_cast<int>(v)};
    attach(static_cast<int>(v), r, label);
    errors.push_back(r.record.pointwise_error);
    cert.gadgets.push_back(r.record);
  }

  std::vector<Edge> gedges;
  for (const Link& l : links) gedges.push_back({l.a, l.b});
  const DecoratedGraph gprime(static_cast<int>(node.size()), gedges);
  cert.plan = embed_graph(gprime);
  const EmbeddingPlan& plan = cert.plan;

  Phi4Model& lat = cert.lattice;
  lat.width = plan.width;
  lat.height = plan.height;
  const int sites = lat.sites();
  lat.h.assign(sites, 0);
  lat.m.assign(sites, 0);
  lat.q.assign(sites, 0);
  const DecoratedGraph lattice = lat.lattice();
  lat.edge_sign.assign(lattice.edge_count(), 1);
  for (std::size_t k = 0; k < node.size(); ++k) {
    const int s = plan.node_site[k];
    lat.h[s] += node[k].h;
    lat.m[s] += node[k].m;
    lat.q[s] += node[k].q;
  }
  for (std::size_t l = 0; l < links.size(); ++l) {
    const int le = plan.kept_edge[l];
    lat.edge_sign[le] = links[l].sign;
    // exp(-i s (xa - xb)^2 / 2) = exp(-i s xa^2 / 2) exp(-i s xb^2 / 2) omega^(s a b)
    const Edge& ed = lattice.edge(le);
    lat.m[ed.tail] -= links[l].sign / 2.0;
    lat.m[ed.head] -= links[l].sign / 2.0;
  }
  for (int le = 0; le < lattice.edge_count(); ++le) {
    Projector kind = Projector::MomentumZero;
    if (plan.action[le] == EdgeAction::Merge) kind = Projector::CoordinateZero;
    if (plan.action[le] == EdgeAction::Keep) kind = lat.edge_sign[le] > 0 ? Projector::Plus : Projector::Minus;
    cert.pattern.steps.push_back({edge_mode(le), kind, 0});
  }
  int free_sites = 0;
  for (int s = 0; s < sites; ++s) free_sites += plan.cluster_of_site[s] < 0;
  ratio *= std::pow(mm, free_sites);
  // Z = delta^n * outside * S, lattice sum = ratio * S
  cert.constant = outside * ms.value(Units::delta(2 * src.variables)) / ratio;

  // |prod f' - prod f| <= prod (1 + e) - 1 per configuration of unit terms
  double grow = 1;
  for (double e : errors) grow *= 1 + e;
  cert.declared_error = std::abs(outside) * ms.value(Units::delta(2 * src.variables)) *
                        std::pow(mm, src.variables) * (grow - 1);
  cert.within_epsilon = std::all_of(errors.begin(), errors.end(), [&](double e) { return e <= epsilon; });

  // elimination order over clusters, fixed once
  std::vector<int> root(sites);
  std::iota(root.begin(), root.end(), 0);
  std::function<int(int)> find = [&](int s) { return root[s] == s ? s : root[s] = find(root[s]); };
  for (int le = 0; le < lattice.edge_count(); ++le)
    if (plan.action[le] == EdgeAction::Merge) root[find(lattice.edge(le).tail)] = find(lattice.edge(le).head);
  std::map<int, int> index;
  for (int s = 0; s < sites; ++s) index.emplace(find(s), static_cast<int>(index.size()));
  FactorNetwork shape(static_cast<int>(index.size()), 2);
  for (int le = 0; le < lattice.edge_count(); ++le)
    if (plan.action[le] == EdgeAction::Keep)
      shape.add_difference(index[find(lattice.edge(le).tail)], index[find(lattice.edge(le).head)], Vec::Ones(2));
  cert.elimination_order = shape.greedy_order();
  return cert;
}

bool certificate_well_formed(const ReductionCertificate& c) {
  const DecoratedGraph lattice = c.lattice.lattice();
  if (static_cast<int>(c.pattern.steps.size()) != lattice.edge_count()) return false;
  std::vector<int> seen(lattice.edge_count(), 0);
  for (std::size_t k = 0; k < c.pattern.steps.size(); ++k) {
    const auto& st = c.pattern.steps[k];
    if (st.mode.kind != ModeTag::Kind::Edge || st.mode.index < 0 || st.mode.index >= lattice.edge_count()) return false;
    if (++seen[st.mode.index] > 1) return false;
    const int sign = c.lattice.edge_sign[st.mode.index];
    if (sign != 1 && sign != -1) return false;
    const bool keep = st.kind == Projector::Plus || st.kind == Projector::Minus;
    if (keep != (c.plan.action[st.mode.index] == EdgeAction::Keep)) return false;
    if (keep && (st.kind == Projector::Plus) != (sign > 0)) return false;
    if (keep && c.lattice.coupling(st.mode.index) != Complex(0, sign)) return false;
  }
  return true;
}

PartitionResult evaluate_certificate(const ReductionCertificate& c, const ModeSpace& ms) {
  if (ms.size() != c.m) throw std::invalid_argument("certificate was built for M=" + std::to_string(c.m));
  if (!certificate_well_formed(c)) throw std::invalid_argument("pattern does not match the lattice");
  const Phi4Model& lat = c.lattice;
  const DecoratedGraph lattice = lat.lattice();
  const int sites = lat.sites();
  std::vector<int> root(sites);
  std::iota(root.begin(), root.end(), 0);
  std::function<int(int)> find = [&](int s) { return root[s] == s ? s : root[s] = find(root[s]); };
  for (const auto& st : c.pattern.steps)
    if (st.kind == Projector::CoordinateZero) {
      const Edge& ed = lattice.edge(st.mode.index);
      root[find(ed.tail)] = find(ed.head);
    }
  std::map<int, int> index;
  for (int s = 0; s < sites; ++s) index.emplace(find(s), static_cast<int>(index.size()));
  FactorNetwork net(static_cast<int>(index.size()), ms.size());
  for (int s = 0; s < sites; ++s) {
    if (lat.h[s] == 0 && lat.m[s] == 0 && lat.q[s] == 0) continue;
    const double h = lat.h[s], m = lat.m[s], q = lat.q[s];
    net.add_unary(index[find(s)], diagonal_phase(ms, [&](double x) { return h * x + m * x * x + q * x * x * x * x; }));
  }
  for (const auto& st : c.pattern.steps) {
    if (st.kind != Projector::Plus && st.kind != Projector::Minus) continue;
    const Edge& ed = lattice.edge(st.mode.index);
    net.add_difference(index[find(ed.tail)], index[find(ed.head)], projector_bra(ms, st.kind).amplitudes);
  }
  PartitionResult r;
  r.raw = net.sum(c.elimination_order);
  r.value = c.constant * r.raw;
  r.m = ms.size();
  r.delta = ms.spacing();
  r.method = "certificate";
  return r;
}

void write_certificate(std::ostream& os, const ReductionCertificate& c) {
  os << std::setprecision(17);
  os << "certificate\nm " << c.m << "\nlattice " << c.lattice.width << ' ' << c.lattice.height << '\n';
  os << "constant " << c.constant.real() << ' ' << c.constant.imag() << '\n';
  os << "epsilon " << c.epsilon << "\ndeclared_error " << c.declared_error << '\n';
  os << "within_epsilon " << (c.within_epsilon ? 1 : 0) << '\n';
  for (int s = 0; s < c.lattice.sites(); ++s)
    os << "site " << s << ' ' << c.lattice.h[s] << ' ' << c.lattice.m[s] << ' ' << c.lattice.q[s] << ' '
       << c.plan.cluster_of_site[s] << '\n';
  for (std::size_t e = 0; e < c.lattice.edge_sign.size(); ++e)
    os << "edge " << e << ' ' << (c.lattice.edge_sign[e] > 0 ? "+i" : "-i") << ' ' << action_name(c.plan.action[e])
       << ' ' << projector_name(c.pattern.steps[e].kind) << ' ' << c.plan.realizes[e] << '\n';
  for (std::size_t k = 0; k < c.plan.node_site.size(); ++k)
    os << "node " << k << ' ' << c.plan.node_site[k] << ' ' << (k < c.provenance.size() ? c.provenance[k] : "")
       << '\n';
  for (std::size_t e = 0; e < c.plan.kept_edge.size(); ++e) os << "link " << e << ' ' << c.plan.kept_edge[e] << '\n';
  os << "order";
  for (int v : c.elimination_order) os << ' ' << v;
  os << '\n';
  for (const auto& g : c.gadgets)
    os << "gadget " << g.source << " | " << g.report.target << " | error " << g.pointwise_error
       << (g.chain ? " | chain" : " | site") << '\n';
  os << "end\n";
}

ReductionCertificate read_certificate(std::istream& is) {
  ReductionCertificate c;
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) {
    throw std::invalid_argument("certificate line " + std::to_string(lineno) + ": " + what);
  };
  bool header = false;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "certificate") {
      header = true;
    } else if (key == "m") {
      ls >> c.m;
    } else if (key == "lattice") {
      ls >> c.lattice.width >> c.lattice.height;
      const int s = c.lattice.sites();
      const int e = 2 * s;
      c.lattice.h.assign(s, 0);
      c.lattice.m.assign(s, 0);
      c.lattice.q.assign(s, 0);
      c.lattice.edge_sign.assign(e, 1);
      c.plan.width = c.lattice.width;
      c.plan.height = c.lattice.height;
      c.plan.cluster_of_site.assign(s, -1);
      c.plan.action.assign(e, EdgeAction::Delete);
      c.plan.realizes.assign(e, -1);
      c.pattern.steps.assign(e, {});
    } else if (key == "constant") {
      double re = 0, im = 0;
      ls >> re >> im;
      c.constant = {re, im};
    } else if (key == "epsilon") {
      ls >> c.epsilon;
    } else if (key == "declared_error") {
      ls >> c.declared_error;
    } else if (key == "within_epsilon") {
      int f = 0;
      ls >> f;
      c.within_epsilon = f != 0;
    } else if (key == "site") {
      int s = -1;
      ls >> s;
      if (s < 0 || s >= c.lattice.sites()) fail("site index out of range");
      ls >> c.lattice.h[s] >> c.lattice.m[s] >> c.lattice.q[s] >> c.plan.cluster_of_site[s];
    } else if (key == "edge") {
      int e = -1;
      std::string k, act, proj;
      ls >> e >> k >> act >> proj;
      if (e < 0 || e >= static_cast<int>(c.lattice.edge_sign.size())) fail("edge index out of range");
      if (k != "+i" && k != "-i") fail("coupling must be +i or -i");
      c.lattice.edge_sign[e] = k == "+i" ? 1 : -1;
      if (act == "delete")
        c.plan.action[e] = EdgeAction::Delete;
      else if (act == "merge")
        c.plan.action[e] = EdgeAction::Merge;
      else if (act == "keep")
        c.plan.action[e] = EdgeAction::Keep;
      else
        fail("unknown action '" + act + "'");
      try {
        c.pattern.steps[e] = {edge_mode(e), parse_projector(proj), 0};
      } catch (const std::invalid_argument& ex) {
        fail(ex.what());
      }
      ls >> c.plan.realizes[e];
    } else if (key == "node") {
      int k = -1, s = -1;
      ls >> k >> s;
      if (k < 0) fail("bad node index");
      if (static_cast<int>(c.plan.node_site.size()) <= k) c.plan.node_site.resize(k + 1, -1);
      c.plan.node_site[k] = s;
      std::string rest;
      std::getline(ls, rest);
      if (!rest.empty() && rest[0] == ' ') rest.erase(0, 1);
      if (static_cast<int>(c.provenance.size()) <= k) c.provenance.resize(k + 1);
      c.provenance[k] = rest;
    } else if (key == "link") {
      int e = -1, le = -1;
      ls >> e >> le;
      if (e < 0) fail("bad link index");
      if (static_cast<int>(c.plan.kept_edge.size()) <= e) c.plan.kept_edge.resize(e + 1, -1);
      c.plan.kept_edge[e] = le;
    } else if (key == "order") {
      int v;
      while (ls >> v) c.elimination_order.push_back(v);
    } else if (key == "gadget" || key == "end") {
      // informational
    } else {
      fail("unknown key '" + key + "'");
    }
  }
  if (!header) throw std::invalid_argument("not a certificate");
  return c;
}

ReducibleModel U1Model::reducible() const {
  ReducibleModel r;
  r.variables = variables;
  for (const auto& p : plaquettes)
    r.terms.push_back({{p.vars.begin(), p.vars.end()}, {p.signs.begin(), p.signs.end()}, Potential::cosine(p.coupling, 1)});
  return r;
}

U1Model build_u1_model(const std::vector<std::array<int, 4>>& plaquettes, const std::vector<double>& couplings) {
  if (plaquettes.size() != couplings.size()) throw std::invalid_argument("one coupling per plaquette");
  U1Model u;
  for (std::size_t p = 0; p < plaquettes.size(); ++p) {
    Plaquette pl;
    pl.vars = plaquettes[p];
    pl.coupling = couplings[p];
    for (int v : pl.vars) {
      if (v < 0) throw std::invalid_argument("negative link index");
      u.variables = std::max(u.variables, v + 1);
    }
    u.plaquettes.push_back(pl);
  }
  return u;
}

PartitionResult u1_partition_direct(const U1Model& u, const ModeSpace& ms) {
  const int n = u.variables;
  const int m = ms.size();
  dense_size(ms, n);
  std::vector<int> x(n, 0);
  Complex total = 0;
  while (true) {
    double phase = 0;
    for (const auto& p : u.plaquettes) {
      std::int64_t s = 0;
      for (int k = 0; k < 4; ++k) s += static_cast<std::int64_t>(p.signs[k]) * x[p.vars[k]];
      phase += p.coupling * std::cos(ms.position(ms.wrap(s)));
    }
    total += std::polar(1.0, -phase);
    int k = 0;
    while (k < n && ++x[k] == m) x[k++] = 0;
    if (k == n) break;
  }
  PartitionResult r;
  r.raw = total;
  r.units = Units::delta(2 * n);
  r.value = total * ms.value(r.units);
  r.m = m;
  r.delta = ms.spacing();
  r.method = "bruteforce";
  return r;
}

PartitionResult u1_partition_state(const U1Model& u, const ModeSpace& ms) {
  const int n = u.variables;
  const int np = static_cast<int>(u.plaquettes.size());
  const int m = ms.size();
  dense_size(ms, np);
  dense_size(ms, n);
  // |G> = sum_x |s_1(x)> ... |s_P(x)>, one mode per plaquette
  Vec state = Vec::Zero(static_cast<Eigen::Index>(std::pow(m, np)));
  std::vector<int> x(n, 0);
  while (true) {
    std::int64_t idx = 0;
    for (int p = 0; p < np; ++p) {
      std::int64_t s = 0;
      for (int k = 0; k < 4; ++k) s += static_cast<std::int64_t>(u.plaquettes[p].signs[k]) * x[u.plaquettes[p].vars[k]];
      idx += ms.wrap(s) * mode_stride(m, p);
    }
    state(idx) += 1.0;
    int k = 0;
    while (k < n && ++x[k] == m) x[k++] = 0;
    if (k == n) break;
  }
  for (int p = np - 1; p >= 0; --p) {
    const double j = u.plaquettes[p].coupling;
    Vec bra = momentum_zero_state(ms).amplitudes.cwiseProduct(diagonal_phase(ms, [&](double y) { return j * std::cos(y); }));
    state = contract_mode(state, m, p + 1, p, bra);
  }
  PartitionResult r;
  // the momentum-zero bras carry 1/sqrt(M) each
  r.raw = state(0) * std::pow(static_cast<double>(m), np / 2.0);
  r.units = Units::delta(2 * n);
  r.value = r.raw * ms.value(r.units);
  r.m = m;
  r.delta = ms.spacing();
  r.method = "quantum";
  return r;
}

}  // namespace cvlat
