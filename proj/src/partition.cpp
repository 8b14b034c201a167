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

#include "cvlat/partition.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "cvlat/multimode.hpp"
#include "cvlat/states.hpp"

namespace cvlat {

std::string convention_name(Convention c) { return c == Convention::Imaginary ? "imaginary" : "real"; }

Potential Potential::polynomial(double c1, double c2, double c3, double c4) {
  Potential p;
  p.coefficients = {0, c1, c2, c3, c4};
  return p;
}

Potential Potential::quadratic(double k) { return polynomial(0, k / 2, 0, 0); }

Potential Potential::cosine(double amplitude, double frequency) {
  Potential p;
  p.cosines.push_back({amplitude, frequency});
  return p;
}

Potential Potential::tabulated(Vec boltzmann) {
  Potential p;
  p.samples = std::move(boltzmann);
  return p;
}

double Potential::operator()(double x) const {
  if (samples) throw std::logic_error("tabulated potentials have no closed form");
  double v = 0, xp = 1;
  for (double c : coefficients) {
    v += c * xp;
    xp *= x;
  }
  for (const auto& t : cosines) v += t.amplitude * std::cos(t.frequency * x);
  return v;
}

double Potential::derivative(double x) const {
  if (samples) throw std::logic_error("tabulated potentials have no closed form");
  double v = 0, xp = 1;
  for (std::size_t k = 1; k < coefficients.size(); ++k) {
    v += static_cast<double>(k) * coefficients[k] * xp;
    xp *= x;
  }
  for (const auto& t : cosines) v -= t.amplitude * t.frequency * std::sin(t.frequency * x);
  return v;
}

double Potential::coefficient(int power) const {
  return power < static_cast<int>(coefficients.size()) ? coefficients[power] : 0.0;
}

int Potential::degree() const {
  for (int k = static_cast<int>(coefficients.size()) - 1; k > 0; --k)
    if (coefficients[k] != 0) return k;
  return 0;
}

bool Potential::is_zero() const {
  if (samples) return false;
  for (double c : coefficients)
    if (c != 0) return false;
  for (const auto& t : cosines)
    if (t.amplitude != 0) return false;
  return true;
}

bool Potential::is_even() const {
  if (samples) {
    const auto m = samples->size();
    for (Eigen::Index j = 1; j < m; ++j)
      if (std::abs((*samples)(j) - (*samples)(m - j)) > 1e-12) return false;
    return true;
  }
  for (std::size_t k = 1; k < coefficients.size(); k += 2)
    if (coefficients[k] != 0) return false;
  return true;
}

Vec Potential::boltzmann(const ModeSpace& ms, Convention c) const {
  if (samples) {
    if (samples->size() != ms.size()) throw std::invalid_argument("tabulated potential built for a different M");
    return *samples;
  }
  Vec out(ms.size());
  for (int j = 0; j < ms.size(); ++j) {
    const double v = (*this)(ms.position(j));
    out(j) = c == Convention::Imaginary ? std::polar(1.0, -v) : Complex(std::exp(-v), 0);
  }
  return out;
}

Potential operator+(Potential a, const Potential& b) {
  if (a.samples || b.samples) throw std::invalid_argument("cannot add tabulated potentials");
  if (a.coefficients.size() < b.coefficients.size()) a.coefficients.resize(b.coefficients.size(), 0.0);
  for (std::size_t k = 0; k < b.coefficients.size(); ++k) a.coefficients[k] += b.coefficients[k];
  a.cosines.insert(a.cosines.end(), b.cosines.begin(), b.cosines.end());
  return a;
}

bool Model::has_sites() const {
  for (const auto& p : site_potentials)
    if (!p.is_zero()) return true;
  return false;
}

void Model::validate() const {
  graph.validate();
  if (static_cast<int>(edge_potentials.size()) != graph.edge_count())
    throw std::invalid_argument("every edge needs a potential");
  if (!site_potentials.empty() && static_cast<int>(site_potentials.size()) != graph.vertex_count())
    throw std::invalid_argument("site potentials must cover every vertex");
}

std::vector<Vec> edge_tables(const Model& model, const ModeSpace& ms) {
  std::vector<Vec> out;
  for (const auto& p : model.edge_potentials) out.push_back(p.boltzmann(ms, model.convention));
  return out;
}

std::vector<Vec> site_tables(const Model& model, const ModeSpace& ms) {
  std::vector<Vec> out;
  if (!model.has_sites()) return out;
  for (const auto& p : model.site_potentials) out.push_back(p.boltzmann(ms, model.convention));
  return out;
}

namespace {

Units field_units(const Model& model) {
  return Units::delta(2 * model.graph.vertex_count() - (model.gauge ? 2 : 0));
}

PartitionResult make_result(const Model& model, const ModeSpace& ms, Complex raw, Units units, std::string method) {
  PartitionResult r;
  r.raw = raw;
  r.units = units;
  r.value = raw * ms.value(units);
  r.m = ms.size();
  r.delta = ms.spacing();
  r.method = std::move(method);
  r.convention = model.convention;
  return r;
}

}  // namespace

PartitionResult partition_bruteforce(const Model& model, const ModeSpace& ms) {
  model.validate();
  const int n = model.graph.vertex_count();
  const int m = ms.size();
  dense_size(ms, n);
  const auto edges = edge_tables(model, ms);
  const auto sites = site_tables(model, ms);
  std::vector<int> phi(n, 0);
  Complex total = 0;
  while (true) {
    bool keep = true;
    if (model.gauge) {
      std::int64_t s = 0;
      for (int x : phi) s += x;
      keep = s % m == 0;
    }
    if (keep) {
      Complex w = 1;
      for (int e = 0; e < model.graph.edge_count(); ++e) {
        const Edge& ed = model.graph.edge(e);
        w *= edges[e](ms.wrap(phi[ed.tail] - phi[ed.head]));
      }
      for (std::size_t v = 0; v < sites.size(); ++v) w *= sites[v](phi[v]);
      total += w;
    }
    int k = 0;
    while (k < n && ++phi[k] == m) phi[k++] = 0;
    if (k == n) break;
  }
  return make_result(model, ms, total, field_units(model), "bruteforce");
}

PartitionResult partition_quantum(const Model& model, const ModeSpace& ms) {
  model.validate();
  const bool sites = model.has_sites();
  LatticeState state = sites ? extended_kitaev_state(model.graph, ms, model.gauge)
                             : (model.gauge ? gauge_fixed_kitaev(model.graph, ms) : kitaev_state(model.graph, ms));
  const auto edges = edge_tables(model, ms);
  const auto site_v = site_tables(model, ms);
  // contract the last mode first so every contraction is a strided sum
  for (int p = state.mode_count() - 1; p >= 0; --p) {
    const ModeTag tag = state.modes[p];
    const Vec& table = tag.kind == ModeTag::Kind::Edge ? edges[tag.index] : site_v[tag.index];
    state = project_mode(state, tag, {table, Units::delta(1)});
  }
  return make_result(model, ms, state.amplitudes(0), state.units, "quantum");
}

FactorNetwork model_network(const Model& model, const ModeSpace& ms, const std::vector<Vec>& edges,
                            const std::vector<Vec>& sites) {
  FactorNetwork net(model.graph.vertex_count(), ms.size());
  for (int e = 0; e < model.graph.edge_count(); ++e) {
    const Edge& ed = model.graph.edge(e);
    if (ed.tail == ed.head) {
      net.add_unary(ed.tail, Vec::Constant(ms.size(), edges[e](0)));
      continue;
    }
    net.add_difference(ed.tail, ed.head, edges[e]);
  }
  for (std::size_t v = 0; v < sites.size(); ++v) net.add_unary(static_cast<int>(v), sites[v]);
  return net;
}

Complex network_sum(const Model& model, const ModeSpace& ms, const std::vector<Vec>& edges,
                    const std::vector<Vec>& sites) {
  const int n = model.graph.vertex_count();
  const int m = ms.size();
  if (!model.gauge) return model_network(model, ms, edges, sites).sum();
  if (sites.empty() && std::gcd(n, m) == 1) return model_network(model, ms, edges, sites).sum() / static_cast<double>(m);
  // indicator of sum = 0 mod M as (1/M) sum_c omega^(c sum)
  Complex total = 0;
  for (int c = 0; c < m; ++c) {
    FactorNetwork net = model_network(model, ms, edges, sites);
    Vec chi(m);
    for (int j = 0; j < m; ++j) chi(j) = ms.omega(static_cast<std::int64_t>(c) * j);
    for (int v = 0; v < n; ++v) net.add_unary(v, chi);
    total += net.sum();
  }
  return total / static_cast<double>(m);
}

PartitionResult partition_network(const Model& model, const ModeSpace& ms) {
  model.validate();
  const Complex raw = network_sum(model, ms, edge_tables(model, ms), site_tables(model, ms));
  return make_result(model, ms, raw, field_units(model), "network");
}

double gaussian_oracle(const Model& model) {
  model.validate();
  if (model.convention != Convention::Real || !model.gauge || model.has_sites())
    throw std::invalid_argument("Gaussian oracle needs real convention, gauge on and no site terms");
  const int n = model.graph.vertex_count();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (int e = 0; e < model.graph.edge_count(); ++e) {
    const Potential& p = model.edge_potentials[e];
    if (p.is_tabulated() || !p.cosines.empty() || p.degree() != 2 || p.coefficient(1) != 0)
      throw std::invalid_argument("Gaussian oracle needs pure quadratic edges");
    const double k = 2 * p.coefficient(2);
    if (!(k > 0)) throw std::invalid_argument("Gaussian couplings must be positive");
    const auto [a, b] = model.graph.edge(e);
    if (a == b) continue;
    lap(a, a) += k;
    lap(b, b) += k;
    lap(a, b) -= k;
    lap(b, a) -= k;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lap);
  const auto& lambda = eig.eigenvalues();
  const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
  double product = 1;
  int zeros = 0;
  for (int i = 0; i < n; ++i) {
    if (std::abs(lambda(i)) < 1e-10 * scale)
      ++zeros;
    else
      product *= lambda(i);
  }
  if (zeros != 1) throw std::invalid_argument("Gaussian oracle needs a connected graph");
  return std::pow(2 * std::numbers::pi, 0.5 * (n - 1)) / std::sqrt(n * product);
}

namespace {

Complex ratio_with_edge_table(const Model& model, const ModeSpace& ms, int e, const Vec& replaced) {
  auto edges = edge_tables(model, ms);
  const auto sites = site_tables(model, ms);
  const Complex z = network_sum(model, ms, edges, sites);
  if (std::abs(z) == 0) throw std::domain_error("partition function vanishes; average undefined");
  edges.at(e) = replaced;
  return network_sum(model, ms, edges, sites) / z;
}

}  // namespace

Complex edge_average_Q(const Model& model, const ModeSpace& ms, int e) {
  model.validate();
  Vec t = model.edge_potentials.at(e).boltzmann(ms, model.convention);
  for (int j = 0; j < ms.size(); ++j) t(j) *= ms.position(j);
  return ratio_with_edge_table(model, ms, e, t);
}

Complex edge_average_Vprime(const Model& model, const ModeSpace& ms, int e) {
  model.validate();
  const Vec b = model.edge_potentials.at(e).boltzmann(ms, model.convention);
  const Vec t = momentum_matrix(ms).transpose() * b;
  return ratio_with_edge_table(model, ms, e, t);
}

Complex bruteforce_average(const Model& model, const ModeSpace& ms,
                           const std::function<Complex(std::span<const int>)>& observable) {
  model.validate();
  const int n = model.graph.vertex_count();
  const int m = ms.size();
  dense_size(ms, n);
  const auto edges = edge_tables(model, ms);
  const auto sites = site_tables(model, ms);
  std::vector<int> phi(n, 0);
  Complex num = 0, den = 0;
  while (true) {
    std::int64_t s = 0;
    for (int x : phi) s += x;
    if (!model.gauge || s % m == 0) {
      Complex w = 1;
      for (int e = 0; e < model.graph.edge_count(); ++e) {
        const Edge& ed = model.graph.edge(e);
        w *= edges[e](ms.wrap(phi[ed.tail] - phi[ed.head]));
      }
      for (std::size_t v = 0; v < sites.size(); ++v) w *= sites[v](phi[v]);
      num += w * observable(phi);
      den += w;
    }
    int k = 0;
    while (k < n && ++phi[k] == m) phi[k++] = 0;
    if (k == n) break;
  }
  if (std::abs(den) == 0) throw std::domain_error("partition function vanishes; average undefined");
  return num / den;
}

LoopResidual loop_residual(const Model& model, const ModeSpace& ms, const std::vector<DualStep>& loop, int shift) {
  model.validate();
  LoopTopology topo = loop_is_trivial(model.graph, loop);
  if (!topo.trivial) throw std::invalid_argument("loop does not bound a region");
  LoopResidual out;
  out.enclosed = topo.enclosed;
  out.chain.assign(model.graph.edge_count(), 0);
  for (const auto& s : loop) out.chain[s.edge] += s.forward ? 1 : -1;

  const auto edges = edge_tables(model, ms);
  const auto sites = site_tables(model, ms);
  const Complex z = network_sum(model, ms, edges, sites);
  if (std::abs(z) == 0) throw std::domain_error("partition function vanishes");

  auto shifted = edges;
  for (int e = 0; e < model.graph.edge_count(); ++e) {
    if (out.chain[e] == 0) continue;
    Vec t(ms.size());
    for (int j = 0; j < ms.size(); ++j) t(j) = edges[e](ms.wrap(j + static_cast<std::int64_t>(shift) * out.chain[e]));
    shifted[e] = t;
  }
  // enclosed fields move too, so site factors follow them
  auto shifted_sites = sites;
  for (std::size_t v = 0; v < sites.size(); ++v) {
    const int n = topo.multiplicity[v];
    if (n == 0) continue;
    Vec t(ms.size());
    for (int j = 0; j < ms.size(); ++j) t(j) = sites[v](ms.wrap(j + static_cast<std::int64_t>(shift) * n));
    shifted_sites[v] = t;
  }
  out.finite_shift = std::abs(network_sum(model, ms, shifted, shifted_sites) - z) / std::abs(z);

  const Mat pt = momentum_matrix(ms).transpose();
  Complex acc = 0;
  for (int e = 0; e < model.graph.edge_count(); ++e) {
    if (out.chain[e] == 0) continue;
    auto with_p = edges;
    with_p[e] = pt * edges[e];
    acc += static_cast<double>(out.chain[e]) * network_sum(model, ms, with_p, sites);
  }
  for (std::size_t v = 0; v < sites.size(); ++v) {
    if (topo.multiplicity[v] == 0) continue;
    auto with_p = sites;
    with_p[v] = pt * sites[v];
    acc += static_cast<double>(topo.multiplicity[v]) * network_sum(model, ms, edges, with_p);
  }
  out.derivative = std::abs(acc / z);
  return out;
}

}  // namespace cvlat
