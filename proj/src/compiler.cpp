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

#include "cvlat/compiler.hpp"

#include <cmath>
#include <algorithm>
#include <iomanip>
#include <optional>
#include <istream>
#include <ostream>
#include <sstream>

#include <Eigen/QR>
#include <Eigen/SVD>

namespace cvlat {

std::string gate_name(GateKind k) {
  switch (k) {
    case GateKind::Had: return "HAD";
    case GateKind::Lin: return "LIN";
    case GateKind::Quad: return "QUAD";
    case GateKind::Quart: return "QUART";
  }
  return "?";
}

GateKind parse_gate(const std::string& name) {
  for (GateKind k : {GateKind::Had, GateKind::Lin, GateKind::Quad, GateKind::Quart})
    if (gate_name(k) == name) return k;
  throw std::invalid_argument("unknown primitive '" + name + "'");
}

std::array<int, 4> GateSequence::counts() const {
  std::array<int, 4> c{};
  for (const auto& g : gates) ++c[static_cast<int>(g.kind)];
  return c;
}

namespace {

int diagonal_power(GateKind k) {
  switch (k) {
    case GateKind::Lin: return 1;
    case GateKind::Quad: return 2;
    case GateKind::Quart: return 4;
    default: return 0;
  }
}

// X(s) = exp(-i s P) = H LIN(s) H^-1; applied order H^3, LIN(s), H.
void push_translation(std::vector<Gate>& out, double s) {
  for (int i = 0; i < 3; ++i) out.push_back({GateKind::Had, 0});
  out.push_back({GateKind::Lin, s});
  out.push_back({GateKind::Had, 0});
}

// One commutator step for exp(-i c Q^3 / n) with shift s = delta:
// X(s) D(tau Q^4) X(-2s) D(-tau Q^4) X(s) = D(tau[(Q-s)^4 - (Q+s)^4])
// = exp(-i tau (-8 s Q^3 - 8 s^3 Q)), so tau = -c / (8 s n) and a
// linear gate cancels the Q term.
void push_cubic_step(std::vector<Gate>& out, double c, int n, double s) {
  const double tau = -c / (8 * s * n);
  out.push_back({GateKind::Lin, 8 * tau * s * s * s});
  push_translation(out, s);
  out.push_back({GateKind::Quart, -tau});
  push_translation(out, -2 * s);
  out.push_back({GateKind::Quart, tau});
  push_translation(out, s);
}

// Whole-grid fallback. Conjugating by a shift moves a diagonal along the
// labels, X^a D(Q) X^-a = D(Q - a delta) with wrap-around, and the M
// shifted copies of Q^2 span every diagonal on Z_M (up to a constant) when
// the circulant of rep(n)^2 is invertible. Exact at finite M only.
std::optional<GateSequence> shift_synthesis(const Eigen::VectorXd& phase, const ModeSpace& ms) {
  const int m = ms.size();
  const double d2 = ms.spacing() * ms.spacing();
  Eigen::MatrixXd a(m, m + 1);
  for (int n = 0; n < m; ++n) {
    a(n, 0) = 1;
    for (int k = 0; k < m; ++k) {
      const double r = ms.centered(n - k);
      a(n, k + 1) = r * r * d2;
    }
  }
  const Eigen::VectorXd c = a.completeOrthogonalDecomposition().solve(phase);
  const double scale = std::max(1.0, phase.cwiseAbs().maxCoeff());
  if ((a * c - phase).cwiseAbs().maxCoeff() > 1e-10 * scale) return std::nullopt;

  GateSequence seq;
  seq.phase = c(0);
  std::vector<std::pair<int, double>> shifts;
  for (int k = 0; k < m; ++k)
    if (c(k + 1) != 0) shifts.emplace_back(ms.centered(k), c(k + 1));
  std::sort(shifts.begin(), shifts.end());
  int at = 0;  // shift currently applied
  for (const auto& [shift, coef] : shifts) {
    if (shift != at) push_translation(seq.gates, -(shift - at) * ms.spacing());
    at = shift;
    seq.gates.push_back({GateKind::Quad, coef});
  }
  if (at != 0) push_translation(seq.gates, at * ms.spacing());
  return simplify(std::move(seq));
}

std::string describe_potential(const Potential& v) {
  std::ostringstream os;
  os << std::setprecision(6);
  bool first = true;
  for (std::size_t k = 0; k < v.coefficients.size(); ++k) {
    if (v.coefficients[k] == 0) continue;
    os << (first ? "" : " + ") << v.coefficients[k];
    if (k > 0) os << " x^" << k;
    first = false;
  }
  for (const auto& t : v.cosines) {
    os << (first ? "" : " + ") << t.amplitude << " cos(" << t.frequency << " x)";
    first = false;
  }
  return first ? "0" : os.str();
}

}  // namespace

std::vector<int> window_labels(const ModeSpace& ms, int window) {
  const int m = ms.size();
  if (window <= 0) window = m / 2;
  window = std::min(window, m);
  std::vector<int> out;
  for (int c = -window / 2; c < window - window / 2; ++c) out.push_back(ms.wrap(c));
  return out;
}

double window_error(const Mat& u, const Vec& target, const ModeSpace& ms, int window) {
  const auto idx = window_labels(ms, window);
  const auto k = static_cast<Eigen::Index>(idx.size());
  Mat block(k, k);
  for (Eigen::Index a = 0; a < k; ++a)
    for (Eigen::Index b = 0; b < k; ++b)
      block(a, b) = u(idx[a], idx[b]) - (a == b ? target(idx[a]) : Complex(0));
  Eigen::JacobiSVD<Mat> svd(block);
  return svd.singularValues()(0);
}

std::vector<double> fit_polynomial(const Potential& v, const ModeSpace& ms, int window) {
  if (v.is_tabulated()) throw std::invalid_argument("tabulated potentials cannot be compiled");
  std::vector<double> poly = v.coefficients;
  poly.resize(std::max<std::size_t>(poly.size(), 5), 0.0);
  if (v.cosines.empty()) return poly;
  const auto idx = window_labels(ms, window);
  Eigen::MatrixXd a(idx.size(), 3);
  Eigen::VectorXd b(idx.size());
  for (std::size_t r = 0; r < idx.size(); ++r) {
    const double x = ms.position(idx[r]);
    a(r, 0) = 1;
    a(r, 1) = x * x;
    a(r, 2) = x * x * x * x;
    double c = 0;
    for (const auto& t : v.cosines) c += t.amplitude * std::cos(t.frequency * x);
    b(r) = c;
  }
  const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(b);
  poly[0] += coef(0);
  poly[2] += coef(1);
  poly[4] += coef(2);
  return poly;
}

GateSequence simplify(GateSequence seq) {
  std::vector<Gate> out;
  for (const Gate& g : seq.gates) {
    if (g.kind != GateKind::Had && g.t == 0) continue;
    if (!out.empty() && out.back().kind == g.kind && g.kind != GateKind::Had) {
      out.back().t += g.t;
      if (out.back().t == 0) out.pop_back();
      continue;
    }
    out.push_back(g);
    // H^4 = 1
    const auto n = out.size();
    if (g.kind == GateKind::Had && n >= 4 && out[n - 2].kind == GateKind::Had && out[n - 3].kind == GateKind::Had &&
        out[n - 4].kind == GateKind::Had)
      out.resize(n - 4);
  }
  seq.gates = std::move(out);
  return seq;
}

Mat gate_matrix(const Gate& g, const ModeSpace& ms) {
  if (g.kind == GateKind::Had) return hadamard_matrix(ms);
  const int p = diagonal_power(g.kind);
  const double t = g.t;
  return diagonal_phase(ms, [&](double x) { return t * std::pow(x, p); }).asDiagonal();
}

Vec apply_sequence(const GateSequence& seq, const ModeSpace& ms, const Vec& input) {
  Vec v = input;
  for (const Gate& g : seq.gates) {
    if (g.kind == GateKind::Had) {
      v = apply_hadamard(ms, v);
    } else {
      const int p = diagonal_power(g.kind);
      v = v.cwiseProduct(diagonal_phase(ms, [&](double x) { return g.t * std::pow(x, p); }));
    }
  }
  return v * std::polar(1.0, -seq.phase);
}

Mat sequence_matrix(const GateSequence& seq, const ModeSpace& ms) {
  const int m = ms.size();
  Mat u(m, m);
  for (int j = 0; j < m; ++j) u.col(j) = apply_sequence(seq, ms, Vec::Unit(m, j));
  return u;
}

CompileResult compile_diagonal(const Potential& v, double epsilon, const ModeSpace& ms, CompileOptions opts) {
  if (v.is_tabulated()) throw std::invalid_argument("tabulated potentials cannot be compiled");
  for (std::size_t k = 5; k < v.coefficients.size(); ++k)
    if (v.coefficients[k] != 0) throw std::invalid_argument("polynomial degree above 4 is not supported");
  const int window = opts.window <= 0 ? ms.size() / 2 : std::min(opts.window, ms.size());

  CompileResult res;
  CompileReport& rep = res.report;
  rep.target = describe_potential(v);
  rep.m = ms.size();
  rep.window = window;
  rep.fitted = fit_polynomial(v, ms, window);
  const auto& c = rep.fitted;

  const auto idx = window_labels(ms, window);
  Vec fitted_diag(ms.size()), true_diag(ms.size());
  for (int j = 0; j < ms.size(); ++j) {
    const double x = ms.position(j);
    double f = 0, xp = 1;
    for (double ck : c) {
      f += ck * xp;
      xp *= x;
    }
    fitted_diag(j) = std::polar(1.0, -f);
    true_diag(j) = std::polar(1.0, -v(x));
  }
  rep.approximation_error = 0;
  for (int j : idx) rep.approximation_error = std::max(rep.approximation_error, std::abs(fitted_diag(j) - true_diag(j)));

  auto build = [&](int n) {
    GateSequence seq;
    seq.phase = c[0];
    if (c[3] != 0)
      for (int k = 0; k < n; ++k) push_cubic_step(seq.gates, c[3], n, ms.spacing());
    if (c[4] != 0) seq.gates.push_back({GateKind::Quart, c[4]});
    if (c[2] != 0) seq.gates.push_back({GateKind::Quad, c[2]});
    if (c[1] != 0) seq.gates.push_back({GateKind::Lin, c[1]});
    seq = simplify(std::move(seq));
    seq.steps = c[3] != 0 ? n : 0;
    return seq;
  };
  auto measure = [&](const GateSequence& seq) {
    const Mat u = sequence_matrix(seq, ms);
    return std::pair{window_error(u, fitted_diag, ms, window), window_error(u, true_diag, ms, window)};
  };

  GateSequence seq;
  if (opts.steps > 0 || c[3] == 0) {
    seq = build(std::max(opts.steps, 1));
    std::tie(rep.trotter_error, rep.measured_error) = measure(seq);
  } else {
    // double the step count until epsilon is met, the primitive cap is hit
    // or refining stops paying off
    for (int n = 1;; n *= 2) {
      GateSequence trial = build(n);
      if (static_cast<int>(trial.gates.size()) > opts.max_primitives && n > 1) break;
      const auto [trotter, measured] = measure(trial);
      if (n > 1 && trotter >= rep.trotter_error) break;
      seq = std::move(trial);
      rep.trotter_error = trotter;
      rep.measured_error = measured;
      if (rep.trotter_error + rep.approximation_error <= epsilon) break;
    }
  }
  rep.method = c[3] != 0 ? "commutator" : "direct";
  if (rep.trotter_error + rep.approximation_error > epsilon && window == ms.size()) {
    Eigen::VectorXd phase(ms.size());
    for (int j = 0; j < ms.size(); ++j) phase(j) = v(ms.position(j));
    if (auto exact = shift_synthesis(phase, ms)) {
      const auto [err, measured] = measure(*exact);
      (void)err;
      if (measured <= epsilon) {
        seq = std::move(*exact);
        rep.method = "shift-synthesis";
        rep.trotter_error = measured;
        rep.measured_error = measured;
        rep.approximation_error = 0;
        rep.fitted.clear();
      }
    }
  }
  rep.declared_error = rep.trotter_error + rep.approximation_error;
  rep.steps = seq.steps;
  rep.counts = seq.counts();
  rep.reached = rep.declared_error <= epsilon && static_cast<int>(seq.gates.size()) <= opts.max_primitives;
  seq.epsilon = rep.declared_error;
  res.sequence = std::move(seq);
  if (!rep.reached && opts.strict) {
    std::ostringstream os;
    os << "target " << rep.target << " reached error " << rep.declared_error << " above " << epsilon;
    throw CompileError(os.str(), rep);
  }
  return res;
}

ChainPattern emit_pattern(const GateSequence& seq, const ModeSpace& ms) {
  ChainPattern out;
  int excess = 0;  // H factors already applied beyond what the sequence asked for
  int next_mode = 0;
  auto project = [&](Projector kind, double t) {
    out.pattern.steps.push_back({vertex_mode(next_mode), kind, t});
    ++next_mode;
  };
  for (const Gate& g : seq.gates) {
    if (g.kind == GateKind::Had) {
      if (excess > 0)
        --excess;
      else
        project(Projector::MomentumZero, 0);
      continue;
    }
    for (int k = 0; k < (4 - excess) % 4; ++k) project(Projector::MomentumZero, 0);
    const Projector kind = g.kind == GateKind::Lin ? Projector::Beta1
                           : g.kind == GateKind::Quad ? Projector::Beta2
                                                      : Projector::Beta4;
    project(kind, g.t);
    excess = 1;
  }
  for (int k = 0; k < (4 - excess) % 4; ++k) project(Projector::MomentumZero, 0);

  out.chain.vertices = next_mode + 1;
  for (int i = 0; i < next_mode; ++i) out.chain.edges.push_back({i, i + 1, 1.0});
  // each momentum-zero step leaves H / sqrt(M) behind
  int zeros = 0;
  for (const auto& s : out.pattern.steps) zeros += s.kind == Projector::MomentumZero;
  out.pattern.constant = std::pow(static_cast<double>(ms.size()), zeros / 2.0) * std::polar(1.0, -seq.phase);
  return out;
}

Vec simulate_pattern(const ChainPattern& cp, const Vec& input, const ModeSpace& ms) {
  const int m = ms.size();
  if (input.size() != m) throw std::invalid_argument("input has the wrong dimension");
  if (static_cast<int>(cp.pattern.steps.size()) + 1 != cp.chain.vertices)
    throw std::invalid_argument("pattern and chain disagree");
  Vec psi = input;
  for (std::size_t k = 0; k < cp.pattern.steps.size(); ++k) {
    const auto& step = cp.pattern.steps[k];
    const Vec bra = projector_bra(ms, step.kind, step.t).amplitudes;
    const double w = cp.chain.weight(static_cast<int>(k), static_cast<int>(k) + 1);
    if (!is_exact_weight(w)) throw std::invalid_argument("chain weights must be integers");
    const auto wi = static_cast<std::int64_t>(w);
    const Vec g = bra.cwiseProduct(psi);
    Vec out = Vec::Zero(m);
    // fresh mode starts in ones / sqrt(M); CZ(w) then projection of mode k
    for (int y = 0; y < m; ++y) {
      Complex acc = 0;
      for (int j = 0; j < m; ++j) acc += g(j) * ms.omega(wi * j * y);
      out(y) = acc / std::sqrt(static_cast<double>(m));
    }
    psi = std::move(out);
  }
  return psi * cp.pattern.constant;
}

void write_sequence(std::ostream& os, const GateSequence& seq) {
  os << std::setprecision(17);
  os << "# steps " << seq.steps << " epsilon " << seq.epsilon << " phase " << seq.phase << '\n';
  for (const Gate& g : seq.gates) {
    os << gate_name(g.kind);
    if (g.kind != GateKind::Had) os << ' ' << g.t;
    os << '\n';
  }
}

GateSequence read_sequence(std::istream& is) {
  GateSequence seq;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;
    if (word == "#") {
      std::string key;
      while (ls >> key) {
        if (key == "steps")
          ls >> seq.steps;
        else if (key == "epsilon")
          ls >> seq.epsilon;
        else if (key == "phase")
          ls >> seq.phase;
      }
      continue;
    }
    Gate g;
    try {
      g.kind = parse_gate(word);
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
    }
    if (g.kind != GateKind::Had && !(ls >> g.t))
      throw std::invalid_argument("line " + std::to_string(lineno) + ": missing parameter");
    seq.gates.push_back(g);
  }
  return seq;
}

void write_pattern(std::ostream& os, const MeasurementPattern& p) {
  os << std::setprecision(17);
  for (const auto& s : p.steps)
    os << "project " << (s.mode.kind == ModeTag::Kind::Edge ? "e" : "v") << s.mode.index << ' '
       << projector_name(s.kind) << ' ' << s.t << '\n';
  os << "constant " << p.constant.real() << ' ' << p.constant.imag() << '\n';
}

}  // namespace cvlat
