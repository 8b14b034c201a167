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

#ifndef CVLAT_MODESPACE_HPP
#define CVLAT_MODESPACE_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cvlat {

using Complex = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

template <class Real>
using AmplitudeVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <class Real>
using OperatorMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

/// Raised when a dense object would exceed the configured size cap.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Continuum constants carried alongside a discrete amplitude vector:
/// the represented object is delta^(delta_half/2) * M^(m_half/2) * vector.
struct Units {
  int delta_half = 0;
  int m_half = 0;

  Units& operator*=(const Units& o) {
    delta_half += o.delta_half;
    m_half += o.m_half;
    return *this;
  }
  friend Units operator*(Units a, const Units& b) { return a *= b; }
  friend Units inverse(const Units& u) { return {-u.delta_half, -u.m_half}; }
  friend bool operator==(const Units&, const Units&) = default;

  static Units delta(int halves) { return {halves, 0}; }
  static Units sqrt_m(int count) { return {0, count}; }
  /// (2 pi)^(halves/2) written as delta^halves * M^(halves/2).
  static Units two_pi(int halves) { return {2 * halves, halves}; }

  std::string str() const;
};

/// One discretized continuous-variable mode: labels Z_M, spacing delta with
/// delta^2 M = 2 pi. Label j sits at x = c(j) delta with c(j) in [-M/2, M/2).
class ModeSpace {
 public:
  explicit ModeSpace(int m);

  int size() const { return m_; }
  double spacing() const { return delta_; }
  double value(const Units& u) const;

  int wrap(std::int64_t label) const {
    auto r = label % m_;
    return static_cast<int>(r < 0 ? r + m_ : r);
  }
  int centered(int label) const {
    int w = wrap(label);
    return w < m_ / 2 ? w : w - m_;
  }
  double position(int label) const { return centered(label) * delta_; }

  /// omega^k with omega = exp(2 pi i / M), exact table lookup.
  Complex omega(std::int64_t k) const { return omega_table_[wrap(k)]; }

 private:
  int m_;
  double delta_;
  Eigen::VectorXcd omega_table_;
};

ModeSpace make_modespace(int m);

/// A single-mode ket or bra together with its continuum constant.
struct ModeVector {
  Vec amplitudes;
  Units units;
};

ModeVector position_state(const ModeSpace& ms, int label);
/// Normalized uniform vector; as a continuum object it is
/// (2 pi)^(-1/2) times the integral of |y>.
ModeVector momentum_zero_state(const ModeSpace& ms);
/// <x = 0| as a bra.
ModeVector coordinate_zero_bra(const ModeSpace& ms);
/// Bra with entries exp(-i t x^order), order in {1, 2, 4}.
ModeVector beta_projector(const ModeSpace& ms, int order, double t);

/// True when exp(i s x y) is a function of labels mod M.
bool is_exact_weight(double s);

enum class Layer { Exact, Quadrature };

struct LayeredState {
  Vec amplitudes;
  Layer layer = Layer::Exact;
};

/// Dense single-mode operators.
template <class Real = double>
OperatorMatrix<Real> shift_matrix(const ModeSpace& ms, int a) {
  const int m = ms.size();
  OperatorMatrix<Real> out = OperatorMatrix<Real>::Zero(m, m);
  for (int j = 0; j < m; ++j) out(ms.wrap(j + a), j) = 1;
  return out;
}

template <class Real = double>
OperatorMatrix<Real> phase_matrix(const ModeSpace& ms, int b) {
  const int m = ms.size();
  OperatorMatrix<Real> out = OperatorMatrix<Real>::Zero(m, m);
  for (int j = 0; j < m; ++j) {
    Complex w = ms.omega(static_cast<std::int64_t>(b) * j);
    out(j, j) = std::complex<Real>(static_cast<Real>(w.real()), static_cast<Real>(w.imag()));
  }
  return out;
}

template <class Real = double>
OperatorMatrix<Real> weyl_matrix(const ModeSpace& ms, int a, int b) {
  return shift_matrix<Real>(ms, a) * phase_matrix<Real>(ms, b);
}

template <class Real = double>
OperatorMatrix<Real> hadamard_matrix(const ModeSpace& ms) {
  const int m = ms.size();
  OperatorMatrix<Real> out(m, m);
  const Real norm = Real(1) / std::sqrt(static_cast<Real>(m));
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < m; ++k) {
      Complex w = ms.omega(static_cast<std::int64_t>(j) * k);
      out(j, k) = std::complex<Real>(static_cast<Real>(w.real()), static_cast<Real>(w.imag())) * norm;
    }
  return out;
}

template <class Real = double, class F>
AmplitudeVector<Real> diagonal_phase(const ModeSpace& ms, F&& f) {
  const int m = ms.size();
  AmplitudeVector<Real> out(m);
  for (int j = 0; j < m; ++j)
    out(j) = std::polar(Real(1), static_cast<Real>(-f(ms.position(j))));
  return out;
}

/// Momentum operator H Q H^-1, so exp(-i s P) shifts positions by +s.
Mat momentum_matrix(const ModeSpace& ms);
/// exp(-i s P); equals shift_matrix(a) when s = a delta.
Mat translation_matrix(const ModeSpace& ms, double s);

Vec apply_weyl(const ModeSpace& ms, const Vec& state, int a, int b);
Vec apply_hadamard(const ModeSpace& ms, const Vec& state);
Vec apply_inverse_hadamard(const ModeSpace& ms, const Vec& state);
/// Two-mode state indexed j + M k, mode 0 least significant.
LayeredState apply_cz(const ModeSpace& ms, const Vec& state, double s);
/// Diagonal of CZ(s) over the pair grid.
LayeredState cz_diagonal(const ModeSpace& ms, double s);

/// Dense size limit in bits of the total index (n log2 M).
int dense_cap_bits();
/// Number of amplitudes for n modes; throws CapExceeded beyond the cap.
std::size_t dense_size(const ModeSpace& ms, int modes);

}  // namespace cvlat

#endif
