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

#include "cvlat/modespace.hpp"

#include <cstdlib>
#include <sstream>

#include "cvlat/multimode.hpp"

namespace cvlat {

std::string Units::str() const {
  std::ostringstream out;
  out << "delta^(" << delta_half << "/2) M^(" << m_half << "/2)";
  return out.str();
}

ModeSpace::ModeSpace(int m) : m_(m) {
  if (m < 2 || m % 2 != 0)
    throw std::invalid_argument("grid size M must be even and at least 2, got " + std::to_string(m));
  delta_ = std::sqrt(2 * std::numbers::pi / m);
  omega_table_.resize(m);
  for (int k = 0; k < m; ++k) omega_table_(k) = std::polar(1.0, 2 * std::numbers::pi * k / m);
}

double ModeSpace::value(const Units& u) const {
  return std::pow(delta_, 0.5 * u.delta_half) * std::pow(static_cast<double>(m_), 0.5 * u.m_half);
}

ModeSpace make_modespace(int m) { return ModeSpace(m); }

ModeVector position_state(const ModeSpace& ms, int label) {
  if (label < 0 || label >= ms.size())
    throw std::out_of_range("label " + std::to_string(label) + " outside 0.." + std::to_string(ms.size() - 1));
  Vec v = Vec::Zero(ms.size());
  v(label) = 1;
  return {v, Units::delta(-1)};
}

ModeVector momentum_zero_state(const ModeSpace& ms) {
  return {Vec::Constant(ms.size(), 1 / std::sqrt(static_cast<double>(ms.size()))), Units::delta(-1)};
}

ModeVector coordinate_zero_bra(const ModeSpace& ms) { return position_state(ms, 0); }

ModeVector beta_projector(const ModeSpace& ms, int order, double t) {
  if (order != 1 && order != 2 && order != 4)
    throw std::invalid_argument("projector order must be 1, 2 or 4");
  Vec v(ms.size());
  for (int j = 0; j < ms.size(); ++j) v(j) = std::polar(1.0, -t * std::pow(ms.position(j), order));
  return {v, Units::delta(1)};
}

bool is_exact_weight(double s) { return s == std::round(s); }

Mat momentum_matrix(const ModeSpace& ms) {
  Mat h = hadamard_matrix(ms);
  Vec x(ms.size());
  for (int j = 0; j < ms.size(); ++j) x(j) = ms.position(j);
  return h * x.asDiagonal() * h.adjoint();
}

Mat translation_matrix(const ModeSpace& ms, double s) {
  Mat h = hadamard_matrix(ms);
  Vec d = diagonal_phase(ms, [s](double x) { return s * x; });
  return h * d.asDiagonal() * h.adjoint();
}

Vec apply_weyl(const ModeSpace& ms, const Vec& state, int a, int b) {
  const int m = ms.size();
  if (state.size() != m) throw std::invalid_argument("state length does not match M");
  Vec out(m);
  for (int j = 0; j < m; ++j) out(ms.wrap(j + a)) = ms.omega(static_cast<std::int64_t>(b) * j) * state(j);
  return out;
}

Vec apply_hadamard(const ModeSpace& ms, const Vec& state) {
  if (state.size() != ms.size()) throw std::invalid_argument("state length does not match M");
  return hadamard_matrix(ms) * state;
}

Vec apply_inverse_hadamard(const ModeSpace& ms, const Vec& state) {
  if (state.size() != ms.size()) throw std::invalid_argument("state length does not match M");
  return hadamard_matrix(ms).adjoint() * state;
}

LayeredState cz_diagonal(const ModeSpace& ms, double s) {
  const int m = ms.size();
  LayeredState out;
  out.amplitudes.resize(static_cast<Eigen::Index>(m) * m);
  const bool exact = is_exact_weight(s);
  out.layer = exact ? Layer::Exact : Layer::Quadrature;
  const auto si = static_cast<std::int64_t>(std::llround(s));
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j)
      out.amplitudes(j + static_cast<Eigen::Index>(m) * k) =
          exact ? ms.omega(si * j * k) : std::polar(1.0, s * ms.position(j) * ms.position(k));
  return out;
}

LayeredState apply_cz(const ModeSpace& ms, const Vec& state, double s) {
  if (state.size() != static_cast<Eigen::Index>(ms.size()) * ms.size())
    throw std::invalid_argument("two-mode state must have length M^2");
  LayeredState d = cz_diagonal(ms, s);
  d.amplitudes = d.amplitudes.cwiseProduct(state);
  return d;
}

int dense_cap_bits() {
  if (const char* env = std::getenv("CVLAT_DENSE_CAP_BITS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0 && v < 40) return static_cast<int>(v);
  }
  return 26;
}

std::size_t dense_size(const ModeSpace& ms, int modes) {
  const double bits = modes * std::log2(static_cast<double>(ms.size()));
  if (bits > dense_cap_bits() + 1e-9)
    throw CapExceeded("dense state of " + std::to_string(modes) + " modes at M=" + std::to_string(ms.size()) +
                      " needs " + std::to_string(bits) + " index bits, cap is " + std::to_string(dense_cap_bits()));
  std::size_t n = 1;
  for (int k = 0; k < modes; ++k) n *= static_cast<std::size_t>(ms.size());
  return n;
}

std::int64_t mode_stride(int m, int mode) {
  std::int64_t s = 1;
  for (int k = 0; k < mode; ++k) s *= m;
  return s;
}

void decode_labels(std::int64_t index, int m, std::span<int> labels) {
  for (auto& l : labels) {
    l = static_cast<int>(index % m);
    index /= m;
  }
}

Vec apply_on_mode(const Vec& state, int m, int modes, int mode, const Mat& op) {
  const std::int64_t stride = mode_stride(m, mode);
  const std::int64_t outer = mode_stride(m, modes) / (stride * m);
  Vec out(state.size());
  Vec fiber(m);
  for (std::int64_t o = 0; o < outer; ++o)
    for (std::int64_t i = 0; i < stride; ++i) {
      const std::int64_t base = o * stride * m + i;
      for (int k = 0; k < m; ++k) fiber(k) = state(base + k * stride);
      Vec r = op * fiber;
      for (int k = 0; k < m; ++k) out(base + k * stride) = r(k);
    }
  return out;
}

Vec scale_mode(const Vec& state, int m, int modes, int mode, const Vec& diag) {
  const std::int64_t stride = mode_stride(m, mode);
  Vec out = state;
  for (std::int64_t idx = 0; idx < mode_stride(m, modes); ++idx) out(idx) *= diag((idx / stride) % m);
  return out;
}

Vec contract_mode(const Vec& state, int m, int modes, int mode, const Vec& bra) {
  const std::int64_t stride = mode_stride(m, mode);
  const std::int64_t outer = mode_stride(m, modes) / (stride * m);
  Vec out = Vec::Zero(stride * outer);
  for (std::int64_t o = 0; o < outer; ++o)
    for (int k = 0; k < m; ++k) {
      const Complex b = bra(k);
      const std::int64_t src = o * stride * m + k * stride;
      const std::int64_t dst = o * stride;
      for (std::int64_t i = 0; i < stride; ++i) out(dst + i) += b * state(src + i);
    }
  return out;
}

}  // namespace cvlat
