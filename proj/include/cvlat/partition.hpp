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

#ifndef CVLAT_PARTITION_HPP
#define CVLAT_PARTITION_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cvlat/graphs.hpp"
#include "cvlat/modespace.hpp"
#include "cvlat/network.hpp"

namespace cvlat {

enum class Convention {
  Imaginary,  // weights exp(-i H)
  Real,       // weights exp(-H)
};

std::string convention_name(Convention c);

struct CosineTerm {
  double amplitude = 0;
  double frequency = 1;
};

/// V(x) = sum_k coefficients[k] x^k + sum A cos(w x), or a table of
/// Boltzmann factors on a fixed grid.
struct Potential {
  std::vector<double> coefficients;
  std::vector<CosineTerm> cosines;
  std::optional<Vec> samples;

  static Potential zero() { return {}; }
  /// c1 x + c2 x^2 + c3 x^3 + c4 x^4
  static Potential polynomial(double c1, double c2, double c3, double c4);
  /// k x^2 / 2
  static Potential quadratic(double k);
  static Potential cosine(double amplitude, double frequency);
  static Potential tabulated(Vec boltzmann);

  double operator()(double x) const;
  double derivative(double x) const;
  int degree() const;
  bool is_zero() const;
  bool is_even() const;
  bool is_tabulated() const { return samples.has_value(); }
  double coefficient(int power) const;

  /// Boltzmann factors at every grid label.
  Vec boltzmann(const ModeSpace& ms, Convention c) const;
};

Potential operator+(Potential a, const Potential& b);

/// Scalar model on an oriented graph; edge potentials act on
/// phi_tail - phi_head. An empty site list means no on-site terms.
struct Model {
  DecoratedGraph graph;
  std::vector<Potential> edge_potentials;
  std::vector<Potential> site_potentials;
  Convention convention = Convention::Imaginary;
  bool gauge = false;

  bool has_sites() const;
  void validate() const;
};

struct PartitionResult {
  Complex value;
  Complex raw;
  Units units;
  int m = 0;
  double delta = 0;
  std::string method;
  Convention convention = Convention::Imaginary;
};

/// delta^|V| times the sum over every field configuration, lexicographic.
PartitionResult partition_bruteforce(const Model& model, const ModeSpace& ms);
/// Contraction of product bras against the (gauge-fixed, extended) Kitaev
/// state built as a dense vector.
PartitionResult partition_quantum(const Model& model, const ModeSpace& ms);
/// Same sum by variable elimination; used where dense states do not fit.
PartitionResult partition_network(const Model& model, const ModeSpace& ms);

/// Continuum gauge-fixed Gaussian value N^(-1/2) (2 pi)^((N-1)/2) / sqrt(prod' lambda)
/// for V = k x^2 / 2 edges.
double gaussian_oracle(const Model& model);

/// Factor network for the model, with optional replacement edge tables.
FactorNetwork model_network(const Model& model, const ModeSpace& ms, const std::vector<Vec>& edge_tables,
                            const std::vector<Vec>& site_tables);
std::vector<Vec> edge_tables(const Model& model, const ModeSpace& ms);
std::vector<Vec> site_tables(const Model& model, const ModeSpace& ms);
/// Raw sum (no units) of the network, with the gauge constraint applied.
Complex network_sum(const Model& model, const ModeSpace& ms, const std::vector<Vec>& edge_tables,
                    const std::vector<Vec>& site_tables);

/// <alpha| Q_e |K> / <alpha|K>.
Complex edge_average_Q(const Model& model, const ModeSpace& ms, int e);
/// <alpha| P_e |K> / <alpha|K> with P = H Q H^-1; tends to -i kappa <V'>
/// with kappa = 1 (real) or i (imaginary convention).
Complex edge_average_Vprime(const Model& model, const ModeSpace& ms, int e);
/// Direct weighted average of an observable over configurations.
Complex bruteforce_average(const Model& model, const ModeSpace& ms,
                           const std::function<Complex(std::span<const int>)>& observable);

struct LoopResidual {
  double derivative = 0;    // |sum_e c_e <alpha|P_e|K>| / |<alpha|K>|
  double finite_shift = 0;  // |<alpha| prod X_e^(a c_e) |K> - <alpha|K>| / |<alpha|K>|
  std::vector<int> chain;   // c_e
  std::vector<int> enclosed;
};

/// Throws std::invalid_argument for loops that do not bound a region.
LoopResidual loop_residual(const Model& model, const ModeSpace& ms, const std::vector<DualStep>& loop, int shift = 1);

}  // namespace cvlat

#endif
