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

#ifndef CVLAT_COMPILER_HPP
#define CVLAT_COMPILER_HPP

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvlat/graphs.hpp"
#include "cvlat/partition.hpp"
#include "cvlat/states.hpp"

namespace cvlat {

enum class GateKind {
  Had,    // H
  Lin,    // exp(-i t Q)
  Quad,   // exp(-i t Q^2)
  Quart,  // exp(-i t Q^4)
};

std::string gate_name(GateKind k);
GateKind parse_gate(const std::string& name);

struct Gate {
  GateKind kind = GateKind::Had;
  double t = 0;
  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Gates act in list order: gates[0] hits the input first.
struct GateSequence {
  std::vector<Gate> gates;
  double phase = 0;  // overall exp(-i phase), from constant terms
  double epsilon = 0;
  int steps = 0;

  std::array<int, 4> counts() const;
};

struct CompileOptions {
  /// Labels with centered value in [-window/2, window/2) are checked;
  /// 0 picks M/2, M picks the whole grid.
  int window = 0;
  /// Force this many commutator steps for cubic terms; 0 searches.
  int steps = 0;
  int max_primitives = 10000;
  /// Throw CompileError when epsilon is missed.
  bool strict = true;
};

struct CompileReport {
  std::string target;
  double trotter_error = 0;        // against the fitted polynomial
  double approximation_error = 0;  // cosine fit, as an operator norm
  double measured_error = 0;       // against exp(-i V) itself
  double declared_error = 0;       // trotter + approximation
  std::array<int, 4> counts{};
  int steps = 0;
  int m = 0;
  int window = 0;
  bool reached = false;
  std::vector<double> fitted;  // polynomial actually compiled, by power
  /// "direct", "commutator", or "shift-synthesis" (whole grid only)
  std::string method;
};

struct CompileResult {
  GateSequence sequence;
  CompileReport report;
};

class CompileError : public std::runtime_error {
 public:
  CompileError(const std::string& what, CompileReport report)
      : std::runtime_error(what), report_(std::move(report)) {}
  const CompileReport& report() const { return report_; }

 private:
  CompileReport report_;
};

/// Sequence of primitives for exp(-i V(Q)). Cubic terms use the shifted
/// quartic commutator X(s) D(tau Q^4) X(-2s) D(-tau Q^4) X(s), exact for
/// s = delta on the window; cosines are replaced by an even quartic fit.
CompileResult compile_diagonal(const Potential& v, double epsilon, const ModeSpace& ms, CompileOptions opts = {});

/// Least-squares even polynomial (powers 0, 2, 4) for the cosine part on
/// the window, added to the polynomial part.
std::vector<double> fit_polynomial(const Potential& v, const ModeSpace& ms, int window);

/// Merges H runs mod 4 and adjacent diagonals of one kind; drops zeros.
GateSequence simplify(GateSequence seq);

Mat gate_matrix(const Gate& g, const ModeSpace& ms);
Mat sequence_matrix(const GateSequence& seq, const ModeSpace& ms);
Vec apply_sequence(const GateSequence& seq, const ModeSpace& ms, const Vec& input);
/// Spectral norm of the window block of U - exp(-i V).
double window_error(const Mat& u, const Vec& target_diagonal, const ModeSpace& ms, int window);
std::vector<int> window_labels(const ModeSpace& ms, int window);

/// Chain 0 - 1 - ... - k joined by CZ(1); mode i is projected at step i
/// and mode k carries the output.
struct ChainPattern {
  WeightedGraph chain;
  MeasurementPattern pattern;
};

/// The pattern constant folds in sqrt(M) per momentum-zero projection and
/// the sequence's global phase.
ChainPattern emit_pattern(const GateSequence& seq, const ModeSpace& ms);

/// Feeds input into mode 0 and contracts left to right, two live modes at
/// a time, then applies the pattern constant.
Vec simulate_pattern(const ChainPattern& cp, const Vec& input, const ModeSpace& ms);

void write_sequence(std::ostream& os, const GateSequence& seq);
GateSequence read_sequence(std::istream& is);
void write_pattern(std::ostream& os, const MeasurementPattern& p);

}  // namespace cvlat

#endif
