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

#ifndef CVLAT_MODEL_IO_HPP
#define CVLAT_MODEL_IO_HPP

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvlat/partition.hpp"
#include "cvlat/reducer.hpp"

namespace cvlat {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, int line, int column, const std::string& what);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct NamedFace {
  std::string name;
  std::vector<int> edges;
};

struct ModelFile {
  Model model;
  std::vector<NamedFace> faces;
  std::optional<U1Model> u1;
};

/// Line-oriented format, '#' starts a comment:
///   vertices 4            | vertices a b c
///   convention imaginary  | convention real
///   gauge off             | gauge on
///   edge 1 2 as a: poly 0 0.5 0 0.1 | cos 0.3 1
///   site 1: poly 0 1 0 1
///   coords 1: 0 0         (all or none; sets the rotation)
///   rotation 1: a+ d-     (dart of edge a at its tail, d at its head)
///   face I: a e d         (label only)
///   links 4
///   plaquette 0 1 2 3: 1.0
ModelFile parse_model(std::istream& is, const std::string& source = "<input>");
ModelFile load_model(const std::string& path);

/// "poly c1 c2 c3 c4 | cos A w | quad k | zero"
Potential parse_potential(const std::string& text);

void write_model(std::ostream& os, const Model& m);

}  // namespace cvlat

#endif
