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

#ifndef CVLAT_NETWORK_HPP
#define CVLAT_NETWORK_HPP

#include <vector>

#include "cvlat/modespace.hpp"

namespace cvlat {

/// Sum over Z_M^n of a product of small factors, evaluated by variable
/// elimination. Each factor table is indexed with the first scope variable
/// varying fastest.
class FactorNetwork {
 public:
  FactorNetwork(int variables, int m);

  int variables() const { return n_; }
  int m() const { return m_; }

  void add_unary(int v, const Vec& table);
  /// table(label_u, label_v)
  void add_pair(int u, int v, const Mat& table);
  /// f((label_u - label_v) mod M)
  void add_difference(int u, int v, const Vec& f);
  /// f((sum_k sign_k label_k) mod M)
  void add_signed_sum(const std::vector<int>& vars, const std::vector<int>& signs, const Vec& f);
  /// Replaces every table entry by its modulus.
  FactorNetwork absolute() const;

  /// Greedy min-degree order with ties broken by index.
  std::vector<int> greedy_order() const;
  /// Largest intermediate scope for an order.
  int width(const std::vector<int>& order) const;

  Complex sum() const { return sum(greedy_order()); }
  /// Throws CapExceeded when an intermediate table is too large.
  Complex sum(const std::vector<int>& order) const;

 private:
  struct Factor {
    std::vector<int> scope;  // sorted, unique
    Vec table;
  };
  int n_;
  int m_;
  std::vector<Factor> factors_;
};

}  // namespace cvlat

#endif
