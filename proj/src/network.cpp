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

#include "cvlat/network.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace cvlat {

FactorNetwork::FactorNetwork(int variables, int m) : n_(variables), m_(m) {
  if (variables < 0 || m < 1) throw std::invalid_argument("bad network size");
}

void FactorNetwork::add_unary(int v, const Vec& table) {
  if (v < 0 || v >= n_ || table.size() != m_) throw std::invalid_argument("bad unary factor");
  factors_.push_back({{v}, table});
}

void FactorNetwork::add_pair(int u, int v, const Mat& table) {
  if (table.rows() != m_ || table.cols() != m_) throw std::invalid_argument("bad pair factor");
  if (u == v) {
    add_unary(u, table.diagonal());
    return;
  }
  const Mat t = u < v ? table : Mat(table.transpose());
  Vec flat(static_cast<Eigen::Index>(m_) * m_);
  for (int b = 0; b < m_; ++b)
    for (int a = 0; a < m_; ++a) flat(a + m_ * b) = t(a, b);
  factors_.push_back({{std::min(u, v), std::max(u, v)}, flat});
}

void FactorNetwork::add_difference(int u, int v, const Vec& f) { add_signed_sum({u, v}, {1, -1}, f); }

void FactorNetwork::add_signed_sum(const std::vector<int>& vars, const std::vector<int>& signs, const Vec& f) {
  if (vars.size() != signs.size() || f.size() != m_) throw std::invalid_argument("bad signed-sum factor");
  std::map<int, int> coeff;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    if (vars[k] < 0 || vars[k] >= n_) throw std::invalid_argument("factor variable out of range");
    coeff[vars[k]] += signs[k];
  }
  Factor fac;
  std::vector<int> c;
  for (auto [v, s] : coeff) {
    fac.scope.push_back(v);
    c.push_back(s);
  }
  const std::size_t k = fac.scope.size();
  std::int64_t size = 1;
  for (std::size_t i = 0; i < k; ++i) size *= m_;
  fac.table.resize(size);
  std::vector<int> lab(k, 0);
  for (std::int64_t idx = 0; idx < size; ++idx) {
    std::int64_t s = 0;
    for (std::size_t i = 0; i < k; ++i) s += static_cast<std::int64_t>(c[i]) * lab[i];
    s %= m_;
    if (s < 0) s += m_;
    fac.table(idx) = f(s);
    for (std::size_t i = 0; i < k && ++lab[i] == m_; ++i) lab[i] = 0;
  }
  factors_.push_back(std::move(fac));
}

FactorNetwork FactorNetwork::absolute() const {
  FactorNetwork out = *this;
  for (auto& f : out.factors_) f.table = f.table.cwiseAbs().cast<Complex>();
  return out;
}

std::vector<int> FactorNetwork::greedy_order() const {
  std::vector<std::set<int>> adj(n_);
  for (const auto& f : factors_)
    for (int a : f.scope)
      for (int b : f.scope)
        if (a != b) adj[a].insert(b);
  std::vector<bool> done(n_, false);
  std::vector<int> order;
  for (int step = 0; step < n_; ++step) {
    int best = -1;
    for (int v = 0; v < n_; ++v)
      if (!done[v] && (best < 0 || adj[v].size() < adj[best].size())) best = v;
    done[best] = true;
    order.push_back(best);
    for (int a : adj[best])
      for (int b : adj[best])
        if (a != b) adj[a].insert(b);
    for (int a : adj[best]) adj[a].erase(best);
  }
  return order;
}

int FactorNetwork::width(const std::vector<int>& order) const {
  std::vector<std::vector<int>> scopes;
  for (const auto& f : factors_) scopes.push_back(f.scope);
  int w = 0;
  for (int v : order) {
    std::set<int> u;
    std::vector<std::vector<int>> rest;
    for (auto& s : scopes) {
      if (std::find(s.begin(), s.end(), v) != s.end())
        u.insert(s.begin(), s.end());
      else
        rest.push_back(s);
    }
    w = std::max(w, static_cast<int>(u.size()));
    u.erase(v);
    rest.emplace_back(u.begin(), u.end());
    scopes = std::move(rest);
  }
  return w;
}

Complex FactorNetwork::sum(const std::vector<int>& order) const {
  {
    std::vector<int> sorted = order;
    std::sort(sorted.begin(), sorted.end());
    for (int i = 0; i < n_; ++i)
      if (static_cast<int>(sorted.size()) != n_ || sorted[i] != i)
        throw std::invalid_argument("elimination order must list every variable once");
  }
  std::vector<Factor> pool = factors_;
  Complex scalar = 1;
  const double cap = std::ldexp(1.0, dense_cap_bits());
  for (int v : order) {
    std::vector<Factor> bucket, rest;
    for (auto& f : pool) {
      if (std::binary_search(f.scope.begin(), f.scope.end(), v))
        bucket.push_back(std::move(f));
      else
        rest.push_back(std::move(f));
    }
    pool = std::move(rest);
    if (bucket.empty()) {
      scalar *= static_cast<double>(m_);
      continue;
    }
    std::set<int> uset;
    for (const auto& f : bucket) uset.insert(f.scope.begin(), f.scope.end());
    std::vector<int> u(uset.begin(), uset.end());
    const std::size_t k = u.size();
    if (std::pow(static_cast<double>(m_), static_cast<double>(k)) > cap)
      throw CapExceeded("intermediate factor over " + std::to_string(k) + " variables exceeds the cap at M=" +
                        std::to_string(m_));

    Factor result;
    for (int x : u)
      if (x != v) result.scope.push_back(x);
    std::int64_t rsize = 1;
    for (std::size_t i = 0; i < result.scope.size(); ++i) rsize *= m_;
    result.table = Vec::Zero(rsize);

    // stride of each union variable inside each bucket factor and the result
    std::vector<std::vector<std::int64_t>> fstride(bucket.size(), std::vector<std::int64_t>(k, 0));
    std::vector<std::int64_t> rstride(k, 0);
    for (std::size_t b = 0; b < bucket.size(); ++b) {
      std::int64_t s = 1;
      for (int x : bucket[b].scope) {
        const auto pos = std::lower_bound(u.begin(), u.end(), x) - u.begin();
        fstride[b][pos] = s;
        s *= m_;
      }
    }
    {
      std::int64_t s = 1;
      for (std::size_t i = 0; i < k; ++i)
        if (u[i] != v) {
          rstride[i] = s;
          s *= m_;
        }
    }
    std::vector<int> lab(k, 0);
    std::vector<std::int64_t> fidx(bucket.size(), 0);
    std::int64_t ridx = 0;
    std::int64_t total = 1;
    for (std::size_t i = 0; i < k; ++i) total *= m_;
    for (std::int64_t it = 0; it < total; ++it) {
      Complex p = bucket[0].table(fidx[0]);
      for (std::size_t b = 1; b < bucket.size(); ++b) p *= bucket[b].table(fidx[b]);
      result.table(ridx) += p;
      for (std::size_t i = 0; i < k; ++i) {
        if (++lab[i] < m_) {
          for (std::size_t b = 0; b < bucket.size(); ++b) fidx[b] += fstride[b][i];
          ridx += rstride[i];
          break;
        }
        lab[i] = 0;
        for (std::size_t b = 0; b < bucket.size(); ++b) fidx[b] -= fstride[b][i] * (m_ - 1);
        ridx -= rstride[i] * (m_ - 1);
      }
    }
    if (result.scope.empty())
      scalar *= result.table(0);
    else
      pool.push_back(std::move(result));
  }
  for (const auto& f : pool) scalar *= f.table(0);
  return scalar;
}

}  // namespace cvlat
