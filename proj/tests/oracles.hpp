//
// Copyright 2026 The lcgd Authors
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
//
// Independent dense-arithmetic oracles for the tests.  Everything here
// works entry-by-entry in long double, deliberately ignoring the
// structure the library exploits, so library fast paths are checked
// against plain definitions.

#ifndef LCGD_TESTS_ORACLES_HPP_
#define LCGD_TESTS_ORACLES_HPP_

#include <cmath>
#include <vector>

#include "lcgd/matrix.hpp"

namespace lcgd::testing {

template <typename M>
double dense_frobenius(const M& m) {
  long double acc = 0.0L;
  for (int i = 0; i < m.order(); ++i) {
    for (int j = 0; j <= i; ++j) {
      const long double x = m.entry(i, j);
      acc += x * x;
    }
  }
  return static_cast<double>(std::sqrt(acc));
}

template <typename M>
double dense_row_max(const M& m) {
  long double best = 0.0L;
  for (int i = 0; i < m.order(); ++i) {
    long double acc = 0.0L;
    for (int j = 0; j <= i; ++j) {
      const long double x = m.entry(i, j);
      acc += x * x;
    }
    if (acc > best) best = acc;
  }
  return static_cast<double>(std::sqrt(best));
}

template <typename M>
std::vector<double> dense_column_norms(const M& m) {
  const int n = m.order();
  std::vector<long double> acc(static_cast<std::size_t>(n), 0.0L);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const long double x = m.entry(i, j);
      acc[j] += x * x;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    out[j] = static_cast<double>(std::sqrt(acc[j]));
  }
  return out;
}

// Plain O(n^3) triangular product.
template <typename A, typename B>
LowerTriMatrix dense_multiply(const A& a, const B& b) {
  const int n = a.order();
  LowerTriMatrix out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      long double acc = 0.0L;
      for (int s = j; s <= i; ++s) {
        acc += static_cast<long double>(a.entry(i, s)) * b.entry(s, j);
      }
      out.at(i, j) = static_cast<double>(acc);
    }
  }
  return out;
}

// Norm of the sum of the given 0-based columns.
template <typename M>
double dense_pattern_norm(const M& m, const std::vector<int>& cols) {
  const int n = m.order();
  std::vector<long double> sum(static_cast<std::size_t>(n), 0.0L);
  for (int c : cols) {
    for (int i = c; i < n; ++i) sum[i] += m.entry(i, c);
  }
  long double acc = 0.0L;
  for (long double x : sum) acc += x * x;
  return static_cast<double>(std::sqrt(acc));
}

inline double rel_err(double got, double want) {
  const double denom = std::max(std::abs(want), 1e-300);
  return std::abs(got - want) / denom;
}

}  // namespace lcgd::testing

#endif  // LCGD_TESTS_ORACLES_HPP_
