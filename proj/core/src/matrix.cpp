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

#include "lcgd/matrix.hpp"

#include <cmath>
#include <stdexcept>

#include "lcgd/numeric.hpp"

namespace lcgd {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

LttMatrix::LttMatrix(std::vector<double> first_col)
    : first_col_(std::move(first_col)) {
  require(!first_col_.empty(), "LttMatrix: order must be positive");
  for (double c : first_col_) {
    require(std::isfinite(c), "LttMatrix: entries must be finite");
  }
}

LowerTriMatrix LttMatrix::to_dense() const {
  const int n = order();
  LowerTriMatrix dense(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      dense.at(i, j) = first_col_[static_cast<std::size_t>(i - j)];
    }
  }
  return dense;
}

LowerTriMatrix::LowerTriMatrix(int n) : n_(n) {
  require(n >= 1, "LowerTriMatrix: order must be positive");
  data_.assign(static_cast<std::size_t>(n) * (n + 1) / 2, 0.0);
}

LowerTriMatrix LowerTriMatrix::identity(int n) {
  LowerTriMatrix m(n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

LowerTriMatrix LowerTriMatrix::diagonal(std::span<const double> diag) {
  LowerTriMatrix m(static_cast<int>(diag.size()));
  for (int i = 0; i < m.order(); ++i) m.at(i, i) = diag[i];
  return m;
}

void LowerTriMatrix::check_finite() const {
  for (double x : data_) {
    require(std::isfinite(x), "LowerTriMatrix: entries must be finite");
  }
}

LttMatrix make_c_lambda(int n, double lambda) {
  require(n >= 1, "make_c_lambda: n must be positive");
  require(lambda >= 0.0 && lambda < 1.0,
          "make_c_lambda: lambda must lie in [0, 1)");
  std::vector<double> col(static_cast<std::size_t>(n));
  col[0] = 1.0;
  for (int t = 1; t < n; ++t) col[t] = col[t - 1] * lambda;
  return LttMatrix(std::move(col));
}

LttMatrix prefix_sum_matrix(int n) {
  require(n >= 1, "prefix_sum_matrix: n must be positive");
  return LttMatrix(std::vector<double>(static_cast<std::size_t>(n), 1.0));
}

LttMatrix ltt_inverse(const LttMatrix& m) {
  const auto& a = m.first_col();
  require(a[0] != 0.0, "ltt_inverse: singular (leading entry is zero)");
  const int n = m.order();
  std::vector<double> b(static_cast<std::size_t>(n), 0.0);
  b[0] = 1.0 / a[0];
  for (int t = 1; t < n; ++t) {
    KahanSum acc;
    for (int s = 1; s <= t; ++s) acc.add(a[s] * b[t - s]);
    b[t] = -acc.value() / a[0];
  }
  return LttMatrix(std::move(b));
}

LttMatrix ltt_multiply(const LttMatrix& a, const LttMatrix& b) {
  require(a.order() == b.order(), "ltt_multiply: dimension mismatch");
  const int n = a.order();
  const auto& x = a.first_col();
  const auto& y = b.first_col();
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (int t = 0; t < n; ++t) {
    KahanSum acc;
    for (int s = 0; s <= t; ++s) acc.add(x[s] * y[t - s]);
    out[t] = acc.value();
  }
  return LttMatrix(std::move(out));
}

ColumnNorms column_norms(const LttMatrix& m) {
  const int n = m.order();
  const auto& c = m.first_col();
  // Column j holds c_0..c_{n-1-j}; accumulate suffix sums of squares.
  std::vector<double> d(static_cast<std::size_t>(n));
  KahanSum acc;
  for (int j = n - 1; j >= 0; --j) {
    acc.add(c[n - 1 - j] * c[n - 1 - j]);
    d[j] = std::sqrt(acc.value());
  }
  return ColumnNorms{std::move(d)};
}

ColumnNorms column_norms(const LowerTriMatrix& m) {
  const int n = m.order();
  std::vector<KahanSum> acc(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double x = m.at(i, j);
      acc[j].add(x * x);
    }
  }
  std::vector<double> d(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) d[j] = std::sqrt(acc[j].value());
  return ColumnNorms{std::move(d)};
}

LowerTriMatrix normalize_columns(const LttMatrix& m) {
  const int n = m.order();
  const ColumnNorms norms = column_norms(m);
  for (double dj : norms.d) {
    require(dj > 0.0, "normalize_columns: zero column");
  }
  LowerTriMatrix out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      out.at(i, j) = m.entry(i, j) / norms.d[j];
    }
  }
  return out;
}

double frobenius_norm(const LttMatrix& m) {
  const int n = m.order();
  const auto& c = m.first_col();
  // c_t occurs n-t times across the triangle.
  KahanSum acc;
  for (int t = 0; t < n; ++t) acc.add((n - t) * c[t] * c[t]);
  return std::sqrt(acc.value());
}

double frobenius_norm(const LowerTriMatrix& m) {
  return norm(m.packed());
}

double row_max_norm(const LttMatrix& m) {
  const int n = m.order();
  const auto& c = m.first_col();
  // Row i is a permutation of c_0..c_i, so row norms grow monotonically.
  KahanSum acc;
  for (int t = 0; t < n; ++t) acc.add(c[t] * c[t]);
  return std::sqrt(acc.value());
}

double row_max_norm(const LowerTriMatrix& m) {
  double best = 0.0;
  for (int i = 0; i < m.order(); ++i) {
    best = std::max(best, squared_norm(m.row(i)));
  }
  return std::sqrt(best);
}

LttMatrix b_factor(const LttMatrix& strategy) {
  require(strategy.first_col()[0] != 0.0, "b_factor: singular strategy");
  return ltt_multiply(prefix_sum_matrix(strategy.order()),
                      ltt_inverse(strategy));
}

LowerTriMatrix b_factor(const LowerTriMatrix& strategy) {
  const int n = strategy.order();
  for (int j = 0; j < n; ++j) {
    require(strategy.at(j, j) != 0.0, "b_factor: singular strategy");
  }
  // Row-wise back substitution on C^T b_i = a_i with a_i the i-th row of
  // the prefix-sum matrix (ones up to column i).
  LowerTriMatrix out(n);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int col = n - 1; col >= 0; --col) {
      const double a = (col <= i) ? 1.0 : 0.0;
      KahanSum acc;
      for (int j = col + 1; j < n; ++j) acc.add(x[j] * strategy.entry(j, col));
      x[col] = (a - acc.value()) / strategy.at(col, col);
    }
    for (int j = 0; j <= i; ++j) out.at(i, j) = x[j];
  }
  return out;
}

std::vector<double> matvec(const LttMatrix& m, std::span<const double> g) {
  require(static_cast<int>(g.size()) == m.order(), "matvec: size mismatch");
  const int n = m.order();
  const auto& c = m.first_col();
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    KahanSum acc;
    for (int j = 0; j <= i; ++j) acc.add(c[i - j] * g[j]);
    out[i] = acc.value();
  }
  return out;
}

std::vector<double> matvec(const LowerTriMatrix& m, std::span<const double> g) {
  require(static_cast<int>(g.size()) == m.order(), "matvec: size mismatch");
  const int n = m.order();
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    KahanSum acc;
    for (int j = 0; j <= i; ++j) acc.add(m.at(i, j) * g[j]);
    out[i] = acc.value();
  }
  return out;
}

}  // namespace lcgd
