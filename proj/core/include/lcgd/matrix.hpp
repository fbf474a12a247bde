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

#ifndef LCGD_MATRIX_HPP_
#define LCGD_MATRIX_HPP_

#include <span>
#include <string>
#include <vector>

namespace lcgd {

class LowerTriMatrix;

// Lower-triangular Toeplitz matrix of order n, held as its first column
// c_0..c_{n-1}; entry (i, j) = c_{i-j} for i >= j.  Values are immutable
// after construction and safe to share across threads.
class LttMatrix {
 public:
  explicit LttMatrix(std::vector<double> first_col);

  int order() const { return static_cast<int>(first_col_.size()); }
  const std::vector<double>& first_col() const { return first_col_; }

  // 0-based; returns 0 above the diagonal.
  double entry(int i, int j) const {
    return (i >= j) ? first_col_[static_cast<std::size_t>(i - j)] : 0.0;
  }

  LowerTriMatrix to_dense() const;

 private:
  std::vector<double> first_col_;
};

// Dense lower-triangular matrix in packed row-major storage: row i holds
// i+1 entries starting at offset i(i+1)/2.  Strictly upper entries are
// structurally absent.
class LowerTriMatrix {
 public:
  explicit LowerTriMatrix(int n);

  static LowerTriMatrix identity(int n);
  static LowerTriMatrix diagonal(std::span<const double> diag);

  int order() const { return n_; }

  double& at(int i, int j) { return data_[offset(i, j)]; }
  double at(int i, int j) const { return data_[offset(i, j)]; }

  // 0-based; returns 0 above the diagonal.
  double entry(int i, int j) const { return (i >= j) ? at(i, j) : 0.0; }

  std::span<const double> row(int i) const {
    return {data_.data() + static_cast<std::size_t>(i) * (i + 1) / 2,
            static_cast<std::size_t>(i) + 1};
  }

  const std::vector<double>& packed() const { return data_; }

  // Throws std::invalid_argument on non-finite entries.
  void check_finite() const;

 private:
  std::size_t offset(int i, int j) const {
    return static_cast<std::size_t>(i) * (i + 1) / 2 +
           static_cast<std::size_t>(j);
  }

  int n_;
  std::vector<double> data_;
};

// Euclidean norms of the columns of a lower-triangular matrix.
struct ColumnNorms {
  std::vector<double> d;
};

// Strategy matrix with first column (1, lambda, lambda^2, ...).
// Rejects lambda outside [0, 1).
LttMatrix make_c_lambda(int n, double lambda);

// All-ones lower-triangular matrix; maps per-step values to prefix sums.
LttMatrix prefix_sum_matrix(int n);

// Inverse via the first-column convolution recurrence.  Requires a
// nonsingular leading entry.
LttMatrix ltt_inverse(const LttMatrix& m);

// Product of two LTT matrices = truncated convolution of first columns.
LttMatrix ltt_multiply(const LttMatrix& a, const LttMatrix& b);

ColumnNorms column_norms(const LttMatrix& m);
ColumnNorms column_norms(const LowerTriMatrix& m);

// m * diag(1/d_j); every column of the result has unit Euclidean norm.
// The result is not Toeplitz in general.  Rejects zero columns.
LowerTriMatrix normalize_columns(const LttMatrix& m);

double frobenius_norm(const LttMatrix& m);
double frobenius_norm(const LowerTriMatrix& m);

// max_i ||row i||_2  (the 2->infinity operator norm for lower-tri inputs).
double row_max_norm(const LttMatrix& m);
double row_max_norm(const LowerTriMatrix& m);

// Left factor B = A * strategy^{-1} of the factorization B * strategy = A,
// where A is the prefix-sum matrix.  Requires a nonzero diagonal.
LttMatrix b_factor(const LttMatrix& strategy);
LowerTriMatrix b_factor(const LowerTriMatrix& strategy);

// Matrix-vector products (m * g).
std::vector<double> matvec(const LttMatrix& m, std::span<const double> g);
std::vector<double> matvec(const LowerTriMatrix& m, std::span<const double> g);

// Debug dumps: {"n": .., "first_col": [..]} / {"n": .., "rows": [[..], ..]}.
std::string to_json(const LttMatrix& m);
std::string to_json(const LowerTriMatrix& m);

}  // namespace lcgd

#endif  // LCGD_MATRIX_HPP_
