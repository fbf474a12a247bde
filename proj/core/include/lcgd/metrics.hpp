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

#ifndef LCGD_METRICS_HPP_
#define LCGD_METRICS_HPP_

#include <string>
#include <variant>

#include "lcgd/matrix.hpp"
#include "lcgd/sensitivity.hpp"

namespace lcgd {

enum class Metric { kRmse, kMaxse };

// How evaluate() obtains the sensitivity of the strategy matrix.
//  kAuto:       Toeplitz-monotone strategies use the leftmost-pattern
//               formula; anything else falls back to exhaustive search.
//  kLeftmost:   leftmost-pattern column sum; factories set this where the
//               leftmost pattern provably attains the supremum.
//  kBruteForce: exhaustive search regardless of structure.
enum class SensMethod { kAuto, kLeftmost, kBruteForce };

using TriMatrix = std::variant<LttMatrix, LowerTriMatrix>;

// A factorization B * C = A of the prefix-sum matrix: `strategy` is C
// (sets the noise scale), `left` is B (shapes the error).
struct Factorization {
  TriMatrix strategy;
  TriMatrix left;
  std::string label;
  SensMethod sens_method = SensMethod::kAuto;
};

struct MetricReport {
  double rmse;
  double maxse;
  double sens;
  double frob_over_sqrt_n;
  double rowmax;
};

// C = I, B = A (independent per-step noise).
Factorization dp_sgd_factorization(int n);
// C = C_lambda, B = A C_lambda^{-1}.
Factorization lambda_factorization(int n, double lambda);
// C = C_lambda D^{-1} (unit columns), B = A D C_lambda^{-1}.
Factorization normalized_lambda_factorization(int n, double lambda);
// C = diag((n - j + 1)^{1/4}), B = A C^{-1}; the constant-optimal diagonal
// strategy for the full-batch regime.
Factorization diagonal_strategy(int n);

// rmse = ||B||_F / sqrt(n) * sens(C), maxse = ||B||_{2->inf} * sens(C).
// The caller guarantees left * strategy == prefix_sum_matrix(n).
MetricReport evaluate(const Factorization& f, const ParticipationSchema& s);

// Closed-form metric evaluations for the geometric factorization; the
// B-norm factors use
//   ||B_lambda||_F^2        = (1-lambda)^2 n(n-1)/2 + n,
//   ||B_lambda||_{2->inf}^2 = 1 + (1-lambda)^2 (n-1),
// and the sensitivity the exact finite-n geometric sum.
double rmse_lambda_closed(int n, int k, int b, double lambda);
double maxse_lambda_closed(int n, int k, int b, double lambda);

struct LambdaOpt {
  double lambda_star;
  double value;
};

// Argmin of the chosen metric over the uniform grid
// {t/(m-1) : t = 0..m-1} intersected with [0, 1 - 1/m], refined by
// golden-section search inside the winning grid cell.  Grid ties break
// toward the smaller lambda.
LambdaOpt optimize_lambda(Metric metric, const ParticipationSchema& schema,
                          int grid_resolution = 512);

struct FullBatchBounds {
  double trivial;   // sqrt(n(n+1)/2)
  double diagonal;  // (1/sqrt(n)) * sum_j sqrt(j)
  double lower;     // sqrt((n+1)(2n+1)/6)
};

// Full-batch (b = 1, k = n) RMSE landmarks: the trivial factorization,
// the optimal diagonal factorization, and the universal lower bound.
FullBatchBounds full_batch_bounds(int n);

// evaluate(normalized)/evaluate(plain) under the same schema.
double normalized_rmse_ratio(int n, int k, int b, double lambda);

struct MaxseBound {
  double optimized;       // min over the lambda grid of MaxSE
  double bound_constant;  // optimized / (k + sqrt(k) n^{1/4})
};

// Minimizes MaxSE over the default grid augmented with the proof-guided
// points exp(-1/b) and exp(-1/sqrt(n)).
MaxseBound maxse_bound_check(const ParticipationSchema& schema);

}  // namespace lcgd

#endif  // LCGD_METRICS_HPP_
