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

#ifndef LCGD_SENSITIVITY_HPP_
#define LCGD_SENSITIVITY_HPP_

#include <cstdint>
#include <vector>

#include "lcgd/matrix.hpp"

namespace lcgd {

// Participation model: n iterations, at most k contributions per data
// point, at least b iterations between consecutive contributions.
struct ParticipationSchema {
  int n;
  int k;
  int b;

  // Validates 1 <= k <= n, b >= 1, and that the leftmost b-separated
  // k-pattern {0, b, ..., (k-1)b} fits inside [0, n).
  ParticipationSchema(int n, int k, int b);
};

// Strictly increasing 0-based column indices with gaps >= b.
struct ParticipationPattern {
  std::vector<int> indices;
};

// Norm of the sum of the leftmost b-separated k columns.  For a
// lower-triangular Toeplitz strategy with non-increasing non-negative
// first column this equals the exact min-separation sensitivity; inputs
// violating that hypothesis are rejected (use sens_bruteforce instead).
double sens_min_sep(const LttMatrix& c, const ParticipationSchema& schema);

// Same column-sum norm without the Toeplitz-monotone gate; exact whenever
// the leftmost pattern is known to attain the supremum (e.g. the
// column-normalized geometric strategy).
double leftmost_pattern_sens(const LttMatrix& c,
                             const ParticipationSchema& schema);
double leftmost_pattern_sens(const LowerTriMatrix& c,
                             const ParticipationSchema& schema);

// Geometric-sum evaluation of the leftmost-pattern sensitivity of
// C_lambda, exact for the finite matrix of order n.  O(k) arithmetic.
double sens_c_lambda(int n, int k, int b, double lambda);

// The classical displayed closed form
//   sens^2 = (1-l^{2b}) / ((1-l^2)(1-l^b)^2) * sum_{j=1..k} (1-l^{bj})^2,
// which treats every pattern column as extending exactly to row k*b.  It
// coincides with sens_c_lambda iff n == k*b; for other schemas it drops
// (or adds) the rows past k*b.  lambda = 0 returns the limit sqrt(k).
double sens_c_lambda_closed(int n, int k, int b, double lambda);

// Leftmost-pattern sensitivity of the column-normalized strategy
// C_lambda D^{-1}; equals 1 for k = 1 by construction.
double sens_normalized(int n, int k, int b, double lambda);

struct BruteForceSens {
  double value;
  ParticipationPattern argmax;
};

// Exhaustive supremum of ||sum of pattern columns|| over all patterns of
// size <= k with gaps >= b.  Requires entrywise non-negative input (the
// column-sum form of the supremum is only exact there) and an enumeration
// count within `budget` nodes.  Lexicographic enumeration; ties keep the
// first pattern found.
BruteForceSens sens_bruteforce(const LowerTriMatrix& c,
                               const ParticipationSchema& schema,
                               std::int64_t budget = 1'000'000);
BruteForceSens sens_bruteforce(const LttMatrix& c,
                               const ParticipationSchema& schema,
                               std::int64_t budget = 1'000'000);

// Single enumeration pass returning, for every pattern size s in [1, k],
// the supremum over b-separated patterns of exactly s columns
// (result[s-1]).  Shares the budget semantics of sens_bruteforce.
std::vector<double> sens_bruteforce_by_size(const LowerTriMatrix& c, int b,
                                            int k, std::int64_t budget);

// Number of DFS nodes sens_bruteforce visits (0 excluded); lets callers
// size budgets ahead of time.
std::int64_t bruteforce_node_count(int n, int k, int b);

}  // namespace lcgd

#endif  // LCGD_SENSITIVITY_HPP_
