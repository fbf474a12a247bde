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

#include "lcgd/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lcgd/numeric.hpp"

namespace lcgd {

namespace {

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

std::vector<double> leftmost_column_sum(const LowerTriMatrix& c,
                                        const ParticipationSchema& schema) {
  std::vector<double> sum(static_cast<std::size_t>(schema.n), 0.0);
  for (int j = 0; j < schema.k; ++j) {
    const int col = j * schema.b;
    for (int i = col; i < schema.n; ++i) sum[i] += c.at(i, col);
  }
  return sum;
}

}  // namespace

ParticipationSchema::ParticipationSchema(int n_in, int k_in, int b_in)
    : n(n_in), k(k_in), b(b_in) {
  require(n >= 1, "ParticipationSchema: n must be positive");
  require(k >= 1 && k <= n, "ParticipationSchema: need 1 <= k <= n");
  require(b >= 1, "ParticipationSchema: b must be positive");
  require(static_cast<std::int64_t>(k - 1) * b + 1 <= n,
          "ParticipationSchema: leftmost b-separated k-pattern does not fit");
}

double sens_min_sep(const LttMatrix& c, const ParticipationSchema& schema) {
  require(c.order() == schema.n, "sens_min_sep: order mismatch");
  const auto& col = c.first_col();
  for (std::size_t t = 0; t < col.size(); ++t) {
    require(col[t] >= 0.0, "sens_min_sep: entries must be non-negative");
    if (t > 0) {
      require(col[t] <= col[t - 1],
              "sens_min_sep: entries must be non-increasing");
    }
  }
  return leftmost_pattern_sens(c, schema);
}

double leftmost_pattern_sens(const LttMatrix& c,
                             const ParticipationSchema& schema) {
  require(c.order() == schema.n, "leftmost_pattern_sens: order mismatch");
  const auto& col = c.first_col();
  std::vector<double> sum(static_cast<std::size_t>(schema.n), 0.0);
  for (int j = 0; j < schema.k; ++j) {
    const int start = j * schema.b;
    for (int i = start; i < schema.n; ++i) sum[i] += col[i - start];
  }
  return norm(sum);
}

double leftmost_pattern_sens(const LowerTriMatrix& c,
                             const ParticipationSchema& schema) {
  require(c.order() == schema.n, "leftmost_pattern_sens: order mismatch");
  return norm(leftmost_column_sum(c, schema));
}

double sens_c_lambda(int n, int k, int b, double lambda) {
  ParticipationSchema schema(n, k, b);
  require(lambda >= 0.0 && lambda < 1.0, "sens_c_lambda: lambda in [0,1)");
  if (lambda == 0.0) return std::sqrt(static_cast<double>(k));
  // sens^2 = sum_{m,m'} l^{|m-m'|b} * g_max(m,m') with
  // g_M = <col_M, col_M> = (1 - l^{2(n - Mb)}) / (1 - l^2); collapsing the
  // m < M half by symmetry leaves one geometric weight per column.
  const double lb = std::pow(lambda, b);
  KahanSum s2;
  for (int m = 0; m < k; ++m) {
    const double g =
        (1.0 - std::pow(lambda, 2.0 * (n - static_cast<double>(m) * b))) /
        (1.0 - lambda * lambda);
    const double w =
        1.0 + 2.0 * lb * (1.0 - std::pow(lambda, static_cast<double>(m) * b)) /
                  (1.0 - lb);
    s2.add(g * w);
  }
  return std::sqrt(s2.value());
}

double sens_c_lambda_closed(int n, int k, int b, double lambda) {
  ParticipationSchema schema(n, k, b);
  require(lambda >= 0.0 && lambda < 1.0,
          "sens_c_lambda_closed: lambda in [0,1)");
  if (lambda == 0.0) return std::sqrt(static_cast<double>(k));
  const double lb = std::pow(lambda, b);
  const double factor = (1.0 - lb * lb) /
                        ((1.0 - lambda * lambda) * (1.0 - lb) * (1.0 - lb));
  KahanSum tail;
  for (int j = 1; j <= k; ++j) {
    const double t = 1.0 - std::pow(lambda, static_cast<double>(b) * j);
    tail.add(t * t);
  }
  return std::sqrt(factor * tail.value());
}

double sens_normalized(int n, int k, int b, double lambda) {
  ParticipationSchema schema(n, k, b);
  const LttMatrix c = make_c_lambda(n, lambda);
  return leftmost_pattern_sens(normalize_columns(c), schema);
}

std::int64_t bruteforce_node_count(int n, int k, int b) {
  // count[s][j]: number of b-separated patterns of size s whose last
  // element is j; nodes = all non-empty patterns of size <= k.
  std::vector<std::int64_t> prev(static_cast<std::size_t>(n), 1);
  std::int64_t total = n;  // size-1 patterns
  for (int s = 2; s <= k; ++s) {
    std::vector<std::int64_t> cur(static_cast<std::size_t>(n), 0);
    std::int64_t prefix = 0;
    std::int64_t level = 0;
    for (int j = 0; j < n; ++j) {
      if (j - b >= 0) prefix += prev[j - b];
      cur[j] = prefix;
      level += cur[j];
    }
    if (level == 0) break;
    total += level;
    prev = std::move(cur);
  }
  return total;
}

namespace {

struct BruteForceState {
  const LowerTriMatrix* c;
  int n, k, b;
  std::int64_t budget;
  std::int64_t visited = 0;
  std::vector<double> sum;                 // running column sum
  std::vector<std::vector<double>> undo;   // saved suffix per depth
  std::vector<int> stack;                  // current pattern
  std::vector<double> best;                // best ||sum||^2 per size
  std::vector<std::vector<int>> best_pattern;

  void visit(int col) {
    ++visited;
    if (visited > budget) {
      throw std::runtime_error("sens_bruteforce: enumeration budget exceeded");
    }
    // Save the suffix the column touches, then add it; popping restores
    // the saved bytes so the running sum never accumulates rounding.
    std::vector<double>& saved = undo[stack.size()];
    saved.assign(sum.begin() + col, sum.end());
    for (int i = col; i < n; ++i) sum[i] += c->at(i, col);
    stack.push_back(col);

    double value = 0.0;
    for (int i = stack.front(); i < n; ++i) value += sum[i] * sum[i];
    const std::size_t sz = stack.size();
    if (value > best[sz - 1]) {
      best[sz - 1] = value;
      best_pattern[sz - 1] = stack;
    }
    if (static_cast<int>(sz) < k) {
      for (int next = col + b; next < n; ++next) visit(next);
    }

    stack.pop_back();
    std::copy(saved.begin(), saved.end(), sum.begin() + col);
  }
};

BruteForceState run_bruteforce(const LowerTriMatrix& c, int k, int b,
                               std::int64_t budget) {
  const int n = c.order();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      if (c.at(i, j) < 0.0) {
        throw std::invalid_argument(
            "sens_bruteforce: negative entries present");
      }
    }
  }
  BruteForceState st;
  st.c = &c;
  st.n = n;
  st.k = k;
  st.b = b;
  st.budget = budget;
  st.sum.assign(static_cast<std::size_t>(n), 0.0);
  st.undo.assign(static_cast<std::size_t>(k), {});
  st.best.assign(static_cast<std::size_t>(k), -1.0);
  st.best_pattern.assign(static_cast<std::size_t>(k), {});
  for (int first = 0; first < n; ++first) st.visit(first);
  return st;
}

}  // namespace

BruteForceSens sens_bruteforce(const LowerTriMatrix& c,
                               const ParticipationSchema& schema,
                               std::int64_t budget) {
  require(c.order() == schema.n, "sens_bruteforce: order mismatch");
  BruteForceState st = run_bruteforce(c, schema.k, schema.b, budget);
  int arg = 0;
  for (int s = 1; s < schema.k; ++s) {
    if (st.best[s] > st.best[arg]) arg = s;
  }
  return BruteForceSens{std::sqrt(st.best[arg]),
                        ParticipationPattern{st.best_pattern[arg]}};
}

BruteForceSens sens_bruteforce(const LttMatrix& c,
                               const ParticipationSchema& schema,
                               std::int64_t budget) {
  return sens_bruteforce(c.to_dense(), schema, budget);
}

std::vector<double> sens_bruteforce_by_size(const LowerTriMatrix& c, int b,
                                            int k, std::int64_t budget) {
  ParticipationSchema schema(c.order(), k, b);
  BruteForceState st = run_bruteforce(c, k, b, budget);
  std::vector<double> out(static_cast<std::size_t>(k));
  for (int s = 0; s < k; ++s) {
    out[s] = st.best[s] >= 0.0 ? std::sqrt(st.best[s]) : 0.0;
  }
  return out;
}

}  // namespace lcgd
