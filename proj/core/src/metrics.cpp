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

#include "lcgd/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "lcgd/numeric.hpp"

namespace lcgd {

namespace {

double visit_frobenius(const TriMatrix& m) {
  return std::visit([](const auto& v) { return frobenius_norm(v); }, m);
}

double visit_rowmax(const TriMatrix& m) {
  return std::visit([](const auto& v) { return row_max_norm(v); }, m);
}

int visit_order(const TriMatrix& m) {
  return std::visit([](const auto& v) { return v.order(); }, m);
}

bool toeplitz_monotone(const LttMatrix& m) {
  const auto& c = m.first_col();
  for (std::size_t t = 0; t < c.size(); ++t) {
    if (c[t] < 0.0) return false;
    if (t > 0 && c[t] > c[t - 1]) return false;
  }
  return true;
}

double strategy_sens(const Factorization& f, const ParticipationSchema& s) {
  switch (f.sens_method) {
    case SensMethod::kLeftmost:
      return std::visit(
          [&](const auto& c) { return leftmost_pattern_sens(c, s); },
          f.strategy);
    case SensMethod::kBruteForce:
      return std::visit(
          [&](const auto& c) { return sens_bruteforce(c, s).value; },
          f.strategy);
    case SensMethod::kAuto:
      break;
  }
  if (const auto* ltt = std::get_if<LttMatrix>(&f.strategy)) {
    if (toeplitz_monotone(*ltt)) return sens_min_sep(*ltt, s);
    return sens_bruteforce(*ltt, s).value;
  }
  return sens_bruteforce(std::get<LowerTriMatrix>(f.strategy), s).value;
}

}  // namespace

Factorization dp_sgd_factorization(int n) {
  return Factorization{make_c_lambda(n, 0.0), prefix_sum_matrix(n), "dp-sgd",
                       SensMethod::kAuto};
}

Factorization lambda_factorization(int n, double lambda) {
  LttMatrix c = make_c_lambda(n, lambda);
  LttMatrix b = b_factor(c);
  return Factorization{std::move(c), std::move(b), "lambda",
                       SensMethod::kAuto};
}

Factorization normalized_lambda_factorization(int n, double lambda) {
  LttMatrix c = make_c_lambda(n, lambda);
  LowerTriMatrix cn = normalize_columns(c);
  LowerTriMatrix bn = b_factor(cn);
  // Unit columns with non-negative entries; the leftmost pattern attains
  // the supremum (validated against brute force in the tests).
  return Factorization{std::move(cn), std::move(bn), "lambda-normalized",
                       SensMethod::kLeftmost};
}

Factorization diagonal_strategy(int n) {
  if (n < 1) throw std::invalid_argument("diagonal_strategy: n >= 1");
  std::vector<double> diag(static_cast<std::size_t>(n));
  std::vector<double> inv(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    diag[j] = std::pow(static_cast<double>(n - j), 0.25);
    inv[j] = 1.0 / diag[j];
  }
  LowerTriMatrix c = LowerTriMatrix::diagonal(diag);
  // B = A C^{-1}: column j of B is (n - j)^{-1/4} from row j down.
  LowerTriMatrix b(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) b.at(i, j) = inv[j];
  }
  // Disjoint column supports with decreasing weights: the leftmost
  // b-separated pattern maximizes the column-sum norm.
  return Factorization{std::move(c), std::move(b), "diag-quarter",
                       SensMethod::kLeftmost};
}

MetricReport evaluate(const Factorization& f, const ParticipationSchema& s) {
  if (visit_order(f.strategy) != s.n || visit_order(f.left) != s.n) {
    throw std::invalid_argument("evaluate: factorization/schema order mismatch");
  }
  const double sens = strategy_sens(f, s);
  const double frob = visit_frobenius(f.left) / std::sqrt(double(s.n));
  const double rowmax = visit_rowmax(f.left);
  return MetricReport{frob * sens, rowmax * sens, sens, frob, rowmax};
}

double rmse_lambda_closed(int n, int k, int b, double lambda) {
  if (lambda < 0.0 || lambda >= 1.0) {
    throw std::invalid_argument("rmse_lambda_closed: lambda in [0,1)");
  }
  const double nn = static_cast<double>(n);
  const double frob2 = (1.0 - lambda) * (1.0 - lambda) * nn * (nn - 1.0) / 2.0 + nn;
  return std::sqrt(frob2 / nn) * sens_c_lambda(n, k, b, lambda);
}

double maxse_lambda_closed(int n, int k, int b, double lambda) {
  if (lambda < 0.0 || lambda >= 1.0) {
    throw std::invalid_argument("maxse_lambda_closed: lambda in [0,1)");
  }
  const double rowmax2 = 1.0 + (1.0 - lambda) * (1.0 - lambda) * (n - 1.0);
  return std::sqrt(rowmax2) * sens_c_lambda(n, k, b, lambda);
}

namespace {

double metric_value(Metric metric, const ParticipationSchema& s, double l) {
  return metric == Metric::kRmse ? rmse_lambda_closed(s.n, s.k, s.b, l)
                                 : maxse_lambda_closed(s.n, s.k, s.b, l);
}

// Golden-section minimization on [lo, hi]; the objectives are smooth and
// the bracket is one grid cell wide, so a fixed iteration count reaches
// machine resolution.
double golden_section(Metric metric, const ParticipationSchema& s, double lo,
                      double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = metric_value(metric, s, c);
  double fd = metric_value(metric, s, d);
  for (int it = 0; it < 90 && (b - a) > 1e-14; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = metric_value(metric, s, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = metric_value(metric, s, d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

LambdaOpt optimize_lambda(Metric metric, const ParticipationSchema& schema,
                          int grid_resolution) {
  if (grid_resolution < 2) {
    throw std::invalid_argument("optimize_lambda: grid resolution >= 2");
  }
  const int m = grid_resolution;
  const double cap = 1.0 - 1.0 / m;
  std::vector<double> grid;
  for (int t = 0; t < m; ++t) {
    const double l = static_cast<double>(t) / (m - 1);
    if (l <= cap) grid.push_back(l);
  }
  int arg = 0;
  double best = metric_value(metric, schema, grid[0]);
  for (int t = 1; t < static_cast<int>(grid.size()); ++t) {
    const double v = metric_value(metric, schema, grid[t]);
    if (v < best) {  // ties keep the smaller lambda
      best = v;
      arg = t;
    }
  }
  const double h = 1.0 / (m - 1);
  const double lo = std::max(0.0, grid[arg] - h);
  const double hi = std::min(cap, grid[arg] + h);
  const double refined = golden_section(metric, schema, lo, hi);
  const double fr = metric_value(metric, schema, refined);
  if (fr < best) return LambdaOpt{refined, fr};
  return LambdaOpt{grid[arg], best};
}

FullBatchBounds full_batch_bounds(int n) {
  if (n < 1) throw std::invalid_argument("full_batch_bounds: n >= 1");
  const double nn = static_cast<double>(n);
  KahanSum root_sum;
  for (int j = 1; j <= n; ++j) root_sum.add(std::sqrt(double(j)));
  return FullBatchBounds{
      std::sqrt(nn * (nn + 1.0) / 2.0),
      root_sum.value() / std::sqrt(nn),
      std::sqrt((nn + 1.0) * (2.0 * nn + 1.0) / 6.0),
  };
}

double normalized_rmse_ratio(int n, int k, int b, double lambda) {
  if (lambda <= 0.0 || lambda >= 1.0) {
    throw std::invalid_argument("normalized_rmse_ratio: lambda in (0,1)");
  }
  ParticipationSchema schema(n, k, b);
  const MetricReport plain = evaluate(lambda_factorization(n, lambda), schema);
  const MetricReport norm =
      evaluate(normalized_lambda_factorization(n, lambda), schema);
  return norm.rmse / plain.rmse;
}

MaxseBound maxse_bound_check(const ParticipationSchema& schema) {
  constexpr int kGrid = 512;
  std::vector<double> grid;
  grid.reserve(kGrid + 2);
  const double cap = 1.0 - 1.0 / kGrid;
  for (int t = 0; t < kGrid; ++t) {
    const double l = static_cast<double>(t) / (kGrid - 1);
    if (l <= cap) grid.push_back(l);
  }
  grid.push_back(std::exp(-1.0 / schema.b));
  grid.push_back(std::exp(-1.0 / std::sqrt(double(schema.n))));
  double best = metric_value(Metric::kMaxse, schema, grid[0]);
  for (double l : grid) {
    best = std::min(best, metric_value(Metric::kMaxse, schema, l));
  }
  const double envelope =
      schema.k + std::sqrt(double(schema.k)) * std::pow(double(schema.n), 0.25);
  return MaxseBound{best, best / envelope};
}

}  // namespace lcgd
