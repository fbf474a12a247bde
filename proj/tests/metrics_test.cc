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

#include <cmath>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.hpp"

namespace lcgd {
namespace {

using testing::dense_multiply;
using testing::rel_err;

TEST(Evaluate, DpSgdFullBatch) {
  // C = I, b = 1, k = n: rmse = sqrt(n(n+1)/2); n = 3 gives sqrt(6).
  const MetricReport r = evaluate(dp_sgd_factorization(3), {3, 3, 1});
  EXPECT_NEAR(r.rmse, std::sqrt(6.0), 1e-14);
  EXPECT_NEAR(r.sens, std::sqrt(3.0), 1e-15);
  EXPECT_NEAR(r.maxse, 3.0, 1e-14);
  EXPECT_LT(rel_err(r.rmse, r.frob_over_sqrt_n * r.sens), 1e-15);
  EXPECT_LT(rel_err(r.maxse, r.rowmax * r.sens), 1e-15);
  EXPECT_LE(r.rmse, r.maxse * (1.0 + 1e-15));
}

TEST(Evaluate, LambdaZeroEqualsDpSgd) {
  const ParticipationSchema schema(12, 3, 4);
  const MetricReport a = evaluate(dp_sgd_factorization(12), schema);
  const MetricReport b = evaluate(lambda_factorization(12, 0.0), schema);
  EXPECT_DOUBLE_EQ(a.rmse, b.rmse);
  EXPECT_DOUBLE_EQ(a.maxse, b.maxse);
  EXPECT_DOUBLE_EQ(a.sens, b.sens);
}

TEST(Evaluate, SingleParticipationMaxse) {
  // n=5, l=0.5, k=1: maxse = sqrt(2) * sqrt((1 - 0.5^10) / 0.75).
  const MetricReport r = evaluate(lambda_factorization(5, 0.5), {5, 1, 5});
  const double want =
      std::sqrt(2.0) * std::sqrt((1.0 - std::pow(0.5, 10)) / 0.75);
  EXPECT_LT(rel_err(r.maxse, want), 1e-13);
}

TEST(Evaluate, RmseNeverExceedsMaxse) {
  for (int n : {4, 32}) {
    for (double lambda : {0.0, 0.5, 0.9}) {
      for (const auto& f :
           {lambda_factorization(n, lambda),
            normalized_lambda_factorization(n, lambda),
            dp_sgd_factorization(n), diagonal_strategy(n)}) {
        const MetricReport r = evaluate(f, {n, n, 1});
        EXPECT_LE(r.rmse, r.maxse * (1.0 + 1e-14)) << f.label;
      }
    }
  }
}

TEST(Evaluate, AutoFallsBackToBruteForce) {
  // Non-monotone non-negative Toeplitz column defeats the theorem gate.
  const LttMatrix c({1.0, 0.0, 0.5, 0.25});
  Factorization f{c, b_factor(c), "bumpy", SensMethod::kAuto};
  const ParticipationSchema schema(4, 2, 2);
  const MetricReport r = evaluate(f, schema);
  EXPECT_LT(rel_err(r.sens, sens_bruteforce(c, schema).value), 1e-14);
}

TEST(ClosedForms, MatchEvaluateOnGrid) {
  for (int n : {4, 32, 100, 256}) {
    for (double lambda : {0.0, 0.1, 0.5, 0.9, 0.97}) {
      const Factorization f = lambda_factorization(n, lambda);
      for (int k : {1, 2, 4}) {
        if (k > n) continue;
        const int b = n / k;
        const ParticipationSchema schema(n, k, b);
        const MetricReport r = evaluate(f, schema);
        EXPECT_LT(rel_err(rmse_lambda_closed(n, k, b, lambda), r.rmse), 1e-10)
            << "n=" << n << " k=" << k << " l=" << lambda;
        EXPECT_LT(rel_err(maxse_lambda_closed(n, k, b, lambda), r.maxse),
                  1e-10);
      }
    }
  }
  // The spelled-out spot check: n=100, k=1, b=100, l=0.9.
  const MetricReport r = evaluate(lambda_factorization(100, 0.9), {100, 1, 100});
  EXPECT_LT(rel_err(rmse_lambda_closed(100, 1, 100, 0.9), r.rmse), 1e-10);
}

TEST(ClosedForms, LambdaZeroReductions) {
  const int n = 17;
  const ParticipationSchema schema(n, n, 1);
  const MetricReport sgd = evaluate(dp_sgd_factorization(n), schema);
  EXPECT_LT(rel_err(rmse_lambda_closed(n, n, 1, 0.0), sgd.rmse), 1e-13);
  // maxse at l=0: sqrt(n) * sqrt(k).
  EXPECT_LT(rel_err(maxse_lambda_closed(n, n, 1, 0.0),
                    std::sqrt(double(n)) * std::sqrt(double(n))),
            1e-13);
}

TEST(OptimizeLambda, FullBatchOptimumIsZero) {
  for (int n : {16, 64}) {
    const ParticipationSchema schema(n, n, 1);
    EXPECT_EQ(optimize_lambda(Metric::kRmse, schema).lambda_star, 0.0);
    EXPECT_EQ(optimize_lambda(Metric::kMaxse, schema).lambda_star, 0.0);
  }
}

TEST(OptimizeLambda, MaxseMinimizerAtLeastRmseMinimizer) {
  for (int n : {32, 128, 512}) {
    for (int k : {1, 2, 8}) {
      const int b = n / k;
      const ParticipationSchema schema(n, k, b);
      const LambdaOpt r = optimize_lambda(Metric::kRmse, schema);
      const LambdaOpt m = optimize_lambda(Metric::kMaxse, schema);
      EXPECT_GE(m.lambda_star, r.lambda_star - 1e-12)
          << "n=" << n << " k=" << k;
    }
  }
}

TEST(OptimizeLambda, SingleParticipationPrefersStrongCorrelation) {
  const ParticipationSchema schema(512, 1, 512);
  EXPECT_GT(optimize_lambda(Metric::kRmse, schema).lambda_star, 0.5);
}

TEST(OptimizeLambda, RejectsTinyGrid) {
  EXPECT_THROW(optimize_lambda(Metric::kRmse, {8, 2, 4}, 1),
               std::invalid_argument);
}

TEST(FullBatchBoundsTest, DegenerateOrder) {
  const FullBatchBounds b = full_batch_bounds(1);
  EXPECT_DOUBLE_EQ(b.trivial, 1.0);
  EXPECT_DOUBLE_EQ(b.diagonal, 1.0);
  EXPECT_DOUBLE_EQ(b.lower, 1.0);
}

TEST(FullBatchBoundsTest, NEquals4) {
  const FullBatchBounds b = full_batch_bounds(4);
  EXPECT_NEAR(b.diagonal, (3.0 + std::sqrt(2.0) + std::sqrt(3.0)) / 2.0,
              1e-14);
}

TEST(FullBatchBoundsTest, Ordering) {
  for (int n : {1, 2, 7, 100, 5000}) {
    const FullBatchBounds b = full_batch_bounds(n);
    EXPECT_LE(b.lower, b.diagonal * (1.0 + 1e-14));
    EXPECT_LE(b.diagonal, b.trivial * (1.0 + 1e-14));
  }
}

TEST(FullBatchBoundsTest, AsymptoticRatios) {
  const FullBatchBounds b = full_batch_bounds(10000);
  EXPECT_NEAR(b.trivial / b.diagonal - 1.0, 0.06, 0.005);
  EXPECT_NEAR(b.diagonal / b.lower - 1.0, 0.1547, 0.005);
}

TEST(DiagonalStrategyTest, SmallCases) {
  const Factorization f1 = diagonal_strategy(1);
  EXPECT_DOUBLE_EQ(std::get<LowerTriMatrix>(f1.strategy).at(0, 0), 1.0);

  const Factorization f4 = diagonal_strategy(4);
  const auto& c = std::get<LowerTriMatrix>(f4.strategy);
  EXPECT_NEAR(c.at(0, 0), std::pow(4.0, 0.25), 1e-15);
  EXPECT_NEAR(c.at(1, 1), std::pow(3.0, 0.25), 1e-15);
  EXPECT_NEAR(c.at(2, 2), std::pow(2.0, 0.25), 1e-15);
  EXPECT_NEAR(c.at(3, 3), 1.0, 1e-15);
}

TEST(DiagonalStrategyTest, FullBatchRmseMatchesBound) {
  for (int n : {4, 64, 256}) {
    const MetricReport r = evaluate(diagonal_strategy(n), {n, n, 1});
    const FullBatchBounds b = full_batch_bounds(n);
    EXPECT_LT(rel_err(r.rmse, b.diagonal), 1e-12) << "n=" << n;
    // sens under b=1, k=n is sqrt(sum sqrt(j)).
    double s = 0.0;
    for (int j = 1; j <= n; ++j) s += std::sqrt(double(j));
    EXPECT_LT(rel_err(r.sens, std::sqrt(s)), 1e-12);
  }
}

TEST(DiagonalStrategyTest, FactorizationInvariant) {
  const Factorization f = diagonal_strategy(16);
  const LowerTriMatrix prod = dense_multiply(
      std::get<LowerTriMatrix>(f.left), std::get<LowerTriMatrix>(f.strategy));
  for (int i = 0; i < 16; ++i) {
    for (int j = 0; j <= i; ++j) EXPECT_NEAR(prod.at(i, j), 1.0, 1e-12);
  }
}

TEST(LowerBoundDominance, AllConstructedFactorizations) {
  const int n = 64;
  const double lower = full_batch_bounds(n).lower;
  const ParticipationSchema schema(n, n, 1);
  for (const auto& f :
       {dp_sgd_factorization(n), lambda_factorization(n, 0.3),
        lambda_factorization(n, 0.7), lambda_factorization(n, 0.95),
        normalized_lambda_factorization(n, 0.6), diagonal_strategy(n)}) {
    EXPECT_GE(evaluate(f, schema).rmse, lower - 1e-9) << f.label;
  }
}

TEST(NormalizedRatio, SingleParticipationBelowOne) {
  for (int n : {16, 64}) {
    for (double lambda : {0.05, 0.3, 0.6, 0.9, 0.95}) {
      EXPECT_LT(normalized_rmse_ratio(n, 1, n, lambda), 1.0)
          << "n=" << n << " l=" << lambda;
    }
  }
}

TEST(NormalizedRatio, ApproachesOneAsLambdaVanishes) {
  EXPECT_NEAR(normalized_rmse_ratio(32, 1, 32, 1e-6), 1.0, 1e-6);
}

TEST(NormalizedRatio, SmallKImprovesMore) {
  EXPECT_LT(normalized_rmse_ratio(32, 1, 4, 0.9),
            normalized_rmse_ratio(32, 8, 4, 0.9));
}

TEST(MaxseBoundCheckTest, FullBatchOptimizedAtZero) {
  const ParticipationSchema schema(64, 64, 1);
  const MaxseBound r = maxse_bound_check(schema);
  EXPECT_LT(rel_err(r.optimized, maxse_lambda_closed(64, 64, 1, 0.0)), 1e-12);
}

TEST(MaxseBoundCheckTest, BoundedAndBelowDpSgdLevel) {
  for (int n : {64, 256, 1024}) {
    for (int k : {1, 4, 16}) {
      const ParticipationSchema schema(n, k, n / k);
      const MaxseBound r = maxse_bound_check(schema);
      EXPECT_LT(r.bound_constant, 4.0) << "n=" << n << " k=" << k;
      EXPECT_LE(r.optimized,
                std::sqrt(double(n) * k) * (1.0 + 1e-12));
      // The proof-guided grid points dominate the optimum.
      EXPECT_LE(r.optimized,
                maxse_lambda_closed(n, k, n / k, std::exp(-1.0 / (n / k))) *
                    (1.0 + 1e-12));
    }
  }
}

}  // namespace
}  // namespace lcgd
