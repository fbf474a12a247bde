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

#include "lcgd/calibration.hpp"

#include <cmath>

namespace lcgd {

namespace {
constexpr double kSigmaTolerance = 1e-9;
constexpr double kBracketLimit = 1e15;
}  // namespace

PrivacyBudget::PrivacyBudget(double epsilon_in, double delta_in)
    : epsilon(epsilon_in), delta(delta_in) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw std::invalid_argument("PrivacyBudget: epsilon must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("PrivacyBudget: delta must be in (0, 1)");
  }
}

double standard_normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

double gaussian_mechanism_delta(double sigma, double epsilon) {
  const double a = 1.0 / (2.0 * sigma);
  const double b = epsilon * sigma;
  return standard_normal_cdf(a - b) -
         std::exp(epsilon) * standard_normal_cdf(-a - b);
}

double gaussian_multiplier(const PrivacyBudget& budget) {
  const double eps = budget.epsilon;
  const double delta = budget.delta;
  // delta(sigma) is decreasing; expand until the target is bracketed.
  double lo = 0.0;
  double hi = 1.0;
  while (gaussian_mechanism_delta(hi, eps) > delta) {
    lo = hi;
    hi *= 2.0;
    if (hi > kBracketLimit) {
      throw std::runtime_error(
          "gaussian_multiplier: bracket expansion failed (malformed budget)");
    }
  }
  while (hi - lo > kSigmaTolerance) {
    const double mid = 0.5 * (lo + hi);
    if (gaussian_mechanism_delta(mid, eps) > delta) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return hi;  // the feasible endpoint
}

NoiseScale calibrate(const LttMatrix& strategy,
                     const ParticipationSchema& schema,
                     const PrivacyBudget& budget) {
  const double sens = sens_min_sep(strategy, schema);
  const double multiplier = gaussian_multiplier(budget);
  return NoiseScale{multiplier, sens, sens * multiplier};
}

double amplified_multiplier_stub(const PrivacyBudget& /*budget*/,
                                 const LttMatrix& /*strategy*/, int /*k*/) {
  throw NotImplementedError(
      "amplified_multiplier_stub: not implemented: Balls-in-Bins Monte-Carlo "
      "accountant out of scope; use amplification \"none\"");
}

}  // namespace lcgd
