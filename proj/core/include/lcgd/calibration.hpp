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

#ifndef LCGD_CALIBRATION_HPP_
#define LCGD_CALIBRATION_HPP_

#include <stdexcept>

#include "lcgd/matrix.hpp"
#include "lcgd/sensitivity.hpp"

namespace lcgd {

struct PrivacyBudget {
  double epsilon;
  double delta;

  // Validates epsilon > 0 and 0 < delta < 1.
  PrivacyBudget(double epsilon, double delta);
};

struct NoiseScale {
  double sigma_multiplier;  // unit-sensitivity Gaussian multiplier
  double sens;              // strategy sensitivity under the schema
  double total;             // sens * sigma_multiplier
};

// Standard normal CDF via erfc; absolute error well under 1e-14 on
// [-8, 8], enough to resolve delta down to 1e-10.
double standard_normal_cdf(double x);

// Exact delta achieved by the unit-sensitivity Gaussian mechanism at
// noise sigma: Phi(1/(2s) - eps*s) - e^eps * Phi(-1/(2s) - eps*s).
double gaussian_mechanism_delta(double sigma, double epsilon);

// Smallest sigma (absolute tolerance 1e-9, bisection after exponential
// bracketing) with gaussian_mechanism_delta(sigma, eps) <= delta.
double gaussian_multiplier(const PrivacyBudget& budget);

// Unamplified path: total = sens_min_sep(strategy, schema) * multiplier.
NoiseScale calibrate(const LttMatrix& strategy,
                     const ParticipationSchema& schema,
                     const PrivacyBudget& budget);

class NotImplementedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Declared extension point for the Monte-Carlo shuffling accountant.
// Always throws NotImplementedError; configs selecting amplification fail
// loudly here instead of silently approximating.
double amplified_multiplier_stub(const PrivacyBudget& budget,
                                 const LttMatrix& strategy, int k);

}  // namespace lcgd

#endif  // LCGD_CALIBRATION_HPP_
