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

#ifndef LCGD_NOISE_HPP_
#define LCGD_NOISE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "lcgd/philox.hpp"

namespace lcgd {

// Correlated-noise stream configuration.  The emitted row at step i is
//   scale * sum_{s=0}^{min(p-1, i-1)} coeffs[s] * Z_{i-s},
// i.e. the i-th row of C^{-1} Z scaled, where C^{-1} is the banded
// lower-triangular Toeplitz matrix with first column `coeffs` and the
// rows of Z are fresh standard-normal blocks.
struct NoiseStreamConfig {
  enum class Kind { kIndependent, kLambdaCancel, kBandedInverse };

  Kind kind = Kind::kIndependent;
  double lambda = 0.0;          // kLambdaCancel only
  std::vector<double> coeffs;   // kBandedInverse only; coeffs[0] == 1
  int dim = 1;                  // d
  double scale = 1.0;           // zeta * sigma
  std::uint64_t seed = 0;

  static NoiseStreamConfig independent(int dim, double scale,
                                       std::uint64_t seed);
  static NoiseStreamConfig lambda_cancel(double lambda, int dim, double scale,
                                         std::uint64_t seed);
  static NoiseStreamConfig banded_inverse(std::vector<double> coeffs, int dim,
                                          double scale, std::uint64_t seed);

  // Correlation coefficients resolved per kind: {1}, {1, -lambda}, coeffs.
  // lambda_cancel(l) is by construction the same stream as
  // banded_inverse({1, -l}).
  std::vector<double> correlation_coeffs() const;
  int bandwidth() const;  // p = correlation_coeffs().size()

  void validate() const;  // throws std::invalid_argument
};

struct DrawAccounting {
  std::int64_t fresh_blocks = 0;
  std::int64_t regenerated_blocks = 0;
};

// Stateful producer of correlated noise rows.  Auxiliary storage is the
// ring of at most p-1 saved generator states plus one d-vector
// accumulator; no past noise vector is ever buffered.  Single-owner
// mutable state: not shareable across threads, movable between them.
class NoiseStream {
 public:
  explicit NoiseStream(NoiseStreamConfig config);

  // Emits the row for step step()+1.  Exactly one fresh block is drawn
  // and min(p-1, i-1) past blocks are regenerated from saved states.
  std::vector<double> next_noise();

  int step() const { return step_; }
  const NoiseStreamConfig& config() const { return config_; }
  const DrawAccounting& accounting() const { return accounting_; }
  int saved_state_count() const { return static_cast<int>(saved_.size()); }

 private:
  NoiseStreamConfig config_;
  std::vector<double> coeffs_;
  PrngState gen_;
  std::vector<PrngState> saved_;  // ring: block index j lives in slot
                                  // (j-1) mod (p-1)
  int step_ = 0;
  DrawAccounting accounting_;
  std::vector<double> block_;  // scratch for one regenerated block
};

DrawAccounting draw_accounting(const NoiseStream& stream);

// Materializes n steps of the stream by buffering every raw block and
// correlating densely; bit-identical to n calls of next_noise() with the
// same config.  Memory guard on n * d.
std::vector<std::vector<double>> buffered_reference(
    const NoiseStreamConfig& config, int n_steps,
    std::int64_t max_elems = std::int64_t{1} << 26);

// Test-vector files: {"seed", "mode", "d", "steps", "outputs"} with mode
// carrying kind and parameters.  Used for cross-implementation
// bit-exactness checks.
std::string emit_test_vectors(const NoiseStreamConfig& config, int steps);

struct VectorCheck {
  bool ok = false;
  std::string detail;
};

// Regenerates the configured stream and compares bit-for-bit.
VectorCheck check_test_vectors(const std::string& json_text);

}  // namespace lcgd

#endif  // LCGD_NOISE_HPP_
