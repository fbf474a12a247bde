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

#include "lcgd/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lcgd {

NoiseStreamConfig NoiseStreamConfig::independent(int dim, double scale,
                                                 std::uint64_t seed) {
  NoiseStreamConfig c;
  c.kind = Kind::kIndependent;
  c.dim = dim;
  c.scale = scale;
  c.seed = seed;
  c.validate();
  return c;
}

NoiseStreamConfig NoiseStreamConfig::lambda_cancel(double lambda, int dim,
                                                   double scale,
                                                   std::uint64_t seed) {
  NoiseStreamConfig c;
  c.kind = Kind::kLambdaCancel;
  c.lambda = lambda;
  c.dim = dim;
  c.scale = scale;
  c.seed = seed;
  c.validate();
  return c;
}

NoiseStreamConfig NoiseStreamConfig::banded_inverse(std::vector<double> coeffs,
                                                    int dim, double scale,
                                                    std::uint64_t seed) {
  NoiseStreamConfig c;
  c.kind = Kind::kBandedInverse;
  c.coeffs = std::move(coeffs);
  c.dim = dim;
  c.scale = scale;
  c.seed = seed;
  c.validate();
  return c;
}

void NoiseStreamConfig::validate() const {
  if (dim < 1) throw std::invalid_argument("noise config: dim must be >= 1");
  if (!(scale >= 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("noise config: scale must be non-negative");
  }
  switch (kind) {
    case Kind::kIndependent:
      break;
    case Kind::kLambdaCancel:
      if (!(lambda >= 0.0 && lambda < 1.0)) {
        throw std::invalid_argument("noise config: lambda must be in [0, 1)");
      }
      break;
    case Kind::kBandedInverse:
      if (coeffs.empty()) {
        throw std::invalid_argument("noise config: coeffs must be non-empty");
      }
      if (coeffs[0] != 1.0) {
        throw std::invalid_argument("noise config: coeffs[0] must be 1");
      }
      for (double c : coeffs) {
        if (!std::isfinite(c)) {
          throw std::invalid_argument("noise config: coeffs must be finite");
        }
      }
      break;
  }
}

std::vector<double> NoiseStreamConfig::correlation_coeffs() const {
  switch (kind) {
    case Kind::kIndependent:
      return {1.0};
    case Kind::kLambdaCancel:
      return {1.0, -lambda};
    case Kind::kBandedInverse:
      return coeffs;
  }
  throw std::logic_error("noise config: unknown kind");
}

int NoiseStreamConfig::bandwidth() const {
  return static_cast<int>(correlation_coeffs().size());
}

NoiseStream::NoiseStream(NoiseStreamConfig config)
    : config_(std::move(config)), coeffs_(config_.correlation_coeffs()) {
  config_.validate();
  gen_ = PrngState{config_.seed, Counter128{}};
  saved_.reserve(coeffs_.size() - 1);
  block_.resize(static_cast<std::size_t>(config_.dim));
}

std::vector<double> NoiseStream::next_noise() {
  const int d = config_.dim;
  const int p = static_cast<int>(coeffs_.size());
  const int i = step_ + 1;  // 1-based step being produced

  std::vector<double> acc(static_cast<std::size_t>(d), 0.0);

  // Regenerate the needed past blocks oldest-first: Z_{i-s} for
  // s = min(p-1, i-1) .. 1.  Saved states are never consumed; they are
  // copied, replayed, and stay available for later steps.
  const int lookback = std::min(p - 1, i - 1);
  for (int s = lookback; s >= 1; --s) {
    const int block_index = i - s;  // 1-based
    const std::size_t ring_slot =
        static_cast<std::size_t>((block_index - 1) % (p - 1));
    PrngState replay = saved_[ring_slot];
    gaussian_block_fill(replay, block_);
    ++accounting_.regenerated_blocks;
    const double w = coeffs_[static_cast<std::size_t>(s)];
    for (int t = 0; t < d; ++t) acc[t] += w * block_[t];
  }

  // Save the fresh state, then draw the fresh block from it.
  if (p > 1) {
    const std::size_t ring_slot = static_cast<std::size_t>((i - 1) % (p - 1));
    if (ring_slot < saved_.size()) {
      saved_[ring_slot] = gen_;
    } else {
      saved_.push_back(gen_);
    }
  }
  gaussian_block_fill(gen_, block_);
  ++accounting_.fresh_blocks;
  for (int t = 0; t < d; ++t) acc[t] += coeffs_[0] * block_[t];

  for (int t = 0; t < d; ++t) acc[t] = config_.scale * acc[t];
  ++step_;
  return acc;
}

DrawAccounting draw_accounting(const NoiseStream& stream) {
  return stream.accounting();
}

std::vector<std::vector<double>> buffered_reference(
    const NoiseStreamConfig& config, int n_steps, std::int64_t max_elems) {
  config.validate();
  if (n_steps < 0) {
    throw std::invalid_argument("buffered_reference: n_steps must be >= 0");
  }
  if (static_cast<std::int64_t>(n_steps) * config.dim > max_elems) {
    throw std::invalid_argument("buffered_reference: memory budget exceeded");
  }
  const int d = config.dim;
  const std::vector<double> coeffs = config.correlation_coeffs();
  const int p = static_cast<int>(coeffs.size());

  // All raw blocks, same seed and counter layout as the stream.
  std::vector<std::vector<double>> blocks(static_cast<std::size_t>(n_steps));
  PrngState gen{config.seed, Counter128{}};
  for (int i = 0; i < n_steps; ++i) {
    blocks[i].resize(static_cast<std::size_t>(d));
    gaussian_block_fill(gen, blocks[i]);
  }

  // Correlate densely, accumulating in the stream's order (oldest block
  // first, fresh block last) so the result is bit-identical.
  std::vector<std::vector<double>> out(static_cast<std::size_t>(n_steps));
  for (int i = 1; i <= n_steps; ++i) {
    std::vector<double> acc(static_cast<std::size_t>(d), 0.0);
    const int lookback = std::min(p - 1, i - 1);
    for (int s = lookback; s >= 0; --s) {
      const double w = coeffs[static_cast<std::size_t>(s)];
      const std::vector<double>& z = blocks[static_cast<std::size_t>(i - s - 1)];
      for (int t = 0; t < d; ++t) acc[t] += w * z[t];
    }
    for (int t = 0; t < d; ++t) acc[t] = config.scale * acc[t];
    out[static_cast<std::size_t>(i - 1)] = std::move(acc);
  }
  return out;
}

}  // namespace lcgd
