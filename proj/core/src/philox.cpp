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

#include "lcgd/philox.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lcgd {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void round_once(std::array<std::uint32_t, 4>& c,
                       const std::array<std::uint32_t, 2>& k) {
  const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * c[0];
  const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * c[2];
  const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
  const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
  const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
  const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
  c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

// One Box-Muller pair from the 128-bit output at pair index q.
// u1 maps into (0, 1] so the log never sees zero; u2 into [0, 1).
// No rejection: the draw count per pair is fixed, which is what makes
// regeneration from a saved counter bit-exact.
struct NormalPair {
  double z0, z1;
};

NormalPair normal_pair(std::uint64_t seed, Counter128 q) {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(q.lo), static_cast<std::uint32_t>(q.lo >> 32),
      static_cast<std::uint32_t>(q.hi), static_cast<std::uint32_t>(q.hi >> 32)};
  const std::array<std::uint32_t, 2> key = {
      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  const auto r = philox4x32_10(ctr, key);
  const std::uint64_t a = r[0] | (static_cast<std::uint64_t>(r[1]) << 32);
  const std::uint64_t b = r[2] | (static_cast<std::uint64_t>(r[3]) << 32);
  const double u1 = (static_cast<double>(a >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(b >> 11) * 0x1.0p-53;
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  return NormalPair{radius * std::cos(angle), radius * std::sin(angle)};
}

inline Counter128 half(Counter128 c) {
  return Counter128{(c.lo >> 1) | (c.hi << 63), c.hi >> 1};
}

}  // namespace

Counter128 counter_add(Counter128 a, std::uint64_t b) {
  Counter128 r{a.lo + b, a.hi};
  if (r.lo < a.lo) {
    ++r.hi;
    if (r.hi == 0) throw std::overflow_error("Counter128: counter overflow");
  }
  return r;
}

std::array<std::uint32_t, 4> philox4x32_10(
    const std::array<std::uint32_t, 4>& counter,
    const std::array<std::uint32_t, 2>& key) {
  std::array<std::uint32_t, 4> c = counter;
  std::array<std::uint32_t, 2> k = key;
  for (int i = 0; i < 10; ++i) {
    if (i > 0) {
      k[0] += kPhiloxW0;
      k[1] += kPhiloxW1;
    }
    round_once(c, k);
  }
  return c;
}

double standard_normal_at(std::uint64_t seed, Counter128 index) {
  const NormalPair p = normal_pair(seed, half(index));
  return (index.lo & 1u) ? p.z1 : p.z0;
}

std::uint64_t random_u64(std::uint64_t seed, Counter128 index) {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(index.lo),
      static_cast<std::uint32_t>(index.lo >> 32),
      static_cast<std::uint32_t>(index.hi),
      static_cast<std::uint32_t>(index.hi >> 32)};
  const std::array<std::uint32_t, 2> key = {
      static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  const auto r = philox4x32_10(ctr, key);
  return r[0] | (static_cast<std::uint64_t>(r[1]) << 32);
}

void gaussian_block_fill(PrngState& state, std::vector<double>& out) {
  const std::size_t d = out.size();
  // Validates the whole advance up front.
  const Counter128 end = counter_add(state.counter, d);
  Counter128 idx = state.counter;
  std::size_t i = 0;
  if (i < d && (idx.lo & 1u)) {  // leading unpaired draw
    out[i++] = normal_pair(state.seed, half(idx)).z1;
    idx = counter_add(idx, 1);
  }
  while (i + 1 < d) {
    const NormalPair p = normal_pair(state.seed, half(idx));
    out[i++] = p.z0;
    out[i++] = p.z1;
    idx = counter_add(idx, 2);
  }
  if (i < d) {  // trailing unpaired draw
    out[i] = normal_pair(state.seed, half(idx)).z0;
  }
  state.counter = end;
}

GaussianBlock gaussian_block(const PrngState& state, int d) {
  if (d < 1) throw std::invalid_argument("gaussian_block: d must be positive");
  GaussianBlock block;
  block.values.resize(static_cast<std::size_t>(d));
  block.next_state = state;
  gaussian_block_fill(block.next_state, block.values);
  return block;
}

}  // namespace lcgd
