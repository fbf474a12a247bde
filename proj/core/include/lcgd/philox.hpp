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

#ifndef LCGD_PHILOX_HPP_
#define LCGD_PHILOX_HPP_

#include <array>
#include <cstdint>
#include <vector>

namespace lcgd {

// 128-bit block counter.  Wide enough that a stream never re-reads a
// counter in practice; overflow is still guarded.
struct Counter128 {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  friend bool operator==(const Counter128&, const Counter128&) = default;
};

// Returns a + b; throws std::overflow_error past 2^128 - 1.
Counter128 counter_add(Counter128 a, std::uint64_t b);

// Philox4x32-10 keyed bijection: 128-bit counter x 64-bit key -> 128 bits.
// Matches the published known-answer vectors (see the unit tests).
std::array<std::uint32_t, 4> philox4x32_10(
    const std::array<std::uint32_t, 4>& counter,
    const std::array<std::uint32_t, 2>& key);

// Counter-based generator position: the draw at index `counter` of the
// stream keyed by `seed` is a pure function of (seed, counter).  Copies
// are therefore replayable: generating from a copy yields bit-identical
// output to generating from the original.
struct PrngState {
  std::uint64_t seed = 0;
  Counter128 counter;

  friend bool operator==(const PrngState&, const PrngState&) = default;
};

// Standard normal draw at absolute stream index `index`.  Draws are
// produced in Box-Muller pairs addressed by index/2, so values never
// depend on how the stream is partitioned into blocks.
double standard_normal_at(std::uint64_t seed, Counter128 index);

// Uniform 64-bit word at absolute index; used for batch allocation.
std::uint64_t random_u64(std::uint64_t seed, Counter128 index);

// Fills `out` with the next d = out.size() standard normals starting at
// state.counter and advances the state by d draws in place.
void gaussian_block_fill(PrngState& state, std::vector<double>& out);

struct GaussianBlock {
  std::vector<double> values;
  PrngState next_state;
};

// Functional form: d standard normals plus the advanced state.
GaussianBlock gaussian_block(const PrngState& state, int d);

}  // namespace lcgd

#endif  // LCGD_PHILOX_HPP_
