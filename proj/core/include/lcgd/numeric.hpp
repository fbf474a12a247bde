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

#ifndef LCGD_NUMERIC_HPP_
#define LCGD_NUMERIC_HPP_

#include <cmath>
#include <cstdint>
#include <cstring>
#include <span>

namespace lcgd {

// Neumaier-compensated accumulator.  Norms and inner products feed
// closed-form identity checks at 1e-12 relative tolerance, which plain
// left-to-right summation cannot sustain past a few hundred thousand terms.
class KahanSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double squared_norm(std::span<const double> v) {
  KahanSum s;
  for (double x : v) s.add(x * x);
  return s.value();
}

inline double norm(std::span<const double> v) {
  return std::sqrt(squared_norm(v));
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  KahanSum s;
  for (std::size_t i = 0; i < a.size(); ++i) s.add(a[i] * b[i]);
  return s.value();
}

// FNV-1a over raw bytes; used for iterate snapshot hashes in training traces.
inline std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t hash_doubles(std::span<const double> v) {
  return fnv1a64(v.data(), v.size() * sizeof(double));
}

}  // namespace lcgd

#endif  // LCGD_NUMERIC_HPP_
