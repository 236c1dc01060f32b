// Copyright 2026 The mixcap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace mixcap {

/// FNV-1a 64-bit hash. Stable across platforms; used for plan hashes and
/// derived seeds.
inline std::uint64_t fnv1a64(std::string_view bytes,
                             std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// splitmix64 finalizer; decorrelates derived seeds.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derive an independent child seed from (root, index, tag). Stable, so
/// per-record streams do not depend on processing order.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index,
                                 std::string_view tag = {}) {
  std::uint64_t h = fnv1a64(tag);
  return mix64(root ^ mix64(index ^ h));
}

/// Seeded RNG with hand-rolled distributions.
///
/// The std::* distributions are not specified bit-exactly across standard
/// library implementations, so every draw here is defined directly on the
/// mt19937_64 output stream. Same seed => same sequence everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [lo, hi], inclusive. Unbiased via rejection.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t range = static_cast<std::uint64_t>(hi - lo) + 1;
    if (range == 0) return static_cast<std::int64_t>(gen_());  // full range
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % range;
    std::uint64_t x;
    do {
      x = gen_();
    } while (x >= limit);
    return lo + static_cast<std::int64_t>(x % range);
  }

  bool bernoulli(double p) { return uniform01() < p; }

  /// +1 or -1 with equal probability.
  int sign() { return bernoulli(0.5) ? 1 : -1; }

  /// k distinct indices drawn uniformly from [0, n). Rejection sampling;
  /// callers keep k small (k <= 5 in the pipeline).
  std::vector<std::size_t> sample_without_replacement(std::size_t n,
                                                      std::size_t k) {
    std::vector<std::size_t> picked;
    picked.reserve(k);
    while (picked.size() < k) {
      const auto candidate = static_cast<std::size_t>(
          uniform_int(0, static_cast<std::int64_t>(n) - 1));
      bool seen = false;
      for (std::size_t p : picked) {
        if (p == candidate) {
          seen = true;
          break;
        }
      }
      if (!seen) picked.push_back(candidate);
    }
    return picked;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace mixcap
