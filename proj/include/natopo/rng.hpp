// Copyright 2026 natopo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <vector>

namespace natopo {

/// Seedable 64-bit PRNG used by every stochastic operation in the library.
///
/// xoshiro256** (Blackman/Vigna, public domain), state expanded from the
/// 64-bit seed with splitmix64. Draw helpers avoid std::<distribution>
/// types so that streams are identical across standard libraries.
class Rng {
public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& s : state_) {
      s = splitmix64(x);
    }
  }

  std::uint64_t nextU64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform double in [0, 1), 53 random bits.
  double nextDouble() {
    return static_cast<double>(nextU64() >> 11) * 0x1.0p-53;
  }

  /// Uniform index in [0, n). n must be > 0. Rejection sampling, unbiased.
  std::size_t nextIndex(std::size_t n) {
    const std::uint64_t bound = n;
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = nextU64();
      if (r >= threshold) {
        return static_cast<std::size_t>(r % bound);
      }
    }
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * nextDouble(); }

  bool bernoulli(double p) { return nextDouble() < p; }

  /// Fisher-Yates shuffle.
  template <typename T> void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[nextIndex(i)]);
    }
  }

  /// Deterministic child seed for parallel sub-streams (documented split
  /// rule: splitmix64 over seed xor stream index).
  static std::uint64_t deriveSeed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ULL + stream);
    return splitmix64(x);
  }

private:
  static std::uint64_t splitmix64(std::uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4]{};
};

} // namespace natopo
