// Copyright 2026 The Occlusynth Authors
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

#ifndef OCCLUSYNTH_RNG_HPP_
#define OCCLUSYNTH_RNG_HPP_

#include <cstdint>
#include <random>

namespace occlusynth {

/// Deterministic pseudo-random source. The engine is mt19937_64 (bit-exact
/// across platforms) and the distributions are implemented here rather than
/// taken from <random>, whose real/int distributions are not portable
/// across standard libraries. Identical seed plus identical draw sequence
/// yields identical values everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform double in [lo, hi). 53-bit resolution.
  double uniform(double lo, double hi) {
    const double u =
        static_cast<double>(next_u64() >> 11) * 0x1.0p-53;  // [0, 1)
    return lo + u * (hi - lo);
  }

  /// Uniform integer in the closed range [lo, hi], unbiased via rejection.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(next_u64());  // full range
    const std::uint64_t limit = (0 - span) % span;
    std::uint64_t x = next_u64();
    while (x < limit) x = next_u64();
    return lo + static_cast<std::int64_t>(x % span);
  }

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used to derive independent per-scene seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Per-scene seed derived from the master seed and the scene index, so
/// parallel workers generate identical scenes regardless of scheduling.
inline std::uint64_t scene_seed(std::uint64_t master_seed,
                                std::uint64_t scene_index) {
  return splitmix64(splitmix64(master_seed) ^ splitmix64(scene_index));
}

}  // namespace occlusynth

#endif  // OCCLUSYNTH_RNG_HPP_
