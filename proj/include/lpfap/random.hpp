// Copyright 2026 the lpfap Authors
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

#ifndef LPFAP_RANDOM_HPP
#define LPFAP_RANDOM_HPP

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace lpfap {

/// Seeded generator with platform-independent derived draws.
///
/// std::mt19937_64's raw sequence is fixed by the standard, but the std
/// distributions are not, so uniform reals, bounded integers and shuffles
/// are derived here by hand.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), bound > 0, by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return v % bound;
  }

  /// Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto k = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[k]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace lpfap

#endif  // LPFAP_RANDOM_HPP
