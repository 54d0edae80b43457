// Copyright 2026 The ITEM Authors.
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

#ifndef ITEM_RANDOM_HPP_
#define ITEM_RANDOM_HPP_

#include <cstddef>
#include <cstdint>
#include <random>
#include <string_view>

namespace item {

// Derives an independent sub-seed from a base seed and a stream label, so
// that adding a new consumer never shifts the draws seen by another one.
std::uint64_t DeriveSeed(std::uint64_t base, std::string_view label);

// Seeded generator with portable draws. std::mt19937_64's raw output is fully
// specified by the standard; the distributions below avoid the library-defined
// std::uniform_*_distribution so results are identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }

  // Uniform integer in [0, n). n must be positive.
  std::size_t UniformIndex(std::size_t n);

  // Uniform double in [0, 1).
  double Uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }

  bool Bernoulli(double p) { return Uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace item

#endif  // ITEM_RANDOM_HPP_
