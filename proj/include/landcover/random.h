/* Copyright 2026 The Landcover Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef LANDCOVER_RANDOM_H_
#define LANDCOVER_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace landcover {

// Seeded generator with distribution code written out explicitly: the
// standard library's distributions are implementation-defined, and every
// artifact here must be reproducible from its seed across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t Next() { return engine_(); }
  // Uniform in [0, 1) with 53 bits of resolution.
  double UniformDouble();
  double Uniform(double lo, double hi) { return lo + (hi - lo) * UniformDouble(); }
  // Uniform in [0, bound); bound must be > 0.
  std::uint64_t UniformInt(std::uint64_t bound);
  // Standard normal via Box-Muller.
  double Normal();

  template <typename T>
  void Shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const std::size_t j = UniformInt(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

// Stable per-item seed derived from a parent seed and an identifier.
std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view id);

}  // namespace landcover

#endif  // LANDCOVER_RANDOM_H_
