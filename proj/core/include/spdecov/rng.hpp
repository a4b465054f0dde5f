// Copyright (c) the spdecov authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

namespace spdecov {

/// Counter-based Gaussian stream keyed by (root seed, path, step, component).
/// Every draw is a pure function of its key, so results do not depend on
/// evaluation order and coupled simulations sharing a seed see identical
/// increments.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  /// Standard normal for the given (path, step, component) key.
  double normal(std::uint64_t path, std::uint64_t step, std::uint64_t component) const {
    const double u1 = uniform(path, step, 2 * component);
    const double u2 = uniform(path, step, 2 * component + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
  }

  std::uint64_t seed() const { return seed_; }

 private:
  static constexpr double kPi = 3.14159265358979323846;

  static std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  /// Uniform in (0,1], strictly positive so log() is safe.
  double uniform(std::uint64_t path, std::uint64_t step, std::uint64_t word) const {
    std::uint64_t h = mix(seed_ ^ 0x1234567899abcdefULL);
    h = mix(h ^ path);
    h = mix(h ^ step);
    h = mix(h ^ word);
    return (static_cast<double>(h >> 11) + 1.0) * 0x1.0p-53;
  }

  std::uint64_t seed_;
};

}  // namespace spdecov
