// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#include "shapekit/random.hpp"

#include <cmath>
#include <numbers>

namespace shapekit {

namespace {

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
  return mix(seed_ + (counter + 1) * 0x9E3779B97F4A7C15ULL);
}

double CounterRng::uniform(std::uint64_t counter) const {
  return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

double CounterRng::next_normal() {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - next_uniform();
  const double u2 = next_uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t CounterRng::next_below(std::uint64_t n) {
  // Lemire-style rejection keeps the result unbiased.
  const std::uint64_t limit = (~std::uint64_t{0} / n) * n;
  std::uint64_t x = next_bits();
  while (x >= limit) x = next_bits();
  return x % n;
}

CounterRng CounterRng::fork(std::uint64_t tag) const {
  return CounterRng(mix(seed_ ^ mix(tag + 0x632BE59BD9B4E019ULL)));
}

}  // namespace shapekit
