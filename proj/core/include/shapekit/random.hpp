// Copyright 2026 The shapekit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace shapekit {

// Counter-based uniform generator. Draw i of stream `seed` is
//
//   z  = seed + (i + 1) * 0x9E3779B97F4A7C15   (mod 2^64)
//   z  = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z  = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   z  =  z ^ (z >> 31)
//   u  = (z >> 11) * 2^-53                      in [0, 1)
//
// i.e. the SplitMix64 sequence evaluated at an explicit position. Any
// implementation of the above reproduces our samples bit-for-bit.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t counter) const;
  double uniform(std::uint64_t counter) const;

  // Sequential helpers advancing an internal cursor.
  std::uint64_t next_bits() { return bits(cursor_++); }
  double next_uniform() { return uniform(cursor_++); }
  // Standard normal via Box-Muller; consumes two draws.
  double next_normal();
  // Uniform integer in [0, n), n > 0.
  std::uint64_t next_below(std::uint64_t n);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t cursor() const { return cursor_; }

  // Independent stream derived from this seed and a tag.
  CounterRng fork(std::uint64_t tag) const;

 private:
  std::uint64_t seed_;
  std::uint64_t cursor_ = 0;
};

}  // namespace shapekit
