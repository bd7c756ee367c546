// Copyright 2026 The overlap authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

namespace overlap::sim {

using Engine = std::mt19937_64;

// A reproducible random stream identified by (master_seed, stream_index).
//
// Each stream has independent lanes (one per walker). The engine for a lane is
// std::mt19937_64 seeded with the single 64-bit value
//   splitmix64(splitmix64(splitmix64(master_seed) ^ stream_index) ^ lane).
// splitmix64 is a bijection, so for a fixed master seed two (stream, lane)
// pairs share an engine seed only by a 64-bit coincidence. mt19937_64 is
// fully specified by the C++ standard, so sequences match across platforms.
struct RngStream {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_index = 0;

  std::uint64_t engine_seed(std::uint32_t lane = 0) const;
  Engine engine(std::uint32_t lane = 0) const;
};

// The splitmix64 finalizer (Steele, Lea and Flood), including the golden
// ratio increment.
std::uint64_t splitmix64(std::uint64_t x);

// Uniform index in [0, 2*dim) from exactly one 64-bit engine output
// (multiply-high reduction, bias below 2^-59 for dim <= 8).
inline int draw_direction(Engine& engine, int dim) {
  const unsigned __int128 wide =
      static_cast<unsigned __int128>(engine()) * static_cast<unsigned>(2 * dim);
  return static_cast<int>(wide >> 64);
}

}  // namespace overlap::sim
