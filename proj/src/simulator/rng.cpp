// Copyright 2026 The overlap authors
// SPDX-License-Identifier: Apache-2.0
#include "overlap/rng.hpp"

namespace overlap::sim {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t RngStream::engine_seed(std::uint32_t lane) const {
  return splitmix64(splitmix64(splitmix64(master_seed) ^ stream_index) ^ lane);
}

Engine RngStream::engine(std::uint32_t lane) const { return Engine(engine_seed(lane)); }

}  // namespace overlap::sim
