// Copyright 2026 The overlap authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "overlap/rng.hpp"

// Simple symmetric random walks on Z^d measuring visited-set sizes, pair
// overlap and first returns. Every step consumes exactly one 64-bit output of
// the walker's engine.
namespace overlap::sim {

inline constexpr int kMaxDim = 8;

class LatticeCoord {
 public:
  explicit LatticeCoord(int dim);

  int dim() const { return dim_; }
  std::int32_t operator[](int axis) const { return c_[axis]; }
  std::int32_t& operator[](int axis) { return c_[axis]; }
  std::span<const std::int32_t> coords() const { return {c_.data(), static_cast<size_t>(dim_)}; }

  friend bool operator==(const LatticeCoord&, const LatticeCoord&) = default;
  friend auto operator<=>(const LatticeCoord&, const LatticeCoord&) = default;

 private:
  int dim_;
  std::array<std::int32_t, kMaxDim> c_{};
};

/// One step to a uniformly chosen nearest neighbour.
LatticeCoord step(const LatticeCoord& pos, Engine& engine);

struct PairRunConfig {
  int dim = 1;
  std::int64_t separation = 0;  // walker 2 starts at offset + R e_1
  std::int64_t steps = 1;
  std::vector<std::int64_t> checkpoints;  // empty: powers of 2 up to steps
  std::optional<LatticeCoord> offset;     // start of walker 1, origin if unset

  void validate() const;
  std::vector<std::int64_t> effective_checkpoints() const;
};

// Powers of two up to steps, plus steps itself.
std::vector<std::int64_t> default_checkpoints(std::int64_t steps);

// Throws std::invalid_argument unless checkpoints are strictly increasing
// and inside [1, steps].
void validate_checkpoints(std::span<const std::int64_t> checkpoints, std::int64_t steps);

struct OverlapSample {
  std::int64_t t;
  std::int64_t overlap;    // |A ∩ B|
  std::int64_t visited_1;  // |A|
  std::int64_t visited_2;  // |B|
};

struct OverlapTrace {
  std::int64_t initial_overlap = 0;  // at t = 0: 1 iff R = 0
  std::vector<OverlapSample> samples;
};

/// Two walkers stepping alternately (walker 1, then walker 2) for
/// config.steps steps each. The overlap counter is maintained incrementally:
/// when a walker first visits a site, the count goes up iff the other walker
/// has already visited it. Start sites count as visited at t = 0.
OverlapTrace run_pair(const PairRunConfig& config, const RngStream& rng);

/// Same with explicit per-walker engines (lane 0 and lane 1 of rng above).
OverlapTrace run_pair(const PairRunConfig& config, Engine& walker1, Engine& walker2);

struct PersistenceTrace {
  std::optional<std::int64_t> first_return_time;
};

struct SingleRunResult {
  std::vector<std::int64_t> visited;  // |A| at each checkpoint
  PersistenceTrace persistence;
};

/// One walker from the origin, lane 0 of rng.
SingleRunResult run_single(int dim, std::int64_t steps, std::span<const std::int64_t> checkpoints,
                           const RngStream& rng);

/// First return time to the start only, stopping early. Consumes the engine
/// exactly like run_single up to the return.
PersistenceTrace first_return(int dim, std::int64_t steps, Engine& engine);

}  // namespace overlap::sim
