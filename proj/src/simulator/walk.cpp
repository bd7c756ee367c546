// Copyright 2026 The overlap authors
// SPDX-License-Identifier: Apache-2.0
#include <absl/container/flat_hash_set.h>

#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "overlap/simulator.hpp"

namespace overlap::sim {

namespace {

// The coordinate tuple itself is the set key, so packing is injective for
// every int32 coordinate.
template <int D>
using Site = std::array<std::int32_t, D>;

template <int D>
using VisitedSet = absl::flat_hash_set<Site<D>>;

template <int D>
inline void advance(Site<D>& pos, Engine& engine) {
  const int dir = draw_direction(engine, D);
  pos[dir >> 1] += (dir & 1) ? 1 : -1;
}

template <int D>
Site<D> to_site(const LatticeCoord& c) {
  Site<D> s{};
  for (int i = 0; i < D; ++i) s[i] = c[i];
  return s;
}

template <typename F>
decltype(auto) with_dim(int dim, F&& f) {
  switch (dim) {
    case 1: return f.template operator()<1>();
    case 2: return f.template operator()<2>();
    case 3: return f.template operator()<3>();
    case 4: return f.template operator()<4>();
    case 5: return f.template operator()<5>();
    case 6: return f.template operator()<6>();
    case 7: return f.template operator()<7>();
    case 8: return f.template operator()<8>();
    default:
      throw std::invalid_argument("lattice dimension must be in [1, " + std::to_string(kMaxDim) +
                                  "], got " + std::to_string(dim));
  }
}

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxDim)
    throw std::invalid_argument("lattice dimension must be in [1, " + std::to_string(kMaxDim) +
                                "], got " + std::to_string(dim));
}

void check_steps(std::int64_t steps) {
  if (steps < 1) throw std::invalid_argument("steps must be positive");
  // Coordinates stay within int32 for any walk of this length.
  if (steps > std::numeric_limits<std::int32_t>::max() / 2)
    throw std::invalid_argument("steps too large for 32-bit lattice coordinates");
}

template <int D>
OverlapTrace pair_walk(const PairRunConfig& config, const std::vector<std::int64_t>& checkpoints,
                       Engine& e1, Engine& e2) {
  Site<D> a = config.offset ? to_site<D>(*config.offset) : Site<D>{};
  Site<D> b = a;
  b[0] += static_cast<std::int32_t>(config.separation);

  VisitedSet<D> set_a;
  VisitedSet<D> set_b;
  set_a.insert(a);
  set_b.insert(b);
  std::int64_t overlap = (a == b) ? 1 : 0;

  OverlapTrace trace;
  trace.initial_overlap = overlap;
  trace.samples.reserve(checkpoints.size());
  std::size_t next = 0;
  for (std::int64_t t = 1; t <= config.steps; ++t) {
    advance<D>(a, e1);
    if (set_a.insert(a).second && set_b.contains(a)) ++overlap;
    advance<D>(b, e2);
    if (set_b.insert(b).second && set_a.contains(b)) ++overlap;
    if (next < checkpoints.size() && checkpoints[next] == t) {
      trace.samples.push_back({t, overlap, static_cast<std::int64_t>(set_a.size()),
                               static_cast<std::int64_t>(set_b.size())});
      ++next;
    }
  }
  return trace;
}

template <int D>
SingleRunResult single_walk(std::int64_t steps, std::span<const std::int64_t> checkpoints,
                            Engine& engine) {
  const Site<D> origin{};
  Site<D> pos{};
  VisitedSet<D> visited;
  visited.insert(pos);
  SingleRunResult out;
  out.visited.reserve(checkpoints.size());
  std::size_t next = 0;
  for (std::int64_t t = 1; t <= steps; ++t) {
    advance<D>(pos, engine);
    visited.insert(pos);
    if (!out.persistence.first_return_time && pos == origin) out.persistence.first_return_time = t;
    if (next < checkpoints.size() && checkpoints[next] == t) {
      out.visited.push_back(static_cast<std::int64_t>(visited.size()));
      ++next;
    }
  }
  return out;
}

template <int D>
PersistenceTrace return_walk(std::int64_t steps, Engine& engine) {
  const Site<D> origin{};
  Site<D> pos{};
  for (std::int64_t t = 1; t <= steps; ++t) {
    advance<D>(pos, engine);
    if (pos == origin) return {t};
  }
  return {};
}

}  // namespace

LatticeCoord::LatticeCoord(int dim) : dim_(dim) { check_dim(dim); }

LatticeCoord step(const LatticeCoord& pos, Engine& engine) {
  LatticeCoord next = pos;
  const int dir = draw_direction(engine, pos.dim());
  next[dir >> 1] += (dir & 1) ? 1 : -1;
  return next;
}

std::vector<std::int64_t> default_checkpoints(std::int64_t steps) {
  std::vector<std::int64_t> out;
  for (std::int64_t t = 1; t <= steps; t *= 2) {
    out.push_back(t);
    if (t > std::numeric_limits<std::int64_t>::max() / 2) break;
  }
  if (out.empty() || out.back() != steps) out.push_back(steps);
  return out;
}

void validate_checkpoints(std::span<const std::int64_t> checkpoints, std::int64_t steps) {
  std::int64_t prev = 0;
  for (std::int64_t t : checkpoints) {
    if (t <= prev) throw std::invalid_argument("checkpoints must be strictly increasing and >= 1");
    if (t > steps) throw std::invalid_argument("checkpoint " + std::to_string(t) + " exceeds steps");
    prev = t;
  }
}

void PairRunConfig::validate() const {
  check_dim(dim);
  check_steps(steps);
  if (separation < 0) throw std::invalid_argument("separation must be >= 0");
  if (separation > std::numeric_limits<std::int32_t>::max() / 2)
    throw std::invalid_argument("separation too large for 32-bit lattice coordinates");
  if (offset && offset->dim() != dim)
    throw std::invalid_argument("offset dimension does not match the run dimension");
  validate_checkpoints(checkpoints, steps);
}

std::vector<std::int64_t> PairRunConfig::effective_checkpoints() const {
  return checkpoints.empty() ? default_checkpoints(steps) : checkpoints;
}

OverlapTrace run_pair(const PairRunConfig& config, Engine& walker1, Engine& walker2) {
  config.validate();
  const std::vector<std::int64_t> cps = config.effective_checkpoints();
  return with_dim(config.dim, [&]<int D>() { return pair_walk<D>(config, cps, walker1, walker2); });
}

OverlapTrace run_pair(const PairRunConfig& config, const RngStream& rng) {
  Engine e1 = rng.engine(0);
  Engine e2 = rng.engine(1);
  return run_pair(config, e1, e2);
}

SingleRunResult run_single(int dim, std::int64_t steps, std::span<const std::int64_t> checkpoints,
                           const RngStream& rng) {
  check_dim(dim);
  check_steps(steps);
  validate_checkpoints(checkpoints, steps);
  Engine engine = rng.engine(0);
  return with_dim(dim, [&]<int D>() { return single_walk<D>(steps, checkpoints, engine); });
}

PersistenceTrace first_return(int dim, std::int64_t steps, Engine& engine) {
  check_dim(dim);
  check_steps(steps);
  return with_dim(dim, [&]<int D>() { return return_walk<D>(steps, engine); });
}

}  // namespace overlap::sim
