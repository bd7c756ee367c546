// Copyright 2026 The overlap authors
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

#include "overlap/experiment.hpp"
#include "overlap/io.hpp"
#include "overlap/simulator.hpp"
#include "overlap/version.hpp"

namespace overlap::experiment {

namespace {

using u128 = unsigned __int128;
using i128 = __int128;

constexpr std::int64_t kChunk = 64;

struct Sums {
  std::uint64_t w2 = 0;
  std::uint64_t w1 = 0;
  u128 w2w2 = 0;
  u128 w1w1 = 0;
  u128 w2w1 = 0;

  void add(std::uint64_t x2, std::uint64_t x1) {
    w2 += x2;
    w1 += x1;
    w2w2 += static_cast<u128>(x2) * x2;
    w1w1 += static_cast<u128>(x1) * x1;
    w2w1 += static_cast<u128>(x2) * x1;
  }

  Sums& operator+=(const Sums& o) {
    w2 += o.w2;
    w1 += o.w1;
    w2w2 += o.w2w2;
    w1w1 += o.w1w1;
    w2w1 += o.w2w1;
    return *this;
  }
};

// Sample covariance of the mean from exact sums: (n Sxy - Sx Sy) / (n^2 (n-1)).
double covariance_of_mean(std::int64_t n, std::uint64_t sx, std::uint64_t sy, u128 sxy) {
  if (n < 2) return 0.0;
  const i128 centered = static_cast<i128>(n) * static_cast<i128>(sxy) -
                        static_cast<i128>(sx) * static_cast<i128>(sy);
  const long double nn = static_cast<long double>(n);
  return static_cast<double>(static_cast<long double>(centered) / (nn * nn * (nn - 1.0L)));
}

}  // namespace

void EnsembleConfig::validate() const {
  if (dim < 1 || dim > sim::kMaxDim)
    throw std::invalid_argument("dim must be in [1, " + std::to_string(sim::kMaxDim) + "]");
  if (steps < 1) throw std::invalid_argument("steps must be positive");
  if (realizations < 1) throw std::invalid_argument("realizations must be positive");
  if (worker_count < 1) throw std::invalid_argument("worker_count must be >= 1");
  for (std::int64_t R : separations)
    if (R < 0) throw std::invalid_argument("separations must be >= 0");
  sim::validate_checkpoints(checkpoints, steps);
}

std::vector<std::int64_t> EnsembleConfig::radii() const {
  std::vector<std::int64_t> out{0};
  for (std::int64_t R : separations)
    if (std::find(out.begin(), out.end(), R) == out.end()) out.push_back(R);
  return out;
}

std::vector<std::int64_t> EnsembleConfig::effective_checkpoints() const {
  return checkpoints.empty() ? sim::default_checkpoints(steps) : checkpoints;
}

bool EnsembleResult::has(std::int64_t R) const {
  return std::find(radii.begin(), radii.end(), R) != radii.end();
}

const EnsembleRow& EnsembleResult::row(std::int64_t R, std::int64_t t) const {
  for (const EnsembleRow& r : rows)
    if (r.R == R && r.t == t) return r;
  throw std::out_of_range("no ensemble row for R = " + std::to_string(R) +
                          ", t = " + std::to_string(t));
}

std::vector<EnsembleRow> EnsembleResult::rows_for(std::int64_t R) const {
  std::vector<EnsembleRow> out;
  for (const EnsembleRow& r : rows)
    if (r.R == R) out.push_back(r);
  return out;
}

EnsembleRun run_ensemble(const EnsembleConfig& config) {
  config.validate();
  const std::vector<std::int64_t> radii = config.radii();
  const std::vector<std::int64_t> checkpoints = config.effective_checkpoints();
  const std::int64_t n = config.realizations;
  const std::int64_t slots = static_cast<std::int64_t>(radii.size());
  const std::int64_t total = slots * n;
  const std::size_t cells = radii.size() * checkpoints.size();

  std::vector<std::vector<Sums>> per_worker(config.worker_count, std::vector<Sums>(cells));
  std::atomic<std::int64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto work = [&](int worker) {
    std::vector<Sums>& acc = per_worker[worker];
    try {
      while (!failed.load(std::memory_order_relaxed)) {
        const std::int64_t begin = next.fetch_add(kChunk);
        if (begin >= total) break;
        const std::int64_t end = std::min(begin + kChunk, total);
        for (std::int64_t unit = begin; unit < end; ++unit) {
          const std::int64_t slot = unit / n;
          sim::PairRunConfig pair;
          pair.dim = config.dim;
          pair.separation = radii[slot];
          pair.steps = config.steps;
          pair.checkpoints = checkpoints;
          const sim::RngStream stream{config.master_seed, static_cast<std::uint64_t>(unit)};
          const sim::OverlapTrace trace = sim::run_pair(pair, stream);
          for (std::size_t k = 0; k < trace.samples.size(); ++k)
            acc[slot * checkpoints.size() + k].add(
                static_cast<std::uint64_t>(trace.samples[k].overlap),
                static_cast<std::uint64_t>(trace.samples[k].visited_1));
        }
      }
    } catch (...) {
      std::lock_guard lock(error_mutex);
      if (!error) error = std::current_exception();
      failed = true;
    }
  };

  if (config.worker_count == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(config.worker_count);
    for (int w = 0; w < config.worker_count; ++w) threads.emplace_back(work, w);
    for (std::thread& th : threads) th.join();
  }
  if (error) std::rethrow_exception(error);

  // Integer sums: the merged totals are exact whatever the scheduling was.
  std::vector<Sums> totals(cells);
  for (const auto& acc : per_worker)
    for (std::size_t c = 0; c < cells; ++c) totals[c] += acc[c];

  EnsembleRun run;
  EnsembleResult& res = run.result;
  res.dim = config.dim;
  res.radii = radii;
  res.checkpoints = checkpoints;
  res.stderr_defined = n >= 2;
  for (std::size_t s = 0; s < radii.size(); ++s) {
    for (std::size_t k = 0; k < checkpoints.size(); ++k) {
      const Sums& sums = totals[s * checkpoints.size() + k];
      EnsembleRow row;
      row.R = radii[s];
      row.t = checkpoints[k];
      row.n = n;
      row.mean_w2 = static_cast<double>(static_cast<long double>(sums.w2) / n);
      row.mean_w1 = static_cast<double>(static_cast<long double>(sums.w1) / n);
      row.stderr_w2 = std::sqrt(std::max(0.0, covariance_of_mean(n, sums.w2, sums.w2, sums.w2w2)));
      row.stderr_w1 = std::sqrt(std::max(0.0, covariance_of_mean(n, sums.w1, sums.w1, sums.w1w1)));
      row.cov_means = covariance_of_mean(n, sums.w2, sums.w1, sums.w2w1);
      res.rows.push_back(row);
    }
  }

  RunManifest& man = run.manifest;
  man.config = config;
  man.config.checkpoints = checkpoints;
  man.code_version = kCodeVersion;
  man.timestamp = io::current_timestamp();
  for (std::size_t s = 0; s < radii.size(); ++s) {
    const auto first = static_cast<std::uint64_t>(s) * static_cast<std::uint64_t>(n);
    man.streams.push_back({radii[s], static_cast<std::int64_t>(s), first,
                           first + static_cast<std::uint64_t>(n) - 1});
  }
  return run;
}

}  // namespace overlap::experiment
