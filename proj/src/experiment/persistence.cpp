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
#include "overlap/simulator.hpp"

namespace overlap::experiment {

void PersistenceConfig::validate() const {
  if (dim < 1 || dim > sim::kMaxDim)
    throw std::invalid_argument("dim must be in [1, " + std::to_string(sim::kMaxDim) + "]");
  if (steps < 1) throw std::invalid_argument("steps must be positive");
  if (realizations < 1) throw std::invalid_argument("realizations must be positive");
  if (worker_count < 1) throw std::invalid_argument("worker_count must be >= 1");
  sim::validate_checkpoints(checkpoints, steps);
}

PersistenceResult run_persistence(const PersistenceConfig& config) {
  config.validate();
  const std::vector<std::int64_t> checkpoints =
      config.checkpoints.empty() ? sim::default_checkpoints(config.steps) : config.checkpoints;
  const std::int64_t n = config.realizations;
  constexpr std::int64_t chunk = 256;

  std::vector<std::vector<std::int64_t>> survivors(
      config.worker_count, std::vector<std::int64_t>(checkpoints.size(), 0));
  std::atomic<std::int64_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto work = [&](int worker) {
    std::vector<std::int64_t>& acc = survivors[worker];
    try {
      while (!failed.load(std::memory_order_relaxed)) {
        const std::int64_t begin = next.fetch_add(chunk);
        if (begin >= n) break;
        const std::int64_t end = std::min(begin + chunk, n);
        for (std::int64_t i = begin; i < end; ++i) {
          sim::Engine engine =
              sim::RngStream{config.master_seed, static_cast<std::uint64_t>(i)}.engine(0);
          const sim::PersistenceTrace trace = sim::first_return(config.dim, config.steps, engine);
          for (std::size_t k = 0; k < checkpoints.size(); ++k)
            if (!trace.first_return_time || *trace.first_return_time > checkpoints[k]) ++acc[k];
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
    for (int w = 0; w < config.worker_count; ++w) threads.emplace_back(work, w);
    for (std::thread& th : threads) th.join();
  }
  if (error) std::rethrow_exception(error);

  PersistenceResult result;
  result.dim = config.dim;
  result.n = n;
  for (std::size_t k = 0; k < checkpoints.size(); ++k) {
    std::int64_t alive = 0;
    for (const auto& acc : survivors) alive += acc[k];
    const double q = static_cast<double>(alive) / static_cast<double>(n);
    const double se = n > 1 ? std::sqrt(q * (1.0 - q) / static_cast<double>(n - 1)) : 0.0;
    result.points.push_back({checkpoints[k], q, se});
  }
  return result;
}

SlopeFit fit_loglog_slope(std::span<const PersistencePoint> points, std::int64_t t_min,
                          std::int64_t t_max) {
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  SlopeFit fit;
  for (const PersistencePoint& p : points) {
    if (p.t < t_min || p.t > t_max || !(p.q_hat > 0.0)) continue;
    const double x = std::log(static_cast<double>(p.t));
    const double y = std::log(p.q_hat);
    // Relative error of q is the absolute error of ln q.
    const double rel = p.stderr / p.q_hat;
    const double w = rel > 0.0 ? 1.0 / (rel * rel) : 1.0;
    sw += w;
    sx += w * x;
    sy += w * y;
    sxx += w * x * x;
    sxy += w * x * y;
    ++fit.points;
  }
  if (fit.points < 2) throw std::invalid_argument("slope fit needs at least two points with q > 0");
  const double det = sw * sxx - sx * sx;
  fit.slope = (sw * sxy - sx * sy) / det;
  fit.intercept = (sxx * sy - sx * sxy) / det;
  fit.slope_stderr = std::sqrt(sw / det);
  return fit;
}

}  // namespace overlap::experiment
