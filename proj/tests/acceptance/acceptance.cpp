// Copyright 2026 The overlap authors
// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Pass criterion numbers as arguments to run a subset.
// Tolerances and campaign sizes are fixed here and never tuned per run.
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "overlap/analytic.hpp"
#include "overlap/cli.hpp"
#include "overlap/experiment.hpp"
#include "overlap/io.hpp"
#include "overlap/simulator.hpp"

namespace an = overlap::analytic;
namespace ex = overlap::experiment;
namespace sim = overlap::sim;
namespace fs = std::filesystem;

namespace {

// One master seed for every Monte Carlo criterion, fixed before any run.
constexpr std::uint64_t kSeed = 1;

constexpr double kRouteTolerance = 1e-8;        // criterion 2
constexpr double kConstantTolerance = 1e-10;    // criterion 3
constexpr double kShrinkD3 = 8.0;               // criterion 4
constexpr double kShrinkD1 = 12.0;              // criterion 4
constexpr double kPull = 3.0;                   // criteria 5 to 8
constexpr double kCollapseFraction = 0.95;      // criteria 6 and 7
constexpr double kXiMin = 0.05;                 // criteria 6 and 7
constexpr double kXiMax = 2.0;                  // criteria 6 and 7
constexpr double kSlope = -0.5;                 // criterion 9
constexpr double kSlopeTolerance = 0.05;        // criterion 9
constexpr double kFractionRatio = 2.0;          // criterion 10
constexpr double kFractionRatioTolerance = 0.25;
constexpr double kArgmaxFactor = 4.0;           // criterion 10

constexpr std::int64_t kDeskSteps = std::int64_t{1} << 14;
constexpr std::int64_t kDeskRealizations = std::int64_t{1} << 14;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

int workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

an::PrecisionBudget budget() { return an::PrecisionBudget{1e-12, 0.0, 4000}; }

// Desk-scale campaigns are shared between criteria.
const ex::EnsembleResult& desk_campaign(int dim) {
  static std::map<int, ex::EnsembleResult> cache;
  if (auto it = cache.find(dim); it != cache.end()) return it->second;
  ex::EnsembleConfig c;
  c.dim = dim;
  c.separations = {5, 10};
  c.steps = kDeskSteps;
  c.realizations = kDeskRealizations;
  c.master_seed = kSeed;
  c.worker_count = workers();
  return cache.emplace(dim, ex::run_ensemble(c).result).first->second;
}

Outcome normalization() {
  bool ok = true;
  std::string detail;
  for (double d : {1.0, 2.0, 3.0}) {
    for (an::Method m : {an::Method::automatic, an::Method::closed, an::Method::quadrature}) {
      const double v = an::phi({0.0, d, budget()}, m).phi;
      if (v != 1.0) {
        ok = false;
        detail += fmt("phi(0,%g)=%.17g ", d, v);
      }
    }
  }
  bool raised = false;
  try {
    an::phi({0.5, 4.0, budget()});
  } catch (const overlap::ScalingDivergence&) {
    raised = true;
  }
  ok = ok && raised;
  detail += fmt("phi(0,d)==1 exactly for d=1,2,3 on all routes; d=4 divergence raised: %s",
                raised ? "yes" : "no");
  return {ok, detail};
}

Outcome cross_route() {
  double worst = 0.0;
  for (double d : {1.0, 2.0, 3.0}) {
    for (int i = 0; i < 20; ++i) {
      const double xi = 0.05 + (3.0 - 0.05) * i / 19.0;
      const double c = an::phi({xi, d, budget()}, an::Method::closed).phi;
      const double q = an::phi({xi, d, budget()}, an::Method::quadrature).phi;
      worst = std::max(worst, std::abs(c - q));
    }
  }
  return {worst <= kRouteTolerance,
          fmt("max |closed - quadrature| over 60 points = %.3g (tol %.0e)", worst, kRouteTolerance)};
}

Outcome exact_constants() {
  const double e2 = std::abs(an::i_greater(0.0, 2.0, budget()).value - 2.0 * std::numbers::ln2);
  const double e3 =
      std::abs(an::i_greater(0.0, 3.0, budget()).value - (8.0 - 4.0 * std::numbers::sqrt2));
  return {e2 <= kConstantTolerance && e3 <= kConstantTolerance,
          fmt("|I(0,2) - 2 ln 2| = %.3g, |I(0,3) - (8 - 4 sqrt2)| = %.3g (tol %.0e)", e2, e3,
              kConstantTolerance)};
}

Outcome series_consistency() {
  auto residual = [](double xi, int d) {
    return std::abs(an::phi({xi, static_cast<double>(d), budget()}).phi - an::phi_series(xi, d));
  };
  const double r3 = residual(0.1, 3) / residual(0.05, 3);
  const double r1 = residual(0.1, 1) / residual(0.05, 1);
  return {r3 >= kShrinkD3 && r1 >= kShrinkD1,
          fmt("residual shrink on halving xi: d=3 %.2fx (need %.0fx), d=1 %.2fx (need %.0fx)", r3,
              kShrinkD3, r1, kShrinkD1)};
}

std::size_t set_overlap(const sim::LatticeCoord& start_a, const sim::LatticeCoord& start_b,
                        sim::Engine ea, sim::Engine eb, std::int64_t steps) {
  auto walk = [steps](sim::LatticeCoord p, sim::Engine& e) {
    std::set<std::vector<int>> s;
    s.insert({p.coords().begin(), p.coords().end()});
    for (std::int64_t t = 0; t < steps; ++t) {
      p = sim::step(p, e);
      s.insert({p.coords().begin(), p.coords().end()});
    }
    return s;
  };
  const auto a = walk(start_a, ea);
  const auto b = walk(start_b, eb);
  std::vector<std::vector<int>> both;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(both));
  return both.size();
}

Outcome simulator_oracle() {
  ex::EnsembleConfig c;
  c.dim = 1;
  c.separations = {1};
  c.steps = 1;
  c.realizations = std::int64_t{1} << 20;
  c.master_seed = kSeed;
  c.worker_count = workers();
  const ex::EnsembleResult r = ex::run_ensemble(c).result;
  const ex::EnsembleRow& r0 = r.row(0, 1);
  const ex::EnsembleRow& r1 = r.row(1, 1);
  const double p0 = (r0.mean_w2 - 1.5) / r0.stderr_w2;
  const double p1 = (r1.mean_w2 - 1.0) / r1.stderr_w2;

  std::mt19937_64 pick(kSeed);
  int mismatches = 0;
  for (int i = 0; i < 100; ++i) {
    sim::PairRunConfig p;
    p.dim = 1 + static_cast<int>(pick() % 4);
    p.separation = static_cast<std::int64_t>(pick() % 10);
    p.steps = 1 + static_cast<std::int64_t>(pick() % 2000);
    p.checkpoints = {p.steps};
    const sim::RngStream rng{kSeed, pick()};
    const auto trace = sim::run_pair(p, rng);
    sim::LatticeCoord a(p.dim), b(p.dim);
    b[0] = static_cast<std::int32_t>(p.separation);
    const auto expected = set_overlap(a, b, rng.engine(0), rng.engine(1), p.steps);
    if (trace.samples[0].overlap != static_cast<std::int64_t>(expected)) ++mismatches;
  }
  return {std::abs(p0) <= kPull && std::abs(p1) <= kPull && mismatches == 0,
          fmt("E[w2](R=0,t=1)=%.5f+-%.5f (pull %.2f), E[w2](R=1,t=1)=%.5f+-%.5f (pull %.2f), "
              "n=2^20; incremental vs set intersection mismatches: %d/100",
              r0.mean_w2, r0.stderr_w2, p0, r1.mean_w2, r1.stderr_w2, p1, mismatches)};
}

// >= 95% of collapse points within 3 sigma of Phi_d, and the two R-series
// within joint 3 sigma of each other at matched xi (R=10 at 4t vs R=5 at t).
Outcome desk_collapse(int dim) {
  const ex::EnsembleResult& r = desk_campaign(dim);
  ex::CompareOptions opt;
  opt.xi_min = kXiMin;
  opt.xi_max = kXiMax;
  opt.pull_threshold = kPull;
  opt.pass_fraction = kCollapseFraction;
  opt.budget = budget();
  const ex::ScalingCurve c5 = ex::collapse(r, 5);
  const ex::ScalingCurve c10 = ex::collapse(r, 10);
  int total = 0, within = 0;
  double worst = 0.0;
  for (const auto* curve : {&c5, &c10}) {
    const ex::ComparisonReport rep = ex::compare(*curve, opt);
    total += static_cast<int>(rep.points.size());
    within += rep.within;
    worst = std::max(worst, rep.max_abs_pull);
  }
  const double fraction = total ? static_cast<double>(within) / total : 0.0;
  const ex::ComparisonReport mutual = ex::compare(c5, c10, opt);
  const bool ok = fraction >= kCollapseFraction && mutual.pass;
  return {ok, fmt("d=%d: %d/%d points within %.0f sigma of Phi (%.1f%%, need %.0f%%, max |pull| "
                  "%.2f); R=5 vs R=10 matched points %d/%zu within joint %.0f sigma (max |pull| "
                  "%.2f)",
                  dim, within, total, kPull, 100.0 * fraction, 100.0 * kCollapseFraction, worst,
                  mutual.within, mutual.points.size(), kPull, mutual.max_abs_pull)};
}

Outcome no_collapse_d4() {
  ex::EnsembleConfig c;
  c.dim = 4;
  c.separations = {5, 10};
  c.steps = 200;
  c.checkpoints = {50, 200};  // xi = 0.5 for R = 5 and R = 10
  c.realizations = kDeskRealizations;
  c.master_seed = kSeed;
  c.worker_count = workers();
  const ex::EnsembleResult r = ex::run_ensemble(c).result;
  const ex::CurvePoint a = ex::collapse(r, 5).points[0];
  const ex::CurvePoint b = ex::collapse(r, 10).points[1];
  const double sigma = std::hypot(a.sigma, b.sigma);
  const double pull = (a.phi - b.phi) / sigma;
  return {std::abs(pull) > kPull,
          fmt("xi=%.3f/%.3f: ratio R=5 %.5f+-%.5f, R=10 %.5f+-%.5f, separation %.1f sigma (need > "
              "%.0f)",
              a.xi, b.xi, a.phi, a.sigma, b.phi, b.sigma, std::abs(pull), kPull)};
}

Outcome persistence_slope() {
  ex::PersistenceConfig c;
  c.dim = 1;
  c.steps = kDeskSteps;
  c.realizations = std::int64_t{1} << 18;
  c.master_seed = kSeed;
  c.worker_count = workers();
  const ex::PersistenceResult r = ex::run_persistence(c);
  const ex::SlopeFit fit = ex::fit_loglog_slope(r.points, 1 << 6, 1 << 14);
  return {std::abs(fit.slope - kSlope) <= kSlopeTolerance,
          fmt("d=1 log-log slope over t in [2^6, 2^14]: %.4f +- %.4f (%d points; need %.2f +- %.2f)",
              fit.slope, fit.slope_stderr, fit.points, kSlope, kSlopeTolerance)};
}

Outcome fraction_maximum() {
  const ex::EnsembleResult& r = desk_campaign(3);
  const ex::FractionCurve f5 = ex::fraction_curve(r, 5);
  const ex::FractionCurve f10 = ex::fraction_curve(r, 10);
  const double ratio = f5.max_f / f10.max_f;
  auto within_factor = [](std::int64_t t, double r2) {
    const double q = static_cast<double>(t) / r2;
    return q <= kArgmaxFactor && q >= 1.0 / kArgmaxFactor;
  };
  const bool ratio_ok = std::abs(ratio / kFractionRatio - 1.0) <= kFractionRatioTolerance;
  const bool t_ok = within_factor(f5.argmax_t, 25.0) && within_factor(f10.argmax_t, 100.0);
  return {ratio_ok && t_ok,
          fmt("d=3: f_max(5)=%.5f at t=%lld, f_max(10)=%.5f at t=%lld; ratio %.3f (need 2 within "
              "25%%); argmax/R^2 = %.2f, %.2f (need within factor 4)",
              f5.max_f, static_cast<long long>(f5.argmax_t), f10.max_f,
              static_cast<long long>(f10.argmax_t), ratio, f5.argmax_t / 25.0,
              f10.argmax_t / 100.0)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / ("overlap-acceptance-" + std::to_string(getpid()));
  fs::create_directories(dir);
  std::ostringstream sink;
  std::set<std::string> simulate, persistence;
  int failures = 0;
  int run = 0;
  for (int w : {1, 2, 8, 1}) {
    const std::string prefix = (dir / ("sim" + std::to_string(run))).string();
    const std::string pers = (dir / ("pers" + std::to_string(run) + ".csv")).string();
    ++run;
    failures += overlap::cli::run({"simulate", "--dim", "2", "--radius", "5", "--radius", "10",
                                   "--steps", "1024", "--reals", "4096", "--seed", "7",
                                   "--workers", std::to_string(w), "--out-prefix", prefix},
                                  sink, sink) != 0;
    failures += overlap::cli::run({"persistence", "--dim", "1", "--steps", "4096", "--reals",
                                   "20000", "--seed", "7", "--workers", std::to_string(w),
                                   "--out", pers},
                                  sink, sink) != 0;
    simulate.insert(slurp(prefix + ".csv"));
    persistence.insert(slurp(pers));
  }
  fs::remove_all(dir);
  const bool ok = failures == 0 && simulate.size() == 1 && persistence.size() == 1;
  return {ok, fmt("simulate and persistence with workers 1, 2, 8, 1: %zu distinct results CSV, "
                  "%zu distinct persistence CSV (need 1 each), %d command failures",
                  simulate.size(), persistence.size(), failures)};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> check;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "analytic normalization", normalization},
      {2, "closed forms vs quadrature", cross_route},
      {3, "exact constants", exact_constants},
      {4, "small-xi series consistency", series_consistency},
      {5, "simulator enumeration oracle", simulator_oracle},
      {6, "desk-scale collapse d=1", [] { return desk_collapse(1); }},
      {7, "desk-scale collapse d=2, d=3",
       [] {
         const Outcome a = desk_collapse(2);
         const Outcome b = desk_collapse(3);
         return Outcome{a.pass && b.pass, a.detail + " | " + b.detail};
       }},
      {8, "no collapse at d=4", no_collapse_d4},
      {9, "persistence slope d=1", persistence_slope},
      {10, "overlap-fraction maximum d=3", fraction_maximum},
      {11, "determinism across worker counts", determinism},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.contains(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::printf("%s criterion %2d (%s): %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
