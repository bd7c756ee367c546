// Copyright 2026 The overlap authors
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "overlap/analytic.hpp"
#include "overlap/cli.hpp"
#include "overlap/experiment.hpp"
#include "overlap/io.hpp"
#include "overlap/plot.hpp"

namespace overlap::cli {

namespace fs = std::filesystem;
namespace ex = overlap::experiment;

namespace {

struct ScalingArgs {
  double dim = 1.0;
  double xi_min = 0.0;
  double xi_max = 3.0;
  int points = 61;
  std::string method = "auto";
  double tol = 1e-10;
  std::string out = "-";
};

struct SimulateArgs {
  int dim = 1;
  std::vector<std::int64_t> radius{5, 10, 20, 50};
  std::int64_t steps = std::int64_t{1} << 14;
  std::int64_t reals = std::int64_t{1} << 14;
  std::uint64_t seed = 0;
  int workers = 1;
  std::vector<std::int64_t> checkpoints;
  std::string out_prefix;
};

struct CompareArgs {
  std::string results;
  std::string out;
  double xi_min = 0.05;
  double xi_max = 2.0;
  double tol = 1e-10;
};

struct PersistenceArgs {
  int dim = 1;
  std::int64_t steps = std::int64_t{1} << 14;
  std::int64_t reals = std::int64_t{1} << 14;
  std::uint64_t seed = 0;
  int workers = 1;
  std::int64_t fit_min = 0;
  std::int64_t fit_max = 0;
  std::string out = "-";
};

struct PlotArgs {
  std::vector<std::string> results;
  bool analytic = false;
  double dim = 0.0;
  bool log_x = false;
  double tol = 1e-10;
  std::string out;
};

// Writes through a temporary file and renames on success, so a failed
// command leaves no partial output behind.
class AtomicFile {
 public:
  explicit AtomicFile(fs::path target) : target_(std::move(target)), tmp_(target_) {
    tmp_ += ".tmp";
    stream_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!stream_) throw std::runtime_error("cannot open " + tmp_.string() + " for writing");
  }
  ~AtomicFile() {
    if (!committed_) {
      stream_.close();
      std::error_code ec;
      fs::remove(tmp_, ec);
    }
  }
  AtomicFile(const AtomicFile&) = delete;
  AtomicFile& operator=(const AtomicFile&) = delete;

  std::ostream& stream() { return stream_; }

  void commit() {
    stream_.close();
    if (!stream_) throw std::runtime_error("write to " + tmp_.string() + " failed");
    fs::rename(tmp_, target_);
    committed_ = true;
  }

 private:
  fs::path target_;
  fs::path tmp_;
  std::ofstream stream_;
  bool committed_ = false;
};

// "-" means the given fallback stream.
template <typename Writer>
void emit(const std::string& path, std::ostream& fallback, Writer&& write) {
  if (path == "-" || path.empty()) {
    write(fallback);
    return;
  }
  AtomicFile file(path);
  write(file.stream());
  file.commit();
}

numerics::PrecisionBudget budget_for(double tol) {
  numerics::PrecisionBudget b;
  b.abs_tol = tol;
  b.rel_tol = 0.0;
  b.max_subdivisions = 4000;
  return b;
}

int cmd_scaling(const ScalingArgs& a, std::ostream& out, std::ostream& err) {
  analytic::Method method = analytic::Method::automatic;
  if (a.method == "closed") method = analytic::Method::closed;
  else if (a.method == "quadrature") method = analytic::Method::quadrature;
  else if (a.method == "series") method = analytic::Method::series;
  if (a.points < 1 || !(a.xi_min >= 0.0) || !(a.xi_max >= a.xi_min)) {
    err << "error: need --points >= 1 and 0 <= --xi-min <= --xi-max\n";
    return kFailure;
  }
  if (a.dim >= 4.0) {
    err << "error: " << ScalingDivergence(a.dim).what() << '\n';
    return kDivergence;
  }
  const numerics::PrecisionBudget budget = budget_for(a.tol);
  std::vector<std::array<double, 3>> rows;
  for (int i = 0; i < a.points; ++i) {
    const double xi =
        a.points == 1 ? a.xi_min : a.xi_min + (a.xi_max - a.xi_min) * i / (a.points - 1);
    const analytic::ScalingValue v = analytic::phi({xi, a.dim, budget}, method);
    rows.push_back({xi, v.phi, v.error_estimate});
  }
  emit(a.out, out, [&](std::ostream& os) {
    os << "xi,phi,error_estimate\n";
    for (const auto& r : rows)
      os << io::format_real(r[0]) << ',' << io::format_real(r[1]) << ',' << io::format_real(r[2])
         << '\n';
  });
  return kOk;
}

int cmd_simulate(const SimulateArgs& a, std::ostream& out, std::ostream&) {
  ex::EnsembleConfig config;
  config.dim = a.dim;
  config.separations = a.radius;
  config.steps = a.steps;
  config.realizations = a.reals;
  config.master_seed = a.seed;
  config.worker_count = a.workers;
  config.checkpoints = a.checkpoints;
  config.validate();

  const ex::EnsembleRun run = ex::run_ensemble(config);
  const fs::path csv = a.out_prefix + ".csv";
  const fs::path manifest = a.out_prefix + ".manifest.json";
  AtomicFile csv_file(csv);
  io::write_results_csv(csv_file.stream(), run.result);
  AtomicFile manifest_file(manifest);
  manifest_file.stream() << io::manifest_json(run.manifest);
  csv_file.commit();
  manifest_file.commit();
  out << "wrote " << csv.string() << " and " << manifest.string() << '\n';
  return kOk;
}

int cmd_compare(const CompareArgs& a, std::ostream& out, std::ostream& err) {
  std::ifstream in(a.results);
  if (!in) {
    err << "error: cannot open " << a.results << '\n';
    return kFailure;
  }
  const ex::EnsembleResult result = io::read_results_csv(in);
  if (result.dim >= 4) {
    err << "error: no scaling function exists for d >= 4; refusing analytic overlay for d = "
        << result.dim << '\n';
    return kComparisonFailed;
  }
  ex::CompareOptions options;
  options.xi_min = a.xi_min;
  options.xi_max = a.xi_max;
  options.budget = budget_for(a.tol);

  std::vector<ex::ComparisonReport> reports;
  for (std::int64_t R : result.radii) {
    if (R == 0) continue;
    reports.push_back(ex::compare(ex::collapse(result, R), options));
  }
  int total = 0;
  int within = 0;
  double max_pull = 0.0;
  for (const auto& r : reports) {
    total += static_cast<int>(r.points.size());
    within += r.within;
    max_pull = std::max(max_pull, r.max_abs_pull);
  }
  const double fraction = total > 0 ? static_cast<double>(within) / total : 0.0;
  const bool pass = total > 0 && fraction >= options.pass_fraction;

  if (!a.out.empty()) {
    emit(a.out, out, [&](std::ostream& os) {
      os << "R,t,xi,phi,sigma,analytic,analytic_error,residual,pull\n";
      for (const auto& r : reports)
        for (const auto& p : r.points)
          os << r.R << ',' << p.t << ',' << io::format_real(p.xi) << ','
             << io::format_real(p.measured) << ',' << io::format_real(p.sigma) << ','
             << io::format_real(p.reference) << ',' << io::format_real(p.reference_sigma) << ','
             << io::format_real(p.residual) << ',' << io::format_real(p.pull) << '\n';
    });
  }
  for (const auto& r : reports)
    out << "R=" << r.R << " points=" << r.points.size() << " within3sigma=" << r.within
        << " max|pull|=" << io::format_real(r.max_abs_pull) << '\n';
  out << "d=" << result.dim << " points=" << total << " fraction_within=" << io::format_real(fraction)
      << " max|pull|=" << io::format_real(max_pull) << ' ' << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kOk : kComparisonFailed;
}

int cmd_persistence(const PersistenceArgs& a, std::ostream& out, std::ostream& err) {
  ex::PersistenceConfig config;
  config.dim = a.dim;
  config.steps = a.steps;
  config.realizations = a.reals;
  config.master_seed = a.seed;
  config.worker_count = a.workers;
  const ex::PersistenceResult result = ex::run_persistence(config);

  // Default window: the largest decade of t.
  const std::int64_t hi = a.fit_max > 0 ? a.fit_max : a.steps;
  const std::int64_t lo = a.fit_min > 0 ? a.fit_min : std::max<std::int64_t>(1, hi / 10);
  emit(a.out, out, [&](std::ostream& os) { io::write_persistence_csv(os, result); });
  std::ostream& log = (a.out == "-" || a.out.empty()) ? err : out;
  try {
    const ex::SlopeFit fit = ex::fit_loglog_slope(result.points, lo, hi);
    log << "loglog slope over t in [" << lo << ", " << hi << "]: " << io::format_real(fit.slope)
        << " +- " << io::format_real(fit.slope_stderr) << " (" << fit.points << " points)\n";
  } catch (const std::invalid_argument& e) {
    log << "loglog slope unavailable: " << e.what() << '\n';
  }
  return kOk;
}

bool read_scaling_csv(std::istream& in, std::vector<std::pair<double, double>>& points) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string xs, ys;
    if (!std::getline(ss, xs, ',') || !std::getline(ss, ys, ',')) return false;
    try {
      std::size_t px = 0, py = 0;
      const double x = std::stod(xs, &px);
      const double y = std::stod(ys, &py);
      if (px != xs.size() || py != ys.size()) return false;
      points.emplace_back(x, y);
    } catch (const std::exception&) {
      return false;
    }
  }
  return !points.empty();
}

int cmd_plot(const PlotArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<plot::Series> series;
  int dim = a.dim > 0.0 ? static_cast<int>(a.dim) : 0;
  double analytic_dim = a.dim;
  double xi_lo = std::numeric_limits<double>::infinity();
  double xi_hi = 0.0;

  for (const std::string& path : a.results) {
    std::ifstream in(path);
    if (!in) {
      err << "error: cannot open " << path << '\n';
      return kFailure;
    }
    std::string header;
    if (!std::getline(in, header)) {
      err << "error: " << path << " is empty\n";
      return kFailure;
    }
    if (!header.empty() && header.back() == '\r') header.pop_back();
    if (header == io::kResultsHeader) {
      std::stringstream rest;
      rest << header << '\n' << in.rdbuf();
      const ex::EnsembleResult result = io::read_results_csv(rest);
      dim = result.dim;
      if (a.dim <= 0.0) analytic_dim = result.dim;
      for (std::int64_t R : result.radii) {
        if (R == 0) continue;
        plot::Series s{"R = " + std::to_string(R), plot::Style::markers, {}};
        for (const ex::CurvePoint& p : ex::collapse(result, R).points) {
          s.points.emplace_back(p.xi, p.phi);
          xi_lo = std::min(xi_lo, p.xi);
          xi_hi = std::max(xi_hi, p.xi);
        }
        series.push_back(std::move(s));
      }
    } else if (header.rfind("xi,phi", 0) == 0) {
      plot::Series s{fs::path(path).stem().string(), plot::Style::line, {}};
      if (!read_scaling_csv(in, s.points)) {
        err << "error: malformed scaling CSV " << path << '\n';
        return kFailure;
      }
      for (const auto& [x, y] : s.points) {
        xi_lo = std::min(xi_lo, x);
        xi_hi = std::max(xi_hi, x);
      }
      series.push_back(std::move(s));
    } else {
      err << "error: unrecognised CSV header in " << path << '\n';
      return kFailure;
    }
  }

  if (a.analytic) {
    if (analytic_dim <= 0.0) {
      err << "error: --analytic needs --dim or a results file\n";
      return kFailure;
    }
    if (analytic_dim >= 4.0) {
      err << "error: " << ScalingDivergence(analytic_dim).what() << '\n';
      return kDivergence;
    }
    if (!(xi_hi > 0.0)) {
      xi_lo = a.log_x ? 0.01 : 0.0;
      xi_hi = 3.0;
    }
    if (a.log_x) xi_lo = std::max(xi_lo, 1e-3);
    constexpr int kSamples = 200;
    std::vector<double> grid;
    for (int i = 0; i < kSamples; ++i) {
      const double f = static_cast<double>(i) / (kSamples - 1);
      grid.push_back(a.log_x ? xi_lo * std::pow(xi_hi / xi_lo, f) : xi_lo + (xi_hi - xi_lo) * f);
    }
    const ex::ScalingCurve curve =
        ex::analytic_curve(static_cast<int>(analytic_dim), grid, budget_for(a.tol));
    plot::Series s{"analytic d = " + std::to_string(static_cast<int>(analytic_dim)),
                   plot::Style::line, {}};
    for (const ex::CurvePoint& p : curve.points) s.points.emplace_back(p.xi, p.phi);
    series.push_back(std::move(s));
    dim = static_cast<int>(analytic_dim);
  }
  if (series.empty()) {
    err << "error: nothing to plot\n";
    return kFailure;
  }

  plot::PlotOptions options;
  options.log_x = a.log_x;
  if (dim > 0) options.title = "d = " + std::to_string(dim);
  const std::string svg = plot::render_svg(series, options);
  emit(a.out, out, [&](std::ostream& os) { os << svg; });
  return kOk;
}

int default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Overlap volume of two random walkers: scaling functions and lattice Monte Carlo",
               "overlap"};
  app.require_subcommand(1);

  ScalingArgs scaling;
  auto* sc = app.add_subcommand("scaling", "Tabulate the scaling function Phi_d(xi)");
  sc->add_option("--dim", scaling.dim, "Dimension d (d >= 4 has no scaling function)")->required();
  sc->add_option("--xi-min", scaling.xi_min, "Smallest xi")->capture_default_str();
  sc->add_option("--xi-max", scaling.xi_max, "Largest xi")->capture_default_str();
  sc->add_option("--points", scaling.points, "Number of xi values")->capture_default_str();
  sc->add_option("--method", scaling.method, "Evaluation route")
      ->check(CLI::IsMember({"auto", "closed", "quadrature", "series"}))
      ->capture_default_str();
  sc->add_option("--tol", scaling.tol, "Absolute quadrature tolerance")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sc->add_option("--out", scaling.out, "Output CSV ('-' for stdout)")->capture_default_str();

  SimulateArgs simulate;
  simulate.workers = default_workers();
  auto* sm = app.add_subcommand("simulate", "Monte Carlo overlap campaign");
  sm->add_option("--dim", simulate.dim, "Lattice dimension")->required()->check(CLI::Range(1, 8));
  sm->add_option("--radius", simulate.radius, "Initial separation R (repeatable)")
      ->capture_default_str();
  sm->add_option("--steps", simulate.steps, "Steps per walker")->capture_default_str();
  sm->add_option("--reals", simulate.reals, "Realizations per R")->capture_default_str();
  sm->add_option("--seed", simulate.seed, "Master seed")->required();
  sm->add_option("--workers", simulate.workers, "Worker threads")->check(CLI::PositiveNumber);
  sm->add_option("--checkpoints", simulate.checkpoints, "Checkpoint times (default powers of 2)");
  sm->add_option("--out-prefix", simulate.out_prefix, "Writes <prefix>.csv and <prefix>.manifest.json")
      ->required();

  CompareArgs compare;
  auto* cp = app.add_subcommand("compare", "Compare measured collapse with the analytic Phi_d");
  cp->add_option("--results", compare.results, "Results CSV from simulate")->required();
  cp->add_option("--out", compare.out, "Per-point report CSV");
  cp->add_option("--xi-min", compare.xi_min, "Window start")->capture_default_str();
  cp->add_option("--xi-max", compare.xi_max, "Window end")->capture_default_str();
  cp->add_option("--tol", compare.tol, "Analytic tolerance")->check(CLI::PositiveNumber);

  PersistenceArgs persistence;
  persistence.workers = default_workers();
  auto* ps = app.add_subcommand("persistence", "Empirical persistence q(t)");
  ps->add_option("--dim", persistence.dim, "Lattice dimension")->required()->check(CLI::Range(1, 8));
  ps->add_option("--steps", persistence.steps, "Steps per walker")->capture_default_str();
  ps->add_option("--reals", persistence.reals, "Realizations")->capture_default_str();
  ps->add_option("--seed", persistence.seed, "Master seed")->required();
  ps->add_option("--workers", persistence.workers, "Worker threads")->check(CLI::PositiveNumber);
  ps->add_option("--fit-min", persistence.fit_min, "Fit window start (default steps/10)");
  ps->add_option("--fit-max", persistence.fit_max, "Fit window end (default steps)");
  ps->add_option("--out", persistence.out, "Output CSV ('-' for stdout)")->capture_default_str();

  PlotArgs plot_args;
  auto* pl = app.add_subcommand("plot", "Render Phi vs xi as SVG");
  pl->add_option("--results", plot_args.results, "Results or scaling CSV files");
  pl->add_flag("--analytic", plot_args.analytic, "Overlay the analytic Phi_d");
  pl->add_option("--dim", plot_args.dim, "Dimension for the analytic curve");
  pl->add_flag("--logx", plot_args.log_x, "Logarithmic xi axis");
  pl->add_option("--tol", plot_args.tol, "Analytic tolerance")->check(CLI::PositiveNumber);
  pl->add_option("--out", plot_args.out, "Output SVG")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kFailure;
  }

  try {
    if (*sc) return cmd_scaling(scaling, out, err);
    if (*sm) return cmd_simulate(simulate, out, err);
    if (*cp) return cmd_compare(compare, out, err);
    if (*ps) return cmd_persistence(persistence, out, err);
    if (*pl) return cmd_plot(plot_args, out, err);
  } catch (const ScalingDivergence& e) {
    err << "error: " << e.what() << '\n';
    return kDivergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace overlap::cli
