// Copyright 2026 The overlap authors
// SPDX-License-Identifier: Apache-2.0
#include "overlap/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace overlap::io {

using experiment::EnsembleResult;
using experiment::EnsembleRow;

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string current_timestamp() {
  std::time_t when = 0;
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
    when = static_cast<std::time_t>(std::strtoll(epoch, nullptr, 10));
  } else {
    when = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  }
  std::tm tm{};
  gmtime_r(&when, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_results_csv(std::ostream& out, const EnsembleResult& result) {
  out << kResultsHeader << '\n';
  for (const EnsembleRow& r : result.rows) {
    const double xi = static_cast<double>(r.R) / std::sqrt(2.0 * static_cast<double>(r.t));
    out << result.dim << ',' << r.R << ',' << r.t << ',' << format_real(xi) << ','
        << format_real(r.mean_w2) << ',' << format_real(r.stderr_w2) << ','
        << format_real(r.mean_w1) << ',' << format_real(r.stderr_w1) << ',' << r.n << '\n';
  }
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

template <typename T>
T parse_number(const std::string& text, std::size_t line_no) {
  std::istringstream in(text);
  T value{};
  in >> value;
  if (in.fail() || !in.eof())
    throw std::runtime_error("results CSV line " + std::to_string(line_no) +
                             ": cannot parse field '" + text + "'");
  return value;
}

}  // namespace

EnsembleResult read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("results CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kResultsHeader)
    throw std::runtime_error("results CSV header mismatch: expected '" +
                             std::string(kResultsHeader) + "'");
  EnsembleResult result;
  bool have_dim = false;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line);
    if (f.size() != 9)
      throw std::runtime_error("results CSV line " + std::to_string(line_no) +
                               ": expected 9 fields, got " + std::to_string(f.size()));
    const int dim = parse_number<int>(f[0], line_no);
    if (have_dim && dim != result.dim)
      throw std::runtime_error("results CSV mixes dimensions");
    result.dim = dim;
    have_dim = true;
    EnsembleRow row;
    row.R = parse_number<std::int64_t>(f[1], line_no);
    row.t = parse_number<std::int64_t>(f[2], line_no);
    row.mean_w2 = parse_number<double>(f[4], line_no);
    row.stderr_w2 = parse_number<double>(f[5], line_no);
    row.mean_w1 = parse_number<double>(f[6], line_no);
    row.stderr_w1 = parse_number<double>(f[7], line_no);
    row.n = parse_number<std::int64_t>(f[8], line_no);
    if (row.t < 1 || row.R < 0 || row.n < 1)
      throw std::runtime_error("results CSV line " + std::to_string(line_no) +
                               ": out-of-range R, t or n");
    if (!result.has(row.R)) result.radii.push_back(row.R);
    if (std::find(result.checkpoints.begin(), result.checkpoints.end(), row.t) ==
        result.checkpoints.end())
      result.checkpoints.push_back(row.t);
    if (row.n < 2) result.stderr_defined = false;
    result.rows.push_back(row);
  }
  if (result.rows.empty()) throw std::runtime_error("results CSV has no data rows");
  std::sort(result.checkpoints.begin(), result.checkpoints.end());
  return result;
}

std::string manifest_json(const experiment::RunManifest& m) {
  nlohmann::ordered_json j;
  j["dim"] = m.config.dim;
  j["separations"] = m.config.separations;
  j["radii"] = m.config.radii();
  j["steps"] = m.config.steps;
  j["realizations"] = m.config.realizations;
  j["master_seed"] = m.config.master_seed;
  j["worker_count"] = m.config.worker_count;
  j["checkpoints"] = m.config.effective_checkpoints();
  j["code_version"] = m.code_version;
  j["timestamp"] = m.timestamp;
  j["rng"] = "mt19937_64 per lane, seeded with splitmix64(splitmix64(splitmix64(master_seed) ^ stream) ^ lane)";
  j["stream_rule"] = m.stream_rule;
  j["lanes"] = "walker 1 -> lane 0, walker 2 -> lane 1";
  j["conventions"] =
      "walker 2 starts at R e_1; start sites visited at t = 0; walkers step alternately";
  j["estimator"] =
      "phi = mean_w2(R,t)/mean_w2(0,t) (ratio of means); delta-method errors assume the R and "
      "R = 0 ensembles are independent (disjoint streams)";
  auto streams = nlohmann::ordered_json::array();
  for (const experiment::StreamRange& s : m.streams)
    streams.push_back({{"R", s.R}, {"slot", s.slot}, {"first", s.first}, {"last", s.last}});
  j["streams"] = streams;
  return j.dump(2) + "\n";
}

void write_persistence_csv(std::ostream& out, const experiment::PersistenceResult& result) {
  out << "t,q_hat,stderr\n";
  for (const experiment::PersistencePoint& p : result.points)
    out << p.t << ',' << format_real(p.q_hat) << ',' << format_real(p.stderr) << '\n';
}

}  // namespace overlap::io
