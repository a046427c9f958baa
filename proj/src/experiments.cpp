// Copyright 2026 The zdrd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "zdrd/experiments.hpp"

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "parallel.hpp"
#include "zdrd/errors.hpp"
#include "zdrd/nrdf_solver.hpp"
#include "zdrd/rd_curve.hpp"
#include "zdrd/realization.hpp"
#include "zdrd/rng.hpp"

namespace zdrd {

bool ExperimentReport::any_failed() const {
  for (const auto& row : rows) {
    if (row.failed()) return true;
  }
  return false;
}

std::vector<std::string> list_presets() {
  return {"example1", "example2", "example3", "example4"};
}

namespace {

GaussMarkovSource scalar_ar2(double a1, double a2) {
  const std::vector<Matrix> coeffs{Matrix::Constant(1, 1, a1), Matrix::Constant(1, 1, a2)};
  return augment_ar(coeffs, Matrix::Identity(1, 1));
}

}  // namespace

ExperimentConfig preset_config(std::string_view name) {
  ExperimentConfig c;
  c.name = std::string(name);
  if (name == "example1") {
    Matrix a(4, 4);
    a << 0.0551, 0.0893, 0.0051, 0.0649,
         0.0708, 0.0896, 0.0441, 0.0278,
         0.0291, 0.0126, 0.0030, 0.0676,
         0.0511, 0.0207, 0.0457, 0.0591;
    c.source.emplace(a, Matrix::Identity(4, 4));
    c.process_dim = 4;
    c.quantizer = QuantizerKind::kSdusq;
  } else if (name == "example2") {
    c.source.emplace(scalar_ar2(0.3, 0.5));
    c.process_dim = 1;
    c.quantizer = QuantizerKind::kSdusq;
  } else if (name == "example3") {
    Matrix a(4, 4);
    a << 0.8147, 0.6324, 0.9575, 0.9572,
         0.9058, 0.0975, 0.9649, 0.4854,
         0.1270, 0.2785, 0.1576, 0.8003,
         0.9134, 0.5469, 0.9706, 0.1419;
    c.source.emplace(a, Matrix::Identity(4, 4));
    c.process_dim = 4;
    c.quantizer = QuantizerKind::kLatticeD4;
  } else if (name == "example4") {
    c.source.emplace(scalar_ar2(1.2, 0.5));
    c.process_dim = 1;
    c.quantizer = QuantizerKind::kSdusq;
  } else {
    throw Error(ErrorCode::kConfigParse, "unknown preset '" + std::string(name) + "'");
  }
  c.d_grid = default_grid(*c.source);
  return c;
}

std::vector<double> default_grid(const GaussMarkovSource& src) {
  const double dmax = d_max(src);
  const double top = std::isfinite(dmax) ? dmax : 3.0;
  std::vector<double> grid(20);
  for (int i = 0; i < 20; ++i) {
    grid[static_cast<std::size_t>(i)] = top * std::pow(0.02, 1.0 - (i + 1) / 20.0);
  }
  grid.back() = top;
  return grid;
}

void apply_seed_override(ExperimentConfig& config, const char* env_value) {
  if (env_value == nullptr) return;
  const std::string text(env_value);
  char* end = nullptr;
  errno = 0;
  const unsigned long long s = std::strtoull(text.c_str(), &end, 10);
  if (text.empty() || text.front() == '-' || *end != '\0' || errno != 0) {
    throw Error(ErrorCode::kConfigParse, "ZDRD_SEED must be an unsigned integer, got '" + text + "'");
  }
  config.seeds = {s, s + 1, s + 2};
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  if (!config.source) throw Error(ErrorCode::kConfigParse, "experiment has no source");
  if (config.n_steps < 1) throw Error(ErrorCode::kConfigParse, "n_steps must be at least 1");
  const GaussMarkovSource& src = *config.source;
  const std::vector<double> grid = config.d_grid.empty() ? default_grid(src) : config.d_grid;
  validate_grid(grid);
  const Index norm_dim = config.process_dim > 0 ? config.process_dim : src.state_dim();
  const double scale = config.per_dim ? 1.0 / static_cast<double>(norm_dim) : 1.0;

  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.name = config.name;
  report.d_grid = grid;
  report.n_steps = config.n_steps;
  report.seeds = config.seeds;
  report.quantizer = config.quantizer;
  report.per_dim = config.per_dim;
  report.process_dim = norm_dim;
  report.rows.resize(grid.size());
  report.messages.resize(grid.size());

  detail::parallel_for(grid.size(), config.threads, [&](std::size_t i) {
    ExperimentRow& row = report.rows[i];
    row.d_target = grid[i];
    try {
      const NrdfSolution sol = nrdf(src, grid[i]);
      const RealizationScheme scheme = build_realization(src, sol);
      const QuantizerKind kind = config.quantizer.value_or(QuantizerKind::kSdusq);
      const QuantizerConfig qcfg = default_quantizer(kind, mix_seed(config.seeds.dither, i));
      row.r_active = scheme.r;
      row.rate_lower_bits = sol.rate_bits * scale;
      row.rate_upper_bits =
          theoretical_upper_bound(sol.rate_bits, scheme.r, kind, qcfg.g_r) * scale;
      if (config.quantizer) {
        const Trajectory traj = simulate(src, config.n_steps, mix_seed(config.seeds.source, i));
        std::optional<std::string> trace;
        if (config.trace_dir) trace = *config.trace_dir + "/trace_" + std::to_string(i) + ".csv";
        const CodingResult res = run_coding_experiment(scheme, src, traj, qcfg, trace);
        row.rate_op_bits = res.empirical_rate_bits * scale;
        row.d_empirical = res.empirical_mse;
      }
    } catch (const Error& e) {
      row.status = "failed:" + std::string(error_code_name(e.code()));
      report.messages[i] = e.what();
    } catch (const std::exception& e) {
      row.status = "failed:Internal";
      report.messages[i] = e.what();
    }
  });

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

namespace {

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_number(const std::string& field, std::size_t line) {
  if (field.empty()) return ExperimentRow::kMissing;
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (*end != '\0') {
    throw Error(ErrorCode::kConfigParse,
                "line " + std::to_string(line) + ": bad number '" + field + "'");
  }
  return v;
}

}  // namespace

std::string report_csv(const ExperimentReport& report) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const auto& row : report.rows) {
    out += format_number(row.d_target) + ',' + format_number(row.rate_lower_bits) + ',' +
           format_number(row.rate_upper_bits) + ',' + format_number(row.rate_op_bits) + ',' +
           format_number(row.d_empirical) + ',' + std::to_string(row.r_active) + ',' +
           row.status + '\n';
  }
  return out;
}

std::vector<ExperimentRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw Error(ErrorCode::kConfigParse, "missing or unexpected CSV header");
  }
  std::vector<ExperimentRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    for (;;) {
      const std::size_t comma = line.find(',', pos);
      fields.push_back(line.substr(pos, comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (fields.size() != 7) {
      throw Error(ErrorCode::kConfigParse,
                  "line " + std::to_string(line_no) + ": expected 7 fields");
    }
    ExperimentRow row;
    row.d_target = parse_number(fields[0], line_no);
    row.rate_lower_bits = parse_number(fields[1], line_no);
    row.rate_upper_bits = parse_number(fields[2], line_no);
    row.rate_op_bits = parse_number(fields[3], line_no);
    row.d_empirical = parse_number(fields[4], line_no);
    const double r = parse_number(fields[5], line_no);
    if (std::isnan(r) || r < 0 || r != std::floor(r)) {
      throw Error(ErrorCode::kConfigParse, "line " + std::to_string(line_no) + ": bad r_active");
    }
    row.r_active = static_cast<std::int64_t>(r);
    row.status = fields[6];
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace zdrd
