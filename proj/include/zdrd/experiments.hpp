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

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "zdrd/coding.hpp"
#include "zdrd/source_model.hpp"

namespace zdrd {

struct ExperimentSeeds {
  std::uint64_t source = 1;
  std::uint64_t dither = 2;
  std::uint64_t channel = 3;
};

struct ExperimentConfig {
  std::string name;
  std::optional<GaussMarkovSource> source;
  /// Dimension used by per_dim normalization. For AR sources this is the
  /// dimension of the original process, not of the companion state.
  Index process_dim = 0;
  std::vector<double> d_grid;  // empty means default_grid(source)
  std::int64_t n_steps = 100000;
  ExperimentSeeds seeds;
  std::optional<QuantizerKind> quantizer;  // nullopt: bounds only
  bool per_dim = false;
  unsigned threads = 0;
  std::optional<std::string> csv_out;
  std::optional<std::string> json_out;
  /// Directory for per-row coding traces (trace_<row>.csv).
  std::optional<std::string> trace_dir;
};

struct ExperimentRow {
  static constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

  double d_target = 0.0;
  double rate_lower_bits = kMissing;
  double rate_upper_bits = kMissing;
  double rate_op_bits = kMissing;
  double d_empirical = kMissing;
  std::int64_t r_active = 0;
  std::string status = "ok";  // "ok" or "failed:<ErrorName>"

  bool failed() const { return status != "ok"; }
};

struct ExperimentReport {
  std::string name;
  std::vector<ExperimentRow> rows;
  std::vector<std::string> messages;  // per-row error text, empty when ok
  std::vector<double> d_grid;
  std::int64_t n_steps = 0;
  ExperimentSeeds seeds;
  std::optional<QuantizerKind> quantizer;
  bool per_dim = false;
  Index process_dim = 0;
  double wall_seconds = 0.0;

  bool any_failed() const;
};

std::vector<std::string> list_presets();

/// Configuration of a named preset. Throws kConfigParse for unknown names.
ExperimentConfig preset_config(std::string_view name);

/// 20 log-spaced points d_i = d * 0.02^{1 - (i+1)/20}, with d = d_max for
/// stable sources and d = 3 otherwise.
std::vector<double> default_grid(const GaussMarkovSource& src);

/// Applies ZDRD_SEED = S as seeds (S, S+1, S+2). Throws kConfigParse if the
/// value is not an unsigned integer.
void apply_seed_override(ExperimentConfig& config, const char* env_value);

/// Solves, realizes and (optionally) codes every grid point. Rows are
/// evaluated in parallel, each with seeds derived from the configured ones
/// and the row index, and returned in grid order. Row failures are recorded
/// in the row status.
ExperimentReport run_experiment(const ExperimentConfig& config);

inline constexpr std::string_view kCsvHeader =
    "D_target,rate_lower_bits,rate_upper_bits,rate_op_bits,D_empirical,r_active,status";

/// Numbers are printed with 17 significant digits; missing values are empty.
std::string report_csv(const ExperimentReport& report);

/// Inverse of report_csv. Throws kConfigParse on malformed input.
std::vector<ExperimentRow> parse_csv(const std::string& text);

}  // namespace zdrd
