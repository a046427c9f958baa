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

#include <string>

#include "zdrd/coding.hpp"
#include "zdrd/experiments.hpp"
#include "zdrd/nrdf_solver.hpp"
#include "zdrd/realization.hpp"

namespace zdrd {

/// Source from {"A", "B", "sigma_x0"?} or {"ar_coefficients", "B",
/// "sigma_x0"?}; matrices are row-major nested arrays. Throws kConfigParse
/// on malformed JSON and propagates source validation errors.
GaussMarkovSource source_from_json(const std::string& text);

/// Experiment configuration:
///
///   {"name": "...", "source": {...} | "preset": "example1",
///    "d_grid": [...], "n_steps": 100000,
///    "seeds": {"source": 1, "dither": 2, "channel": 3},
///    "quantizer": {"kind": "sdusq" | "d4"} | null,
///    "per_dim": false, "threads": 0,
///    "outputs": {"csv": "...", "json": "...", "trace_dir": "..."}}
///
/// Missing fields keep the preset's (or the built-in) defaults. Throws
/// kConfigParse.
ExperimentConfig config_from_json(const std::string& text);

std::string solution_to_json(const NrdfSolution& sol);
std::string scheme_to_json(const RealizationScheme& scheme);
std::string coding_result_to_json(const CodingResult& result);
std::string report_to_json(const ExperimentReport& report);

}  // namespace zdrd
