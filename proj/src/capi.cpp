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

#include "zdrd/zdrd.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "zdrd/coding.hpp"
#include "zdrd/errors.hpp"
#include "zdrd/experiments.hpp"
#include "zdrd/json_io.hpp"
#include "zdrd/nrdf_solver.hpp"
#include "zdrd/rd_curve.hpp"
#include "zdrd/realization.hpp"
#include "zdrd/source_model.hpp"

struct zdrd_source {
  zdrd::GaussMarkovSource src;
};
struct zdrd_solution {
  zdrd::NrdfSolution sol;
};
struct zdrd_scheme {
  zdrd::RealizationScheme scheme;
};
struct zdrd_config {
  zdrd::ExperimentConfig cfg;
};
struct zdrd_report {
  zdrd::ExperimentReport report;
};

namespace {

thread_local std::string g_last_error;

zdrd_status to_status(zdrd::ErrorCode code) {
  using zdrd::ErrorCode;
  switch (code) {
    case ErrorCode::kDimensionMismatch: return ZDRD_ERR_DIMENSION_MISMATCH;
    case ErrorCode::kNotPsd: return ZDRD_ERR_NOT_PSD;
    case ErrorCode::kNotPd: return ZDRD_ERR_NOT_PD;
    case ErrorCode::kEigenFailure: return ZDRD_ERR_EIGEN_FAILURE;
    case ErrorCode::kInfeasibleModel: return ZDRD_ERR_INFEASIBLE_MODEL;
    case ErrorCode::kSolverDivergence: return ZDRD_ERR_SOLVER_DIVERGENCE;
    case ErrorCode::kBadDistortion: return ZDRD_ERR_BAD_DISTORTION;
    case ErrorCode::kOrderViolation: return ZDRD_ERR_ORDER_VIOLATION;
    case ErrorCode::kAlphabetOverflow: return ZDRD_ERR_ALPHABET_OVERFLOW;
    case ErrorCode::kConfigParse: return ZDRD_ERR_CONFIG_PARSE;
    case ErrorCode::kInvalidArgument: return ZDRD_ERR_INVALID_ARGUMENT;
  }
  return ZDRD_ERR_INTERNAL;
}

zdrd_status fail(zdrd_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs body, translating exceptions into status codes.
template <typename Body>
zdrd_status guarded(Body&& body) {
  try {
    g_last_error.clear();
    body();
    return ZDRD_OK;
  } catch (const zdrd::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ZDRD_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ZDRD_ERR_INTERNAL, e.what());
  }
}

#define ZDRD_REQUIRE(ptr)                                                   \
  do {                                                                      \
    if ((ptr) == nullptr) return fail(ZDRD_ERR_NULL_ARGUMENT, #ptr " is NULL"); \
  } while (0)

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

zdrd::Matrix row_major(const double* data, size_t rows, size_t cols) {
  zdrd::Matrix m(static_cast<zdrd::Index>(rows), static_cast<zdrd::Index>(cols));
  for (size_t i = 0; i < rows; ++i) {
    for (size_t j = 0; j < cols; ++j) {
      m(static_cast<zdrd::Index>(i), static_cast<zdrd::Index>(j)) = data[i * cols + j];
    }
  }
  return m;
}

void write_row_major(const zdrd::Matrix& m, double* out) {
  for (zdrd::Index i = 0; i < m.rows(); ++i) {
    for (zdrd::Index j = 0; j < m.cols(); ++j) out[i * m.cols() + j] = m(i, j);
  }
}

zdrd_form to_c_form(zdrd::SdpForm f) {
  switch (f) {
    case zdrd::SdpForm::kFormB: return ZDRD_FORM_B;
    case zdrd::SdpForm::kFormA: return ZDRD_FORM_A;
    case zdrd::SdpForm::kScalarClosedForm: return ZDRD_FORM_SCALAR;
  }
  return ZDRD_FORM_AUTO;
}

std::optional<zdrd::QuantizerKind> to_kind(zdrd_quantizer q) {
  switch (q) {
    case ZDRD_QUANTIZER_NONE: return std::nullopt;
    case ZDRD_QUANTIZER_SDUSQ: return zdrd::QuantizerKind::kSdusq;
    case ZDRD_QUANTIZER_D4: return zdrd::QuantizerKind::kLatticeD4;
  }
  throw zdrd::Error(zdrd::ErrorCode::kInvalidArgument, "unknown quantizer kind");
}

}  // namespace

extern "C" {

const char* zdrd_version(void) { return "0.1.0"; }

const char* zdrd_status_name(zdrd_status status) {
  switch (status) {
    case ZDRD_OK: return "OK";
    case ZDRD_ERR_DIMENSION_MISMATCH: return "DimensionMismatch";
    case ZDRD_ERR_NOT_PSD: return "NotPSD";
    case ZDRD_ERR_NOT_PD: return "NotPD";
    case ZDRD_ERR_EIGEN_FAILURE: return "EigenFailure";
    case ZDRD_ERR_INFEASIBLE_MODEL: return "InfeasibleModel";
    case ZDRD_ERR_SOLVER_DIVERGENCE: return "SolverDivergence";
    case ZDRD_ERR_BAD_DISTORTION: return "BadDistortion";
    case ZDRD_ERR_ORDER_VIOLATION: return "OrderViolation";
    case ZDRD_ERR_ALPHABET_OVERFLOW: return "AlphabetOverflow";
    case ZDRD_ERR_CONFIG_PARSE: return "ConfigParse";
    case ZDRD_ERR_INVALID_ARGUMENT: return "InvalidArgument";
    case ZDRD_ERR_NULL_ARGUMENT: return "NullArgument";
    case ZDRD_ERR_INTERNAL: return "Internal";
  }
  return "Unknown";
}

const char* zdrd_last_error(void) { return g_last_error.c_str(); }

void zdrd_string_free(char* s) { std::free(s); }

zdrd_status zdrd_source_new(const double* a, const double* b, const double* sigma_x0, size_t p,
                            size_t q, zdrd_source** out) {
  ZDRD_REQUIRE(a);
  ZDRD_REQUIRE(b);
  ZDRD_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    zdrd::Matrix x0 = sigma_x0 != nullptr
                          ? row_major(sigma_x0, p, p)
                          : zdrd::Matrix::Identity(static_cast<zdrd::Index>(p),
                                                   static_cast<zdrd::Index>(p));
    *out = new zdrd_source{zdrd::GaussMarkovSource(row_major(a, p, p), row_major(b, p, q),
                                                   std::move(x0))};
  });
}

zdrd_status zdrd_source_from_ar(const double* coefficients, size_t s, const double* b, size_t p,
                                size_t q, zdrd_source** out) {
  ZDRD_REQUIRE(coefficients);
  ZDRD_REQUIRE(b);
  ZDRD_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    std::vector<zdrd::Matrix> mats;
    for (size_t k = 0; k < s; ++k) mats.push_back(row_major(coefficients + k * p * p, p, p));
    *out = new zdrd_source{zdrd::augment_ar(mats, row_major(b, p, q))};
  });
}

zdrd_status zdrd_source_from_json(const char* json, zdrd_source** out) {
  ZDRD_REQUIRE(json);
  ZDRD_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new zdrd_source{zdrd::source_from_json(json)}; });
}

void zdrd_source_free(zdrd_source* src) { delete src; }

size_t zdrd_source_state_dim(const zdrd_source* src) {
  return src == nullptr ? 0 : static_cast<size_t>(src->src.state_dim());
}

zdrd_status zdrd_source_d_max(const zdrd_source* src, double* out) {
  ZDRD_REQUIRE(src);
  ZDRD_REQUIRE(out);
  return guarded([&] { *out = zdrd::d_max(src->src); });
}

zdrd_status zdrd_source_stability(const zdrd_source* src, int* is_stable,
                                  double* rate_floor_bits) {
  ZDRD_REQUIRE(src);
  return guarded([&] {
    const zdrd::StabilityReport r = zdrd::stability_report(src->src);
    if (is_stable != nullptr) *is_stable = r.is_stable ? 1 : 0;
    if (rate_floor_bits != nullptr) *rate_floor_bits = r.rate_floor_bits;
  });
}

zdrd_status zdrd_scalar_nrdf(double alpha, double sigma2, double distortion, double* out) {
  ZDRD_REQUIRE(out);
  return guarded([&] { *out = zdrd::scalar_ar1_nrdf(alpha, sigma2, distortion); });
}

zdrd_status zdrd_nrdf(const zdrd_source* src, double distortion, zdrd_form form,
                      zdrd_solution** out) {
  ZDRD_REQUIRE(src);
  ZDRD_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    zdrd::SolverOptions opts;
    switch (form) {
      case ZDRD_FORM_AUTO: break;
      case ZDRD_FORM_B: opts.force_form = zdrd::SdpForm::kFormB; break;
      case ZDRD_FORM_A: opts.force_form = zdrd::SdpForm::kFormA; break;
      default:
        throw zdrd::Error(zdrd::ErrorCode::kInvalidArgument,
                          "form must be AUTO, B or A");
    }
    *out = new zdrd_solution{zdrd::nrdf(src->src, distortion, opts)};
  });
}

void zdrd_solution_free(zdrd_solution* sol) { delete sol; }

double zdrd_solution_rate(const zdrd_solution* sol) {
  return sol == nullptr ? std::numeric_limits<double>::quiet_NaN() : sol->sol.rate_bits;
}

zdrd_form zdrd_solution_form(const zdrd_solution* sol) {
  return sol == nullptr ? ZDRD_FORM_AUTO : to_c_form(sol->sol.form_used);
}

zdrd_status zdrd_solution_pi(const zdrd_solution* sol, double* out) {
  ZDRD_REQUIRE(sol);
  ZDRD_REQUIRE(out);
  write_row_major(sol->sol.pi, out);
  return ZDRD_OK;
}

zdrd_status zdrd_solution_lambda(const zdrd_solution* sol, double* out) {
  ZDRD_REQUIRE(sol);
  ZDRD_REQUIRE(out);
  write_row_major(sol->sol.lambda, out);
  return ZDRD_OK;
}

zdrd_status zdrd_solution_to_json(const zdrd_solution* sol, char** out) {
  ZDRD_REQUIRE(sol);
  ZDRD_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = dup_string(zdrd::solution_to_json(sol->sol)); });
}

zdrd_status zdrd_scheme_new(const zdrd_source* src, const zdrd_solution* sol,
                            zdrd_scheme** out) {
  ZDRD_REQUIRE(src);
  ZDRD_REQUIRE(sol);
  ZDRD_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new zdrd_scheme{zdrd::build_realization(src->src, sol->sol)}; });
}

void zdrd_scheme_free(zdrd_scheme* scheme) { delete scheme; }

size_t zdrd_scheme_active_dims(const zdrd_scheme* scheme) {
  return scheme == nullptr ? 0 : static_cast<size_t>(scheme->scheme.r);
}

zdrd_status zdrd_scheme_to_json(const zdrd_scheme* scheme, char** out) {
  ZDRD_REQUIRE(scheme);
  ZDRD_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = dup_string(zdrd::scheme_to_json(scheme->scheme)); });
}

zdrd_status zdrd_awgn_mse(const zdrd_source* src, const zdrd_scheme* scheme, int64_t n,
                          uint64_t source_seed, uint64_t channel_seed, double* out) {
  ZDRD_REQUIRE(src);
  ZDRD_REQUIRE(scheme);
  ZDRD_REQUIRE(out);
  return guarded([&] {
    const zdrd::Trajectory traj = zdrd::simulate(src->src, n, source_seed);
    *out = zdrd::run_awgn_channel(scheme->scheme, src->src, traj, channel_seed).empirical_mse;
  });
}

zdrd_status zdrd_coding_run(const zdrd_source* src, const zdrd_scheme* scheme, int64_t n,
                            uint64_t source_seed, uint64_t dither_seed, zdrd_quantizer kind,
                            zdrd_coding_result* out) {
  ZDRD_REQUIRE(src);
  ZDRD_REQUIRE(scheme);
  ZDRD_REQUIRE(out);
  return guarded([&] {
    const auto k = to_kind(kind);
    if (!k) throw zdrd::Error(zdrd::ErrorCode::kInvalidArgument, "coding needs a quantizer");
    const zdrd::Trajectory traj = zdrd::simulate(src->src, n, source_seed);
    const zdrd::CodingResult r = zdrd::run_coding_experiment(
        scheme->scheme, src->src, traj, zdrd::default_quantizer(*k, dither_seed));
    out->rate_bits = r.empirical_rate_bits;
    out->entropy_bits = r.empirical_entropy_bits;
    out->mse = r.empirical_mse;
    out->rate_std_error = r.rate_std_error;
    out->n_steps = r.n_steps;
    out->alphabet_size = r.alphabet_size;
    out->active_dims = r.r;
  });
}

double zdrd_upper_bound(double rate_bits, int64_t active_dims, zdrd_quantizer kind) {
  const auto k = kind == ZDRD_QUANTIZER_D4 ? zdrd::QuantizerKind::kLatticeD4
                                           : zdrd::QuantizerKind::kSdusq;
  return zdrd::theoretical_upper_bound(rate_bits, active_dims, k,
                                       zdrd::default_quantizer(k).g_r);
}

size_t zdrd_preset_count(void) { return zdrd::list_presets().size(); }

const char* zdrd_preset_name(size_t index) {
  static const std::vector<std::string> names = zdrd::list_presets();
  return index < names.size() ? names[index].c_str() : nullptr;
}

zdrd_status zdrd_config_from_preset(const char* name, zdrd_config** out) {
  ZDRD_REQUIRE(name);
  ZDRD_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new zdrd_config{zdrd::preset_config(name)}; });
}

zdrd_status zdrd_config_from_json(const char* json, zdrd_config** out) {
  ZDRD_REQUIRE(json);
  ZDRD_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new zdrd_config{zdrd::config_from_json(json)}; });
}

void zdrd_config_free(zdrd_config* cfg) { delete cfg; }

zdrd_status zdrd_config_set_quantizer(zdrd_config* cfg, zdrd_quantizer kind) {
  ZDRD_REQUIRE(cfg);
  return guarded([&] { cfg->cfg.quantizer = to_kind(kind); });
}

zdrd_status zdrd_config_set_per_dim(zdrd_config* cfg, int per_dim) {
  ZDRD_REQUIRE(cfg);
  cfg->cfg.per_dim = per_dim != 0;
  return ZDRD_OK;
}

zdrd_status zdrd_config_set_n_steps(zdrd_config* cfg, int64_t n_steps) {
  ZDRD_REQUIRE(cfg);
  if (n_steps < 1) return fail(ZDRD_ERR_INVALID_ARGUMENT, "n_steps must be at least 1");
  cfg->cfg.n_steps = n_steps;
  return ZDRD_OK;
}

zdrd_status zdrd_config_set_threads(zdrd_config* cfg, unsigned threads) {
  ZDRD_REQUIRE(cfg);
  cfg->cfg.threads = threads;
  return ZDRD_OK;
}

zdrd_status zdrd_config_set_grid(zdrd_config* cfg, const double* grid, size_t n) {
  ZDRD_REQUIRE(cfg);
  ZDRD_REQUIRE(grid);
  return guarded([&] {
    std::vector<double> g(grid, grid + n);
    zdrd::validate_grid(g);
    cfg->cfg.d_grid = std::move(g);
  });
}

zdrd_status zdrd_config_set_seeds(zdrd_config* cfg, uint64_t source, uint64_t dither,
                                  uint64_t channel) {
  ZDRD_REQUIRE(cfg);
  cfg->cfg.seeds = {source, dither, channel};
  return ZDRD_OK;
}

zdrd_status zdrd_config_apply_seed_env(zdrd_config* cfg) {
  ZDRD_REQUIRE(cfg);
  return guarded([&] { zdrd::apply_seed_override(cfg->cfg, std::getenv("ZDRD_SEED")); });
}

zdrd_status zdrd_config_csv_path(const zdrd_config* cfg, char** out) {
  ZDRD_REQUIRE(cfg);
  ZDRD_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    if (cfg->cfg.csv_out) *out = dup_string(*cfg->cfg.csv_out);
  });
}

zdrd_status zdrd_config_json_path(const zdrd_config* cfg, char** out) {
  ZDRD_REQUIRE(cfg);
  ZDRD_REQUIRE(out);
  *out = nullptr;
  return guarded([&] {
    if (cfg->cfg.json_out) *out = dup_string(*cfg->cfg.json_out);
  });
}

zdrd_status zdrd_run_experiment(const zdrd_config* cfg, zdrd_report** out) {
  ZDRD_REQUIRE(cfg);
  ZDRD_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = new zdrd_report{zdrd::run_experiment(cfg->cfg)}; });
}

void zdrd_report_free(zdrd_report* report) { delete report; }

size_t zdrd_report_row_count(const zdrd_report* report) {
  return report == nullptr ? 0 : report->report.rows.size();
}

zdrd_status zdrd_report_row(const zdrd_report* report, size_t index, zdrd_row* out) {
  ZDRD_REQUIRE(report);
  ZDRD_REQUIRE(out);
  if (index >= report->report.rows.size()) {
    return fail(ZDRD_ERR_INVALID_ARGUMENT, "row index out of range");
  }
  const zdrd::ExperimentRow& r = report->report.rows[index];
  out->d_target = r.d_target;
  out->rate_lower_bits = r.rate_lower_bits;
  out->rate_upper_bits = r.rate_upper_bits;
  out->rate_op_bits = r.rate_op_bits;
  out->d_empirical = r.d_empirical;
  out->r_active = r.r_active;
  out->failed = r.failed() ? 1 : 0;
  return ZDRD_OK;
}

zdrd_status zdrd_report_row_message(const zdrd_report* report, size_t index, char** out) {
  ZDRD_REQUIRE(report);
  ZDRD_REQUIRE(out);
  *out = nullptr;
  if (index >= report->report.rows.size()) {
    return fail(ZDRD_ERR_INVALID_ARGUMENT, "row index out of range");
  }
  return guarded([&] { *out = dup_string(report->report.messages[index]); });
}

int zdrd_report_any_failed(const zdrd_report* report) {
  return report != nullptr && report->report.any_failed() ? 1 : 0;
}

zdrd_status zdrd_report_csv(const zdrd_report* report, char** out) {
  ZDRD_REQUIRE(report);
  ZDRD_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = dup_string(zdrd::report_csv(report->report)); });
}

zdrd_status zdrd_report_json(const zdrd_report* report, char** out) {
  ZDRD_REQUIRE(report);
  ZDRD_REQUIRE(out);
  *out = nullptr;
  return guarded([&] { *out = dup_string(zdrd::report_to_json(report->report)); });
}

}  // extern "C"
