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

#include "zdrd/json_io.hpp"

#include <cmath>
#include <set>

#include "json.hpp"
#include "zdrd/errors.hpp"

namespace zdrd {

using nlohmann::json;

namespace {

[[noreturn]] void parse_error(const std::string& what) {
  throw Error(ErrorCode::kConfigParse, what);
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    parse_error(std::string("invalid JSON: ") + e.what());
  }
}

double finite_number(const json& v, const std::string& where) {
  if (!v.is_number()) parse_error(where + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) parse_error(where + " must be finite");
  return x;
}

Matrix matrix_from(const json& v, const std::string& name) {
  if (!v.is_array() || v.empty()) parse_error(name + " must be a non-empty array of rows");
  const auto rows = static_cast<Index>(v.size());
  Index cols = -1;
  Matrix m;
  for (Index i = 0; i < rows; ++i) {
    const json& row = v[static_cast<std::size_t>(i)];
    if (!row.is_array() || row.empty()) parse_error(name + " rows must be non-empty arrays");
    if (cols < 0) {
      cols = static_cast<Index>(row.size());
      m.resize(rows, cols);
    } else if (static_cast<Index>(row.size()) != cols) {
      parse_error(name + " has rows of different lengths");
    }
    for (Index j = 0; j < cols; ++j) {
      m(i, j) = finite_number(row[static_cast<std::size_t>(j)],
                              name + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
    }
  }
  return m;
}

json matrix_to(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

// NaN has no JSON representation; missing values become null.
json number_or_null(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) parse_error("unknown key '" + item.key() + "' in " + where);
  }
}

GaussMarkovSource source_from(const json& j) {
  if (!j.is_object()) parse_error("source must be an object");
  check_keys(j, {"A", "B", "sigma_x0", "ar_coefficients"}, "source");
  if (!j.contains("B")) parse_error("source needs B");
  const Matrix b = matrix_from(j["B"], "B");
  std::optional<Matrix> x0;
  if (j.contains("sigma_x0")) x0 = matrix_from(j["sigma_x0"], "sigma_x0");

  if (j.contains("A") == j.contains("ar_coefficients")) {
    parse_error("source needs exactly one of A or ar_coefficients");
  }
  if (j.contains("A")) {
    const Matrix a = matrix_from(j["A"], "A");
    if (x0) return GaussMarkovSource(a, b, *x0);
    return GaussMarkovSource(a, b);
  }
  const json& coeffs = j["ar_coefficients"];
  if (!coeffs.is_array() || coeffs.empty()) {
    parse_error("ar_coefficients must be a non-empty array of matrices");
  }
  std::vector<Matrix> mats;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    mats.push_back(matrix_from(coeffs[k], "ar_coefficients[" + std::to_string(k) + "]"));
  }
  return augment_ar(mats, b, x0);
}

std::uint64_t seed_from(const json& v, const std::string& where) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    parse_error(where + " must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

}  // namespace

GaussMarkovSource source_from_json(const std::string& text) { return source_from(parse_text(text)); }

ExperimentConfig config_from_json(const std::string& text) {
  const json j = parse_text(text);
  if (!j.is_object()) parse_error("config must be a JSON object");
  check_keys(j,
             {"name", "source", "preset", "d_grid", "n_steps", "seeds", "quantizer", "per_dim",
              "threads", "outputs"},
             "config");

  ExperimentConfig c;
  if (j.contains("preset")) {
    if (!j["preset"].is_string()) parse_error("preset must be a string");
    if (j.contains("source")) parse_error("config needs only one of source or preset");
    c = preset_config(j["preset"].get<std::string>());
  } else if (j.contains("source")) {
    c.source.emplace(source_from(j["source"]));
    c.process_dim = c.source->state_dim();
    if (j["source"].contains("ar_coefficients")) {
      c.process_dim = c.source->state_dim() /
                      static_cast<Index>(j["source"]["ar_coefficients"].size());
    }
    c.quantizer = QuantizerKind::kSdusq;
    c.name = "custom";
  } else {
    parse_error("config needs a source or a preset");
  }

  if (j.contains("name")) {
    if (!j["name"].is_string()) parse_error("name must be a string");
    c.name = j["name"].get<std::string>();
  }
  if (j.contains("d_grid")) {
    const json& g = j["d_grid"];
    if (!g.is_array() || g.empty()) parse_error("d_grid must be a non-empty array");
    c.d_grid.clear();
    for (std::size_t i = 0; i < g.size(); ++i) {
      c.d_grid.push_back(finite_number(g[i], "d_grid[" + std::to_string(i) + "]"));
    }
    for (std::size_t i = 0; i < c.d_grid.size(); ++i) {
      if (!(c.d_grid[i] > 0.0) || (i > 0 && !(c.d_grid[i] > c.d_grid[i - 1]))) {
        parse_error("d_grid must be positive and strictly increasing");
      }
    }
  }
  if (j.contains("n_steps")) {
    if (!j["n_steps"].is_number_integer() || j["n_steps"].get<std::int64_t>() < 1) {
      parse_error("n_steps must be a positive integer");
    }
    c.n_steps = j["n_steps"].get<std::int64_t>();
  }
  if (j.contains("seeds")) {
    const json& s = j["seeds"];
    if (!s.is_object()) parse_error("seeds must be an object");
    check_keys(s, {"source", "dither", "channel"}, "seeds");
    if (s.contains("source")) c.seeds.source = seed_from(s["source"], "seeds.source");
    if (s.contains("dither")) c.seeds.dither = seed_from(s["dither"], "seeds.dither");
    if (s.contains("channel")) c.seeds.channel = seed_from(s["channel"], "seeds.channel");
  }
  if (j.contains("quantizer")) {
    const json& q = j["quantizer"];
    if (q.is_null() || (q.is_object() && q.empty())) {
      c.quantizer.reset();
    } else {
      if (!q.is_object()) parse_error("quantizer must be an object or null");
      check_keys(q, {"kind"}, "quantizer");
      if (!q.contains("kind") || !q["kind"].is_string()) parse_error("quantizer.kind is required");
      const std::string kind = q["kind"].get<std::string>();
      if (kind == "sdusq") {
        c.quantizer = QuantizerKind::kSdusq;
      } else if (kind == "d4") {
        c.quantizer = QuantizerKind::kLatticeD4;
      } else if (kind == "none") {
        c.quantizer.reset();
      } else {
        parse_error("quantizer.kind must be sdusq, d4 or none");
      }
    }
  }
  if (j.contains("per_dim")) {
    if (!j["per_dim"].is_boolean()) parse_error("per_dim must be a boolean");
    c.per_dim = j["per_dim"].get<bool>();
  }
  if (j.contains("threads")) {
    if (!j["threads"].is_number_unsigned()) parse_error("threads must be a non-negative integer");
    c.threads = j["threads"].get<unsigned>();
  }
  if (j.contains("outputs")) {
    const json& o = j["outputs"];
    if (!o.is_object()) parse_error("outputs must be an object");
    check_keys(o, {"csv", "json", "trace_dir"}, "outputs");
    auto path = [&](const char* key, std::optional<std::string>& dst) {
      if (!o.contains(key)) return;
      if (!o[key].is_string()) parse_error(std::string("outputs.") + key + " must be a string");
      dst = o[key].get<std::string>();
    };
    path("csv", c.csv_out);
    path("json", c.json_out);
    path("trace_dir", c.trace_dir);
  }
  return c;
}

std::string solution_to_json(const NrdfSolution& sol) {
  json j;
  j["distortion_target"] = sol.distortion_target;
  j["rate_bits"] = sol.rate_bits;
  j["pi"] = matrix_to(sol.pi);
  j["lambda"] = matrix_to(sol.lambda);
  j["kkt_residual"] = sol.kkt_residual;
  j["form_used"] = form_name(sol.form_used);
  return j.dump(2);
}

std::string scheme_to_json(const RealizationScheme& s) {
  json j;
  j["E"] = matrix_to(s.e);
  j["E_inv"] = matrix_to(s.e_inv);
  j["pi_tilde"] = vector_to(s.pi_tilde);
  j["lambda_tilde"] = vector_to(s.lambda_tilde);
  j["H_tilde"] = vector_to(s.h_tilde);
  j["theta"] = vector_to(s.theta);
  j["phi"] = vector_to(s.phi);
  j["H"] = matrix_to(s.h);
  j["sigma_v"] = matrix_to(s.sigma_v);
  j["active"] = s.active;
  j["r"] = s.r;
  return j.dump(2);
}

std::string coding_result_to_json(const CodingResult& r) {
  json j;
  j["quantizer"] = quantizer_name(r.kind);
  j["r"] = r.r;
  j["empirical_rate_bits_per_vector"] = r.empirical_rate_bits;
  j["empirical_entropy_bits"] = r.empirical_entropy_bits;
  j["empirical_mse"] = r.empirical_mse;
  j["rate_std_error"] = r.rate_std_error;
  j["n_steps"] = r.n_steps;
  j["alphabet_size_observed"] = r.alphabet_size;
  return j.dump(2);
}

std::string report_to_json(const ExperimentReport& report) {
  json j;
  j["name"] = report.name;
  j["wall_seconds"] = report.wall_seconds;
  j["n_steps"] = report.n_steps;
  j["per_dim"] = report.per_dim;
  j["process_dim"] = report.process_dim;
  j["quantizer"] =
      report.quantizer ? json(std::string(quantizer_name(*report.quantizer))) : json("none");
  j["seeds"] = {{"source", report.seeds.source},
                {"dither", report.seeds.dither},
                {"channel", report.seeds.channel}};
  j["d_grid"] = report.d_grid;
  json rows = json::array();
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const ExperimentRow& r = report.rows[i];
    json row;
    row["D_target"] = r.d_target;
    row["rate_lower_bits"] = number_or_null(r.rate_lower_bits);
    row["rate_upper_bits"] = number_or_null(r.rate_upper_bits);
    row["rate_op_bits"] = number_or_null(r.rate_op_bits);
    row["D_empirical"] = number_or_null(r.d_empirical);
    row["r_active"] = r.r_active;
    row["status"] = r.status;
    if (i < report.messages.size() && !report.messages[i].empty()) {
      row["message"] = report.messages[i];
    }
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  j["any_failed"] = report.any_failed();
  return j.dump(2);
}

}  // namespace zdrd
