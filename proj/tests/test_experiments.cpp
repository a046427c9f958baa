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

#include <cmath>
#include <functional>

#include "doctest.h"
#include "test_util.hpp"
#include "zdrd/errors.hpp"
#include "zdrd/experiments.hpp"
#include "zdrd/json_io.hpp"

using namespace zdrd;

namespace {

ExperimentConfig small(const char* name, std::int64_t n = 2000) {
  ExperimentConfig c = preset_config(name);
  c.n_steps = n;
  return c;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST_CASE("preset list and matrices") {
  CHECK(list_presets() == std::vector<std::string>{"example1", "example2", "example3", "example4"});
  const ExperimentConfig ex3 = preset_config("example3");
  CHECK(ex3.source->a()(0, 0) == 0.8147);
  CHECK(ex3.source->a()(3, 3) == 0.1419);
  CHECK(ex3.source->a()(1, 2) == 0.9649);
  CHECK(ex3.quantizer == QuantizerKind::kLatticeD4);
  CHECK(preset_config("example1").source->a()(3, 0) == 0.0511);
  CHECK(code_of([] { preset_config("example9"); }) == ErrorCode::kConfigParse);
}

TEST_CASE("default grids") {
  const ExperimentConfig ex1 = preset_config("example1");
  const double dmax = d_max(*ex1.source);
  REQUIRE(ex1.d_grid.size() == 20);
  CHECK(ex1.d_grid.back() == dmax);
  CHECK(ex1.d_grid.front() > 0.02 * dmax);
  for (std::size_t i = 1; i < ex1.d_grid.size(); ++i) CHECK(ex1.d_grid[i] > ex1.d_grid[i - 1]);
  CHECK(preset_config("example4").d_grid.back() == 3.0);
}

TEST_CASE("reverse waterfilling starts near D = 3.95 on the first example") {
  ExperimentConfig c = preset_config("example1");
  c.quantizer.reset();
  c.d_grid.clear();
  for (int i = 0; i <= 8; ++i) c.d_grid.push_back(3.6 + 0.05 * i);
  const ExperimentReport rep = run_experiment(c);
  std::int64_t last_full = -1;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    if (rep.rows[i].r_active == 4) last_full = static_cast<std::int64_t>(i);
  }
  REQUIRE(last_full >= 0);
  REQUIRE(last_full + 1 < static_cast<std::int64_t>(rep.rows.size()));
  CHECK(rep.rows[static_cast<std::size_t>(last_full + 1)].r_active < 4);
  CHECK(c.d_grid[static_cast<std::size_t>(last_full)] <= 3.95 + 0.1);
  CHECK(c.d_grid[static_cast<std::size_t>(last_full + 1)] >= 3.95 - 0.1);
}

TEST_CASE("bounds-only report") {
  ExperimentConfig c = small("example4");
  c.quantizer.reset();
  const ExperimentReport rep = run_experiment(c);
  CHECK_FALSE(rep.any_failed());
  for (const ExperimentRow& row : rep.rows) {
    CHECK(std::isnan(row.rate_op_bits));
    CHECK(std::isnan(row.d_empirical));
    CHECK(row.rate_lower_bits >= 0.611 - 1e-4);
    CHECK(row.rate_upper_bits >= row.rate_lower_bits);
  }
}

TEST_CASE("lower bound column is monotone for every preset") {
  for (const std::string& name : list_presets()) {
    ExperimentConfig c = small(name.c_str());
    c.quantizer.reset();
    const ExperimentReport rep = run_experiment(c);
    REQUIRE_FALSE(rep.any_failed());
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
      CHECK(rep.rows[i].rate_lower_bits <= rep.rows[i - 1].rate_lower_bits + 1e-9);
    }
  }
}

TEST_CASE("CSV round trip") {
  ExperimentConfig c = small("example2");
  c.per_dim = true;
  const ExperimentReport rep = run_experiment(c);
  const std::string csv = report_csv(rep);
  CHECK(csv.substr(0, kCsvHeader.size()) == kCsvHeader);
  const std::vector<ExperimentRow> rows = parse_csv(csv);
  REQUIRE(rows.size() == rep.rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].d_target == rep.rows[i].d_target);
    CHECK(rows[i].rate_lower_bits == rep.rows[i].rate_lower_bits);
    CHECK(rows[i].rate_upper_bits == rep.rows[i].rate_upper_bits);
    CHECK(rows[i].rate_op_bits == rep.rows[i].rate_op_bits);
    CHECK(rows[i].d_empirical == rep.rows[i].d_empirical);
    CHECK(rows[i].r_active == rep.rows[i].r_active);
    CHECK(rows[i].status == rep.rows[i].status);
  }
  CHECK(code_of([] { parse_csv("nope\n"); }) == ErrorCode::kConfigParse);
  CHECK(code_of([] { parse_csv(std::string(kCsvHeader) + "\n1,2,3\n"); }) == ErrorCode::kConfigParse);
}

TEST_CASE("reports are deterministic") {
  const ExperimentConfig c = small("example3");
  const ExperimentReport a = run_experiment(c);
  ExperimentConfig single = c;
  single.threads = 1;
  const ExperimentReport b = run_experiment(single);
  CHECK(report_csv(a) == report_csv(b));
}

TEST_CASE("row failures are collected") {
  ExperimentConfig c = small("example2");
  c.quantizer = QuantizerKind::kLatticeD4;
  c.d_grid = {0.5, 1.0};
  const ExperimentReport rep = run_experiment(c);
  CHECK(rep.any_failed());
  CHECK(rep.rows[0].status == "failed:InvalidArgument");
  CHECK_FALSE(rep.messages[0].empty());
}

TEST_CASE("seed override") {
  ExperimentConfig c = preset_config("example1");
  apply_seed_override(c, nullptr);
  CHECK(c.seeds.source == 1);
  apply_seed_override(c, "40");
  CHECK(c.seeds.source == 40);
  CHECK(c.seeds.dither == 41);
  CHECK(c.seeds.channel == 42);
  CHECK(code_of([&] { apply_seed_override(c, "-3"); }) == ErrorCode::kConfigParse);
  CHECK(code_of([&] { apply_seed_override(c, "12x"); }) == ErrorCode::kConfigParse);
}

TEST_CASE("config JSON") {
  const ExperimentConfig p = config_from_json(
      R"({"preset": "example3", "n_steps": 500, "d_grid": [0.5, 1.0],
          "seeds": {"source": 7}, "quantizer": {"kind": "sdusq"}, "per_dim": true,
          "outputs": {"csv": "out.csv"}})");
  CHECK(p.name == "example3");
  CHECK(p.n_steps == 500);
  CHECK(p.d_grid == std::vector<double>{0.5, 1.0});
  CHECK(p.seeds.source == 7);
  CHECK(p.seeds.dither == 2);
  CHECK(p.quantizer == QuantizerKind::kSdusq);
  CHECK(p.per_dim);
  CHECK(p.csv_out == "out.csv");

  const ExperimentConfig ar = config_from_json(
      R"({"source": {"ar_coefficients": [[[0.3]], [[0.5]]], "B": [[1]]}, "quantizer": null})");
  CHECK(ar.source->state_dim() == 2);
  CHECK(ar.process_dim == 1);
  CHECK_FALSE(ar.quantizer.has_value());

  const ExperimentConfig ss = config_from_json(R"({"source": {"A": [[0.5]], "B": [[1]]}})");
  CHECK(ss.quantizer == QuantizerKind::kSdusq);

  for (const char* bad : {R"({"preset": "example1", "bogus": 1})", R"({"preset": 3})",
                          R"({"source": {"A": [[0.5]]}})", R"({"preset": "example1", "d_grid": [1, 0.5]})",
                          R"({"preset": "example1", "quantizer": {"kind": "e8"}})", "[1, 2",
                          R"({"preset": "example1", "n_steps": 0})", R"({"n_steps": 5})"}) {
    CHECK(code_of([&] { config_from_json(bad); }) == ErrorCode::kConfigParse);
  }
  CHECK(code_of([] { config_from_json(R"({"source": {"A": [[0.5, 1]], "B": [[1]]}})"); }) ==
        ErrorCode::kDimensionMismatch);
}

TEST_CASE("report JSON uses null for missing values") {
  ExperimentConfig c = small("example1");
  c.quantizer.reset();
  c.d_grid = {1.0};
  const std::string json = report_to_json(run_experiment(c));
  CHECK(json.find("\"rate_op_bits\": null") != std::string::npos);
  CHECK(json.find("\"any_failed\": false") != std::string::npos);
}
