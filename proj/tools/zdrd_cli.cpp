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

// Command-line front end. Talks to the library only through the C API.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "zdrd/zdrd.h"

namespace {

constexpr int kExitRowFailed = 1;
constexpr int kExitError = 2;

struct ConfigDeleter {
  void operator()(zdrd_config* c) const { zdrd_config_free(c); }
};
struct ReportDeleter {
  void operator()(zdrd_report* r) const { zdrd_report_free(r); }
};
struct StringDeleter {
  void operator()(char* s) const { zdrd_string_free(s); }
};
using ConfigPtr = std::unique_ptr<zdrd_config, ConfigDeleter>;
using ReportPtr = std::unique_ptr<zdrd_report, ReportDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

class CliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void check(zdrd_status status) {
  if (status != ZDRD_OK) throw CliError(zdrd_last_error());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw CliError("cannot write " + path);
  out << text;
}

std::string optional_path(zdrd_status (*getter)(const zdrd_config*, char**),
                          const zdrd_config* cfg) {
  char* raw = nullptr;
  check(getter(cfg, &raw));
  const StringPtr holder(raw);
  return raw == nullptr ? std::string() : std::string(raw);
}

// Runs the experiment, writes outputs, reports failed rows on stderr.
int run_and_emit(zdrd_config* cfg, std::string csv_path, std::string json_path) {
  check(zdrd_config_apply_seed_env(cfg));
  if (csv_path.empty()) csv_path = optional_path(zdrd_config_csv_path, cfg);
  if (json_path.empty()) json_path = optional_path(zdrd_config_json_path, cfg);

  zdrd_report* raw = nullptr;
  check(zdrd_run_experiment(cfg, &raw));
  const ReportPtr report(raw);

  char* csv = nullptr;
  check(zdrd_report_csv(report.get(), &csv));
  const StringPtr csv_holder(csv);
  if (csv_path.empty()) {
    std::fputs(csv, stdout);
  } else {
    write_file(csv_path, csv);
  }
  if (!json_path.empty()) {
    char* json = nullptr;
    check(zdrd_report_json(report.get(), &json));
    const StringPtr json_holder(json);
    write_file(json_path, json);
  }

  const size_t rows = zdrd_report_row_count(report.get());
  for (size_t i = 0; i < rows; ++i) {
    zdrd_row row;
    check(zdrd_report_row(report.get(), i, &row));
    if (!row.failed) continue;
    char* msg = nullptr;
    check(zdrd_report_row_message(report.get(), i, &msg));
    const StringPtr msg_holder(msg);
    std::fprintf(stderr, "row %zu (D = %g) failed: %s\n", i, row.d_target, msg);
  }
  return zdrd_report_any_failed(report.get()) ? kExitRowFailed : 0;
}

zdrd_quantizer parse_quantizer(const std::string& name) {
  if (name == "sdusq") return ZDRD_QUANTIZER_SDUSQ;
  if (name == "d4") return ZDRD_QUANTIZER_D4;
  return ZDRD_QUANTIZER_NONE;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonanticipative rate-distortion experiments for Gauss-Markov sources"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string json_path;
  auto* solve = app.add_subcommand("solve", "Run an experiment described by a JSON config");
  solve->add_option("--config", config_path, "Experiment config file")->required();
  solve->add_option("--out", out_path, "CSV output file (default: config value or stdout)");
  solve->add_option("--json", json_path, "JSON report file");

  std::string preset_name;
  bool per_dim = false;
  std::string quantizer;
  std::int64_t n_steps = 0;
  unsigned threads = 0;
  auto* preset = app.add_subcommand("preset", "Run one of the built-in examples");
  preset->add_option("name", preset_name, "Preset name (see list-presets)")->required();
  preset->add_flag("--per-dim", per_dim, "Normalize rates per source dimension");
  preset->add_option("--quantizer", quantizer, "Quantizer (default: the preset's)")
      ->check(CLI::IsMember({"sdusq", "d4", "none"}));
  preset->add_option("--out", out_path, "CSV output file (default: stdout)");
  preset->add_option("--json", json_path, "JSON report file");
  preset->add_option("--n-steps", n_steps, "Simulated time steps per grid point")
      ->check(CLI::PositiveNumber);
  preset->add_option("--threads", threads, "Worker threads (0 = all cores)");

  app.add_subcommand("list-presets", "Print the built-in preset names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("list-presets")) {
      for (size_t i = 0; i < zdrd_preset_count(); ++i) std::puts(zdrd_preset_name(i));
      return 0;
    }
    if (app.got_subcommand(solve)) {
      const std::string text = read_file(config_path);
      zdrd_config* raw = nullptr;
      check(zdrd_config_from_json(text.c_str(), &raw));
      const ConfigPtr cfg(raw);
      return run_and_emit(cfg.get(), out_path, json_path);
    }
    zdrd_config* raw = nullptr;
    check(zdrd_config_from_preset(preset_name.c_str(), &raw));
    const ConfigPtr cfg(raw);
    check(zdrd_config_set_per_dim(cfg.get(), per_dim ? 1 : 0));
    if (!quantizer.empty()) check(zdrd_config_set_quantizer(cfg.get(), parse_quantizer(quantizer)));
    if (n_steps > 0) check(zdrd_config_set_n_steps(cfg.get(), n_steps));
    check(zdrd_config_set_threads(cfg.get(), threads));
    return run_and_emit(cfg.get(), out_path, json_path);
  } catch (const CliError& e) {
    std::fprintf(stderr, "zdrd: %s\n", e.what());
    return kExitError;
  }
}
