// Copyright 2026 The biot-semiexplicit Authors
// SPDX-License-Identifier: Apache-2.0

// Experiment driver. Exit codes: 0 success, 2 config error, 3 solver failure
// in a non-sweep run, 1 anything else.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "biot/biot.h"

namespace {

int exit_code(biot_status status) {
  switch (status) {
    case BIOT_OK:
      return 0;
    case BIOT_CONFIG_ERROR:
    case BIOT_INVALID_ARGUMENT:
      return 2;
    case BIOT_SOLVER_ERROR:
      return 3;
    default:
      return 1;
  }
}

int execute(const std::string& command, const std::string& config_path, const std::string& out,
            int workers) {
  biot_experiment* experiment = nullptr;
  biot_status status = biot_experiment_load(config_path.c_str(), &experiment);
  if (status != BIOT_OK) {
    std::fprintf(stderr, "error: %s\n", biot_last_error());
    return status == BIOT_IO_ERROR ? 2 : exit_code(status);
  }
  if (!out.empty()) biot_experiment_set_output_dir(experiment, out.c_str());
  if (workers > 0 && biot_experiment_set_workers(experiment, workers) != BIOT_OK) {
    std::fprintf(stderr, "error: %s\n", biot_last_error());
    biot_experiment_free(experiment);
    return 2;
  }

  biot_results* results = nullptr;
  status = biot_experiment_execute(experiment, command.c_str(), &results);
  if (status != BIOT_OK) {
    std::fprintf(stderr, "error: %s\n", biot_last_error());
    biot_experiment_free(experiment);
    return exit_code(status);
  }

  const char* dir = nullptr;
  biot_experiment_output_dir(experiment, &dir);
  int code = 0;
  if (biot_results_write(results, dir) != BIOT_OK) {
    std::fprintf(stderr, "error: %s\n", biot_last_error());
    code = 1;
  }
  const char* csv = nullptr;
  biot_results_csv(results, &csv);
  std::fputs(csv, stdout);
  for (size_t i = 0; i < biot_results_summary_count(results); ++i) {
    std::printf("%s\n", biot_results_summary_line(results, i));
  }
  const size_t failures = biot_results_failure_count(results);
  if (failures > 0) {
    std::fprintf(stderr, "%zu run(s) failed, see %s/failures.txt\n", failures, dir);
    if (command != "sweep-alpha" && code == 0) code = 3;
  }
  biot_results_free(results);
  biot_experiment_free(experiment);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semi-explicit vs implicit Euler benchmarks for nonlinear Biot poroelasticity"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(biot_version()));

  std::string config_path, out;
  int workers = 0;
  const std::pair<const char*, const char*> commands[] = {
      {"run", "Single trajectory with errors and optional snapshots"},
      {"convergence", "Errors and observed orders over mesh and step levels"},
      {"sweep-alpha", "Semi-explicit vs implicit deviation over coupling strengths"},
      {"compare", "Wall-time comparison of (scheme, tau) runs"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON experiment config")->required();
    sub->add_option("--out", out, "Output directory (overrides output_dir)");
    sub->add_option("--workers", workers, "Parallel runs (overrides workers)")
        ->check(CLI::Range(1, 256));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  return execute(app.get_subcommands().front()->get_name(), config_path, out, workers);
}
