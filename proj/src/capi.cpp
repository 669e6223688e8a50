// Copyright 2026 The biot-semiexplicit Authors
// SPDX-License-Identifier: Apache-2.0

#include "biot/biot.h"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "biot/experiment.hpp"

struct biot_experiment {
  biot::ExperimentConfig config;
};

struct biot_results {
  biot::CommandOutput output;
  std::string csv;
  // Cell text cache, row-major.
  std::vector<std::vector<std::string>> cells;
};

struct biot_simulation {
  biot::ProblemData problem;
  biot::Mesh mesh;
  std::optional<biot::Trajectory> trajectory;
};

namespace {

thread_local std::string last_error;

biot_status fail(biot_status status, const std::string& message) {
  last_error = message;
  return status;
}

// Maps exceptions thrown by the core onto status codes.
template <class Fn>
biot_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    return fn();
  } catch (const biot::ConfigError& e) {
    return fail(BIOT_CONFIG_ERROR, e.what());
  } catch (const biot::SolverFailure& e) {
    return fail(BIOT_SOLVER_ERROR, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(BIOT_INVALID_ARGUMENT, e.what());
  } catch (const std::bad_alloc&) {
    return fail(BIOT_INTERNAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(BIOT_INTERNAL_ERROR, e.what());
  } catch (...) {
    return fail(BIOT_INTERNAL_ERROR, "unknown error");
  }
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cell);
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  out.push_back(cell);
  return out;
}

long column_index(const char* column) {
  if (!column) return -1;
  const auto& names = biot::ResultsTable::columns();
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == column) return static_cast<long>(i);
  }
  return -1;
}

}  // namespace

extern "C" {

const char* biot_version(void) { return "1.0.0"; }

const char* biot_last_error(void) { return last_error.c_str(); }

const char* biot_status_name(biot_status status) {
  switch (status) {
    case BIOT_OK:
      return "ok";
    case BIOT_INVALID_ARGUMENT:
      return "invalid argument";
    case BIOT_CONFIG_ERROR:
      return "config error";
    case BIOT_SOLVER_ERROR:
      return "solver error";
    case BIOT_IO_ERROR:
      return "io error";
    case BIOT_INTERNAL_ERROR:
      return "internal error";
    case BIOT_NOT_AVAILABLE:
      return "not available";
  }
  return "unknown";
}

biot_status biot_experiment_parse(const char* json, biot_experiment** out) {
  if (!json || !out) return fail(BIOT_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<biot_experiment>();
    handle->config = biot::parse_config(json);
    *out = handle.release();
    return BIOT_OK;
  });
}

biot_status biot_experiment_load(const char* path, biot_experiment** out) {
  if (!path || !out) return fail(BIOT_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  std::ifstream probe(path);
  if (!probe) return fail(BIOT_IO_ERROR, std::string("cannot read config file ") + path);
  return guarded([&] {
    auto handle = std::make_unique<biot_experiment>();
    handle->config = biot::load_config(path);
    *out = handle.release();
    return BIOT_OK;
  });
}

void biot_experiment_free(biot_experiment* experiment) { delete experiment; }

biot_status biot_experiment_set_output_dir(biot_experiment* experiment, const char* dir) {
  if (!experiment || !dir) return fail(BIOT_INVALID_ARGUMENT, "null argument");
  experiment->config.output_dir = dir;
  return BIOT_OK;
}

biot_status biot_experiment_set_workers(biot_experiment* experiment, int workers) {
  if (!experiment) return fail(BIOT_INVALID_ARGUMENT, "null argument");
  if (workers < 1 || workers > 256) return fail(BIOT_INVALID_ARGUMENT, "workers must lie in [1, 256]");
  experiment->config.workers = workers;
  return BIOT_OK;
}

biot_status biot_experiment_output_dir(const biot_experiment* experiment, const char** dir) {
  if (!experiment || !dir) return fail(BIOT_INVALID_ARGUMENT, "null argument");
  *dir = experiment->config.output_dir.c_str();
  return BIOT_OK;
}

biot_status biot_experiment_execute(const biot_experiment* experiment, const char* command,
                                    biot_results** out) {
  if (!experiment || !command || !out) return fail(BIOT_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    auto handle = std::make_unique<biot_results>();
    handle->output = biot::execute(command, experiment->config);
    handle->csv = handle->output.table.to_csv();
    std::size_t start = handle->csv.find('\n') + 1;
    while (start < handle->csv.size()) {
      const std::size_t end = handle->csv.find('\n', start);
      handle->cells.push_back(split_csv_line(handle->csv.substr(start, end - start)));
      start = end + 1;
    }
    *out = handle.release();
    return BIOT_OK;
  });
}

void biot_results_free(biot_results* results) { delete results; }

size_t biot_results_row_count(const biot_results* results) {
  return results ? results->cells.size() : 0;
}

size_t biot_results_column_count(void) { return biot::ResultsTable::columns().size(); }

const char* biot_results_column_name(size_t column) {
  const auto& names = biot::ResultsTable::columns();
  return column < names.size() ? names[column].c_str() : nullptr;
}

biot_status biot_results_text(const biot_results* results, size_t row, const char* column,
                              const char** text) {
  if (!results || !text) return fail(BIOT_INVALID_ARGUMENT, "null argument");
  const long c = column_index(column);
  if (c < 0) return fail(BIOT_INVALID_ARGUMENT, std::string("unknown column ") + (column ? column : "(null)"));
  if (row >= results->cells.size()) return fail(BIOT_INVALID_ARGUMENT, "row out of range");
  *text = results->cells[row][static_cast<std::size_t>(c)].c_str();
  return BIOT_OK;
}

biot_status biot_results_value(const biot_results* results, size_t row, const char* column,
                               double* value) {
  if (!value) return fail(BIOT_INVALID_ARGUMENT, "null argument");
  const char* text = nullptr;
  const biot_status status = biot_results_text(results, row, column, &text);
  if (status != BIOT_OK) return status;
  if (std::strcmp(column, "scheme") == 0 || text[0] == '\0') {
    return fail(BIOT_NOT_AVAILABLE, std::string("no numeric value in column ") + column);
  }
  try {
    *value = std::stod(text);
  } catch (const std::exception&) {
    return fail(BIOT_INTERNAL_ERROR, std::string("cannot parse cell '") + text + "'");
  }
  return BIOT_OK;
}

biot_status biot_results_csv(const biot_results* results, const char** csv) {
  if (!results || !csv) return fail(BIOT_INVALID_ARGUMENT, "null argument");
  *csv = results->csv.c_str();
  return BIOT_OK;
}

size_t biot_results_summary_count(const biot_results* results) {
  return results ? results->output.table.summary.size() : 0;
}

const char* biot_results_summary_line(const biot_results* results, size_t index) {
  if (!results || index >= results->output.table.summary.size()) return nullptr;
  return results->output.table.summary[index].c_str();
}

size_t biot_results_failure_count(const biot_results* results) {
  return results ? static_cast<size_t>(results->output.table.failure_count()) : 0;
}

biot_status biot_results_write(const biot_results* results, const char* dir) {
  if (!results || !dir) return fail(BIOT_INVALID_ARGUMENT, "null argument");
  try {
    results->output.write(dir);
  } catch (const std::exception& e) {
    return fail(BIOT_IO_ERROR, e.what());
  }
  return BIOT_OK;
}

biot_status biot_simulation_create(const char* experiment, double alpha, int n,
                                   biot_simulation** out) {
  if (!experiment || !out) return fail(BIOT_INVALID_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    biot::ExperimentSpec spec;
    spec.name = experiment;
    spec.alpha = alpha;
    biot::ProblemData problem = spec.problem();
    auto handle = std::unique_ptr<biot_simulation>(
        new biot_simulation{std::move(problem), biot::Mesh::structured(n), std::nullopt});
    *out = handle.release();
    return BIOT_OK;
  });
}

void biot_simulation_free(biot_simulation* simulation) { delete simulation; }

biot_status biot_simulation_run(biot_simulation* simulation, biot_scheme scheme, double tau,
                                double final_time, int picard_max, double picard_tol) {
  if (!simulation) return fail(BIOT_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    biot::StepperConfig cfg;
    switch (scheme) {
      case BIOT_SCHEME_SEMI_EXPLICIT:
        cfg.scheme = biot::Scheme::SemiExplicit;
        break;
      case BIOT_SCHEME_IMPLICIT_PICARD:
        cfg.scheme = biot::Scheme::ImplicitPicard;
        break;
      case BIOT_SCHEME_DELAY_IMPLICIT:
        cfg.scheme = biot::Scheme::DelayImplicit;
        break;
      default:
        return fail(BIOT_INVALID_ARGUMENT, "unknown scheme");
    }
    cfg.tau = tau;
    cfg.final_time = final_time;
    cfg.picard_max = picard_max;
    cfg.picard_tol = picard_tol;
    simulation->trajectory.reset();
    simulation->trajectory = biot::run(simulation->mesh, cfg, simulation->problem);
    return BIOT_OK;
  });
}

biot_status biot_simulation_sizes(const biot_simulation* simulation, size_t* displacement_size,
                                  size_t* pressure_size, size_t* state_count) {
  if (!simulation) return fail(BIOT_INVALID_ARGUMENT, "null argument");
  const auto interior = static_cast<size_t>(simulation->mesh.interior_count());
  if (displacement_size) *displacement_size = 2 * interior;
  if (pressure_size) *pressure_size = interior;
  if (state_count) {
    *state_count = simulation->trajectory ? simulation->trajectory->states.size() : 0;
  }
  return BIOT_OK;
}

biot_status biot_simulation_state(const biot_simulation* simulation, size_t index, double* u,
                                  double* p, double* t) {
  if (!simulation) return fail(BIOT_INVALID_ARGUMENT, "null argument");
  if (!simulation->trajectory) return fail(BIOT_NOT_AVAILABLE, "simulation has not been run");
  const auto& states = simulation->trajectory->states;
  if (index >= states.size()) return fail(BIOT_INVALID_ARGUMENT, "state index out of range");
  const biot::State& s = states[index];
  if (u) std::copy(s.u.begin(), s.u.end(), u);
  if (p) std::copy(s.p.begin(), s.p.end(), p);
  if (t) *t = s.t;
  return BIOT_OK;
}

biot_status biot_simulation_wall_time(const biot_simulation* simulation, double* seconds) {
  if (!simulation || !seconds) return fail(BIOT_INVALID_ARGUMENT, "null argument");
  if (!simulation->trajectory) return fail(BIOT_NOT_AVAILABLE, "simulation has not been run");
  *seconds = simulation->trajectory->report.wall_time;
  return BIOT_OK;
}

biot_status biot_simulation_write_snapshot(const biot_simulation* simulation, size_t index,
                                           const char* path) {
  if (!simulation || !path) return fail(BIOT_INVALID_ARGUMENT, "null argument");
  if (!simulation->trajectory) return fail(BIOT_NOT_AVAILABLE, "simulation has not been run");
  const auto& states = simulation->trajectory->states;
  if (index >= states.size()) return fail(BIOT_INVALID_ARGUMENT, "state index out of range");
  std::ofstream out(path);
  out << biot::format_snapshot(simulation->mesh, states[index]);
  if (!out) return fail(BIOT_IO_ERROR, std::string("cannot write ") + path);
  return BIOT_OK;
}

biot_status biot_coupling_diagnostic(double alpha, double M, double mu, double* ratio,
                                     int* satisfied) {
  if (!ratio || !satisfied) return fail(BIOT_INVALID_ARGUMENT, "null argument");
  return guarded([&] {
    biot::Coefficients c;
    c.alpha = alpha;
    c.M = M;
    c.mu = mu;
    const biot::CouplingDiagnostic d = biot::coupling_diagnostic(c);
    *ratio = d.ratio;
    *satisfied = d.satisfied ? 1 : 0;
    return BIOT_OK;
  });
}

}  // extern "C"
