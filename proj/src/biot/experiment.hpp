// Copyright 2026 The biot-semiexplicit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "biot/analysis.hpp"
#include "biot/forcing.hpp"
#include "biot/stepper.hpp"

namespace biot {

/// Invalid configuration. what() starts with the JSON path of the offending
/// field, e.g. "$.schemes[1].picard_max: must be >= 1".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

struct SchemeSpec {
  Scheme scheme = Scheme::SemiExplicit;
  int picard_max = 10;
  double picard_tol = 1e-9;

  /// "semi-explicit", "implicit-picard(max=10)", "delay-implicit".
  std::string label() const;
  StepperConfig stepper(double tau, double final_time) const;
};

struct ExperimentSpec {
  std::string name = "ex42";  // ex41 | ex42 | ex43 | zero
  double alpha = 1.0;         // ex43 only
  std::optional<double> lambda, mu, biot_alpha, M, kappa_over_nu;
  std::optional<permeability::Model> permeability;

  /// Problem data with overrides applied; ex43 uses `alpha_override` when set.
  ProblemData problem(std::optional<double> alpha_override = std::nullopt) const;
};

struct ReferenceSpec {
  int n_ref = 64;
  double tau_ref = 1.0 / 128;
  SchemeSpec scheme{Scheme::ImplicitPicard, 10, 1e-9};
};

struct CompareRun {
  SchemeSpec scheme;
  double tau = 0.0;
};

struct ExperimentConfig {
  ExperimentSpec experiment;
  std::vector<SchemeSpec> schemes;
  std::vector<int> mesh_levels;
  std::vector<double> tau_levels;
  /// Pair mesh and tau levels (tau = h when tau_levels is empty).
  bool coupled = false;
  std::optional<double> final_time;
  std::optional<ReferenceSpec> reference;
  std::vector<NormKind> norms;
  std::vector<double> alphas;
  std::vector<CompareRun> runs;
  int repeats = 1;
  bool snapshots = false;
  std::string output_dir = "results";
  long long seed = 0;
  int workers = 1;

  double horizon(const ProblemData& problem) const {
    return final_time ? *final_time : problem.final_time;
  }
};

/// Strict parse: unknown keys, wrong types and out-of-range values raise
/// ConfigError with the field path.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

struct ResultRow {
  std::string scheme;
  double h = 0.0;
  double tau = 0.0;
  std::optional<double> alpha;
  std::optional<double> err_u_a, err_u_HV, err_p_c, err_p_Q, err_p_HQ, err_triple;
  std::optional<double> order_u_a, order_p_c;
  std::optional<double> picard_mean;
  std::optional<int> picard_max;
  double wall_time = 0.0;
  std::optional<bool> blowup;
  /// Solver failure message; empty on success. Not part of the CSV schema.
  std::string failure;
};

struct ResultsTable {
  std::vector<ResultRow> rows;
  std::vector<std::string> summary;

  static const std::vector<std::string>& columns();
  /// Header plus one line per row. Missing values are empty fields.
  std::string to_csv(bool include_timing = true) const;
  int failure_count() const;
};

struct Snapshot {
  std::string name;
  Mesh mesh;
  State state;
};

struct CommandOutput {
  ResultsTable table;
  /// Extra CSV files keyed by file name, shaped for log-log plotting.
  std::vector<std::pair<std::string, std::string>> plots;
  std::vector<Snapshot> snapshots;

  /// results.csv, plot files, summary.txt, failures.txt and snapshots.
  void write(const std::filesystem::path& dir) const;
};

/// Full-mesh node table "x y u1 u2 p", boundary nodes included as zeros.
std::string format_snapshot(const Mesh& mesh, const State& state);

CommandOutput cmd_run(const ExperimentConfig& config);
CommandOutput cmd_convergence(const ExperimentConfig& config);
CommandOutput cmd_sweep_alpha(const ExperimentConfig& config);
CommandOutput cmd_compare(const ExperimentConfig& config);

/// Dispatch by subcommand name: run, convergence, sweep-alpha, compare.
CommandOutput execute(const std::string& command, const ExperimentConfig& config);

}  // namespace biot
