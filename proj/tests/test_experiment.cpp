// Copyright 2026 The biot-semiexplicit Authors
// SPDX-License-Identifier: Apache-2.0

#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "biot/experiment.hpp"

namespace biot {
namespace {

std::string config_error_path(const std::string& json) {
  try {
    parse_config(json);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<no error>";
}

TEST(Config, ParsesFullDocument) {
  const ExperimentConfig c = parse_config(R"({
    "experiment": {"name": "ex43", "alpha": 1.5,
                   "overrides": {"mu": 2.0},
                   "permeability": {"kind": "constant", "kappa": 0.3}},
    "schemes": ["semi-explicit", {"scheme": "implicit-picard", "picard_max": 4, "picard_tol": 1e-8}],
    "mesh_levels": [4, 8], "tau_levels": [0.5, 0.25],
    "final_time": 1.0, "norms": ["a", "c_norm", "triple"],
    "alphas": [0, 0.5], "repeats": 2, "snapshots": true,
    "output_dir": "out", "seed": 7, "workers": 3,
    "reference": {"n_ref": 16, "tau_ref": 0.125, "scheme": "semi-explicit"},
    "runs": [{"scheme": "delay-implicit", "tau": 0.5}]
  })");
  EXPECT_EQ(c.experiment.name, "ex43");
  EXPECT_EQ(c.experiment.alpha, 1.5);
  EXPECT_EQ(*c.experiment.mu, 2.0);
  ASSERT_EQ(c.schemes.size(), 2u);
  EXPECT_EQ(c.schemes[1].picard_max, 4);
  EXPECT_EQ(c.schemes[1].label(), "implicit-picard(max=4)");
  EXPECT_EQ(c.schemes[0].label(), "semi-explicit");
  EXPECT_EQ(c.mesh_levels, (std::vector<int>{4, 8}));
  EXPECT_EQ(c.norms.size(), 3u);
  EXPECT_EQ(c.reference->n_ref, 16);
  EXPECT_EQ(c.reference->scheme.scheme, Scheme::SemiExplicit);
  EXPECT_EQ(c.runs[0].scheme.scheme, Scheme::DelayImplicit);
  EXPECT_EQ(c.workers, 3);
  const ProblemData d = c.experiment.problem();
  EXPECT_EQ(d.coeffs.mu, 2.0);
  EXPECT_EQ(d.coeffs.alpha, 1.5);
  EXPECT_EQ(permeability::eval(d.coeffs.permeability, 0.4), 0.3);
  EXPECT_EQ(c.experiment.problem(0.25).coeffs.alpha, 0.25);
}

TEST(Config, ErrorsCarryFieldPaths) {
  EXPECT_EQ(config_error_path("{"), "$");
  EXPECT_EQ(config_error_path("[]"), "$");
  EXPECT_EQ(config_error_path("{}"), "$.experiment");
  EXPECT_EQ(config_error_path(R"({"experiment": "ex42", "bogus": 1})"), "$.bogus");
  EXPECT_EQ(config_error_path(R"({"experiment": "ex99"})"), "$.experiment");
  EXPECT_EQ(config_error_path(R"({"experiment": {"name": "ex43", "alpha": -1}})"),
            "$.experiment.alpha");
  EXPECT_EQ(config_error_path(R"({"experiment": {"name": "ex42", "overrides": {"mu": 0}}})"),
            "$.experiment.overrides.mu");
  EXPECT_EQ(config_error_path(R"({"experiment": {"name": "ex42", "overrides": {"nu": 1}}})"),
            "$.experiment.overrides.nu");
  EXPECT_EQ(config_error_path(R"({"experiment": "ex42", "schemes": ["rk4"]})"), "$.schemes[0]");
  EXPECT_EQ(config_error_path(
                R"({"experiment": "ex42", "schemes": ["semi-explicit", {"scheme": "implicit-picard", "picard_max": 0}]})"),
            "$.schemes[1].picard_max");
  EXPECT_EQ(config_error_path(R"({"experiment": "ex42", "mesh_levels": [4, 2.5]})"),
            "$.mesh_levels[1]");
  EXPECT_EQ(config_error_path(R"({"experiment": "ex42", "tau_levels": [0.3]})"),
            "$.tau_levels[0]");
  EXPECT_EQ(config_error_path(R"({"experiment": "ex42", "tau_levels": ["x"]})"),
            "$.tau_levels[0]");
  EXPECT_EQ(config_error_path(R"({"experiment": "ex42", "norms": ["L9"]})"), "$.norms[0]");
  EXPECT_EQ(config_error_path(R"({"experiment": "ex42", "workers": 0})"), "$.workers");
  EXPECT_EQ(config_error_path(R"({"experiment": "ex42", "coupled": 1})"), "$.coupled");
  EXPECT_EQ(config_error_path(
                R"({"experiment": "ex41", "mesh_levels": [3], "reference": {"n_ref": 8}})"),
            "$.mesh_levels[0]");
  EXPECT_EQ(config_error_path(R"({"experiment": "ex42", "runs": [{"scheme": "semi-explicit"}]})"),
            "$.runs[0].tau");
  EXPECT_EQ(config_error_path(
                R"({"experiment": {"name": "ex42", "permeability": {"kind": "magic"}}})"),
            "$.experiment.permeability.kind");
}

TEST(Config, ErrorMessageStartsWithPath) {
  try {
    parse_config(R"({"experiment": "ex42", "repeats": 0})");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("$.repeats: ", 0), 0u);
  }
}

TEST(Config, CommandRequirements) {
  const ExperimentConfig two = parse_config(
      R"({"experiment": "ex42", "schemes": ["semi-explicit", "implicit-picard"],
          "mesh_levels": [2], "tau_levels": [0.5]})");
  EXPECT_THROW(cmd_run(two), ConfigError);
  EXPECT_THROW(execute("bogus", two), std::invalid_argument);
  const ExperimentConfig noref = parse_config(
      R"({"experiment": "ex41", "schemes": ["semi-explicit"],
          "mesh_levels": [2, 4], "tau_levels": [0.5]})");
  EXPECT_THROW(cmd_convergence(noref), ConfigError);
  const ExperimentConfig sweep = parse_config(
      R"({"experiment": "ex43", "schemes": ["semi-explicit"], "alphas": [1],
          "mesh_levels": [2], "tau_levels": [0.5]})");
  EXPECT_THROW(cmd_sweep_alpha(sweep), ConfigError);
}

TEST(Results, CsvSchema) {
  const auto& cols = ResultsTable::columns();
  const std::vector<std::string> expected = {
      "scheme", "h", "tau", "alpha", "err_u_a", "err_u_HV", "err_p_c", "err_p_Q", "err_p_HQ",
      "err_triple", "order_u_a", "order_p_c", "picard_mean", "picard_max", "wall_time_s",
      "blowup_flag"};
  EXPECT_EQ(cols, expected);
  ResultsTable t;
  ResultRow r;
  r.scheme = "semi-explicit";
  r.h = 0.25;
  r.tau = 0.5;
  r.err_p_c = 0.125;
  t.rows.push_back(r);
  const std::string csv = t.to_csv();
  std::istringstream in(csv);
  std::string header, line;
  std::getline(in, header);
  std::getline(in, line);
  EXPECT_EQ(header.rfind("scheme,h,tau,alpha,", 0), 0u);
  EXPECT_EQ(line, "semi-explicit,0.25,0.5,,,,0.125,,,,,,,,0,");
}

TEST(Commands, ZeroExperimentHasZeroErrors) {
  const ExperimentConfig c = parse_config(
      R"({"experiment": "zero", "schemes": ["semi-explicit", "implicit-picard", "delay-implicit"],
          "mesh_levels": [2, 4], "tau_levels": [0.5], "norms": ["a", "c", "triple"],
          "workers": 2})");
  const CommandOutput out = cmd_convergence(c);
  ASSERT_EQ(out.table.rows.size(), 6u);
  for (const ResultRow& r : out.table.rows) {
    EXPECT_TRUE(r.failure.empty());
    EXPECT_EQ(*r.err_u_a, 0.0);
    EXPECT_EQ(*r.err_p_c, 0.0);
    EXPECT_EQ(*r.err_triple, 0.0);
  }
}

TEST(Commands, ConvergenceIsDeterministic) {
  const ExperimentConfig c = parse_config(
      R"({"experiment": "ex42", "schemes": ["semi-explicit", {"scheme": "implicit-picard", "picard_max": 3}],
          "mesh_levels": [4], "tau_levels": [0.5, 0.25, 0.125], "workers": 4})");
  ExperimentConfig serial = c;
  serial.workers = 1;
  const std::string a = cmd_convergence(c).table.to_csv(false);
  const std::string b = cmd_convergence(serial).table.to_csv(false);
  EXPECT_EQ(a, b);
  const CommandOutput out = cmd_convergence(c);
  ASSERT_EQ(out.table.rows.size(), 6u);
  EXPECT_FALSE(out.table.rows[0].order_p_c.has_value());
  EXPECT_TRUE(out.table.rows[1].order_p_c.has_value());
  EXPECT_FALSE(out.plots.empty());
}

TEST(Commands, RunWritesFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "biot_test_run";
  std::filesystem::remove_all(dir);
  const ExperimentConfig c = parse_config(
      R"({"experiment": "ex42", "schemes": ["semi-explicit"], "mesh_levels": [4],
          "tau_levels": [0.25], "snapshots": true})");
  const CommandOutput out = cmd_run(c);
  out.write(dir);
  EXPECT_TRUE(std::filesystem::exists(dir / "results.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "snapshot_final.txt"));
  std::ifstream snap(dir / "snapshot_final.txt");
  std::string first;
  std::getline(snap, first);
  EXPECT_EQ(first.rfind("# t", 0), 0u);
  std::filesystem::remove_all(dir);
}

TEST(Commands, SweepFlagsBlowup) {
  const ExperimentConfig c = parse_config(
      R"({"experiment": "ex43", "schemes": ["semi-explicit", "implicit-picard"],
          "alphas": [0.0, 4.0], "mesh_levels": [8], "tau_levels": [0.125]})");
  const CommandOutput out = cmd_sweep_alpha(c);
  ASSERT_EQ(out.table.rows.size(), 2u);
  EXPECT_FALSE(*out.table.rows[0].blowup);
  EXPECT_TRUE(*out.table.rows[1].blowup);
}

TEST(Commands, CompareReportsSpeedup) {
  const ExperimentConfig c = parse_config(
      R"({"experiment": "ex42", "mesh_levels": [4],
          "runs": [{"scheme": "semi-explicit", "tau": 0.25},
                   {"scheme": {"scheme": "implicit-picard", "picard_max": 2}, "tau": 0.25}]})");
  const CommandOutput out = cmd_compare(c);
  ASSERT_EQ(out.table.rows.size(), 2u);
  bool found = false;
  for (const std::string& s : out.table.summary) found |= s.rfind("speed-up", 0) == 0;
  EXPECT_TRUE(found);
}

}  // namespace
}  // namespace biot
