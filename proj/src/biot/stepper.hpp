// Copyright 2026 The biot-semiexplicit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "biot/assembly.hpp"
#include "biot/forcing.hpp"
#include "biot/linsolve.hpp"
#include "biot/mesh.hpp"

namespace biot {

enum class Scheme { SemiExplicit, ImplicitPicard, DelayImplicit };

std::string scheme_name(Scheme scheme);

/// Pressure history on [-tau, 0] as interior nodal vectors. Only its values
/// at -tau and 0 enter the discrete delay scheme, and both must equal p0.
using HistoryFunction = std::function<Vector(double)>;

struct StepperConfig {
  Scheme scheme = Scheme::SemiExplicit;
  double tau = 0.1;
  double final_time = 1.0;
  int picard_max = 10;
  double picard_tol = 1e-9;
  /// DelayImplicit only; empty means the constant history p0.
  HistoryFunction history;
  double solver_tol = kDefaultSolverTolerance;

  /// Number of steps T / tau. Throws std::invalid_argument unless tau > 0,
  /// T / tau is a positive integer (to 1e-9 relative) and picard settings
  /// are valid.
  int steps() const;
  void validate() const;
};

struct State {
  Vector u;
  Vector p;
  double t = 0.0;
};

struct StepReport {
  int picard_iterations = 0;
  double final_picard_residual = 0.0;
  double wall_time = 0.0;
  int factorization_count = 0;
};

struct RunReport {
  int steps = 0;
  /// Stepping loop only; assembly and factorization of the
  /// time-independent operators is excluded.
  double wall_time = 0.0;
  double picard_mean = 0.0;
  int picard_max = 0;
  int factorizations = 0;
  double max_picard_residual = 0.0;
  bool picard_converged = true;
};

struct Trajectory {
  std::vector<State> states;
  std::vector<StepReport> steps;
  RunReport report;

  const State& final_state() const { return states.back(); }
};

/// Time-independent operators of one (mesh, coefficients) pair plus the
/// solver workspace reused across steps. The displacement operator is
/// factorized once on first use. Not safe for concurrent use; create one
/// per run.
class Discretization {
 public:
  Discretization(Mesh mesh, Coefficients coeffs);

  const Mesh& mesh() const { return mesh_; }
  const Coefficients& coeffs() const { return coeffs_; }
  const CsrMatrix& elasticity() const { return A_; }
  const CsrMatrix& pressure_mass() const { return C_; }
  const CsrMatrix& coupling() const { return D_; }

  std::size_t displacement_size() const { return A_.rows(); }
  std::size_t pressure_size() const { return C_.rows(); }

  CsrMatrix permeability_stiffness(std::span<const double> u) const;
  const SpdSolver& displacement_solver();

  Vector load_v(const VectorField& f, double t) const;
  Vector load_q(const ScalarField& g, double t) const;
  /// Interior nodal values of a field.
  Vector interpolate(const InitialField& field) const;
  Vector interpolate(const ScalarField& field, double t) const;
  Vector interpolate(const VectorField& field, double t) const;

  // Per-run workspace.
  SpdSolver& pressure_solver() { return pressure_solver_; }
  BlockSolver& block_solver() { return block_solver_; }
  /// B(u) for the most recent displacement it was requested for.
  const CsrMatrix& cached_permeability(std::span<const double> u);

 private:
  Mesh mesh_;
  Coefficients coeffs_;
  CsrMatrix A_, C_, D_;
  PermeabilityAssembler permeability_;
  SpdSolver displacement_solver_;
  SpdSolver pressure_solver_;
  BlockSolver block_solver_;
  Vector cached_u_;
  CsrMatrix cached_B_;
  bool cache_valid_ = false;
};

/// u0 solving a(u0, v) = (f0, v) + d(v, p0).
Vector initial_displacement(Discretization& disc, std::span<const double> p0,
                            std::span<const double> f0_load,
                            double tol = kDefaultSolverTolerance);

/// One decoupled step: A u^n = F^n + D^T p^{n-1}, then
/// (C + tau B(u^n)) p^n = tau G^n + C p^{n-1} - D (u^n - u^{n-1}).
std::pair<State, StepReport> semi_explicit_step(Discretization& disc, const State& previous,
                                                std::span<const double> f_load,
                                                std::span<const double> g_load,
                                                const StepperConfig& cfg);

/// Residual of the implicit Euler system at (u, p), measured blockwise as
/// in block_relative_residual with B evaluated at u.
double implicit_residual(Discretization& disc, const State& previous, const State& candidate,
                         std::span<const double> f_load, std::span<const double> g_load,
                         double tau);

/// Implicit Euler step with Picard linearization of the permeability:
/// starting from (u^{n-1}, p^{n-1}), iterate the coupled linear solve with
/// B frozen at the previous iterate until the implicit residual drops to
/// picard_tol or picard_max iterates were taken. Hitting the cap is not an
/// error.
std::pair<State, StepReport> implicit_picard_step(Discretization& disc, const State& previous,
                                                  std::span<const double> f_load,
                                                  std::span<const double> g_load,
                                                  const StepperConfig& cfg);

/// Implicit Euler for the delay system whose pressure argument in the
/// elasticity equation is shifted by tau. Runs on its own operator assembly
/// and solve path and keeps an explicit pressure history buffer.
Trajectory delay_implicit_run(const Mesh& mesh, const StepperConfig& cfg,
                              const ProblemData& problem);

/// Full time loop n = 1..N with f^n = f(t_n), g^n = g(t_n), starting from
/// (initial_displacement, p0, 0). DelayImplicit dispatches to
/// delay_implicit_run. The problem's coefficients must match disc.
Trajectory run(Discretization& disc, const StepperConfig& cfg, const ProblemData& problem);
Trajectory run(const Mesh& mesh, const StepperConfig& cfg, const ProblemData& problem);

/// Heuristic step-size bound c_a c_b / (2 L_b^2 p_bound^2) with c_a = mu,
/// c_b = kappa_- / nu, L_b = Lip(kappa) / nu. Returns nullopt when the
/// permeability does not depend on the dilatation (no restriction).
std::optional<double> tau_bound_diagnostic(const Coefficients& coeffs, double p_bound);

}  // namespace biot
