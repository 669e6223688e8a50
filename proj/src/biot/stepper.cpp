// Copyright 2026 The biot-semiexplicit Authors
// SPDX-License-Identifier: Apache-2.0

#include "biot/stepper.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace biot {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Vector add_scaled(std::span<const double> a, double s, std::span<const double> b) {
  Vector out(a.begin(), a.end());
  axpy(s, b, out);
  return out;
}

void summarize(Trajectory& traj, double wall_time) {
  RunReport& r = traj.report;
  r.steps = static_cast<int>(traj.steps.size());
  r.wall_time = wall_time;
  long total = 0;
  for (const StepReport& s : traj.steps) {
    total += s.picard_iterations;
    r.picard_max = std::max(r.picard_max, s.picard_iterations);
    r.factorizations += s.factorization_count;
    r.max_picard_residual = std::max(r.max_picard_residual, s.final_picard_residual);
  }
  r.picard_mean = traj.steps.empty() ? 0.0 : static_cast<double>(total) / traj.steps.size();
}

}  // namespace

std::string scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::SemiExplicit:
      return "semi-explicit";
    case Scheme::ImplicitPicard:
      return "implicit-picard";
    case Scheme::DelayImplicit:
      return "delay-implicit";
  }
  return "unknown";
}

int StepperConfig::steps() const {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw std::invalid_argument("stepper: tau must be > 0");
  if (!(final_time > 0.0) || !std::isfinite(final_time)) {
    throw std::invalid_argument("stepper: final time must be > 0");
  }
  const double ratio = final_time / tau;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * rounded) {
    throw std::invalid_argument("stepper: T / tau must be a positive integer");
  }
  return static_cast<int>(rounded);
}

void StepperConfig::validate() const {
  steps();
  if (scheme == Scheme::ImplicitPicard) {
    if (picard_max < 1) throw std::invalid_argument("stepper: picard_max must be >= 1");
    if (!(picard_tol > 0.0 && picard_tol < 1.0)) {
      throw std::invalid_argument("stepper: picard_tol must lie in (0, 1)");
    }
  }
  if (!(solver_tol > 0.0 && solver_tol < 1.0)) {
    throw std::invalid_argument("stepper: solver_tol must lie in (0, 1)");
  }
}

// ---------------------------------------------------------------------------

Discretization::Discretization(Mesh mesh, Coefficients coeffs)
    : mesh_(std::move(mesh)),
      coeffs_(std::move(coeffs)),
      A_((coeffs_.validate(), assemble_elasticity(mesh_, coeffs_))),
      C_(assemble_pressure_mass(mesh_, coeffs_)),
      D_(assemble_coupling(mesh_, coeffs_)),
      permeability_(mesh_, coeffs_) {}

CsrMatrix Discretization::permeability_stiffness(std::span<const double> u) const {
  return permeability_.assemble(u);
}

const SpdSolver& Discretization::displacement_solver() {
  if (!displacement_solver_.factorized()) displacement_solver_.factorize(A_);
  return displacement_solver_;
}

const CsrMatrix& Discretization::cached_permeability(std::span<const double> u) {
  if (!cache_valid_ || cached_u_.size() != u.size() ||
      !std::equal(u.begin(), u.end(), cached_u_.begin())) {
    permeability_.assemble_into(u, cached_B_);
    cached_u_.assign(u.begin(), u.end());
    cache_valid_ = true;
  }
  return cached_B_;
}

Vector Discretization::load_v(const VectorField& f, double t) const {
  return assemble_load_v(mesh_, f, t);
}

Vector Discretization::load_q(const ScalarField& g, double t) const {
  return assemble_load_q(mesh_, g, t);
}

Vector Discretization::interpolate(const InitialField& field) const {
  Vector out(static_cast<std::size_t>(mesh_.interior_count()));
  for (int k = 0; k < mesh_.interior_count(); ++k) {
    out[k] = field(mesh_.nodes()[mesh_.interior_node(k)]);
  }
  return out;
}

Vector Discretization::interpolate(const ScalarField& field, double t) const {
  return interpolate(InitialField([&](Point x) { return field(x, t); }));
}

Vector Discretization::interpolate(const VectorField& field, double t) const {
  Vector out(2 * static_cast<std::size_t>(mesh_.interior_count()));
  for (int k = 0; k < mesh_.interior_count(); ++k) {
    const auto v = field(mesh_.nodes()[mesh_.interior_node(k)], t);
    out[2 * k] = v[0];
    out[2 * k + 1] = v[1];
  }
  return out;
}

// ---------------------------------------------------------------------------

Vector initial_displacement(Discretization& disc, std::span<const double> p0,
                            std::span<const double> f0_load, double tol) {
  Vector rhs = disc.coupling().multiply_transposed(p0);
  axpy(1.0, f0_load, rhs);
  return disc.displacement_solver().solve(rhs, tol);
}

std::pair<State, StepReport> semi_explicit_step(Discretization& disc, const State& previous,
                                                std::span<const double> f_load,
                                                std::span<const double> g_load,
                                                const StepperConfig& cfg) {
  const auto start = Clock::now();
  const double tau = cfg.tau;
  State next;
  next.t = previous.t + tau;

  // Elasticity with the lagged pressure.
  Vector rhs_u = disc.coupling().multiply_transposed(previous.p);
  axpy(1.0, f_load, rhs_u);
  next.u = disc.displacement_solver().solve(rhs_u, cfg.solver_tol);

  // Flow with the permeability frozen at the new displacement.
  const CsrMatrix& B = disc.cached_permeability(next.u);
  const CsrMatrix op = linear_combination(1.0, disc.pressure_mass(), tau, B);
  Vector rhs_p = disc.pressure_mass() * previous.p;
  axpy(tau, g_load, rhs_p);
  const Vector du = add_scaled(next.u, -1.0, previous.u);
  axpy(-1.0, disc.coupling() * du, rhs_p);
  disc.pressure_solver().factorize(op);
  next.p = disc.pressure_solver().solve(rhs_p, cfg.solver_tol);

  StepReport report;
  report.factorization_count = 1;
  report.wall_time = seconds_since(start);
  return {std::move(next), report};
}

double implicit_residual(Discretization& disc, const State& previous, const State& candidate,
                         std::span<const double> f_load, std::span<const double> g_load,
                         double tau) {
  const CsrMatrix& B = disc.cached_permeability(candidate.u);
  const CsrMatrix op = linear_combination(1.0, disc.pressure_mass(), tau, B);
  Vector rhs_p = disc.pressure_mass() * previous.p;
  axpy(1.0, disc.coupling() * previous.u, rhs_p);
  axpy(tau, g_load, rhs_p);
  const BlockSystem sys{disc.elasticity(), disc.coupling(), op, tau};
  return block_relative_residual(sys, candidate.u, candidate.p, f_load, rhs_p);
}

std::pair<State, StepReport> implicit_picard_step(Discretization& disc, const State& previous,
                                                  std::span<const double> f_load,
                                                  std::span<const double> g_load,
                                                  const StepperConfig& cfg) {
  if (cfg.picard_max < 1) throw std::invalid_argument("stepper: picard_max must be >= 1");
  const auto start = Clock::now();
  const double tau = cfg.tau;

  // tau-scaled second row: D u + (C + tau B) p = tau G + C p^{n-1} + D u^{n-1}
  Vector rhs_p = disc.pressure_mass() * previous.p;
  axpy(1.0, disc.coupling() * previous.u, rhs_p);
  axpy(tau, g_load, rhs_p);

  State iterate{previous.u, previous.p, previous.t + tau};
  StepReport report;
  CsrMatrix linearized = disc.cached_permeability(previous.u);
  for (int j = 1; j <= cfg.picard_max; ++j) {
    const CsrMatrix op = linear_combination(1.0, disc.pressure_mass(), tau, linearized);
    const BlockSystem sys{disc.elasticity(), disc.coupling(), op, tau};
    disc.block_solver().factorize(sys);
    ++report.factorization_count;
    auto [u, p] = disc.block_solver().solve(f_load, rhs_p, cfg.solver_tol);
    iterate.u = std::move(u);
    iterate.p = std::move(p);
    report.picard_iterations = j;

    const CsrMatrix& updated = disc.cached_permeability(iterate.u);
    const CsrMatrix updated_op = linear_combination(1.0, disc.pressure_mass(), tau, updated);
    const BlockSystem nonlinear{disc.elasticity(), disc.coupling(), updated_op, tau};
    report.final_picard_residual =
        block_relative_residual(nonlinear, iterate.u, iterate.p, f_load, rhs_p);
    if (!std::isfinite(report.final_picard_residual)) {
      throw SolverFailure("implicit_picard_step: non-finite residual",
                          report.final_picard_residual);
    }
    if (report.final_picard_residual <= cfg.picard_tol) break;
    linearized = updated;
  }
  report.wall_time = seconds_since(start);
  return {std::move(iterate), report};
}

// ---------------------------------------------------------------------------

Trajectory delay_implicit_run(const Mesh& mesh, const StepperConfig& cfg,
                              const ProblemData& problem) {
  cfg.validate();
  const Coefficients& coeffs = problem.coeffs;
  coeffs.validate();
  const int steps = cfg.steps();
  const double tau = cfg.tau;

  // Operators assembled directly, factorizations are not cached.
  const CsrMatrix A = assemble_elasticity(mesh, coeffs);
  const CsrMatrix C = assemble_pressure_mass(mesh, coeffs);
  const CsrMatrix D = assemble_coupling(mesh, coeffs);

  Vector p0(static_cast<std::size_t>(mesh.interior_count()));
  for (int k = 0; k < mesh.interior_count(); ++k) {
    p0[k] = problem.p0(mesh.nodes()[mesh.interior_node(k)]);
  }

  const HistoryFunction history =
      cfg.history ? cfg.history : HistoryFunction([&p0](double) { return p0; });
  for (double t : {-tau, 0.0}) {
    const Vector phi = history(t);
    if (phi.size() != p0.size()) {
      throw std::invalid_argument("delay: history returns vectors of the wrong length");
    }
    for (std::size_t k = 0; k < p0.size(); ++k) {
      if (std::abs(phi[k] - p0[k]) > 1e-12) {
        throw std::invalid_argument("delay: history must equal p0 at -tau and 0");
      }
    }
  }

  // Pressure buffer indexed by time level; levels <= 0 come from the history.
  std::deque<Vector> past;  // past[k] = pressure at t_k, k >= 0
  auto delayed_pressure = [&](int level) -> Vector {
    const double t = level * tau;
    if (level <= 0) return history(t);
    return past[static_cast<std::size_t>(level)];
  };

  Trajectory traj;
  traj.states.reserve(static_cast<std::size_t>(steps) + 1);

  // ubar(0) from the history value at -tau.
  State initial;
  initial.t = 0.0;
  initial.p = history(0.0);
  {
    Vector rhs = assemble_load_v(mesh, problem.f, 0.0);
    const Vector dt_p = D.multiply_transposed(delayed_pressure(-1));
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += dt_p[i];
    initial.u = solve_spd(A, rhs, cfg.solver_tol);
  }
  past.push_back(initial.p);
  traj.states.push_back(initial);

  const auto start = Clock::now();
  for (int n = 1; n <= steps; ++n) {
    const auto step_start = Clock::now();
    const double t = n * tau;
    const State& prev = traj.states.back();
    State next;
    next.t = t;

    // Elasticity at t_n with pressure evaluated at t_n - tau.
    Vector rhs_u = D.multiply_transposed(delayed_pressure(n - 1));
    const Vector f_load = assemble_load_v(mesh, problem.f, t);
    for (std::size_t i = 0; i < rhs_u.size(); ++i) rhs_u[i] += f_load[i];
    next.u = solve_spd(A, rhs_u, cfg.solver_tol);

    // Implicit Euler for the flow equation.
    const CsrMatrix B = assemble_permeability_stiffness(mesh, coeffs, next.u);
    const CsrMatrix op = linear_combination(1.0, C, tau, B);
    const Vector g_load = assemble_load_q(mesh, problem.g, t);
    const Vector c_prev = C * prev.p;
    const Vector d_new = D * next.u;
    const Vector d_old = D * prev.u;
    Vector rhs_p(c_prev.size());
    for (std::size_t i = 0; i < rhs_p.size(); ++i) {
      rhs_p[i] = tau * g_load[i] + c_prev[i] - (d_new[i] - d_old[i]);
    }
    next.p = solve_spd(op, rhs_p, cfg.solver_tol);

    past.push_back(next.p);
    traj.states.push_back(std::move(next));
    StepReport report;
    report.factorization_count = 2;
    report.wall_time = seconds_since(step_start);
    traj.steps.push_back(report);
  }
  summarize(traj, seconds_since(start));
  return traj;
}

Trajectory run(Discretization& disc, const StepperConfig& cfg, const ProblemData& problem) {
  cfg.validate();
  if (cfg.scheme == Scheme::DelayImplicit) return delay_implicit_run(disc.mesh(), cfg, problem);
  const int steps = cfg.steps();

  Trajectory traj;
  traj.states.reserve(static_cast<std::size_t>(steps) + 1);
  State initial;
  initial.t = 0.0;
  initial.p = disc.interpolate(problem.p0);
  initial.u = initial_displacement(disc, initial.p, disc.load_v(problem.f, 0.0), cfg.solver_tol);
  traj.states.push_back(std::move(initial));

  const auto start = Clock::now();
  for (int n = 1; n <= steps; ++n) {
    const double t = n * cfg.tau;
    const Vector f_load = disc.load_v(problem.f, t);
    const Vector g_load = disc.load_q(problem.g, t);
    auto [state, report] = cfg.scheme == Scheme::SemiExplicit
                               ? semi_explicit_step(disc, traj.states.back(), f_load, g_load, cfg)
                               : implicit_picard_step(disc, traj.states.back(), f_load, g_load, cfg);
    state.t = t;
    if (cfg.scheme == Scheme::ImplicitPicard && report.final_picard_residual > cfg.picard_tol) {
      traj.report.picard_converged = false;
    }
    traj.states.push_back(std::move(state));
    traj.steps.push_back(report);
  }
  summarize(traj, seconds_since(start));
  return traj;
}

Trajectory run(const Mesh& mesh, const StepperConfig& cfg, const ProblemData& problem) {
  if (cfg.scheme == Scheme::DelayImplicit) return delay_implicit_run(mesh, cfg, problem);
  Discretization disc(mesh, problem.coeffs);
  disc.displacement_solver();
  return run(disc, cfg, problem);
}

std::optional<double> tau_bound_diagnostic(const Coefficients& coeffs, double p_bound) {
  if (!(p_bound > 0.0)) throw std::invalid_argument("tau_bound_diagnostic: p_bound must be > 0");
  const double lipschitz = coeffs.kappa_over_nu_scale *
                           permeability::lipschitz_constant(coeffs.permeability);
  if (lipschitz == 0.0) return std::nullopt;
  const double c_a = coeffs.mu;
  const double c_b = coeffs.kappa_over_nu_scale * permeability::bounds(coeffs.permeability).lower;
  return c_a * c_b / (2.0 * lipschitz * lipschitz * p_bound * p_bound);
}

}  // namespace biot
