// Copyright 2026 The biot-semiexplicit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "biot/assembly.hpp"
#include "biot/forcing.hpp"
#include "biot/mesh.hpp"
#include "biot/sparse.hpp"
#include "biot/stepper.hpp"

namespace biot {

enum class NormKind { A, C, V, Q, HV, HQ, Triple };

std::string norm_name(NormKind kind);
/// Accepts "a", "c", "V", "Q", "HV", "HQ", "triple" (case-insensitive).
NormKind parse_norm(const std::string& name);
/// True for norms measured on displacements.
bool is_displacement_norm(NormKind kind);

/// Gram matrices of every norm on one mesh. Immutable once built.
class NormSet {
 public:
  NormSet(const Mesh& mesh, const Coefficients& coeffs);

  /// Single-field norms. Displacement kinds take u, pressure kinds take p.
  /// Triple is rejected here; use triple().
  double operator()(NormKind kind, std::span<const double> v) const;
  double triple(std::span<const double> u, std::span<const double> p) const;

  const CsrMatrix& elasticity() const { return A_; }
  const CsrMatrix& pressure_mass() const { return C_; }

 private:
  CsrMatrix A_, C_, laplace_, mass_;
};

double norm(const Mesh& mesh, const Coefficients& coeffs, NormKind kind,
            std::span<const double> v);
double norm(const Mesh& mesh, const Coefficients& coeffs, NormKind kind,
            std::span<const double> u, std::span<const double> p);

struct NormError {
  double absolute = 0.0;
  /// Empty when the norm of the exact state is zero.
  std::optional<double> relative;
};

struct ErrorReport {
  std::map<NormKind, NormError> u;
  std::map<NormKind, NormError> p;
  std::optional<NormError> triple;
  /// L2-in-time Q-norm error of the piecewise-constant pressure
  /// reconstruction, only against a closed-form solution.
  std::optional<NormError> p_time_integrated;
  double wall_time = 0.0;
  double picard_mean = 0.0;
  int picard_max = 0;

  /// Relative error if available, else absolute.
  std::optional<double> u_error(NormKind kind) const;
  std::optional<double> p_error(NormKind kind) const;
  std::optional<double> triple_error() const;
};

/// Errors of the last state against the nodal interpolant of the exact pair
/// at t. Time-integrated error is added when the trajectory has steps and
/// `kinds` contains Q.
ErrorReport error_vs_manufactured(const Trajectory& trajectory, const Mesh& mesh,
                                  const Coefficients& coeffs, const VectorField& exact_u,
                                  const ScalarField& exact_p, double t,
                                  const std::vector<NormKind>& kinds);

/// Final coarse state prolonged to the reference mesh and compared there.
/// Throws std::invalid_argument for non-nested meshes or mismatched final
/// times.
ErrorReport error_vs_reference(const Trajectory& coarse, const Trajectory& reference,
                               const Mesh& coarse_mesh, const Mesh& reference_mesh,
                               const Coefficients& coeffs, const std::vector<NormKind>& kinds);

/// Same measurement for two states on one mesh.
ErrorReport error_between(const State& state, const State& exact, const NormSet& norms,
                          const std::vector<NormKind>& kinds);

/// order_k = log2(e_k / e_{k+1}). Throws std::invalid_argument on fewer than
/// two entries or a nonpositive entry.
std::vector<double> convergence_order(std::span<const double> errors);

struct CouplingDiagnostic {
  double ratio = 0.0;
  bool satisfied = true;
};

/// alpha^2 M / mu against 1.
CouplingDiagnostic coupling_diagnostic(const Coefficients& coeffs);

}  // namespace biot
