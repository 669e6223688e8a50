// Copyright 2026 The biot-semiexplicit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "biot/mesh.hpp"
#include "biot/permeability.hpp"
#include "biot/sparse.hpp"

namespace biot {

/// Material coefficients of the Biot system. The permeability law is
/// evaluated relative to the mobility scale kappa0 / nu, i.e. the diffusion
/// coefficient is kappa_over_nu_scale * eval(permeability, div u).
struct Coefficients {
  double lambda = 1.0;
  double mu = 1.0;
  double alpha = 1.0;
  double M = 1.0;
  double kappa_over_nu_scale = 1.0;
  permeability::Model permeability = permeability::Constant{1.0};

  /// Throws std::invalid_argument on inadmissible values. alpha = 0 is
  /// accepted for decoupled runs.
  void validate() const;

  double mobility(double dilatation) const {
    return kappa_over_nu_scale * permeability::eval(permeability, dilatation);
  }
};

/// Interior: boundary DOFs are eliminated (the default everywhere).
/// Full: every node carries DOFs; used by consistency checks.
enum class DofSpace { Interior, Full };

using VectorField = std::function<std::array<double, 2>(Point, double)>;
using ScalarField = std::function<double(Point, double)>;

/// a(u, v) = int sigma(u) : eps(v), two interleaved DOFs per node.
CsrMatrix assemble_elasticity(const Mesh& mesh, const Coefficients& coeffs,
                              DofSpace space = DofSpace::Interior);

/// c(p, q) = int p q / M, consistent P1 mass matrix.
CsrMatrix assemble_pressure_mass(const Mesh& mesh, const Coefficients& coeffs,
                                 DofSpace space = DofSpace::Interior);

/// d(u, q) = int alpha div(u) q. Rows are pressure DOFs, columns displacement DOFs.
CsrMatrix assemble_coupling(const Mesh& mesh, const Coefficients& coeffs,
                            DofSpace space = DofSpace::Interior);

/// b(u; p, q) = int mobility(div u) grad p . grad q with the dilatation
/// taken elementwise (exact for P1 displacements). `u` has the DOF layout
/// of `space`.
CsrMatrix assemble_permeability_stiffness(const Mesh& mesh, const Coefficients& coeffs,
                                          std::span<const double> u,
                                          DofSpace space = DofSpace::Interior);

/// Unit P1 stiffness int grad p . grad q and unit mass int p q.
CsrMatrix assemble_laplace(const Mesh& mesh, DofSpace space = DofSpace::Interior);
CsrMatrix assemble_mass(const Mesh& mesh, DofSpace space = DofSpace::Interior);

/// (f(t), v) and (g(t), q) with the edge-midpoint rule (exact for quadratics).
Vector assemble_load_v(const Mesh& mesh, const VectorField& f, double t,
                       DofSpace space = DofSpace::Interior);
Vector assemble_load_q(const Mesh& mesh, const ScalarField& g, double t,
                       DofSpace space = DofSpace::Interior);

/// Elementwise constant divergence of a P1 displacement (interior layout).
Vector element_divergence(const Mesh& mesh, std::span<const double> u);

/// Reassembles b(u; ., .) on a fixed pattern. The element-to-value map is
/// built once so repeated assembly only touches values; the result always
/// shares its pattern with assemble_laplace / assemble_pressure_mass.
class PermeabilityAssembler {
 public:
  PermeabilityAssembler(const Mesh& mesh, Coefficients coeffs);

  const CsrMatrix& pattern() const { return pattern_; }
  CsrMatrix assemble(std::span<const double> u) const;
  void assemble_into(std::span<const double> u, CsrMatrix& out) const;

 private:
  struct Element {
    std::array<int, 9> positions;          // into values, -1 for eliminated
    std::array<double, 9> unit_stiffness;  // |T| grad phi_i . grad phi_j
    std::array<int, 6> u_dofs;             // -1 for boundary
    std::array<double, 6> div_weights;     // d(phi_j)/dx_c
  };

  Coefficients coeffs_;
  std::size_t displacement_size_ = 0;
  CsrMatrix pattern_;
  std::vector<Element> elements_;
};

}  // namespace biot
