// Copyright 2026 The biot-semiexplicit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <variant>

namespace biot::permeability {

// Dilatation-dependent permeability laws kappa(s), s = div u. All laws are
// bounded away from zero and Lipschitz; the values here are relative to the
// mobility scale kappa0 / nu carried by the coefficient set.

struct Constant {
  double kappa = 1.0;
};

/// Kozeny-Carman law clamped in the dilatation: porosity
/// rho(s) = rho0 + (1 - rho0) s, kappa = kappa0 rho^3 / (1 - rho)^2 for
/// c_s < s < C_s and the end values outside.
struct KozenyCarman {
  double kappa0 = 1.0;
  double rho0 = 0.5;
  double c_s = -0.75;
  double C_s = 0.75;
};

/// Network (open/closed channel) law with porosity
/// rho(s) = 1 - (1 - rho0) exp(-s): kappa = kappa0 (rho - rho_hat)/(rho0 - rho_hat)
/// above the percolation threshold rho_hat, zero below, plus a floor kappa0 delta.
struct NetworkInspired {
  double kappa0 = 1.0;
  double rho0 = 0.4;
  double rho_hat = 0.2;
  double delta = 0.01;
};

/// Quadratic law kappa0 * clamp(rho(s), c_s, C_s)^2 with affine porosity.
struct QuadraticClamped {
  double kappa0 = 1.0;
  double rho0 = 0.4;
  double c_s = 0.01;
  double C_s = 0.75;
};

using Model = std::variant<Constant, KozenyCarman, NetworkInspired, QuadraticClamped>;

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Throws std::invalid_argument when the parameters violate the law's
/// admissibility conditions.
void validate(const Model& model);

double eval(const Model& model, double s);
Bounds bounds(const Model& model);

/// Derivative of the active branch. At a clamp breakpoint the interior
/// (non-clamped) branch is used.
double derivative(const Model& model, double s);

/// Global Lipschitz constant of eval.
double lipschitz_constant(const Model& model);

/// True for laws that do not depend on the dilatation.
bool is_constant(const Model& model);

/// Short tag used in configs: "constant", "kozeny-carman", "network", "quadratic".
std::string kind_name(const Model& model);

}  // namespace biot::permeability
