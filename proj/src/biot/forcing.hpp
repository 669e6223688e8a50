// Copyright 2026 The biot-semiexplicit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <functional>
#include <optional>
#include <string>

#include "biot/assembly.hpp"

namespace biot {

using InitialField = std::function<double(Point)>;

/// Right-hand sides, initial pressure and (optionally) a closed-form
/// solution, bundled with the coefficient set they were built for.
struct ProblemData {
  std::string name;
  Coefficients coeffs;
  double final_time = 1.0;
  VectorField f;
  ScalarField g;
  InitialField p0;
  std::optional<VectorField> exact_u;
  std::optional<ScalarField> exact_p;

  bool has_exact_solution() const { return exact_u.has_value() && exact_p.has_value(); }
};

/// Network permeability with Boise sandstone parameters, f = 0,
/// g = 30 sin(pi x1) exp(-t), p0 = 50 (1 - x1) x1 (1 - x2) x2, T = 1.
Coefficients experiment_41_coefficients();
ProblemData experiment_41_data();

/// Kozeny-Carman manufactured problem with exact solution
///   p = t sin(pi x1) sin(pi x2),  u = exp(-t)/6 [1, 1] sin(pi x1) sin(pi x2).
/// f and g are derived for the given coefficients, so coefficient overrides
/// keep the same exact solution.
Coefficients experiment_42_coefficients();
ProblemData experiment_42_data();
ProblemData experiment_42_data(const Coefficients& coeffs);

/// Quadratic clamped permeability, f = 0, g = 5 cos(pi t / 2) + sin(pi t / 2),
/// p0 = 0 and the given coupling coefficient (alpha >= 0).
Coefficients experiment_43_coefficients(double alpha);
ProblemData experiment_43_data(double alpha);

/// All data identically zero on the given coefficients.
ProblemData zero_problem(const Coefficients& coeffs, double final_time = 1.0);

}  // namespace biot
