// Copyright 2026 The biot-semiexplicit Authors
// SPDX-License-Identifier: Apache-2.0

#include "biot/permeability.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace biot::permeability {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double affine_porosity(double rho0, double s) { return rho0 + (1.0 - rho0) * s; }

double kozeny_carman_value(double kappa0, double rho) {
  const double gap = 1.0 - rho;
  return kappa0 * rho * rho * rho / (gap * gap);
}

// d/drho of rho^3 / (1 - rho)^2.
double kozeny_carman_slope(double rho) {
  const double gap = 1.0 - rho;
  return rho * rho * (3.0 - rho) / (gap * gap * gap);
}

double network_porosity(const NetworkInspired& m, double s) {
  return 1.0 - (1.0 - m.rho0) * std::exp(-s);
}

void require(bool condition, const char* message) {
  if (!condition) throw std::invalid_argument(message);
}

}  // namespace

void validate(const Model& model) {
  std::visit(
      Overloaded{
          [](const Constant& m) {
            require(std::isfinite(m.kappa) && m.kappa > 0.0,
                    "permeability.kappa must be positive");
          },
          [](const KozenyCarman& m) {
            require(m.kappa0 > 0.0, "permeability.kappa0 must be positive");
            require(m.rho0 > 0.0 && m.rho0 < 1.0, "permeability.rho0 must lie in (0, 1)");
            require(m.rho0 / (m.rho0 - 1.0) < m.c_s && m.c_s < m.C_s && m.C_s < 1.0,
                    "permeability clamps must satisfy rho0/(rho0-1) < c_s < C_s < 1");
          },
          [](const NetworkInspired& m) {
            require(m.kappa0 > 0.0, "permeability.kappa0 must be positive");
            require(m.rho0 > 0.0 && m.rho0 < 1.0, "permeability.rho0 must lie in (0, 1)");
            require(m.rho_hat > 0.0 && m.rho_hat < m.rho0,
                    "permeability.rho_hat must lie in (0, rho0)");
            require(m.delta > 0.0, "permeability.delta must be positive");
          },
          [](const QuadraticClamped& m) {
            require(m.kappa0 > 0.0, "permeability.kappa0 must be positive");
            require(m.rho0 > 0.0 && m.rho0 < 1.0, "permeability.rho0 must lie in (0, 1)");
            require(m.c_s > 0.0 && m.c_s < m.C_s,
                    "permeability clamps must satisfy 0 < c_s < C_s");
          },
      },
      model);
}

double eval(const Model& model, double s) {
  return std::visit(
      Overloaded{
          [](const Constant& m) { return m.kappa; },
          [s](const KozenyCarman& m) {
            const double clamped = std::clamp(s, m.c_s, m.C_s);
            return kozeny_carman_value(m.kappa0, affine_porosity(m.rho0, clamped));
          },
          [s](const NetworkInspired& m) {
            const double rho = network_porosity(m, s);
            const double open = rho < m.rho_hat ? 0.0
                                                : m.kappa0 * (rho - m.rho_hat) /
                                                      (m.rho0 - m.rho_hat);
            return open + m.kappa0 * m.delta;
          },
          [s](const QuadraticClamped& m) {
            const double rho = std::clamp(affine_porosity(m.rho0, s), m.c_s, m.C_s);
            return m.kappa0 * rho * rho;
          },
      },
      model);
}

Bounds bounds(const Model& model) {
  return std::visit(
      Overloaded{
          [](const Constant& m) { return Bounds{m.kappa, m.kappa}; },
          [](const KozenyCarman& m) {
            return Bounds{kozeny_carman_value(m.kappa0, affine_porosity(m.rho0, m.c_s)),
                          kozeny_carman_value(m.kappa0, affine_porosity(m.rho0, m.C_s))};
          },
          [](const NetworkInspired& m) {
            // Supremum as rho -> 1 for s -> infinity.
            return Bounds{m.kappa0 * m.delta,
                          m.kappa0 * (1.0 - m.rho_hat) / (m.rho0 - m.rho_hat) +
                              m.kappa0 * m.delta};
          },
          [](const QuadraticClamped& m) {
            return Bounds{m.kappa0 * m.c_s * m.c_s, m.kappa0 * m.C_s * m.C_s};
          },
      },
      model);
}

double derivative(const Model& model, double s) {
  return std::visit(
      Overloaded{
          [](const Constant&) { return 0.0; },
          [s](const KozenyCarman& m) {
            if (s < m.c_s || s > m.C_s) return 0.0;
            return m.kappa0 * (1.0 - m.rho0) *
                   kozeny_carman_slope(affine_porosity(m.rho0, s));
          },
          [s](const NetworkInspired& m) {
            const double rho = network_porosity(m, s);
            if (rho < m.rho_hat) return 0.0;
            return m.kappa0 * (1.0 - m.rho0) * std::exp(-s) / (m.rho0 - m.rho_hat);
          },
          [s](const QuadraticClamped& m) {
            const double rho = affine_porosity(m.rho0, s);
            if (rho < m.c_s || rho > m.C_s) return 0.0;
            return 2.0 * m.kappa0 * (1.0 - m.rho0) * rho;
          },
      },
      model);
}

double lipschitz_constant(const Model& model) {
  return std::visit(
      Overloaded{
          [](const Constant&) { return 0.0; },
          [](const KozenyCarman& m) {
            // The slope is increasing in rho on (0, 1); the maximum sits at C_s.
            return m.kappa0 * (1.0 - m.rho0) *
                   kozeny_carman_slope(affine_porosity(m.rho0, m.C_s));
          },
          [](const NetworkInspired& m) {
            // (1 - rho0) exp(-s) is largest at the threshold rho = rho_hat.
            return m.kappa0 * (1.0 - m.rho_hat) / (m.rho0 - m.rho_hat);
          },
          [](const QuadraticClamped& m) {
            return 2.0 * m.kappa0 * (1.0 - m.rho0) * m.C_s;
          },
      },
      model);
}

bool is_constant(const Model& model) { return std::holds_alternative<Constant>(model); }

std::string kind_name(const Model& model) {
  return std::visit(Overloaded{
                        [](const Constant&) { return std::string("constant"); },
                        [](const KozenyCarman&) { return std::string("kozeny-carman"); },
                        [](const NetworkInspired&) { return std::string("network"); },
                        [](const QuadraticClamped&) { return std::string("quadratic"); },
                    },
                    model);
}

}  // namespace biot::permeability
