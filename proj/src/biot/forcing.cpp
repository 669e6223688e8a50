// Copyright 2026 The biot-semiexplicit Authors
// SPDX-License-Identifier: Apache-2.0

#include "biot/forcing.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace biot {
namespace {

constexpr double kPi = std::numbers::pi;

std::array<double, 2> zero_vector(Point, double) { return {0.0, 0.0}; }

}  // namespace

Coefficients experiment_41_coefficients() {
  Coefficients c;
  c.lambda = 7.826e8;
  c.mu = 1.826e9;
  c.alpha = 0.85;
  c.M = 7e9;
  c.kappa_over_nu_scale = 8e-10;
  c.permeability = permeability::NetworkInspired{1.0, 0.4, 0.2, 0.01};
  return c;
}

ProblemData experiment_41_data() {
  ProblemData data;
  data.name = "ex41";
  data.coeffs = experiment_41_coefficients();
  data.final_time = 1.0;
  data.f = zero_vector;
  data.g = [](Point x, double t) { return 30.0 * std::sin(kPi * x.x) * std::exp(-t); };
  data.p0 = [](Point x) { return 50.0 * (1.0 - x.x) * x.x * (1.0 - x.y) * x.y; };
  return data;
}

Coefficients experiment_42_coefficients() {
  Coefficients c;
  c.lambda = 1.0;
  c.mu = 1.0;
  c.alpha = 1.0;
  c.M = 1.0;
  c.kappa_over_nu_scale = 1.0;
  c.permeability = permeability::KozenyCarman{1.0, 0.5, -0.75, 0.75};
  return c;
}

ProblemData experiment_42_data() { return experiment_42_data(experiment_42_coefficients()); }

ProblemData experiment_42_data(const Coefficients& coeffs) {
  coeffs.validate();
  ProblemData data;
  data.name = "ex42";
  data.coeffs = coeffs;
  data.final_time = 1.0;

  // Shorthands: S = sin sin, Sx, Sy first derivatives, Sxy = pi^2 cos cos,
  // phi(t) = exp(-t) / 6 is the displacement amplitude.
  struct Trig {
    double s, sx, sy, sxy;
  };
  const auto trig = [](Point x) {
    const double s1 = std::sin(kPi * x.x), c1 = std::cos(kPi * x.x);
    const double s2 = std::sin(kPi * x.y), c2 = std::cos(kPi * x.y);
    return Trig{s1 * s2, kPi * c1 * s2, kPi * s1 * c2, kPi * kPi * c1 * c2};
  };
  const auto amplitude = [](double t) { return std::exp(-t) / 6.0; };

  data.exact_p = [trig](Point x, double t) { return t * trig(x).s; };
  data.exact_u = [trig, amplitude](Point x, double t) {
    const double v = amplitude(t) * trig(x).s;
    return std::array<double, 2>{v, v};
  };
  data.p0 = [](Point) { return 0.0; };

  const double lambda = coeffs.lambda;
  const double mu = coeffs.mu;
  const double alpha = coeffs.alpha;
  data.f = [=](Point x, double t) {
    const Trig g = trig(x);
    // -div sigma(u) = -mu lap u - (lambda + mu) grad div u
    const double elastic = amplitude(t) * ((3.0 * mu + lambda) * kPi * kPi * g.s -
                                           (lambda + mu) * g.sxy);
    return std::array<double, 2>{elastic + alpha * t * g.sx, elastic + alpha * t * g.sy};
  };

  const double inv_M = 1.0 / coeffs.M;
  const double scale = coeffs.kappa_over_nu_scale;
  const permeability::Model model = coeffs.permeability;
  data.g = [=](Point x, double t) {
    const Trig g = trig(x);
    const double phi = amplitude(t);
    const double div_u = phi * (g.sx + g.sy);
    // d/dt (alpha div u + p / M); phi' = -phi.
    const double storage = -alpha * div_u + inv_M * g.s;
    // div(k(s) grad p) = k'(s) grad s . grad p + k(s) lap p
    const double grad_s_dot_grad_p = phi * t * (g.sxy - kPi * kPi * g.s) * (g.sx + g.sy);
    const double flux_div = scale * (permeability::derivative(model, div_u) * grad_s_dot_grad_p -
                                     permeability::eval(model, div_u) * 2.0 * kPi * kPi * t * g.s);
    return storage - flux_div;
  };
  return data;
}

Coefficients experiment_43_coefficients(double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("experiment ex43: alpha must be >= 0");
  }
  Coefficients c;
  c.lambda = 1.0;
  c.mu = 1.0;
  c.alpha = alpha;
  c.M = 1.0;
  c.kappa_over_nu_scale = 1.0;
  c.permeability = permeability::QuadraticClamped{1.0, 0.4, 0.01, 0.75};
  return c;
}

ProblemData experiment_43_data(double alpha) {
  ProblemData data;
  data.name = "ex43";
  data.coeffs = experiment_43_coefficients(alpha);
  data.final_time = 1.0;
  data.f = zero_vector;
  data.g = [](Point, double t) {
    return 5.0 * std::cos(0.5 * kPi * t) + std::sin(0.5 * kPi * t);
  };
  data.p0 = [](Point) { return 0.0; };
  return data;
}

ProblemData zero_problem(const Coefficients& coeffs, double final_time) {
  ProblemData data;
  data.name = "zero";
  data.coeffs = coeffs;
  data.final_time = final_time;
  data.f = zero_vector;
  data.g = [](Point, double) { return 0.0; };
  data.p0 = [](Point) { return 0.0; };
  data.exact_u = zero_vector;
  data.exact_p = [](Point, double) { return 0.0; };
  return data;
}

}  // namespace biot
