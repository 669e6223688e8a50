// Copyright 2026 The biot-semiexplicit Authors
// SPDX-License-Identifier: Apache-2.0

#include "biot/analysis.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <stdexcept>

namespace biot {
namespace {

double quadratic_form(const CsrMatrix& m, std::span<const double> v) {
  if (v.size() != static_cast<std::size_t>(m.cols())) throw std::invalid_argument("norm: vector length mismatch");
  return std::max(0.0, dot(v, m * v));
}

// Block-diagonal form on interleaved displacement DOFs.
double vector_quadratic_form(const CsrMatrix& scalar, std::span<const double> u) {
  if (u.size() != 2 * static_cast<std::size_t>(scalar.cols())) throw std::invalid_argument("norm: vector length mismatch");
  const std::size_t n = scalar.cols();
  Vector component(n);
  double sum = 0.0;
  for (int c = 0; c < 2; ++c) {
    for (std::size_t k = 0; k < n; ++k) component[k] = u[2 * k + c];
    sum += dot(component, scalar * component);
  }
  return std::max(0.0, sum);
}

NormError make_error(double error, double reference) {
  NormError e;
  e.absolute = error;
  if (reference > 0.0) e.relative = error / reference;
  return e;
}

Vector difference(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("error: state size mismatch");
  Vector d(a.begin(), a.end());
  axpy(-1.0, b, d);
  return d;
}

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kGaussNodes = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                               0.5384693101056831, 0.9061798459386640};
constexpr std::array<double, 5> kGaussWeights = {0.2369268850561891, 0.4786286704993665,
                                                 0.5688888888888889, 0.4786286704993665,
                                                 0.2369268850561891};

std::optional<double> preferred(const std::optional<NormError>& e) {
  if (!e) return std::nullopt;
  return e->relative ? *e->relative : e->absolute;
}

}  // namespace

std::string norm_name(NormKind kind) {
  switch (kind) {
    case NormKind::A:
      return "a";
    case NormKind::C:
      return "c";
    case NormKind::V:
      return "V";
    case NormKind::Q:
      return "Q";
    case NormKind::HV:
      return "HV";
    case NormKind::HQ:
      return "HQ";
    case NormKind::Triple:
      return "triple";
  }
  return "unknown";
}

NormKind parse_norm(const std::string& name) {
  std::string key;
  for (char ch : name) key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
  if (key == "a" || key == "a_norm") return NormKind::A;
  if (key == "c" || key == "c_norm") return NormKind::C;
  if (key == "v" || key == "v_norm") return NormKind::V;
  if (key == "q" || key == "q_norm") return NormKind::Q;
  if (key == "hv" || key == "hv_norm") return NormKind::HV;
  if (key == "hq" || key == "hq_norm") return NormKind::HQ;
  if (key == "triple") return NormKind::Triple;
  throw std::invalid_argument("unknown norm '" + name + "'");
}

bool is_displacement_norm(NormKind kind) {
  return kind == NormKind::A || kind == NormKind::V || kind == NormKind::HV;
}

NormSet::NormSet(const Mesh& mesh, const Coefficients& coeffs)
    : A_(assemble_elasticity(mesh, coeffs)),
      C_(assemble_pressure_mass(mesh, coeffs)),
      laplace_(assemble_laplace(mesh)),
      mass_(assemble_mass(mesh)) {}

double NormSet::operator()(NormKind kind, std::span<const double> v) const {
  switch (kind) {
    case NormKind::A:
      return std::sqrt(quadratic_form(A_, v));
    case NormKind::C:
      return std::sqrt(quadratic_form(C_, v));
    case NormKind::V:
      return std::sqrt(vector_quadratic_form(laplace_, v));
    case NormKind::Q:
      return std::sqrt(quadratic_form(laplace_, v));
    case NormKind::HV:
      return std::sqrt(vector_quadratic_form(mass_, v));
    case NormKind::HQ:
      return std::sqrt(quadratic_form(mass_, v));
    case NormKind::Triple:
      break;
  }
  throw std::invalid_argument("norm: the triple norm needs a (u, p) pair");
}

double NormSet::triple(std::span<const double> u, std::span<const double> p) const {
  return std::sqrt(quadratic_form(A_, u) + quadratic_form(C_, p));
}

double norm(const Mesh& mesh, const Coefficients& coeffs, NormKind kind,
            std::span<const double> v) {
  return NormSet(mesh, coeffs)(kind, v);
}

double norm(const Mesh& mesh, const Coefficients& coeffs, NormKind kind,
            std::span<const double> u, std::span<const double> p) {
  const NormSet norms(mesh, coeffs);
  if (kind == NormKind::Triple) return norms.triple(u, p);
  return norms(kind, is_displacement_norm(kind) ? u : p);
}

std::optional<double> ErrorReport::u_error(NormKind kind) const {
  const auto it = u.find(kind);
  if (it == u.end()) return std::nullopt;
  return preferred(it->second);
}

std::optional<double> ErrorReport::p_error(NormKind kind) const {
  const auto it = p.find(kind);
  if (it == p.end()) return std::nullopt;
  return preferred(it->second);
}

std::optional<double> ErrorReport::triple_error() const { return preferred(triple); }

ErrorReport error_between(const State& state, const State& exact, const NormSet& norms,
                          const std::vector<NormKind>& kinds) {
  ErrorReport report;
  const Vector du = difference(state.u, exact.u);
  const Vector dp = difference(state.p, exact.p);
  for (NormKind kind : kinds) {
    if (kind == NormKind::Triple) {
      report.triple = make_error(norms.triple(du, dp), norms.triple(exact.u, exact.p));
    } else if (is_displacement_norm(kind)) {
      report.u[kind] = make_error(norms(kind, du), norms(kind, exact.u));
    } else {
      report.p[kind] = make_error(norms(kind, dp), norms(kind, exact.p));
    }
  }
  return report;
}

namespace {

void copy_statistics(const Trajectory& trajectory, ErrorReport& report) {
  report.wall_time = trajectory.report.wall_time;
  report.picard_mean = trajectory.report.picard_mean;
  report.picard_max = trajectory.report.picard_max;
}

Vector interpolate_scalar(const Mesh& mesh, const ScalarField& field, double t) {
  Vector out(static_cast<std::size_t>(mesh.interior_count()));
  for (int k = 0; k < mesh.interior_count(); ++k) {
    out[k] = field(mesh.nodes()[mesh.interior_node(k)], t);
  }
  return out;
}

Vector interpolate_vector(const Mesh& mesh, const VectorField& field, double t) {
  Vector out(2 * static_cast<std::size_t>(mesh.interior_count()));
  for (int k = 0; k < mesh.interior_count(); ++k) {
    const auto v = field(mesh.nodes()[mesh.interior_node(k)], t);
    out[2 * k] = v[0];
    out[2 * k + 1] = v[1];
  }
  return out;
}

}  // namespace

ErrorReport error_vs_manufactured(const Trajectory& trajectory, const Mesh& mesh,
                                  const Coefficients& coeffs, const VectorField& exact_u,
                                  const ScalarField& exact_p, double t,
                                  const std::vector<NormKind>& kinds) {
  if (trajectory.states.empty()) throw std::invalid_argument("error: empty trajectory");
  const NormSet norms(mesh, coeffs);
  State exact{interpolate_vector(mesh, exact_u, t), interpolate_scalar(mesh, exact_p, t), t};
  ErrorReport report = error_between(trajectory.final_state(), exact, norms, kinds);
  copy_statistics(trajectory, report);

  const bool wants_q = std::find(kinds.begin(), kinds.end(), NormKind::Q) != kinds.end();
  if (wants_q && trajectory.states.size() > 1) {
    double err2 = 0.0, ref2 = 0.0;
    for (std::size_t k = 1; k < trajectory.states.size(); ++k) {
      const double t0 = trajectory.states[k - 1].t;
      const double t1 = trajectory.states[k].t;
      const double half = 0.5 * (t1 - t0);
      for (std::size_t g = 0; g < kGaussNodes.size(); ++g) {
        const double tg = t0 + half * (1.0 + kGaussNodes[g]);
        const Vector pe = interpolate_scalar(mesh, exact_p, tg);
        const double w = half * kGaussWeights[g];
        const double e = norms(NormKind::Q, difference(trajectory.states[k].p, pe));
        const double r = norms(NormKind::Q, pe);
        err2 += w * e * e;
        ref2 += w * r * r;
      }
    }
    report.p_time_integrated = make_error(std::sqrt(err2), std::sqrt(ref2));
  }
  return report;
}

ErrorReport error_vs_reference(const Trajectory& coarse, const Trajectory& reference,
                               const Mesh& coarse_mesh, const Mesh& reference_mesh,
                               const Coefficients& coeffs, const std::vector<NormKind>& kinds) {
  if (coarse.states.empty() || reference.states.empty()) {
    throw std::invalid_argument("error_vs_reference: empty trajectory");
  }
  if (reference_mesh.subdivisions() % coarse_mesh.subdivisions() != 0) {
    throw std::invalid_argument("error_vs_reference: meshes are not nested");
  }
  const State& c = coarse.final_state();
  const State& r = reference.final_state();
  if (std::abs(c.t - r.t) > 1e-9 * std::max(1.0, std::abs(r.t))) {
    throw std::invalid_argument("error_vs_reference: final times differ");
  }
  State lifted{prolong_interior_vector(coarse_mesh, reference_mesh, c.u),
               prolong_interior_scalar(coarse_mesh, reference_mesh, c.p), c.t};
  const NormSet norms(reference_mesh, coeffs);
  ErrorReport report = error_between(lifted, r, norms, kinds);
  copy_statistics(coarse, report);
  return report;
}

std::vector<double> convergence_order(std::span<const double> errors) {
  if (errors.size() < 2) throw std::invalid_argument("convergence_order: need >= 2 entries");
  for (double e : errors) {
    if (!(e > 0.0) || !std::isfinite(e)) {
      throw std::invalid_argument("convergence_order: entries must be positive and finite");
    }
  }
  std::vector<double> orders;
  orders.reserve(errors.size() - 1);
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
    orders.push_back(std::log2(errors[k] / errors[k + 1]));
  }
  return orders;
}

CouplingDiagnostic coupling_diagnostic(const Coefficients& coeffs) {
  if (!(coeffs.mu > 0.0) || !(coeffs.M > 0.0)) {
    throw std::invalid_argument("coupling_diagnostic: mu and M must be > 0");
  }
  CouplingDiagnostic d;
  d.ratio = coeffs.alpha * coeffs.alpha * coeffs.M / coeffs.mu;
  d.satisfied = d.ratio <= 1.0;
  return d;
}

}  // namespace biot
