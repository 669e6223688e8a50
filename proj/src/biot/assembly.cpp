// Copyright 2026 The biot-semiexplicit Authors
// SPDX-License-Identifier: Apache-2.0

#include "biot/assembly.hpp"

#include <cmath>
#include <stdexcept>

namespace biot {
namespace {

struct ElementGeometry {
  std::array<int, 3> nodes;
  double area;
  // grad[i] = gradient of the barycentric function of vertex i.
  std::array<std::array<double, 2>, 3> grad;
};

ElementGeometry geometry(const Mesh& mesh, int t) {
  ElementGeometry g{};
  g.nodes = mesh.triangles()[t];
  const auto nodes = mesh.nodes();
  const Point& p0 = nodes[g.nodes[0]];
  const Point& p1 = nodes[g.nodes[1]];
  const Point& p2 = nodes[g.nodes[2]];
  const double twice_area = (p1.x - p0.x) * (p2.y - p0.y) - (p2.x - p0.x) * (p1.y - p0.y);
  g.area = 0.5 * twice_area;
  const std::array<Point, 3> p{p0, p1, p2};
  for (int i = 0; i < 3; ++i) {
    const Point& a = p[(i + 1) % 3];
    const Point& b = p[(i + 2) % 3];
    g.grad[i] = {(a.y - b.y) / twice_area, (b.x - a.x) / twice_area};
  }
  return g;
}

int scalar_dof(const Mesh& mesh, int node, DofSpace space) {
  return space == DofSpace::Full ? node : mesh.interior_index(node);
}

int vector_dof(const Mesh& mesh, int node, int component, DofSpace space) {
  const int k = scalar_dof(mesh, node, space);
  return k < 0 ? -1 : 2 * k + component;
}

int scalar_size(const Mesh& mesh, DofSpace space) {
  return space == DofSpace::Full ? mesh.node_count() : mesh.interior_count();
}

std::array<double, 9> unit_stiffness(const ElementGeometry& g) {
  std::array<double, 9> k{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      k[3 * i + j] = g.area * (g.grad[i][0] * g.grad[j][0] + g.grad[i][1] * g.grad[j][1]);
    }
  }
  return k;
}

// Scalar P1 operator from a per-element 3x3 local matrix.
template <class LocalMatrix>
CsrMatrix assemble_scalar(const Mesh& mesh, DofSpace space, LocalMatrix local) {
  const int n = scalar_size(mesh, space);
  std::vector<Triplet> triplets;
  triplets.reserve(9 * static_cast<std::size_t>(mesh.triangle_count()));
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const ElementGeometry g = geometry(mesh, t);
    const std::array<double, 9> k = local(t, g);
    for (int i = 0; i < 3; ++i) {
      const int row = scalar_dof(mesh, g.nodes[i], space);
      if (row < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const int col = scalar_dof(mesh, g.nodes[j], space);
        if (col < 0) continue;
        triplets.push_back({row, col, k[3 * i + j]});
      }
    }
  }
  return CsrMatrix::from_triplets(n, n, std::move(triplets));
}

std::array<double, 9> local_mass(const ElementGeometry& g, double scale) {
  std::array<double, 9> k{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) k[3 * i + j] = scale * g.area / 12.0 * (i == j ? 2.0 : 1.0);
  }
  return k;
}

// Edge midpoints and the basis values there: phi_i(m_e) = 1/2 for the two
// endpoints of edge e, 0 for the opposite vertex.
constexpr std::array<std::array<int, 2>, 3> kEdges{{{0, 1}, {1, 2}, {2, 0}}};

std::array<Point, 3> edge_midpoints(const Mesh& mesh, const ElementGeometry& g) {
  const auto nodes = mesh.nodes();
  std::array<Point, 3> m{};
  for (int e = 0; e < 3; ++e) {
    const Point& a = nodes[g.nodes[kEdges[e][0]]];
    const Point& b = nodes[g.nodes[kEdges[e][1]]];
    m[e] = {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
  }
  return m;
}

}  // namespace

void Coefficients::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("coefficients.lambda must be >= 0");
  }
  if (!(mu > 0.0) || !std::isfinite(mu)) throw std::invalid_argument("coefficients.mu must be > 0");
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw std::invalid_argument("coefficients.alpha must be >= 0");
  }
  if (!(M > 0.0) || !std::isfinite(M)) throw std::invalid_argument("coefficients.M must be > 0");
  if (!(kappa_over_nu_scale > 0.0) || !std::isfinite(kappa_over_nu_scale)) {
    throw std::invalid_argument("coefficients.kappa_over_nu must be > 0");
  }
  permeability::validate(permeability);
}

CsrMatrix assemble_elasticity(const Mesh& mesh, const Coefficients& coeffs, DofSpace space) {
  const int n = 2 * scalar_size(mesh, space);
  std::vector<Triplet> triplets;
  triplets.reserve(36 * static_cast<std::size_t>(mesh.triangle_count()));
  const double lambda = coeffs.lambda;
  const double mu = coeffs.mu;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const ElementGeometry g = geometry(mesh, t);
    for (int i = 0; i < 3; ++i) {
      for (int c = 0; c < 2; ++c) {
        const int row = vector_dof(mesh, g.nodes[i], c, space);
        if (row < 0) continue;
        for (int j = 0; j < 3; ++j) {
          const double grad_dot = g.grad[i][0] * g.grad[j][0] + g.grad[i][1] * g.grad[j][1];
          for (int d = 0; d < 2; ++d) {
            const int col = vector_dof(mesh, g.nodes[j], d, space);
            if (col < 0) continue;
            // 2 mu eps(phi_j e_d) : eps(phi_i e_c) + lambda div div
            const double value =
                g.area * (mu * ((c == d ? grad_dot : 0.0) + g.grad[i][d] * g.grad[j][c]) +
                          lambda * g.grad[i][c] * g.grad[j][d]);
            triplets.push_back({row, col, value});
          }
        }
      }
    }
  }
  return CsrMatrix::from_triplets(n, n, std::move(triplets));
}

CsrMatrix assemble_pressure_mass(const Mesh& mesh, const Coefficients& coeffs, DofSpace space) {
  const double scale = 1.0 / coeffs.M;
  return assemble_scalar(mesh, space,
                         [scale](int, const ElementGeometry& g) { return local_mass(g, scale); });
}

CsrMatrix assemble_mass(const Mesh& mesh, DofSpace space) {
  return assemble_scalar(mesh, space,
                         [](int, const ElementGeometry& g) { return local_mass(g, 1.0); });
}

CsrMatrix assemble_laplace(const Mesh& mesh, DofSpace space) {
  return assemble_scalar(mesh, space,
                         [](int, const ElementGeometry& g) { return unit_stiffness(g); });
}

CsrMatrix assemble_coupling(const Mesh& mesh, const Coefficients& coeffs, DofSpace space) {
  const int rows = scalar_size(mesh, space);
  const int cols = 2 * rows;
  std::vector<Triplet> triplets;
  triplets.reserve(18 * static_cast<std::size_t>(mesh.triangle_count()));
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const ElementGeometry g = geometry(mesh, t);
    for (int i = 0; i < 3; ++i) {
      const int row = scalar_dof(mesh, g.nodes[i], space);
      if (row < 0) continue;
      for (int j = 0; j < 3; ++j) {
        for (int d = 0; d < 2; ++d) {
          const int col = vector_dof(mesh, g.nodes[j], d, space);
          if (col < 0) continue;
          // div(phi_j e_d) is constant, int phi_i = |T| / 3.
          triplets.push_back({row, col, coeffs.alpha * g.grad[j][d] * g.area / 3.0});
        }
      }
    }
  }
  return CsrMatrix::from_triplets(rows, cols, std::move(triplets));
}

CsrMatrix assemble_permeability_stiffness(const Mesh& mesh, const Coefficients& coeffs,
                                          std::span<const double> u, DofSpace space) {
  if (static_cast<int>(u.size()) != 2 * scalar_size(mesh, space)) {
    throw std::invalid_argument("assemble_permeability_stiffness: displacement has wrong length");
  }
  return assemble_scalar(mesh, space, [&](int, const ElementGeometry& g) {
    double div = 0.0;
    for (int j = 0; j < 3; ++j) {
      for (int d = 0; d < 2; ++d) {
        const int dof = vector_dof(mesh, g.nodes[j], d, space);
        if (dof >= 0) div += u[dof] * g.grad[j][d];
      }
    }
    std::array<double, 9> k = unit_stiffness(g);
    const double m = coeffs.mobility(div);
    for (double& v : k) v *= m;
    return k;
  });
}

Vector assemble_load_v(const Mesh& mesh, const VectorField& f, double t, DofSpace space) {
  Vector load(2 * static_cast<std::size_t>(scalar_size(mesh, space)), 0.0);
  for (int e = 0; e < mesh.triangle_count(); ++e) {
    const ElementGeometry g = geometry(mesh, e);
    const auto mid = edge_midpoints(mesh, g);
    std::array<std::array<double, 2>, 3> values{};
    for (int q = 0; q < 3; ++q) values[q] = f(mid[q], t);
    const double weight = g.area / 3.0;
    for (int q = 0; q < 3; ++q) {
      for (int v : kEdges[q]) {
        for (int c = 0; c < 2; ++c) {
          const int dof = vector_dof(mesh, g.nodes[v], c, space);
          if (dof >= 0) load[dof] += weight * 0.5 * values[q][c];
        }
      }
    }
  }
  return load;
}

Vector assemble_load_q(const Mesh& mesh, const ScalarField& g_field, double t, DofSpace space) {
  Vector load(static_cast<std::size_t>(scalar_size(mesh, space)), 0.0);
  for (int e = 0; e < mesh.triangle_count(); ++e) {
    const ElementGeometry g = geometry(mesh, e);
    const auto mid = edge_midpoints(mesh, g);
    const double weight = g.area / 3.0;
    for (int q = 0; q < 3; ++q) {
      const double value = g_field(mid[q], t);
      for (int v : kEdges[q]) {
        const int dof = scalar_dof(mesh, g.nodes[v], space);
        if (dof >= 0) load[dof] += weight * 0.5 * value;
      }
    }
  }
  return load;
}

Vector element_divergence(const Mesh& mesh, std::span<const double> u) {
  if (static_cast<int>(u.size()) != 2 * mesh.interior_count()) {
    throw std::invalid_argument("element_divergence: displacement has wrong length");
  }
  Vector div(static_cast<std::size_t>(mesh.triangle_count()), 0.0);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const ElementGeometry g = geometry(mesh, t);
    for (int j = 0; j < 3; ++j) {
      for (int d = 0; d < 2; ++d) {
        const int dof = vector_dof(mesh, g.nodes[j], d, DofSpace::Interior);
        if (dof >= 0) div[t] += u[dof] * g.grad[j][d];
      }
    }
  }
  return div;
}

PermeabilityAssembler::PermeabilityAssembler(const Mesh& mesh, Coefficients coeffs)
    : coeffs_(std::move(coeffs)),
      displacement_size_(2 * static_cast<std::size_t>(mesh.interior_count())),
      pattern_(assemble_laplace(mesh)) {
  elements_.reserve(static_cast<std::size_t>(mesh.triangle_count()));
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const ElementGeometry g = geometry(mesh, t);
    Element el{};
    el.unit_stiffness = unit_stiffness(g);
    for (int i = 0; i < 3; ++i) {
      const int row = mesh.interior_index(g.nodes[i]);
      for (int j = 0; j < 3; ++j) {
        const int col = mesh.interior_index(g.nodes[j]);
        el.positions[3 * i + j] = (row < 0 || col < 0) ? -1 : pattern_.find(row, col);
      }
      for (int d = 0; d < 2; ++d) {
        el.u_dofs[2 * i + d] = vector_dof(mesh, g.nodes[i], d, DofSpace::Interior);
        el.div_weights[2 * i + d] = g.grad[i][d];
      }
    }
    elements_.push_back(el);
  }
}

CsrMatrix PermeabilityAssembler::assemble(std::span<const double> u) const {
  CsrMatrix out = pattern_;
  assemble_into(u, out);
  return out;
}

void PermeabilityAssembler::assemble_into(std::span<const double> u, CsrMatrix& out) const {
  if (u.size() != displacement_size_) {
    throw std::invalid_argument("PermeabilityAssembler: displacement has wrong length");
  }
  if (!out.same_pattern(pattern_)) out = pattern_;
  auto values = out.values();
  std::fill(values.begin(), values.end(), 0.0);
  for (const Element& el : elements_) {
    double div = 0.0;
    for (int k = 0; k < 6; ++k) {
      if (el.u_dofs[k] >= 0) div += u[el.u_dofs[k]] * el.div_weights[k];
    }
    const double m = coeffs_.mobility(div);
    for (int k = 0; k < 9; ++k) {
      if (el.positions[k] >= 0) values[el.positions[k]] += m * el.unit_stiffness[k];
    }
  }
}

}  // namespace biot
