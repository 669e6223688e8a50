// Copyright 2026 The biot-semiexplicit Authors
// SPDX-License-Identifier: Apache-2.0

#include "biot/mesh.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace biot {

Mesh Mesh::structured(int n) {
  if (n < 1) {
    throw std::invalid_argument("mesh: subdivisions must be >= 1, got " +
                                std::to_string(n));
  }
  Mesh mesh;
  mesh.n_ = n;
  const int side = n + 1;
  mesh.nodes_.reserve(static_cast<std::size_t>(side) * side);
  mesh.interior_index_.assign(static_cast<std::size_t>(side) * side, -1);
  for (int j = 0; j < side; ++j) {
    for (int i = 0; i < side; ++i) {
      // i / n keeps nested grids bitwise identical at shared nodes.
      mesh.nodes_.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
      const bool boundary = i == 0 || j == 0 || i == n || j == n;
      if (!boundary) {
        mesh.interior_index_[mesh.node_index(i, j)] =
            static_cast<int>(mesh.interior_nodes_.size());
        mesh.interior_nodes_.push_back(mesh.node_index(i, j));
      }
    }
  }

  mesh.triangles_.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const int bl = mesh.node_index(i, j);
      const int br = mesh.node_index(i + 1, j);
      const int tl = mesh.node_index(i, j + 1);
      const int tr = mesh.node_index(i + 1, j + 1);
      mesh.triangles_.push_back({bl, br, tr});
      mesh.triangles_.push_back({bl, tr, tl});
    }
  }
  return mesh;
}

Vector Mesh::expand_scalar(std::span<const double> interior) const {
  if (static_cast<int>(interior.size()) != interior_count()) {
    throw std::invalid_argument("mesh: interior vector has wrong length");
  }
  Vector full(nodes_.size(), 0.0);
  for (int k = 0; k < interior_count(); ++k) full[interior_nodes_[k]] = interior[k];
  return full;
}

Vector Mesh::restrict_scalar(std::span<const double> full) const {
  if (static_cast<int>(full.size()) != node_count()) {
    throw std::invalid_argument("mesh: nodal vector has wrong length");
  }
  Vector interior(interior_nodes_.size());
  for (int k = 0; k < interior_count(); ++k) interior[k] = full[interior_nodes_[k]];
  return interior;
}

double Mesh::signed_area(int t) const {
  const auto& tri = triangles_[t];
  const Point& a = nodes_[tri[0]];
  const Point& b = nodes_[tri[1]];
  const Point& c = nodes_[tri[2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

Vector prolong(const Mesh& coarse, const Mesh& fine,
               std::span<const double> coarse_values) {
  const int nc = coarse.subdivisions();
  const int nf = fine.subdivisions();
  if (nf % nc != 0) {
    throw std::invalid_argument("prolong: fine mesh (n=" + std::to_string(nf) +
                                ") is not nested in coarse mesh (n=" +
                                std::to_string(nc) + ")");
  }
  if (static_cast<int>(coarse_values.size()) != coarse.node_count()) {
    throw std::invalid_argument("prolong: coarse vector has wrong length");
  }
  const int ratio = nf / nc;
  Vector out(static_cast<std::size_t>(fine.node_count()));
  for (int jf = 0; jf <= nf; ++jf) {
    for (int if_ = 0; if_ <= nf; ++if_) {
      const int i = std::min(if_ / ratio, nc - 1);
      const int j = std::min(jf / ratio, nc - 1);
      // Local coordinates in [0, 1] inside coarse cell (i, j).
      const double a = static_cast<double>(if_ - i * ratio) / ratio;
      const double b = static_cast<double>(jf - j * ratio) / ratio;
      const double v_bl = coarse_values[coarse.node_index(i, j)];
      const double v_br = coarse_values[coarse.node_index(i + 1, j)];
      const double v_tl = coarse_values[coarse.node_index(i, j + 1)];
      const double v_tr = coarse_values[coarse.node_index(i + 1, j + 1)];
      double value;
      if (a >= b) {
        value = (1.0 - a) * v_bl + (a - b) * v_br + b * v_tr;
      } else {
        value = (1.0 - b) * v_bl + a * v_tr + (b - a) * v_tl;
      }
      out[fine.node_index(if_, jf)] = value;
    }
  }
  return out;
}

Vector prolong_interior_scalar(const Mesh& coarse, const Mesh& fine,
                               std::span<const double> coarse_interior) {
  const Vector full = coarse.expand_scalar(coarse_interior);
  return fine.restrict_scalar(prolong(coarse, fine, full));
}

Vector prolong_interior_vector(const Mesh& coarse, const Mesh& fine,
                               std::span<const double> coarse_interior) {
  const auto nc = static_cast<std::size_t>(coarse.interior_count());
  if (coarse_interior.size() != 2 * nc) {
    throw std::invalid_argument("prolong: displacement vector has wrong length");
  }
  Vector out(2 * static_cast<std::size_t>(fine.interior_count()));
  Vector component(nc);
  for (int c = 0; c < 2; ++c) {
    for (std::size_t k = 0; k < nc; ++k) component[k] = coarse_interior[2 * k + c];
    const Vector fine_component = prolong_interior_scalar(coarse, fine, component);
    for (std::size_t k = 0; k < fine_component.size(); ++k) {
      out[2 * k + c] = fine_component[k];
    }
  }
  return out;
}

}  // namespace biot
