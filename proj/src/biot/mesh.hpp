// Copyright 2026 The biot-semiexplicit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <span>
#include <vector>

namespace biot {

using Vector = std::vector<double>;

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Structured P1 triangulation of the unit square.
///
/// Nodes are numbered lexicographically, row by row from the bottom edge:
/// node(i, j) = j * (n + 1) + i for column i and row j. Every square cell is
/// split along its bottom-left to top-right diagonal into two counterclockwise
/// triangles, so the grids for n and k*n are nested.
///
/// Homogeneous Dirichlet data is handled by compaction: only interior nodes
/// carry degrees of freedom. Displacement DOFs are interleaved per interior
/// node (2k, 2k + 1); pressure DOFs use the interior index k directly.
class Mesh {
 public:
  /// Throws std::invalid_argument for n < 1.
  static Mesh structured(int n);

  int subdivisions() const { return n_; }
  double h() const { return 1.0 / n_; }

  std::span<const Point> nodes() const { return nodes_; }
  std::span<const std::array<int, 3>> triangles() const { return triangles_; }

  int node_count() const { return static_cast<int>(nodes_.size()); }
  int triangle_count() const { return static_cast<int>(triangles_.size()); }
  int interior_count() const { return static_cast<int>(interior_nodes_.size()); }
  int boundary_count() const { return node_count() - interior_count(); }

  int node_index(int column, int row) const { return row * (n_ + 1) + column; }
  bool on_boundary(int node) const { return interior_index_[node] < 0; }

  /// Compacted interior index, or -1 for boundary nodes.
  int interior_index(int node) const { return interior_index_[node]; }
  int interior_node(int k) const { return interior_nodes_[k]; }

  /// Scalar interior vector -> full nodal vector with zero boundary values.
  Vector expand_scalar(std::span<const double> interior) const;
  /// Full nodal vector -> interior entries.
  Vector restrict_scalar(std::span<const double> full) const;

  /// Signed area of triangle t (positive for counterclockwise ordering).
  double signed_area(int t) const;

 private:
  Mesh() = default;

  int n_ = 0;
  std::vector<Point> nodes_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<int> interior_index_;
  std::vector<int> interior_nodes_;
};

/// Nodal interpolation of a P1 function from a coarse mesh onto a nested
/// finer mesh. `coarse_values` holds one value per coarse node (boundary
/// included). Throws std::invalid_argument unless fine.n is a multiple of
/// coarse.n and the vector length matches.
Vector prolong(const Mesh& coarse, const Mesh& fine,
               std::span<const double> coarse_values);

/// Interior-DOF variants of prolong for pressure (1 DOF per node) and
/// displacement (2 interleaved DOFs per node) vectors.
Vector prolong_interior_scalar(const Mesh& coarse, const Mesh& fine,
                               std::span<const double> coarse_interior);
Vector prolong_interior_vector(const Mesh& coarse, const Mesh& fine,
                               std::span<const double> coarse_interior);

}  // namespace biot
