// Copyright 2026 The biot-semiexplicit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

namespace biot {

using Vector = std::vector<double>;

struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed sparse row matrix. Column indices are sorted and unique within
/// each row; explicit zeros produced by assembly are kept so operators built
/// on the same connectivity share one pattern.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  CsrMatrix(int rows, int cols, std::vector<int> row_offsets,
            std::vector<int> column_indices, std::vector<double> values);

  /// Duplicates are summed in insertion order, so the result is bitwise
  /// reproducible for a fixed triplet sequence.
  static CsrMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets);
  static CsrMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nonzeros() const { return static_cast<int>(values_.size()); }

  std::span<const int> row_offsets() const { return row_offsets_; }
  std::span<const int> column_indices() const { return column_indices_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  /// Position of (i, j) in values(), or -1 if not stored.
  int find(int i, int j) const;
  double at(int i, int j) const;

  /// y = this * x
  void multiply(std::span<const double> x, std::span<double> y) const;
  Vector operator*(std::span<const double> x) const;
  /// y = this^T * x
  Vector multiply_transposed(std::span<const double> x) const;

  CsrMatrix transposed() const;
  CsrMatrix scaled(double factor) const;

  bool same_pattern(const CsrMatrix& other) const;
  bool is_symmetric(double tolerance) const;

  /// Row-major dense copy, for tests and small diagnostics.
  std::vector<double> to_dense() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_offsets_{0};
  std::vector<int> column_indices_;
  std::vector<double> values_;
};

/// a * x + b * y for matrices on the same pattern.
CsrMatrix linear_combination(double a, const CsrMatrix& x, double b, const CsrMatrix& y);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);

}  // namespace biot
