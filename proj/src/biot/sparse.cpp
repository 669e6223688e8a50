// Copyright 2026 The biot-semiexplicit Authors
// SPDX-License-Identifier: Apache-2.0

#include "biot/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace biot {

CsrMatrix::CsrMatrix(int rows, int cols, std::vector<int> row_offsets,
                     std::vector<int> column_indices, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_offsets_(std::move(row_offsets)),
      column_indices_(std::move(column_indices)),
      values_(std::move(values)) {
  if (rows_ < 0 || cols_ < 0 || static_cast<int>(row_offsets_.size()) != rows_ + 1 ||
      row_offsets_.front() != 0 ||
      row_offsets_.back() != static_cast<int>(column_indices_.size()) ||
      column_indices_.size() != values_.size()) {
    throw std::invalid_argument("csr: inconsistent array sizes");
  }
  for (int i = 0; i < rows_; ++i) {
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      const int c = column_indices_[k];
      if (c < 0 || c >= cols_) throw std::invalid_argument("csr: column out of range");
      if (k > row_offsets_[i] && column_indices_[k - 1] >= c) {
        throw std::invalid_argument("csr: columns must be sorted and unique per row");
      }
    }
  }
}

CsrMatrix CsrMatrix::from_triplets(int rows, int cols, std::vector<Triplet> triplets) {
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<int> offsets(static_cast<std::size_t>(rows) + 1, 0);
  std::vector<int> columns;
  std::vector<double> values;
  columns.reserve(triplets.size());
  values.reserve(triplets.size());
  for (std::size_t k = 0; k < triplets.size();) {
    const Triplet& t = triplets[k];
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw std::invalid_argument("csr: triplet index out of range");
    }
    double sum = 0.0;
    std::size_t m = k;
    for (; m < triplets.size() && triplets[m].row == t.row && triplets[m].col == t.col; ++m) {
      sum += triplets[m].value;
    }
    columns.push_back(t.col);
    values.push_back(sum);
    ++offsets[t.row + 1];
    k = m;
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  return CsrMatrix(rows, cols, std::move(offsets), std::move(columns), std::move(values));
}

CsrMatrix CsrMatrix::identity(int n) {
  std::vector<int> offsets(static_cast<std::size_t>(n) + 1);
  std::iota(offsets.begin(), offsets.end(), 0);
  std::vector<int> columns(static_cast<std::size_t>(n));
  std::iota(columns.begin(), columns.end(), 0);
  return CsrMatrix(n, n, std::move(offsets), std::move(columns),
                   std::vector<double>(static_cast<std::size_t>(n), 1.0));
}

int CsrMatrix::find(int i, int j) const {
  const auto begin = column_indices_.begin() + row_offsets_[i];
  const auto end = column_indices_.begin() + row_offsets_[i + 1];
  const auto it = std::lower_bound(begin, end, j);
  if (it == end || *it != j) return -1;
  return static_cast<int>(it - column_indices_.begin());
}

double CsrMatrix::at(int i, int j) const {
  const int k = find(i, j);
  return k < 0 ? 0.0 : values_[k];
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (static_cast<int>(x.size()) != cols_ || static_cast<int>(y.size()) != rows_) {
    throw std::invalid_argument("csr: multiply dimension mismatch");
  }
  for (int i = 0; i < rows_; ++i) {
    double sum = 0.0;
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      sum += values_[k] * x[column_indices_[k]];
    }
    y[i] = sum;
  }
}

Vector CsrMatrix::operator*(std::span<const double> x) const {
  Vector y(static_cast<std::size_t>(rows_));
  multiply(x, y);
  return y;
}

Vector CsrMatrix::multiply_transposed(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != rows_) {
    throw std::invalid_argument("csr: transposed multiply dimension mismatch");
  }
  Vector y(static_cast<std::size_t>(cols_), 0.0);
  for (int i = 0; i < rows_; ++i) {
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      y[column_indices_[k]] += values_[k] * x[i];
    }
  }
  return y;
}

CsrMatrix CsrMatrix::transposed() const {
  std::vector<int> offsets(static_cast<std::size_t>(cols_) + 1, 0);
  for (int c : column_indices_) ++offsets[c + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  std::vector<int> cursor(offsets.begin(), offsets.end() - 1);
  std::vector<int> columns(column_indices_.size());
  std::vector<double> values(values_.size());
  for (int i = 0; i < rows_; ++i) {
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      const int dest = cursor[column_indices_[k]]++;
      columns[dest] = i;
      values[dest] = values_[k];
    }
  }
  return CsrMatrix(cols_, rows_, std::move(offsets), std::move(columns), std::move(values));
}

CsrMatrix CsrMatrix::scaled(double factor) const {
  CsrMatrix out = *this;
  for (double& v : out.values_) v *= factor;
  return out;
}

bool CsrMatrix::same_pattern(const CsrMatrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ &&
         row_offsets_ == other.row_offsets_ && column_indices_ == other.column_indices_;
}

bool CsrMatrix::is_symmetric(double tolerance) const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i) {
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      if (std::abs(values_[k] - at(column_indices_[k], i)) > tolerance) return false;
    }
  }
  return true;
}

std::vector<double> CsrMatrix::to_dense() const {
  std::vector<double> dense(static_cast<std::size_t>(rows_) * cols_, 0.0);
  for (int i = 0; i < rows_; ++i) {
    for (int k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
      dense[static_cast<std::size_t>(i) * cols_ + column_indices_[k]] = values_[k];
    }
  }
  return dense;
}

CsrMatrix linear_combination(double a, const CsrMatrix& x, double b, const CsrMatrix& y) {
  if (!x.same_pattern(y)) {
    throw std::invalid_argument("csr: linear combination needs a shared pattern");
  }
  CsrMatrix out = x;
  auto out_values = out.values();
  const auto y_values = y.values();
  for (std::size_t k = 0; k < out_values.size(); ++k) {
    out_values[k] = a * out_values[k] + b * y_values[k];
  }
  return out;
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += a[i] * b[i];
  return sum;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

void axpy(double a, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

}  // namespace biot
