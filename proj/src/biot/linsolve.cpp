// Copyright 2026 The biot-semiexplicit Authors
// SPDX-License-Identifier: Apache-2.0

#include "biot/linsolve.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>

namespace biot {
namespace {

using EigenCsr = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;
using EigenCsc = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

constexpr int kMaxRefinements = 6;

EigenCsc to_eigen(const CsrMatrix& m) {
  const Eigen::Map<const EigenCsr> view(m.rows(), m.cols(), m.nonzeros(),
                                        m.row_offsets().data(), m.column_indices().data(),
                                        m.values().data());
  return EigenCsc(view);
}

Eigen::Map<const Eigen::VectorXd> as_eigen(std::span<const double> v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

Vector residual(const CsrMatrix& op, std::span<const double> x, std::span<const double> rhs) {
  Vector r = op * x;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = rhs[i] - r[i];
  return r;
}

// Componentwise backward error max_i |r_i| / (|op| |x| + |rhs|)_i.
double backward_error(const CsrMatrix& op, std::span<const double> x,
                      std::span<const double> rhs, std::span<const double> r) {
  const auto offsets = op.row_offsets();
  const auto cols = op.column_indices();
  const auto values = op.values();
  double worst = 0.0;
  for (int i = 0; i < op.rows(); ++i) {
    double scale = std::abs(rhs[i]);
    for (int k = offsets[i]; k < offsets[i + 1]; ++k) scale += std::abs(values[k] * x[cols[k]]);
    const double ri = std::abs(r[i]);
    if (ri == 0.0) continue;
    worst = std::max(worst, scale > 0.0 ? ri / scale : std::numeric_limits<double>::infinity());
  }
  return worst;
}

std::string format_residual(const char* who, double achieved, double tol) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s: backward error %.3e above tolerance %.1e", who, achieved, tol);
  return buf;
}

double relative(double residual_norm, double scale) {
  if (scale > 0.0) return residual_norm / scale;
  return residual_norm;
}

double block_measure(std::span<const double> r_u, std::span<const double> r_p,
                     double scale_u, double scale_p) {
  return std::max(relative(norm2(r_u), scale_u), relative(norm2(r_p), scale_p));
}

}  // namespace

// ---------------------------------------------------------------------------
// SPD path

struct SpdSolver::Impl {
  Eigen::SimplicialLLT<EigenCsc, Eigen::Lower, Eigen::AMDOrdering<int>> llt;
  std::optional<CsrMatrix> op;
  bool analyzed = false;
};

SpdSolver::SpdSolver() : impl_(std::make_unique<Impl>()) {}
SpdSolver::~SpdSolver() = default;
SpdSolver::SpdSolver(SpdSolver&&) noexcept = default;
SpdSolver& SpdSolver::operator=(SpdSolver&&) noexcept = default;

void SpdSolver::factorize(const CsrMatrix& op) {
  if (op.rows() != op.cols()) throw std::invalid_argument("solve_spd: operator must be square");
  const bool same = impl_->op && impl_->op->same_pattern(op);
  const EigenCsc mat = to_eigen(op);
  if (!same || !impl_->analyzed) {
    impl_->llt.analyzePattern(mat);
    impl_->analyzed = true;
  }
  impl_->llt.factorize(mat);
  if (impl_->llt.info() != Eigen::Success) {
    impl_->op.reset();
    throw SolverFailure("solve_spd: Cholesky factorization failed (operator not SPD)",
                        std::numeric_limits<double>::infinity());
  }
  impl_->op = op;
}

bool SpdSolver::factorized() const { return impl_->op.has_value(); }

Vector SpdSolver::solve(std::span<const double> rhs, double tol) const {
  if (!impl_->op) throw std::logic_error("SpdSolver::solve before factorize");
  const CsrMatrix& op = *impl_->op;
  if (static_cast<int>(rhs.size()) != op.rows()) {
    throw std::invalid_argument("solve_spd: rhs has wrong length");
  }
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("solve_spd: tol must lie in (0, 1)");
  const double rhs_norm = norm2(rhs);
  Vector x(rhs.size(), 0.0);
  if (rhs_norm == 0.0) return x;

  Eigen::Map<Eigen::VectorXd> xe(x.data(), static_cast<Eigen::Index>(x.size()));
  xe = impl_->llt.solve(as_eigen(rhs));
  Vector r = residual(op, x, rhs);
  double achieved = backward_error(op, x, rhs, r);
  for (int k = 0; k < kMaxRefinements && achieved > tol; ++k) {
    xe += impl_->llt.solve(as_eigen(r));
    r = residual(op, x, rhs);
    achieved = backward_error(op, x, rhs, r);
  }
  if (!(achieved <= tol)) throw SolverFailure(format_residual("solve_spd", achieved, tol), achieved);
  return x;
}

Vector solve_spd(const CsrMatrix& op, std::span<const double> rhs, double tol) {
  SpdSolver solver(op);
  return solver.solve(rhs, tol);
}

// ---------------------------------------------------------------------------
// Block path

double block_relative_residual(const BlockSystem& sys, std::span<const double> u,
                               std::span<const double> p, std::span<const double> rhs_u,
                               std::span<const double> rhs_p) {
  const Vector dt_p = sys.D.multiply_transposed(p);
  const Vector d_u = sys.D * u;
  Vector r_u = sys.A * u;
  for (std::size_t i = 0; i < r_u.size(); ++i) r_u[i] = rhs_u[i] - (r_u[i] - dt_p[i]);
  Vector r_p = sys.pressure_block * p;
  for (std::size_t i = 0; i < r_p.size(); ++i) r_p[i] = rhs_p[i] - (r_p[i] + d_u[i]);
  return block_measure(r_u, r_p, norm2(rhs_u) + norm2(dt_p), norm2(rhs_p) + norm2(d_u));
}

struct BlockSolver::Impl {
  int nu = 0;
  int np = 0;
  // Monolithic operator and, per source block entry, its slot in K.
  CsrMatrix K;
  std::vector<int> slot_a, slot_dt, slot_d, slot_p;
  Vector scale;
  // The pressure rows are negated before factorization, which makes the
  // operator symmetric quasi-definite and LDL^T-factorizable under any
  // symmetric ordering. LU is the fallback if LDL^T breaks down.
  Eigen::SimplicialLDLT<EigenCsc, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
  Eigen::SparseLU<EigenCsc, Eigen::COLAMDOrdering<int>> lu;
  bool use_lu = false;
  bool analyzed = false;
  bool ready = false;
  // Patterns the slots were built for.
  CsrMatrix a_pattern, d_pattern, p_pattern;

  void build_pattern(const BlockSystem& sys) {
    nu = sys.A.rows();
    np = sys.pressure_block.rows();
    const CsrMatrix dt = sys.D.transposed();
    std::vector<Triplet> triplets;
    triplets.reserve(static_cast<std::size_t>(sys.A.nonzeros() + 2 * sys.D.nonzeros() +
                                              sys.pressure_block.nonzeros()));
    auto append = [&triplets](const CsrMatrix& m, int row0, int col0) {
      for (int i = 0; i < m.rows(); ++i) {
        for (int k = m.row_offsets()[i]; k < m.row_offsets()[i + 1]; ++k) {
          triplets.push_back({row0 + i, col0 + m.column_indices()[k], 0.0});
        }
      }
    };
    append(sys.A, 0, 0);
    append(dt, 0, nu);
    append(sys.D, nu, 0);
    append(sys.pressure_block, nu, nu);
    K = CsrMatrix::from_triplets(nu + np, nu + np, std::move(triplets));

    auto slots = [this](const CsrMatrix& m, int row0, int col0) {
      std::vector<int> s;
      s.reserve(static_cast<std::size_t>(m.nonzeros()));
      for (int i = 0; i < m.rows(); ++i) {
        for (int k = m.row_offsets()[i]; k < m.row_offsets()[i + 1]; ++k) {
          s.push_back(K.find(row0 + i, col0 + m.column_indices()[k]));
        }
      }
      return s;
    };
    slot_a = slots(sys.A, 0, 0);
    slot_dt = slots(dt, 0, nu);
    slot_d = slots(sys.D, nu, 0);
    slot_p = slots(sys.pressure_block, nu, nu);
    a_pattern = sys.A;
    d_pattern = sys.D;
    p_pattern = sys.pressure_block;
    analyzed = false;
  }

  void fill(const BlockSystem& sys) {
    auto values = K.values();
    const CsrMatrix dt = sys.D.transposed();
    auto put = [&values](const std::vector<int>& slot, std::span<const double> v, double sign) {
      for (std::size_t k = 0; k < slot.size(); ++k) values[slot[k]] = sign * v[k];
    };
    put(slot_a, sys.A.values(), 1.0);
    put(slot_dt, dt.values(), -1.0);
    put(slot_d, sys.D.values(), 1.0);
    put(slot_p, sys.pressure_block.values(), 1.0);
  }

  double measure(std::span<const double> x, std::span<const double> rhs, Vector& r) const {
    r = residual(K, x, rhs);
    return backward_error(K, x, rhs, r);
  }
};

BlockSolver::BlockSolver() : impl_(std::make_unique<Impl>()) {}
BlockSolver::~BlockSolver() = default;
BlockSolver::BlockSolver(BlockSolver&&) noexcept = default;
BlockSolver& BlockSolver::operator=(BlockSolver&&) noexcept = default;

void BlockSolver::factorize(const BlockSystem& sys) {
  if (!(sys.tau > 0.0)) throw std::invalid_argument("solve_block: tau must be positive");
  if (sys.A.rows() != sys.A.cols() || sys.pressure_block.rows() != sys.pressure_block.cols() ||
      sys.D.rows() != sys.pressure_block.rows() || sys.D.cols() != sys.A.rows()) {
    throw std::invalid_argument("solve_block: inconsistent block dimensions");
  }
  Impl& s = *impl_;
  if (!s.a_pattern.same_pattern(sys.A) || !s.d_pattern.same_pattern(sys.D) ||
      !s.p_pattern.same_pattern(sys.pressure_block) || s.K.rows() == 0) {
    s.build_pattern(sys);
  }
  s.fill(sys);
  s.ready = false;

  const int n = s.K.rows();
  s.scale.assign(static_cast<std::size_t>(n), 1.0);
  for (int i = 0; i < n; ++i) {
    const double diag = std::abs(s.K.at(i, i));
    if (!(diag > 0.0) || !std::isfinite(diag)) {
      throw SolverFailure("solve_block: zero or non-finite diagonal entry",
                          std::numeric_limits<double>::infinity());
    }
    s.scale[i] = 1.0 / std::sqrt(diag);
  }
  CsrMatrix scaled = s.K;
  {
    auto values = scaled.values();
    for (int i = 0; i < n; ++i) {
      for (int k = scaled.row_offsets()[i]; k < scaled.row_offsets()[i + 1]; ++k) {
        values[k] *= s.scale[i] * s.scale[scaled.column_indices()[k]];
      }
    }
  }
  {
    auto values = scaled.values();
    for (int i = s.nu; i < n; ++i) {
      for (int k = scaled.row_offsets()[i]; k < scaled.row_offsets()[i + 1]; ++k) values[k] = -values[k];
    }
  }
  const EigenCsc mat = to_eigen(scaled);
  if (!s.analyzed) {
    s.ldlt.analyzePattern(mat);
    s.analyzed = true;
  }
  s.use_lu = false;
  s.ldlt.factorize(mat);
  if (s.ldlt.info() != Eigen::Success) {
    s.use_lu = true;
    s.lu.analyzePattern(mat);
    s.lu.factorize(mat);
    if (s.lu.info() != Eigen::Success) {
      throw SolverFailure("solve_block: factorization failed: " + s.lu.lastErrorMessage(),
                          std::numeric_limits<double>::infinity());
    }
  }
  s.ready = true;
}

std::pair<Vector, Vector> BlockSolver::solve(std::span<const double> rhs_u,
                                             std::span<const double> rhs_p, double tol) const {
  const Impl& s = *impl_;
  if (!s.ready) throw std::logic_error("BlockSolver::solve before factorize");
  if (static_cast<int>(rhs_u.size()) != s.nu || static_cast<int>(rhs_p.size()) != s.np) {
    throw std::invalid_argument("solve_block: rhs has wrong length");
  }
  if (!(tol > 0.0 && tol < 1.0)) throw std::invalid_argument("solve_block: tol must lie in (0, 1)");
  const int n = s.nu + s.np;
  Vector rhs(static_cast<std::size_t>(n));
  std::copy(rhs_u.begin(), rhs_u.end(), rhs.begin());
  std::copy(rhs_p.begin(), rhs_p.end(), rhs.begin() + s.nu);

  Vector x(static_cast<std::size_t>(n), 0.0);
  if (norm2(rhs) > 0.0) {
    auto correct = [&s, n](std::span<const double> r, Vector& x_out) {
      Eigen::VectorXd scaled_r(n);
      for (int i = 0; i < n; ++i) scaled_r[i] = (i < s.nu ? 1.0 : -1.0) * s.scale[i] * r[i];
      const Eigen::VectorXd y = s.use_lu ? Eigen::VectorXd(s.lu.solve(scaled_r))
                                         : Eigen::VectorXd(s.ldlt.solve(scaled_r));
      for (int i = 0; i < n; ++i) x_out[i] += s.scale[i] * y[i];
    };
    correct(rhs, x);
    Vector r;
    double achieved = s.measure(x, rhs, r);
    for (int k = 0; k < kMaxRefinements && achieved > tol; ++k) {
      correct(r, x);
      achieved = s.measure(x, rhs, r);
    }
    if (!(achieved <= tol)) {
      throw SolverFailure(format_residual("solve_block", achieved, tol), achieved);
    }
  }
  Vector u(x.begin(), x.begin() + s.nu);
  Vector p(x.begin() + s.nu, x.end());
  return {std::move(u), std::move(p)};
}

std::pair<Vector, Vector> solve_block(const BlockSystem& sys, std::span<const double> rhs_u,
                                      std::span<const double> rhs_p, double tol) {
  BlockSolver solver;
  solver.factorize(sys);
  return solver.solve(rhs_u, rhs_p, tol);
}

}  // namespace biot
