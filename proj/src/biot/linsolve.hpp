// Copyright 2026 The biot-semiexplicit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>

#include "biot/sparse.hpp"

namespace biot {

inline constexpr double kDefaultSolverTolerance = 1e-12;

/// Raised when a factorization breaks down or the requested residual cannot
/// be reached. Carries the best residual that was achieved.
class SolverFailure : public std::runtime_error {
 public:
  SolverFailure(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Sparse Cholesky factorization of an SPD operator. The symbolic analysis
/// is kept, so refactorizing an operator with the same pattern only redoes
/// the numeric phase.
class SpdSolver {
 public:
  SpdSolver();
  ~SpdSolver();
  SpdSolver(SpdSolver&&) noexcept;
  SpdSolver& operator=(SpdSolver&&) noexcept;

  explicit SpdSolver(const CsrMatrix& op) : SpdSolver() { factorize(op); }

  /// Throws SolverFailure if the operator is not numerically SPD.
  void factorize(const CsrMatrix& op);
  bool factorized() const;

  /// Solves op * x = rhs, refining until the componentwise backward error
  /// max_i |op x - rhs|_i / (|op| |x| + |rhs|)_i is at most tol.
  Vector solve(std::span<const double> rhs, double tol = kDefaultSolverTolerance) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot SPD solve. rhs = 0 returns x = 0.
Vector solve_spd(const CsrMatrix& op, std::span<const double> rhs,
                 double tol = kDefaultSolverTolerance);

/// Coupled per-step system
///   [ A   -D^T ] [u]   [rhs_u]
///   [ D  C+tauB] [p] = [rhs_p]
/// with the pressure block supplied already combined.
struct BlockSystem {
  const CsrMatrix& A;
  const CsrMatrix& D;
  const CsrMatrix& pressure_block;
  double tau = 0.0;
};

/// Residual of a block solve measured per block row, each relative to the
/// norm of its right-hand side plus the coupling term moved to the right:
///   max( ||r_u|| / (||rhs_u|| + ||D^T p||), ||r_p|| / (||rhs_p|| + ||D u||) ).
/// Invariant under rescaling either block row.
double block_relative_residual(const BlockSystem& sys, std::span<const double> u,
                               std::span<const double> p, std::span<const double> rhs_u,
                               std::span<const double> rhs_p);

/// Sparse direct factorization of the monolithic block matrix. The matrix is
/// symmetrically diagonally scaled before factorization; the block layout
/// (and therefore the sparsity pattern) is fixed by the first factorize call
/// and reused afterwards.
class BlockSolver {
 public:
  BlockSolver();
  ~BlockSolver();
  BlockSolver(BlockSolver&&) noexcept;
  BlockSolver& operator=(BlockSolver&&) noexcept;

  void factorize(const BlockSystem& sys);

  /// Solves the system last passed to factorize(). Same refinement and
  /// backward-error test as SpdSolver::solve.
  std::pair<Vector, Vector> solve(std::span<const double> rhs_u, std::span<const double> rhs_p,
                                  double tol = kDefaultSolverTolerance) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot block solve.
std::pair<Vector, Vector> solve_block(const BlockSystem& sys, std::span<const double> rhs_u,
                                      std::span<const double> rhs_p,
                                      double tol = kDefaultSolverTolerance);

}  // namespace biot
