#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <vector>

namespace spt {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

struct LanczosOptions {
  /// Krylov basis size per restart cycle; 0 picks max(2k + 40, 80).
  int krylov_dimension = 0;
  int max_restarts = 500;
  /// Ritz pairs are accepted when ||H x - theta x|| < tolerance * ||H||.
  double tolerance = 1e-8;
  /// Seed of the deterministic start vector.
  unsigned long long seed = 0x5eed;
};

struct Eigenpairs {
  /// Ascending.
  Eigen::VectorXd values;
  /// Orthonormal columns.
  Eigen::MatrixXd vectors;
  /// ||H x - E x|| per pair.
  std::vector<double> residuals;
  /// Estimate of ||H||: Ritz-value bound (Lanczos) or row-sum bound (dense).
  double norm_estimate = 0.0;
  int restarts = 0;
  bool converged = false;
};

/// Lowest k eigenpairs of a symmetric sparse matrix by thick-restart Lanczos
/// with full reorthogonalization. Throws ConvergenceError (with the worst
/// residual) when max_restarts is exhausted.
Eigenpairs lanczos_lowest(const SparseMatrix& h, int k, const LanczosOptions& options = {});

/// Lowest k eigenpairs by a dense symmetric solve: Householder tridiagonalization,
/// tridiagonal eigenvalues, inverse iteration for the k wanted vectors. Falls back
/// to the full dense eigensolver when a residual check fails.
Eigenpairs dense_lowest(const SparseMatrix& h, int k);

}  // namespace spt
