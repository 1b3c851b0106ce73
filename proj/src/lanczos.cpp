#include "spt/lanczos.hpp"

#include <Eigen/Eigenvalues>
#include <limits>
#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "spt/errors.hpp"

namespace spt {

namespace {

Eigen::VectorXd random_unit(Eigen::Index n, std::mt19937_64& rng) {
  // Bit-level conversion keeps the start vector identical across standard libraries.
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = std::ldexp(static_cast<double>(rng() >> 11), -52) - 1.0;
  return v.normalized();
}

// Two classical Gram-Schmidt passes against the first `cols` columns of V.
// Returns the accumulated projection coefficients.
Eigen::VectorXd orthogonalize(const Eigen::MatrixXd& v, Eigen::Index cols, Eigen::VectorXd& w) {
  Eigen::VectorXd coeff = Eigen::VectorXd::Zero(cols);
  for (int pass = 0; pass < 2; ++pass) {
    const Eigen::VectorXd c = v.leftCols(cols).transpose() * w;
    w.noalias() -= v.leftCols(cols) * c;
    coeff += c;
  }
  return coeff;
}

std::vector<double> true_residuals(const SparseMatrix& h, const Eigen::VectorXd& values, const Eigen::MatrixXd& x) {
  std::vector<double> out(static_cast<std::size_t>(values.size()));
  for (Eigen::Index i = 0; i < values.size(); ++i)
    out[static_cast<std::size_t>(i)] = (h * x.col(i) - values[i] * x.col(i)).norm();
  return out;
}

// LU with partial pivoting of a shifted symmetric tridiagonal matrix.
struct TridiagonalLU {
  Eigen::VectorXd dl, d, du, du2;
  std::vector<char> swapped;

  TridiagonalLU(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub, double shift, double tiny) {
    const Eigen::Index n = diag.size();
    d = diag.array() - shift;
    dl = sub;
    du = sub;
    du2 = Eigen::VectorXd::Zero(std::max<Eigen::Index>(n - 2, 0));
    swapped.assign(static_cast<std::size_t>(n), 0);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      if (std::abs(d[i]) >= std::abs(dl[i])) {
        if (d[i] == 0.0) d[i] = tiny;
        const double fact = dl[i] / d[i];
        dl[i] = fact;
        d[i + 1] -= fact * du[i];
      } else {
        const double fact = d[i] / dl[i];
        d[i] = dl[i];
        dl[i] = fact;
        const double temp = du[i];
        du[i] = d[i + 1];
        d[i + 1] = temp - fact * d[i + 1];
        if (i + 2 < n) {
          du2[i] = du[i + 1];
          du[i + 1] = -fact * du[i + 1];
        }
        swapped[static_cast<std::size_t>(i)] = 1;
      }
    }
    for (Eigen::Index i = 0; i < n; ++i)
      if (d[i] == 0.0) d[i] = tiny;
  }

  void solve(Eigen::VectorXd& b) const {
    const Eigen::Index n = d.size();
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      if (!swapped[static_cast<std::size_t>(i)]) {
        b[i + 1] -= dl[i] * b[i];
      } else {
        const double temp = b[i];
        b[i] = b[i + 1];
        b[i + 1] = temp - dl[i] * b[i];
      }
    }
    b[n - 1] /= d[n - 1];
    if (n > 1) b[n - 2] = (b[n - 2] - du[n - 2] * b[n - 1]) / d[n - 2];
    for (Eigen::Index i = n - 3; i >= 0; --i) b[i] = (b[i] - du[i] * b[i + 1] - du2[i] * b[i + 2]) / d[i];
  }
};

// Eigenvectors of the tridiagonal matrix by inverse iteration; vectors of
// clustered eigenvalues are kept orthogonal.
Eigen::MatrixXd tridiagonal_vectors(const Eigen::VectorXd& diag, const Eigen::VectorXd& sub,
                                    const Eigen::VectorXd& lambda, double norm) {
  const Eigen::Index n = diag.size();
  const Eigen::Index k = lambda.size();
  const double tiny = std::numeric_limits<double>::epsilon() * std::max(norm, 1e-300);
  std::mt19937_64 rng(0x7d1a);
  Eigen::MatrixXd y(n, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const TridiagonalLU lu(diag, sub, lambda[j], tiny);
    Eigen::Index cluster = j;
    while (cluster > 0 && std::abs(lambda[j] - lambda[cluster - 1]) < 1e-3 * norm) --cluster;
    Eigen::VectorXd v = random_unit(n, rng);
    for (int it = 0; it < 5; ++it) {
      lu.solve(v);
      for (int pass = 0; pass < 2; ++pass)
        for (Eigen::Index c = cluster; c < j; ++c) v -= y.col(c).dot(v) * y.col(c);
      v.normalize();
    }
    y.col(j) = v;
  }
  return y;
}

}  // namespace

Eigenpairs dense_lowest(const SparseMatrix& h, int k) {
  const Eigen::Index n = h.rows();
  if (k < 1 || k > n) throw DomainError("requested " + std::to_string(k) + " levels of a " + std::to_string(n) + "-dimensional matrix");
  const Eigen::MatrixXd a = Eigen::MatrixXd(h);
  Eigenpairs out;
  for (Eigen::Index r = 0; r < n; ++r) {
    double row = 0.0;
    for (SparseMatrix::InnerIterator it(h, r); it; ++it) row += std::abs(it.value());
    out.norm_estimate = std::max(out.norm_estimate, row);
  }
  out.converged = true;

  if (2 * k < n) {
    // Tridiagonalize, then inverse iteration for the k lowest eigenpairs only.
    const Eigen::Tridiagonalization<Eigen::MatrixXd> tri(a);
    const Eigen::VectorXd diag = tri.diagonal();
    const Eigen::VectorXd sub = tri.subDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> values;
    values.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    out.values = values.eigenvalues().head(k);
    const Eigen::MatrixXd y = tridiagonal_vectors(diag, sub, out.values, out.norm_estimate);
    out.vectors = tri.matrixQ() * y;
    out.residuals = true_residuals(h, out.values, out.vectors);
    const double worst = *std::max_element(out.residuals.begin(), out.residuals.end());
    if (worst < 1e-10 * std::max(out.norm_estimate, 1e-300)) return out;
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) throw ConvergenceError("dense symmetric eigensolver failed");
  out.values = es.eigenvalues().head(k);
  out.vectors = es.eigenvectors().leftCols(k);
  out.residuals = true_residuals(h, out.values, out.vectors);
  return out;
}

Eigenpairs lanczos_lowest(const SparseMatrix& h, int k, const LanczosOptions& opt) {
  const Eigen::Index n = h.rows();
  if (k < 1 || k > n) throw DomainError("requested " + std::to_string(k) + " levels of a " + std::to_string(n) + "-dimensional matrix");
  Eigen::Index m = opt.krylov_dimension > 0 ? opt.krylov_dimension : std::max(2 * k + 40, 80);
  m = std::min(m, n);
  if (m <= k + 1) return dense_lowest(h, k);

  std::mt19937_64 rng(opt.seed);
  Eigen::MatrixXd v(n, m + 1);
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, m);
  v.col(0) = random_unit(n, rng);
  Eigen::Index kept = 0;
  double norm_est = 0.0;
  double worst = 0.0;

  for (int restart = 0; restart <= opt.max_restarts; ++restart) {
    double beta = 0.0;
    for (Eigen::Index j = kept; j < m; ++j) {
      Eigen::VectorXd w = h * v.col(j);
      const Eigen::VectorXd c = orthogonalize(v, j + 1, w);
      for (Eigen::Index i = 0; i <= j; ++i) {
        t(i, j) = c[i];
        t(j, i) = c[i];
      }
      beta = w.norm();
      norm_est = std::max(norm_est, std::abs(c[j]));
      if (beta <= 1e-14 * std::max(norm_est, 1.0)) {
        // Invariant subspace: continue with a fresh direction.
        Eigen::VectorXd r = random_unit(n, rng);
        orthogonalize(v, j + 1, r);
        v.col(j + 1) = r.normalized();
        beta = 0.0;
      } else {
        v.col(j + 1) = w / beta;
      }
      if (j + 1 < m) {
        t(j + 1, j) = beta;
        t(j, j + 1) = beta;
      }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    const Eigen::VectorXd& theta = es.eigenvalues();
    const Eigen::MatrixXd& y = es.eigenvectors();
    norm_est = std::max({norm_est, std::abs(theta[0]), std::abs(theta[m - 1])});
    const double tol = opt.tolerance * norm_est;
    worst = 0.0;
    for (Eigen::Index i = 0; i < k; ++i) worst = std::max(worst, std::abs(beta * y(m - 1, i)));

    if (worst < 0.5 * tol) {
      Eigenpairs out;
      out.values = theta.head(k);
      out.vectors = v.leftCols(m) * y.leftCols(k);
      for (Eigen::Index i = 0; i < k; ++i) out.vectors.col(i).normalize();
      out.norm_estimate = norm_est;
      out.residuals = true_residuals(h, out.values, out.vectors);
      out.restarts = restart;
      const double max_res = *std::max_element(out.residuals.begin(), out.residuals.end());
      if (max_res < tol) {
        out.converged = true;
        return out;
      }
      worst = max_res;
    }

    // Thick restart: keep the lowest Ritz vectors plus the residual direction.
    kept = std::min<Eigen::Index>(std::max<Eigen::Index>(k + (m - k) / 2, k + 1), m - 2);
    const Eigen::MatrixXd ritz = v.leftCols(m) * y.leftCols(kept);
    const Eigen::VectorXd resid = v.col(m);
    v.leftCols(kept) = ritz;
    v.col(kept) = resid;
    t.setZero();
    for (Eigen::Index i = 0; i < kept; ++i) {
      t(i, i) = theta[i];
      t(i, kept) = beta * y(m - 1, i);
      t(kept, i) = t(i, kept);
    }
    // Column `kept` is rebuilt by the next sweep; its coupling to the Ritz
    // block is recomputed there by the projection.
  }
  throw ConvergenceError("Lanczos did not converge after " + std::to_string(opt.max_restarts) +
                         " restarts; worst residual " + std::to_string(worst) + " vs tolerance " +
                         std::to_string(opt.tolerance * norm_est));
}

}  // namespace spt
