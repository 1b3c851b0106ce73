#include "spt/hopping_selfconsistent.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>

#include "spt/errors.hpp"
#include "spt/parallel.hpp"

namespace spt {

namespace {

SparseMatrix position_operator(const FockBasis& basis) {
  const auto dim = static_cast<Eigen::Index>(basis.dimension());
  std::vector<Eigen::Triplet<double>> t;
  for (std::size_t idx = 0; idx < basis.dimension(); ++idx) {
    const int n = basis.photons(idx, 0);
    if (n + 1 < basis.n_cut()[0]) {
      const double x = std::sqrt(n + 1.0);
      t.emplace_back(static_cast<int>(idx), static_cast<int>(idx + 1), x);
      t.emplace_back(static_cast<int>(idx + 1), static_cast<int>(idx), x);
    }
  }
  SparseMatrix out(dim, dim);
  out.setFromTriplets(t.begin(), t.end());
  return out;
}

}  // namespace

SelfConsistentResult critical_hopping(const RabiStarkRaw& raw, const EDConfig& config,
                                      const SelfConsistentOptions& options) {
  RabiStarkRaw bare = raw;
  bare.j = 0.0;
  bare.psi = 0.0;
  EDConfig cfg = config;
  const SparseMatrix h = build_hamiltonian(bare, cfg);
  const FockBasis basis(1, resolved_n_cut(cfg, 1));
  const SparseMatrix x = position_operator(basis);
  const auto dim = static_cast<int>(basis.dimension());

  // Dense problems are diagonalized once; larger ones grow the level count.
  std::optional<Eigenpairs> full;
  if (basis.dimension() <= cfg.dense_threshold) full = dense_lowest(h, dim);

  int levels = std::min(std::max(options.initial_levels, 2), dim);
  while (true) {
    const Eigenpairs e = full ? *full : lanczos_lowest(h, levels, cfg.lanczos);
    const double e0 = e.values[0];
    if (e.values[1] - e0 < options.degeneracy_tolerance * bare.big_omega)
      throw DomainError("beyond NP self-consistency regime: degenerate ground state (gap " +
                        std::to_string(e.values[1] - e0) + ")");
    const Eigen::VectorXd xg = x * e.vectors.col(0);
    SelfConsistentResult out;
    double sum = 0.0;
    double last = 0.0;
    for (int n = 1; n < levels; ++n) {
      const double m = e.vectors.col(n).dot(xg);
      last = bare.omega * m * m / (e.values[n] - e0);
      sum += last;
      out.partial_sums.push_back(sum);
    }
    const double tail = std::abs(last) * (dim - levels);
    if (tail < options.tail_tolerance * sum || levels == dim) {
      out.spectral_sum = sum;
      out.j_tilde_critical = 1.0 / sum;
      out.terms_used = levels - 1;
      out.truncation_estimate = std::abs(last);
      return out;
    }
    levels = std::min(2 * levels, dim);
  }
}

SelfConsistentResult critical_hopping(double gamma, double u_tilde, double eta, const EDConfig& config,
                                      const SelfConsistentOptions& options) {
  if (!(eta > 0.0)) throw DomainError("eta must be positive");
  if (!(gamma >= 0.0) || !(u_tilde >= 0.0)) throw DomainError("gamma and u_tilde must be nonnegative");
  if (!(u_tilde < 1.0)) throw UnstableModel("Rabi-Stark spectrum is unbounded for u_tilde >= 1");
  RabiStarkRaw raw;
  raw.omega = raw.big_omega / eta;
  raw.g = gamma * std::sqrt(raw.big_omega * raw.omega) / 2.0;
  raw.u = u_tilde * raw.omega;
  return critical_hopping(raw, config, options);
}

std::vector<MeanfieldComparison> compare_with_meanfield(const std::vector<double>& gammas, double u_tilde, double eta,
                                                        const EDConfig& config, int workers,
                                                        const SelfConsistentOptions& options) {
  return parallel_map<MeanfieldComparison>(gammas.size(), workers, [&](std::size_t i) {
    MeanfieldComparison row;
    row.gamma = gammas[i];
    const double mf = 1.0 - row.gamma * row.gamma - u_tilde;
    if (mf > 0.0) row.j_tilde_meanfield = mf;
    try {
      const SelfConsistentResult r = critical_hopping(row.gamma, u_tilde, eta, config, options);
      row.j_tilde_spectral = r.j_tilde_critical;
      row.terms_used = r.terms_used;
      if (row.j_tilde_meanfield) row.relative_difference = std::abs(r.j_tilde_critical - mf) / mf;
    } catch (const std::exception& e) {
      row.j_tilde_spectral = std::numeric_limits<double>::quiet_NaN();
      row.error = e.what();
    }
    return row;
  });
}

}  // namespace spt
