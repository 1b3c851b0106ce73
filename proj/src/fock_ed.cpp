#include "spt/fock_ed.hpp"

#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <string>

#include "detail/overloaded.hpp"
#include "spt/errors.hpp"

namespace spt {

namespace {

using detail::overloaded;
using Triplet = Eigen::Triplet<double>;

// Collects the upper triangle; the lower one is mirrored at the end so the
// result is exactly symmetric.
class SymmetricAssembler {
 public:
  explicit SymmetricAssembler(std::size_t dim) : dim_(dim) {}

  void add(std::size_t i, std::size_t j, double value) {
    if (value == 0.0) return;
    if (i > j) std::swap(i, j);
    triplets_.emplace_back(static_cast<int>(i), static_cast<int>(j), value);
  }

  SparseMatrix finish() {
    const auto n = static_cast<Eigen::Index>(dim_);
    SparseMatrix upper(n, n);
    upper.setFromTriplets(triplets_.begin(), triplets_.end());
    triplets_.clear();
    triplets_.shrink_to_fit();
    SparseMatrix strict = upper.triangularView<Eigen::StrictlyUpper>();
    SparseMatrix out = upper + SparseMatrix(strict.transpose());
    out.makeCompressed();
    return out;
  }

 private:
  std::size_t dim_;
  std::vector<Triplet> triplets_;
};

std::size_t nonzeros_per_row(const RawModel& raw) {
  return std::visit(overloaded{[](const DickeRaw& d) {
                                 const bool two = std::any_of(d.g_prime.begin(), d.g_prime.end(),
                                                              [](double x) { return x != 0.0; });
                                 return 1 + static_cast<std::size_t>(d.qubits) * d.g.size() * (two ? 4 : 2);
                               },
                               [](const RabiStarkRaw&) { return std::size_t{5}; },
                               [](const AnisotropicRaw&) { return std::size_t{3}; }},
                    raw);
}

FockBasis basis_for(const RawModel& raw, const EDConfig& config) {
  return FockBasis(raw_qubit_count(raw), resolved_n_cut(config, raw_mode_count(raw)));
}

std::vector<double> eta_for(const RawModel& raw, const EDConfig& config) {
  const std::size_t m = raw_mode_count(raw);
  if (!config.eta.empty()) {
    if (config.eta.size() != m) throw DimensionMismatch("eta needs one entry per mode");
    return config.eta;
  }
  return std::visit(overloaded{[](const DickeRaw& d) {
                                 std::vector<double> e(d.omega.size());
                                 for (std::size_t i = 0; i < e.size(); ++i) e[i] = d.qubits * d.big_omega / d.omega[i];
                                 return e;
                               },
                               [](const RabiStarkRaw& r) { return std::vector<double>{r.big_omega / r.omega}; },
                               [](const AnisotropicRaw& a) { return std::vector<double>{a.big_omega / a.omega}; }},
                    raw);
}

void check_raw(const RawModel& raw) {
  std::visit(overloaded{[](const DickeRaw& d) {
                          if (d.g.empty() || d.g.size() != d.g_prime.size() || d.g.size() != d.omega.size())
                            throw DimensionMismatch("Dicke g, g_prime and omega need one entry per mode");
                          if (d.qubits < 1 || d.qubits > 16) throw DomainError("qubit count must be in [1, 16]");
                          for (double w : d.omega)
                            if (!(w > 0.0)) throw DomainError("mode frequencies must be positive");
                        },
                        [](const RabiStarkRaw& r) {
                          if (!(r.omega > 0.0)) throw DomainError("omega must be positive");
                        },
                        [](const AnisotropicRaw& a) {
                          if (!(a.omega > 0.0)) throw DomainError("omega must be positive");
                        }},
             raw);
}

void check_states(const SpectralResult& s, const FockBasis& basis) {
  if (static_cast<std::size_t>(s.states.rows()) != basis.dimension())
    throw DimensionMismatch("state vectors do not match the basis dimension");
}

}  // namespace

RawModel from_dimensionless(const ModelSpec& model, const std::vector<double>& eta) {
  validate(model);
  if (eta.size() != model.mode_count()) throw DimensionMismatch("eta needs one entry per mode");
  for (double e : eta)
    if (!(e > 0.0) || !std::isfinite(e)) throw DomainError("eta must be positive");
  return std::visit(overloaded{[&](const MultimodeDicke12& m) -> RawModel {
                                 DickeRaw d;
                                 d.qubits = m.qubit_count;
                                 for (std::size_t i = 0; i < m.mode_count(); ++i) {
                                   const double w = d.qubits * d.big_omega / eta[i];
                                   d.omega.push_back(w);
                                   d.g.push_back(m.gamma[i] * std::sqrt(d.big_omega * w) / 2.0);
                                   d.g_prime.push_back(m.gamma_prime[i] * w / 2.0);
                                 }
                                 return d;
                               },
                               [&](const RabiStarkHubbard& m) -> RawModel {
                                 RabiStarkRaw r;
                                 r.omega = r.big_omega / eta[0];
                                 r.g = m.gamma * std::sqrt(r.big_omega * r.omega) / 2.0;
                                 r.u = m.u_tilde * r.omega;
                                 r.j = m.j_tilde * r.omega / 4.0;
                                 return r;
                               },
                               [&](const AnisotropicRabiStark& m) -> RawModel {
                                 AnisotropicRaw a;
                                 a.omega = a.big_omega / eta[0];
                                 const double s = std::sqrt(a.big_omega * a.omega);
                                 a.g1 = (m.gamma1 + m.gamma2) * s / 2.0;
                                 a.g2 = (m.gamma1 - m.gamma2) * s / 2.0;
                                 a.u = m.u_tilde * a.omega;
                                 return a;
                               }},
                    model.model);
}

std::size_t raw_mode_count(const RawModel& raw) {
  if (const auto* d = std::get_if<DickeRaw>(&raw)) return d->g.size();
  return 1;
}

int raw_qubit_count(const RawModel& raw) {
  if (const auto* d = std::get_if<DickeRaw>(&raw)) return d->qubits;
  return 1;
}

double raw_big_omega(const RawModel& raw) {
  return std::visit([](const auto& r) { return r.big_omega; }, raw);
}

FockBasis::FockBasis(int qubits, std::vector<int> n_cut) : qubits_(qubits), n_cut_(std::move(n_cut)) {
  if (qubits < 0 || qubits > 16) throw DomainError("qubit count must be in [0, 16]");
  strides_.assign(n_cut_.size(), 1);
  for (std::size_t i = n_cut_.size(); i-- > 0;) {
    if (n_cut_[i] < 2) throw DomainError("n_cut must be at least 2");
    strides_[i] = mode_block_;
    mode_block_ *= static_cast<std::size_t>(n_cut_[i]);
  }
  dim_ = mode_block_ << qubits;
}

std::size_t FockBasis::index(std::size_t qubit_config, const std::vector<int>& photons) const {
  if (photons.size() != n_cut_.size()) throw DimensionMismatch("one photon number per mode expected");
  std::size_t idx = qubit_config * mode_block_;
  for (std::size_t i = 0; i < photons.size(); ++i) {
    if (photons[i] < 0 || photons[i] >= n_cut_[i]) throw DomainError("photon number outside the truncation");
    idx += static_cast<std::size_t>(photons[i]) * strides_[i];
  }
  return idx;
}

int FockBasis::photons(std::size_t idx, std::size_t mode) const {
  return static_cast<int>((idx % mode_block_) / strides_[mode] % static_cast<std::size_t>(n_cut_[mode]));
}

bool FockBasis::qubit_up(std::size_t idx, int q) const {
  const std::size_t config = qubit_config(idx);
  return ((config >> (qubits_ - 1 - q)) & 1U) == 0;
}

std::vector<int> resolved_n_cut(const EDConfig& config, std::size_t modes) {
  std::vector<int> out;
  if (config.n_cut.size() == 1) {
    out.assign(modes, config.n_cut.front());
  } else if (config.n_cut.size() == modes) {
    out = config.n_cut;
  } else {
    throw DimensionMismatch("n_cut needs one entry or one per mode");
  }
  for (int n : out)
    if (n < 2) throw DomainError("n_cut must be at least 2");
  return out;
}

std::size_t estimated_memory_bytes(const RawModel& raw, const EDConfig& config) {
  const std::vector<int> cuts = resolved_n_cut(config, raw_mode_count(raw));
  double dim = std::ldexp(1.0, raw_qubit_count(raw));
  for (int n : cuts) dim *= n;
  const double nnz = dim * static_cast<double>(nonzeros_per_row(raw));
  double bytes = nnz * 2.0 * (sizeof(double) + sizeof(int)) + nnz * sizeof(Triplet);
  if (dim <= static_cast<double>(config.dense_threshold)) {
    bytes += 3.0 * dim * dim * sizeof(double);
  } else {
    const double m = config.lanczos.krylov_dimension > 0 ? config.lanczos.krylov_dimension
                                                         : std::max(2.0 * config.n_levels + 40.0, 80.0);
    bytes += dim * (2.0 * m + 4.0) * sizeof(double);
  }
  return bytes > 1e19 ? std::size_t(-1) : static_cast<std::size_t>(bytes);
}

SparseMatrix build_hamiltonian(const RawModel& raw, const EDConfig& config) {
  check_raw(raw);
  const std::size_t need = estimated_memory_bytes(raw, config);
  if (need > config.memory_budget_bytes)
    throw BudgetExceeded("ED needs about " + std::to_string(need >> 20) + " MiB, budget is " +
                         std::to_string(config.memory_budget_bytes >> 20) + " MiB");
  const FockBasis basis = basis_for(raw, config);
  const std::size_t dim = basis.dimension();
  if (dim > static_cast<std::size_t>(std::numeric_limits<int>::max()))
    throw BudgetExceeded("dimension exceeds the sparse index range");
  SymmetricAssembler h(dim);
  const std::size_t modes = basis.mode_count();
  std::vector<std::size_t> stride(modes);
  for (std::size_t nu = 0, s = basis.mode_block(); nu < modes; ++nu) {
    s /= static_cast<std::size_t>(basis.n_cut()[nu]);
    stride[nu] = s;
  }

  std::visit(overloaded{
                 [&](const DickeRaw& d) {
                   const int nq = d.qubits;
                   const double root_n = std::sqrt(static_cast<double>(nq));
                   for (std::size_t idx = 0; idx < dim; ++idx) {
                     double diag = 0.0;
                     for (int q = 0; q < nq; ++q) diag += (basis.qubit_up(idx, q) ? 0.5 : -0.5) * d.big_omega;
                     for (std::size_t nu = 0; nu < modes; ++nu) {
                       const int n = basis.photons(idx, nu);
                       diag += d.omega[nu] * n;
                       for (int q = 0; q < nq; ++q) {
                         const std::size_t flipped = (basis.qubit_config(idx) ^ (std::size_t{1} << (nq - 1 - q))) *
                                                         basis.mode_block() +
                                                     idx % basis.mode_block();
                         if (n + 1 < basis.n_cut()[nu])
                           h.add(idx, flipped + stride[nu], d.g[nu] / root_n * std::sqrt(n + 1.0));
                         if (n + 2 < basis.n_cut()[nu])
                           h.add(idx, flipped + 2 * stride[nu],
                                 d.g_prime[nu] / nq * std::sqrt((n + 1.0) * (n + 2.0)));
                       }
                     }
                     h.add(idx, idx, diag);
                   }
                 },
                 [&](const RabiStarkRaw& r) {
                   for (std::size_t idx = 0; idx < dim; ++idx) {
                     const int n = basis.photons(idx, 0);
                     const double s = basis.qubit_up(idx, 0) ? 1.0 : -1.0;
                     h.add(idx, idx, r.omega * n + s * (0.5 * r.big_omega + r.u * n) + 4.0 * r.j * r.psi * r.psi);
                     if (n + 1 < basis.n_cut()[0]) {
                       const std::size_t up_photon = idx + 1;
                       const std::size_t other_spin = (idx + basis.mode_block()) % dim;
                       h.add(idx, other_spin + 1, r.g * std::sqrt(n + 1.0));
                       h.add(idx, up_photon, -4.0 * r.j * r.psi * std::sqrt(n + 1.0));
                     }
                   }
                 },
                 [&](const AnisotropicRaw& a) {
                   for (std::size_t idx = 0; idx < dim; ++idx) {
                     const int n = basis.photons(idx, 0);
                     const bool up = basis.qubit_up(idx, 0);
                     const double s = up ? 1.0 : -1.0;
                     h.add(idx, idx, a.omega * n + s * (0.5 * a.big_omega + a.u * n));
                     if (n + 1 < basis.n_cut()[0]) {
                       const std::size_t other_spin = (idx + basis.mode_block()) % dim;
                       // a^ s- from up, a^ s+ from down
                       h.add(idx, other_spin + 1, (up ? a.g1 : a.g2) * std::sqrt(n + 1.0));
                     }
                   }
                 }},
             raw);
  return h.finish();
}

SpectralResult lowest_eigenpairs(const SparseMatrix& h, int n_levels, const EDConfig& config) {
  if (h.rows() != h.cols()) throw DimensionMismatch("Hamiltonian must be square");
  const bool dense = static_cast<std::size_t>(h.rows()) <= config.dense_threshold;
  const Eigenpairs e = dense ? dense_lowest(h, n_levels) : lanczos_lowest(h, n_levels, config.lanczos);
  SpectralResult out;
  out.energies.assign(e.values.data(), e.values.data() + e.values.size());
  out.states = e.vectors;
  out.residuals = e.residuals;
  out.norm_estimate = e.norm_estimate;
  out.method = dense ? "dense" : "lanczos";
  return out;
}

std::vector<std::vector<double>> rescaled_photon_numbers(const SpectralResult& spectrum, const RawModel& raw,
                                                         const EDConfig& config) {
  const FockBasis basis = basis_for(raw, config);
  check_states(spectrum, basis);
  const std::vector<double> eta = eta_for(raw, config);
  std::vector<std::vector<double>> out(static_cast<std::size_t>(spectrum.states.cols()),
                                       std::vector<double>(basis.mode_count(), 0.0));
  for (Eigen::Index k = 0; k < spectrum.states.cols(); ++k) {
    auto& row = out[static_cast<std::size_t>(k)];
    for (std::size_t idx = 0; idx < basis.dimension(); ++idx) {
      const double p = spectrum.states(static_cast<Eigen::Index>(idx), k);
      const double w = p * p;
      for (std::size_t nu = 0; nu < basis.mode_count(); ++nu) row[nu] += w * basis.photons(idx, nu);
    }
    for (std::size_t nu = 0; nu < basis.mode_count(); ++nu) row[nu] /= eta[nu];
  }
  return out;
}

std::vector<Quadratures> quadratures(const SpectralResult& spectrum, const RawModel& raw, const EDConfig& config) {
  const FockBasis basis = basis_for(raw, config);
  check_states(spectrum, basis);
  const std::vector<double> eta = eta_for(raw, config);
  const std::size_t modes = basis.mode_count();
  std::vector<std::size_t> stride(modes);
  for (std::size_t nu = 0, s = basis.mode_block(); nu < modes; ++nu) {
    s /= static_cast<std::size_t>(basis.n_cut()[nu]);
    stride[nu] = s;
  }
  std::vector<Quadratures> out(static_cast<std::size_t>(spectrum.states.cols()));
  for (Eigen::Index k = 0; k < spectrum.states.cols(); ++k) {
    std::vector<double> n_avg(modes, 0.0);
    std::vector<double> a2(modes, 0.0);
    for (std::size_t idx = 0; idx < basis.dimension(); ++idx) {
      const double c = spectrum.states(static_cast<Eigen::Index>(idx), k);
      for (std::size_t nu = 0; nu < modes; ++nu) {
        const int n = basis.photons(idx, nu);
        n_avg[nu] += c * c * n;
        if (n >= 2) a2[nu] += c * spectrum.states(static_cast<Eigen::Index>(idx - 2 * stride[nu]), k) *
                              std::sqrt(n * (n - 1.0));
      }
    }
    auto& q = out[static_cast<std::size_t>(k)];
    for (std::size_t nu = 0; nu < modes; ++nu) {
      q.u2.push_back((2.0 * n_avg[nu] + 1.0 + 2.0 * a2[nu]) / (4.0 * eta[nu]));
      q.v2.push_back((2.0 * n_avg[nu] + 1.0 - 2.0 * a2[nu]) / (4.0 * eta[nu]));
    }
  }
  return out;
}

Eigen::VectorXd parity_diagonal(const FockBasis& basis) {
  Eigen::VectorXd p(static_cast<Eigen::Index>(basis.dimension()));
  for (std::size_t idx = 0; idx < basis.dimension(); ++idx) {
    int count = 0;
    for (std::size_t nu = 0; nu < basis.mode_count(); ++nu) count += basis.photons(idx, nu);
    for (int q = 0; q < basis.qubits(); ++q) count += basis.qubit_up(idx, q) ? 1 : 0;
    p[static_cast<Eigen::Index>(idx)] = count % 2 == 0 ? 1.0 : -1.0;
  }
  return p;
}

std::vector<double> parity_expectations(const SpectralResult& spectrum, const RawModel& raw, const EDConfig& config) {
  if (const auto* d = std::get_if<DickeRaw>(&raw)) {
    if (std::any_of(d->g_prime.begin(), d->g_prime.end(), [](double x) { return x != 0.0; }))
      throw DomainError("parity is not a symmetry when two-photon couplings are present");
  }
  if (const auto* r = std::get_if<RabiStarkRaw>(&raw)) {
    if (r->j != 0.0 && r->psi != 0.0) throw DomainError("parity is not a symmetry with a nonzero mean field");
  }
  const FockBasis basis = basis_for(raw, config);
  check_states(spectrum, basis);
  const Eigen::VectorXd p = parity_diagonal(basis);
  std::vector<double> out;
  for (Eigen::Index k = 0; k < spectrum.states.cols(); ++k)
    out.push_back(spectrum.states.col(k).cwiseAbs2().dot(p));
  return out;
}

TruncationReport truncation_convergence(const RawModel& raw, const EDConfig& config, int max_n_cut) {
  TruncationReport report;
  EDConfig cfg = config;
  cfg.n_cut = resolved_n_cut(config, raw_mode_count(raw));
  cfg.n_levels = 1;
  const double omega = raw_big_omega(raw);
  std::vector<int> previous_cut;
  while (true) {
    if (estimated_memory_bytes(raw, cfg) > cfg.memory_budget_bytes) {
      report.note = "memory budget exhausted before convergence";
      break;
    }
    const SparseMatrix h = build_hamiltonian(raw, cfg);
    const SpectralResult s = lowest_eigenpairs(h, 1, cfg);
    report.ground_energies.push_back(s.energies[0]);
    report.photon_numbers.push_back(rescaled_photon_numbers(s, raw, cfg)[0]);
    report.n_cut = cfg.n_cut;
    const std::size_t steps = report.ground_energies.size();
    if (steps >= 2) {
      const double de = std::abs(report.ground_energies[steps - 1] - report.ground_energies[steps - 2]);
      double dn = 0.0;
      for (std::size_t nu = 0; nu < report.photon_numbers.back().size(); ++nu)
        dn = std::max(dn, std::abs(report.photon_numbers[steps - 1][nu] - report.photon_numbers[steps - 2][nu]));
      if (de < 1e-8 * omega && dn < 1e-6) {
        report.converged = true;
        report.n_cut = previous_cut;
        report.note = "converged";
        return report;
      }
    }
    previous_cut = cfg.n_cut;
    if (std::any_of(cfg.n_cut.begin(), cfg.n_cut.end(), [&](int n) { return 2 * n > max_n_cut; })) {
      report.note = "n_cut schedule exhausted";
      break;
    }
    for (int& n : cfg.n_cut) n *= 2;
  }
  return report;
}

EDSolution solve(const RawModel& raw, const EDConfig& config) {
  EDSolution out;
  const SparseMatrix h = build_hamiltonian(raw, config);
  out.spectrum = lowest_eigenpairs(h, config.n_levels, config);
  out.photon_numbers = rescaled_photon_numbers(out.spectrum, raw, config);
  out.quadratures = quadratures(out.spectrum, raw, config);
  try {
    out.parity = parity_expectations(out.spectrum, raw, config);
  } catch (const DomainError&) {
    out.parity.clear();
  }
  return out;
}

}  // namespace spt
